"""Built-in drift functions, addressable by name from configs and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .wis import DriftFunction

__all__ = ["DriftRegistryEntry", "REGISTRY", "get_drift", "drift_names"]


@dataclass(frozen=True)
class DriftRegistryEntry:
    drift: DriftFunction
    formula_doc: str


def _zero(t, x):
    return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0


def _quasi_rational(t, x):
    return 4.0 * x / (1.0 + x * x)


def _quasi_rational_dx(t, x):
    return 4.0 * (1.0 - x * x) / (1.0 + x * x) ** 2


def _cosine(t, x):
    return np.cos(x)


def _cosine_dx(t, x):
    return -np.sin(x)


def _log_square(t, x):
    return 25.0 * np.log1p(x * x)


def _log_square_dx(t, x):
    return 50.0 * x / (1.0 + x * x)


def _linear(t, x):
    return x


def _linear_dx(t, x):
    return np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0


REGISTRY: dict[str, DriftRegistryEntry] = {
    "zero": DriftRegistryEntry(
        DriftFunction("zero", _zero, _zero), "a(x) = 0"
    ),
    "quasi_rational": DriftRegistryEntry(
        DriftFunction("quasi_rational", _quasi_rational, _quasi_rational_dx),
        "a(x) = 4x / (1 + x^2)",
    ),
    "cosine": DriftRegistryEntry(
        DriftFunction("cosine", _cosine, _cosine_dx), "a(x) = cos(x)"
    ),
    "log_square": DriftRegistryEntry(
        DriftFunction("log_square", _log_square, _log_square_dx),
        "a(x) = 25 log(1 + x^2)",
    ),
    "linear": DriftRegistryEntry(
        DriftFunction("linear", _linear, _linear_dx), "a(x) = x"
    ),
}


def drift_names() -> list[str]:
    return sorted(REGISTRY)


def get_drift(name: str) -> DriftFunction:
    try:
        return REGISTRY[name].drift
    except KeyError:
        raise ConfigError(
            f"unknown drift {name!r}; available: {', '.join(drift_names())}"
        ) from None
