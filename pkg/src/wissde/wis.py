"""Closed-form quantities shared by every solver.

The quasilinear equation dX = alpha X dt + a(t, X) dt + beta X dB^H is
reduced, through a Wick-exponential integrating factor and a translation
of the noise, to an ordinary pathwise ODE.  This module holds the exact
closed forms that reduction needs: the geometric-fBm solution, the
translated integrating factor J-tilde and its inverse at the anchor, and
the conversion of a Wick exponential of a Gaussian into an ordinary one.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import NumericOverflowError
from .fbm import FbmPath, check_hurst

__all__ = [
    "DriftFunction",
    "SdeProblem",
    "gfbm_exact",
    "tilde_j",
    "tilde_j_inverse_at_anchor",
    "wick_exp_gaussian",
    "EXP_ARG_LIMIT",
]

# exp(700) ~ 1e304 is still finite; beyond this we fail loudly instead of
# propagating inf through a sweep.
EXP_ARG_LIMIT = 700.0


def _checked_exp(arg):
    arg = np.asarray(arg, dtype=float)
    worst = np.max(np.abs(arg)) if arg.size else 0.0
    if worst > EXP_ARG_LIMIT:
        raise NumericOverflowError(
            f"exponent magnitude {worst:.6g} exceeds safe limit {EXP_ARG_LIMIT:g}"
        )
    out = np.exp(arg)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class DriftFunction:
    """Named drift a(t, x), optionally with its x-derivative.

    ``eval`` must be vectorized in x (numpy ufunc arithmetic).  It is
    expected to be globally Lipschitz in x with linear growth; that is a
    documented contract, not machine-checked.  ``holder_exponent`` records
    the Hölder regularity in t for non-autonomous drifts and is used for
    reporting only; autonomous drifts implicitly have exponent 1.
    """

    name: str
    eval: Callable = field(repr=False)
    x_derivative: Optional[Callable] = field(default=None, repr=False)
    holder_exponent: Optional[float] = None


@dataclass(frozen=True)
class SdeProblem:
    """Parameters of the quasilinear equation on [0, t_final]."""

    alpha: float
    beta: float
    x0: float
    t_final: float
    hurst: float
    drift: DriftFunction

    def __post_init__(self):
        check_hurst(self.hurst)
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")

    def with_hurst(self, h: float) -> "SdeProblem":
        return replace(self, hurst=float(h))


def _check_path_matches(problem: SdeProblem, path: FbmPath) -> None:
    if path.hurst != problem.hurst:
        raise ValueError(
            f"path hurst {path.hurst} does not match problem hurst {problem.hurst}"
        )
    if path.grid.t_final != problem.t_final:
        raise ValueError(
            f"path t_final {path.grid.t_final} does not match problem "
            f"t_final {problem.t_final}"
        )


def gfbm_exact(problem: SdeProblem, path: FbmPath) -> np.ndarray:
    """Exact geometric-fBm values x0 * exp(alpha t - beta^2 t^{2H}/2 + beta B^H(t)).

    This is the closed-form solution of the linear (zero-drift) equation;
    the drift attached to ``problem`` is ignored.
    """
    _check_path_matches(problem, path)
    t = path.grid.times()
    two_h = 2.0 * problem.hurst
    arg = (
        problem.alpha * t
        - 0.5 * problem.beta**2 * t**two_h
        + problem.beta * path.values
    )
    return problem.x0 * _checked_exp(arg)


def tilde_j(problem: SdeProblem, anchor_t: float, s, b_at_s):
    """Translated integrating factor J-tilde at time s for the given anchor.

    Returns exp(-alpha s + beta^2 (anchor^{2H} - (anchor - s)^{2H}) / 2
    - beta B^H(s)); strictly positive.  Accepts arrays in s / b_at_s.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s > anchor_t):
        raise ValueError(f"s must not exceed anchor_t = {anchor_t}")
    if np.any(s < 0):
        raise ValueError("s must be nonnegative")
    two_h = 2.0 * problem.hurst
    arg = (
        -problem.alpha * s
        + 0.5 * problem.beta**2 * (anchor_t**two_h - (anchor_t - s) ** two_h)
        - problem.beta * np.asarray(b_at_s, dtype=float)
    )
    return _checked_exp(arg)


def tilde_j_inverse_at_anchor(problem: SdeProblem, t: float, b_at_t):
    """Reciprocal of the integrating factor evaluated at its own anchor.

    exp(alpha t - beta^2 t^{2H}/2 + beta B^H(t)); this is the factor that
    maps the transformed state back to the solution.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    two_h = 2.0 * problem.hurst
    arg = (
        problem.alpha * t
        - 0.5 * problem.beta**2 * t**two_h
        + problem.beta * np.asarray(b_at_t, dtype=float)
    )
    return _checked_exp(arg)


def wick_exp_gaussian(beta: float, h: float, t: float, b_at_t):
    """Ordinary-exponential form of the Wick exponential of beta * B^H(t).

    exp(beta b - beta^2 t^{2H}/2); its mean over the fBm law is 1 for
    every H, the lognormal-mean identity behind the centeredness of the
    stochastic integral.
    """
    check_hurst(h)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    arg = beta * np.asarray(b_at_t, dtype=float) - 0.5 * beta**2 * t ** (2.0 * h)
    return _checked_exp(arg)
