"""The four time-stepping schemes for the quasilinear equation.

Every scheme advances the transformed state z through the pathwise ODE
dz/ds = J(s) a(s, z/J(s)) and recovers the solution as X = z / J at the
anchor.  They differ only in the one-step update:

* GBMEM        -- explicit Euler on z (exact on zero drift),
* MishuraEM    -- Euler with the linear term folded into the drift and
                  alpha removed from the integrating factor,
* ExpFreeze    -- exponential step freezing a(x)/x over the step,
* Rosenbrock   -- exponential step on the drift Jacobian plus Euler
                  remainder (needs the x-derivative of the drift).

Endpoint solves cost O(n); full-path solves rerun the endpoint solve per
node (anchor moves with the node) and cost O(n^2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .fbm import FbmPath, TimeGrid, truncate_path
from .wis import DriftFunction, SdeProblem, tilde_j

__all__ = [
    "SolverKind",
    "EndpointResult",
    "PathResult",
    "step_gbmem",
    "step_expfreeze",
    "step_rosenbrock",
    "solve_endpoint",
    "solve_endpoint_values",
    "solve_path",
    "EXPFREEZE_ZERO_TOL",
]

# Below this |x| the frozen ratio a(t,x)/x is ill-defined; that step falls
# back to the Euler update (the two agree to O(dt^2) for Lipschitz drifts).
EXPFREEZE_ZERO_TOL = 1e-12


class SolverKind(enum.Enum):
    GBMEM = "gbmem"
    MISHURA_EM = "mishura_em"
    EXP_FREEZE = "expfreeze"
    ROSENBROCK = "rosenbrock"

    @classmethod
    def from_name(cls, name: str) -> "SolverKind":
        key = name.strip().lower().replace("-", "_")
        aliases = {
            "gbmem": cls.GBMEM,
            "mishura_em": cls.MISHURA_EM,
            "mishura": cls.MISHURA_EM,
            "mishuraem": cls.MISHURA_EM,
            "expfreeze": cls.EXP_FREEZE,
            "exp_freeze": cls.EXP_FREEZE,
            "rosenbrock": cls.ROSENBROCK,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ConfigError(
                f"unknown solver {name!r}; choose from "
                f"{sorted(set(a for a in aliases))}"
            ) from None


@dataclass(frozen=True)
class EndpointResult:
    """Endpoint approximation: x_at_T = z_final / j_final as computed."""

    x_at_T: float
    z_final: float
    j_final: float


@dataclass(frozen=True, eq=False)
class PathResult:
    """Node-wise approximations; values[0] = x0, values[k] ~ X(t_k)."""

    values: np.ndarray


def _as_same_kind(out, template):
    return out if np.ndim(template) else float(out)


def step_gbmem(z, j_i, t_i: float, dt: float, drift: DriftFunction):
    """Euler update z + dt * J_i * a(t_i, z / J_i). Elementwise on arrays."""
    x = z / j_i
    a = drift.eval(t_i, x)
    return _as_same_kind(z + dt * j_i * a, z)


def step_expfreeze(z, j_i, t_i: float, dt: float, drift: DriftFunction):
    """Exponential update z * exp(dt * a(t_i, x)/x) with x = z / J_i.

    Entries with |x| below EXPFREEZE_ZERO_TOL take the Euler update
    instead (the ratio is undefined at 0).
    """
    x = np.asarray(z / j_i, dtype=float)
    a = drift.eval(t_i, x)
    near_zero = np.abs(x) < EXPFREEZE_ZERO_TOL
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        frozen = z * np.exp(dt * np.where(near_zero, 0.0, a / np.where(near_zero, 1.0, x)))
    euler = z + dt * j_i * a
    return _as_same_kind(np.where(near_zero, euler, frozen), z)


def step_rosenbrock(z, j_i, t_i: float, dt: float, drift: DriftFunction):
    """Split update z * exp(dt * A) + dt * (J_i a(t_i, x) - A z).

    A is the drift x-derivative at (t_i, x = z / J_i); exact for linear
    drifts, and reduces to the Euler update when A = 0.
    """
    if drift.x_derivative is None:
        raise ConfigError(
            f"drift {drift.name!r} has no x_derivative; the Rosenbrock "
            "scheme requires one"
        )
    x = z / j_i
    a = drift.eval(t_i, x)
    grad = drift.x_derivative(t_i, x)
    return _as_same_kind(z * np.exp(dt * grad) + dt * (j_i * a - grad * z), z)


_STEPPERS = {
    SolverKind.GBMEM: step_gbmem,
    SolverKind.MISHURA_EM: step_gbmem,
    SolverKind.EXP_FREEZE: step_expfreeze,
    SolverKind.ROSENBROCK: step_rosenbrock,
}


def _effective(problem: SdeProblem, kind: SolverKind):
    """Problem/drift actually integrated by the scheme.

    MishuraEM removes alpha from the integrating factor and folds it into
    the drift; at alpha = 0 the originals are returned untouched so that
    GBMEM and MishuraEM coincide bit-for-bit.
    """
    if kind is SolverKind.ROSENBROCK and problem.drift.x_derivative is None:
        raise ConfigError(
            f"drift {problem.drift.name!r} has no x_derivative; the "
            "Rosenbrock scheme requires one"
        )
    if kind is not SolverKind.MISHURA_EM or problem.alpha == 0.0:
        return problem, problem.drift
    alpha = problem.alpha
    base = problem.drift

    def folded(t, x, _a=alpha, _f=base.eval):
        return _a * x + _f(t, x)

    if base.x_derivative is None:
        folded_deriv = None
    else:

        def folded_deriv(t, x, _a=alpha, _d=base.x_derivative):
            return _a + _d(t, x)

    drift = DriftFunction(
        name=f"{base.name}+linear",
        eval=folded,
        x_derivative=folded_deriv,
        holder_exponent=base.holder_exponent,
    )
    return replace(problem, alpha=0.0), drift


def solve_endpoint_values(
    problem: SdeProblem, kind: SolverKind, values: np.ndarray, grid: TimeGrid
):
    """Batch endpoint solve on raw path values (rows = independent paths).

    Returns (x_at_T, z_final, j_final) as 1-d arrays.  Single-path calls
    through solve_endpoint are bit-identical to batch rows because all
    arithmetic is elementwise.
    """
    if grid.t_final != problem.t_final:
        raise ValueError(
            f"grid t_final {grid.t_final} does not match problem t_final "
            f"{problem.t_final}"
        )
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[1] != grid.n_steps + 1:
        raise ValueError(
            f"values must have {grid.n_steps + 1} columns, got {values.shape[1]}"
        )
    prob_eff, drift_eff = _effective(problem, kind)
    t = grid.times()
    dt = grid.dt
    j = tilde_j(prob_eff, problem.t_final, t[None, :], values)
    z = np.full(values.shape[0], float(problem.x0))
    step = _STEPPERS[kind]
    for i in range(grid.n_steps):
        z = step(z, j[:, i], t[i], dt, drift_eff)
    j_final = j[:, grid.n_steps]
    return z / j_final, z, j_final


def solve_endpoint(problem: SdeProblem, kind: SolverKind, path: FbmPath) -> EndpointResult:
    """Approximate X(t_final) from one fBm path (endpoint algorithm)."""
    _check_compatible(problem, path)
    x, z, j = solve_endpoint_values(problem, kind, path.values[None, :], path.grid)
    return EndpointResult(x_at_T=float(x[0]), z_final=float(z[0]), j_final=float(j[0]))


def solve_path(problem: SdeProblem, kind: SolverKind, path: FbmPath) -> PathResult:
    """Approximate X on every grid node (path algorithm).

    Node k is produced by rerunning the endpoint solve on the problem
    truncated to [0, t_k] with the path prefix, so values[k] matches the
    endpoint algorithm on that truncation exactly; total cost O(n^2).
    """
    _check_compatible(problem, path)
    n = path.grid.n_steps
    times = path.grid.times()
    out = np.empty(n + 1)
    out[0] = problem.x0
    for k in range(1, n + 1):
        sub_problem = replace(problem, t_final=float(times[k]))
        sub_path = truncate_path(path, k)
        out[k] = solve_endpoint(sub_problem, kind, sub_path).x_at_T
    return PathResult(values=out)


def _check_compatible(problem: SdeProblem, path: FbmPath) -> None:
    if path.hurst != problem.hurst:
        raise ValueError(
            f"path hurst {path.hurst} does not match problem hurst {problem.hurst}"
        )
    if path.grid.t_final != problem.t_final:
        raise ValueError(
            f"path t_final {path.grid.t_final} does not match problem t_final "
            f"{problem.t_final}"
        )
    if path.grid.n_steps < 1:
        raise ValueError("path must have at least one step")
