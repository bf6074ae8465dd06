"""Discrete dynamics of the catalog methods on the canonical model problems.

Three one-degree-of-freedom test systems are supported:

* ``elliptic``    p' = -beta^2 q,  q' = p          (center at the origin)
* ``hyperbolic``  p' = -beta p,    q' = beta q     (saddle at the origin)
* ``logistic``    p' = alpha p (1-p),  q' = alpha (2p-1) q
                  (saddles at (0,0) and (1,0))

For the linear kinds every method has an exact 2x2 one-step propagation
matrix, assembled from stage solves.  On the logistic system stages are
resolved by a damped Newton iteration, except for the symplectic Euler pair
whose update has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .composition import CompositionScheme
from .errors import ExcludedPointError, PoleError, SingularMatrixError, SolverError
from .numerics import eig2, lu_solve
from .tableau import ButcherTableau, PartitionedPair, srk_pair

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"
LOGISTIC = "logistic"
_KINDS = (ELLIPTIC, HYPERBOLIC, LOGISTIC)

# classification labels
DEGENERATE = "degenerate"
MIXED = "mixed"

_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 50
_FIXED_POINT_TOL = 1e-10
_LOGISTIC_POLE_TOL = 1e-12


@dataclass(frozen=True)
class ModelProblem:
    """One of the canonical test systems with its positive parameter."""

    kind: str
    parameter: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}")
        if not (math.isfinite(self.parameter) and self.parameter > 0.0):
            raise ValueError(f"parameter must be positive, got {self.parameter!r}")

    @classmethod
    def elliptic(cls, beta: float) -> "ModelProblem":
        return cls(ELLIPTIC, beta)

    @classmethod
    def hyperbolic(cls, beta: float) -> "ModelProblem":
        return cls(HYPERBOLIC, beta)

    @classmethod
    def logistic(cls, alpha: float) -> "ModelProblem":
        return cls(LOGISTIC, alpha)

    @property
    def is_linear(self) -> bool:
        return self.kind != LOGISTIC

    def vector_field(self, p, q):
        """(p', q') at a state; accepts scalars or arrays."""
        a = self.parameter
        if self.kind == ELLIPTIC:
            return -a * a * q, p * np.ones_like(q)
        if self.kind == HYPERBOLIC:
            return -a * p, a * q
        return a * p * (1.0 - p), a * (2.0 * p - 1.0) * q

    def field_partials(self, p, q):
        """Entrywise partial derivatives (f_p, f_q, g_p, g_q)."""
        a = self.parameter
        one = np.ones_like(p)
        zero = np.zeros_like(p)
        if self.kind == ELLIPTIC:
            return zero, -a * a * one, one, zero
        if self.kind == HYPERBOLIC:
            return -a * one, zero, zero, a * one
        return a * (1.0 - 2.0 * p), zero, 2.0 * a * q, a * (2.0 * p - 1.0)


@dataclass(frozen=True, eq=False)
class StepMap:
    """The one-step map of (method, problem, step size).

    Negative step sizes are legal: composition substeps step backward.
    For linear problems ``matrix`` holds the exact 2x2 propagation matrix.
    """

    method: object  # ButcherTableau | PartitionedPair | CompositionScheme
    problem: ModelProblem
    h: float

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h != 0.0):
            raise ValueError(f"step size must be finite and nonzero, got {self.h!r}")

    @cached_property
    def matrix(self):
        """Exact propagation matrix for linear problems, else None."""
        if not self.problem.is_linear:
            return None
        return propagation_matrix(self)


def compose_step(scheme: CompositionScheme, problem: ModelProblem, h: float) -> StepMap:
    """One-step map of a composition scheme (alias for StepMap construction)."""
    return StepMap(scheme, problem, h)


def _matrix_for(method, problem: ModelProblem, h: float) -> np.ndarray:
    if isinstance(method, CompositionScheme):
        M = np.eye(2)
        for i, g in enumerate(method.gammas):
            try:
                M = _matrix_for(method.base, problem, g * h) @ M
            except ExcludedPointError as exc:
                exc.substep_index = i
                raise
        return M
    pair = method if isinstance(method, PartitionedPair) else srk_pair(method)
    A1, b1 = pair.first.A, pair.first.b
    A2, b2 = pair.second.A, pair.second.b
    s = pair.s
    beta = problem.parameter
    z = beta * h
    I = np.eye(s)
    e = np.ones(s)
    try:
        if problem.kind == ELLIPTIC:
            d1 = lu_solve((I + z * z * (A2 @ A1)).T, b1)
            d2 = lu_solve((I + z * z * (A1 @ A2)).T, b2)
            return np.array(
                [
                    [1.0 - z * z * (d1 @ (A2 @ e)), -beta * z * (d1 @ e)],
                    [h * (d2 @ e), 1.0 - z * z * (d2 @ (A1 @ e))],
                ]
            )
        u1 = lu_solve(I + z * A1, e)
        u2 = lu_solve(I - z * A2, e)
        return np.array(
            [[1.0 - z * (b1 @ u1), 0.0], [0.0, 1.0 + z * (b2 @ u2)]]
        )
    except SingularMatrixError as exc:
        raise ExcludedPointError(z) from exc


def propagation_matrix(step_map: StepMap) -> np.ndarray:
    """Exact 2x2 one-step matrix on a linear problem.

    Raises ValueError for the nonlinear problem and
    :class:`ExcludedPointError` where the stage system is singular.
    """
    if not step_map.problem.is_linear:
        raise ValueError("propagation matrices exist only for the linear problems")
    return _matrix_for(step_map.method, step_map.problem, step_map.h)


def _is_symplectic_euler(pair: PartitionedPair) -> bool:
    return (
        pair.s == 1
        and pair.first.A[0, 0] == 0.0
        and pair.second.A[0, 0] == 1.0
        and pair.first.b[0] == 1.0
        and pair.second.b[0] == 1.0
    )


def _logistic_euler_step(alpha: float, h: float, state: np.ndarray) -> np.ndarray:
    # Closed-form update: explicit in p, implicit (but linear) in q.
    p, q = state
    z = alpha * h
    den = 1.0 + z - 2.0 * z * p
    if abs(den) < _LOGISTIC_POLE_TOL:
        raise PoleError(
            z, f"logistic update pole: 1 + z - 2 z p = {den:.3e} at p = {float(p)!r}"
        )
    p_next = (1.0 + z) * p - z * p * p
    q_next = q * (1.0 + z * (2.0 * p - 1.0) / den)
    return np.array([p_next, q_next])


def _newton_stage_step(pair: PartitionedPair, problem: ModelProblem, h: float,
                       state: np.ndarray) -> np.ndarray:
    s = pair.s
    A1, b1 = pair.first.A, pair.first.b
    A2, b2 = pair.second.A, pair.second.b
    p, q = state
    P = np.full(s, p)
    Q = np.full(s, q)

    def residual(P, Q):
        F, G = problem.vector_field(P, Q)
        return P - p - h * (A1 @ F), Q - q - h * (A2 @ G), F, G

    rP, rQ, F, G = residual(P, Q)
    res = max(np.max(np.abs(rP)), np.max(np.abs(rQ)))
    I = np.eye(s)
    for _ in range(_NEWTON_MAX_ITER):
        if res <= _NEWTON_TOL:
            return np.array([p + h * (b1 @ F), q + h * (b2 @ G)])
        fp, fq, gp, gq = problem.field_partials(P, Q)
        J = np.block(
            [
                [I - h * (A1 * fp), -h * (A1 * fq)],
                [-h * (A2 * gp), I - h * (A2 * gq)],
            ]
        )
        try:
            d = lu_solve(J, -np.concatenate([rP, rQ]))
        except SingularMatrixError as exc:
            raise SolverError(res, _NEWTON_MAX_ITER) from exc
        scale = 1.0
        for _ in range(9):  # halving on residual increase
            Pn, Qn = P + scale * d[:s], Q + scale * d[s:]
            rPn, rQn, Fn, Gn = residual(Pn, Qn)
            res_new = max(np.max(np.abs(rPn)), np.max(np.abs(rQn)))
            if res_new < res or res_new <= _NEWTON_TOL:
                break
            scale /= 2.0
        P, Q, rP, rQ, F, G, res = Pn, Qn, rPn, rQn, Fn, Gn, res_new
    if res <= _NEWTON_TOL:
        return np.array([p + h * (b1 @ F), q + h * (b2 @ G)])
    raise SolverError(res, _NEWTON_MAX_ITER)


def _apply(method, problem: ModelProblem, h: float, state: np.ndarray) -> np.ndarray:
    if problem.is_linear:
        return _matrix_for(method, problem, h) @ state
    if isinstance(method, CompositionScheme):
        out = state
        for i, g in enumerate(method.gammas):
            try:
                out = _apply(method.base, problem, g * h, out)
            except (ExcludedPointError, SolverError) as exc:
                exc.substep_index = i
                raise
        return out
    pair = method if isinstance(method, PartitionedPair) else srk_pair(method)
    if _is_symplectic_euler(pair):
        return _logistic_euler_step(problem.parameter, h, state)
    return _newton_stage_step(pair, problem, h, state)


def step(step_map: StepMap, state) -> np.ndarray:
    """Advance one step from ``state = (p, q)``."""
    x = np.asarray(state, dtype=float)
    if x.shape != (2,):
        raise ValueError(f"state must be a (p, q) pair, got shape {x.shape}")
    return _apply(step_map.method, step_map.problem, step_map.h, x)


@dataclass
class SimulationResult:
    """A trajectory plus the error that cut it short, if any."""

    states: np.ndarray
    error: Exception | None = None

    @property
    def completed(self) -> bool:
        return self.error is None


def simulate(step_map: StepMap, state0, n: int) -> SimulationResult:
    """Iterate the map n times, keeping every state.

    On a solver or pole failure the partial trajectory is returned with the
    error attached.
    """
    if n < 0:
        raise ValueError(f"step count must be nonnegative, got {n}")
    states = np.empty((n + 1, 2))
    states[0] = np.asarray(state0, dtype=float)
    for k in range(n):
        try:
            states[k + 1] = step(step_map, states[k])
        except (ExcludedPointError, SolverError) as exc:
            return SimulationResult(states[: k + 1].copy(), exc)
    return SimulationResult(states)


def trajectory_to_csv(states: np.ndarray) -> str:
    lines = ["n,p,q"]
    for k, (p, q) in enumerate(states):
        lines.append(f"{k},{p:.17g},{q:.17g}")
    return "\n".join(lines) + "\n"


def equilibria(problem: ModelProblem) -> list[tuple[float, float]]:
    """Analytic equilibrium points of the model problem."""
    if problem.kind == LOGISTIC:
        return [(0.0, 0.0), (1.0, 0.0)]
    return [(0.0, 0.0)]


def continuous_jacobian(problem: ModelProblem, point) -> np.ndarray:
    """Stability matrix of the vector field at a point."""
    p, q = float(point[0]), float(point[1])
    fp, fq, gp, gq = problem.field_partials(p, q)
    return np.array([[fp, fq], [gp, gq]], dtype=float)


def discrete_jacobian(step_map: StepMap, point) -> np.ndarray:
    """Stability matrix (D Phi_h - I)/h of the discrete map at a fixed point.

    The point must be fixed to 1e-10; linear problems use the exact
    propagation matrix, the logistic problem central finite differences with
    increment 1e-6 * max(1, |coordinate|).
    """
    x = np.asarray(point, dtype=float)
    if float(np.max(np.abs(step(step_map, x) - x))) > _FIXED_POINT_TOL:
        raise ValueError(f"{tuple(x)} is not a fixed point of the map")
    h = step_map.h
    if step_map.problem.is_linear:
        return (step_map.matrix - np.eye(2)) / h
    D = np.empty((2, 2))
    for j in range(2):
        delta = 1e-6 * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += delta
        xm[j] -= delta
        D[:, j] = (step(step_map, xp) - step(step_map, xm)) / (2.0 * delta)
    return (D - np.eye(2)) / h


def classify(m) -> str:
    """Fixed-point type of a 2x2 stability matrix.

    A conjugate pair with imaginary part above 1e-9 * |m| is elliptic; a real
    pair with product below -(1e-9 * |m|)^2 is hyperbolic; anything else is
    degenerate.  The band scales with the matrix so parameter rescalings do
    not flip the answer.
    """
    a = np.asarray(m, dtype=float)
    lam1, lam2 = eig2(a)
    band = 1e-9 * float(np.max(np.abs(a)))
    if lam1.imag != 0.0:
        return ELLIPTIC if abs(lam1.imag) > band else DEGENERATE
    if lam1.real * lam2.real < -band * band:
        return HYPERBOLIC
    return DEGENERATE


@dataclass(frozen=True)
class EquilibriumReport:
    """Continuous vs discrete classification at one equilibrium point."""

    location: tuple[float, float]
    continuous_matrix: np.ndarray
    discrete_matrix: np.ndarray
    continuous_class: str
    discrete_class: str
    preserved: bool

    def to_dict(self) -> dict:
        return {
            "location": list(self.location),
            "continuous_matrix": self.continuous_matrix.tolist(),
            "discrete_matrix": self.discrete_matrix.tolist(),
            "continuous_class": self.continuous_class,
            "discrete_class": self.discrete_class,
            "preserved": self.preserved,
        }


def classify_system(problem: ModelProblem, method, h: float):
    """Per-equilibrium reports plus an overall structure label.

    The label is ``elliptic`` or ``hyperbolic`` when every discrete
    equilibrium has that type, otherwise ``mixed``.
    """
    step_map = StepMap(method, problem, h)
    reports = []
    for eq in equilibria(problem):
        Jc = continuous_jacobian(problem, eq)
        Jn = discrete_jacobian(step_map, eq)
        cc, dc = classify(Jc), classify(Jn)
        reports.append(EquilibriumReport(eq, Jc, Jn, cc, dc, cc == dc))
    kinds = {r.discrete_class for r in reports}
    if kinds == {ELLIPTIC}:
        overall = ELLIPTIC
    elif kinds == {HYPERBOLIC}:
        overall = HYPERBOLIC
    else:
        overall = MIXED
    return reports, overall
