"""Structure-preservation predicates and step-size regions.

The predicates decide, for a dimensionless step z = beta*h, whether a method
keeps the equilibrium type of the linear model problems.  ``find_region``
turns a predicate into maximal intervals on (0, z_max] with bisection-refined
boundaries.

Elliptic criteria are evaluated through the determinant-ratio scalars
``a1``/``a2``; hyperbolic criteria through the rational stability functions.
The exact propagation matrices of :mod:`sympreg.dynamics` deliberately use a
different route (stage solves), so tests can play the two against each other.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dynamics
from .composition import CompositionScheme
from .dynamics import ModelProblem, StepMap
from .errors import ExcludedPointError, PoleError, SingularMatrixError
from .numerics import eig2, lobatto_nodes, lu_det, lu_solve
from .tableau import ButcherTableau, PartitionedPair, srk_pair

DEFAULT_GRID_N = 20_000
GRID_ENV_VAR = "SYMPREG_GRID_N"

_POLE_RTOL = 1e-14
_BOUNDARY_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralReport:
    """Spectral data of a one-step map at a dimensionless step z.

    Fields that a particular constructor does not define are None: the
    propagation-matrix report fills a1/a2/r_plus/r_minus, the J_N report of
    :func:`elliptic_report_srk` does not (its trace/det/eigenvalues describe
    the difference-quotient stability matrix instead).
    """

    z: float
    a1: float | None
    a2: float | None
    trace: float
    det: float
    discriminant: float
    eigenvalues: tuple[complex, complex]
    r_plus: float | None
    r_minus: float | None

    def to_dict(self) -> dict:
        return {
            "z": self.z,
            "a1": self.a1,
            "a2": self.a2,
            "trace": self.trace,
            "det": self.det,
            "discriminant": self.discriminant,
            "eigenvalues": [[lam.real, lam.imag] for lam in self.eigenvalues],
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
        }


@dataclass(frozen=True)
class RegionResult:
    """Step sizes satisfying a predicate, as disjoint open intervals.

    ``principal_endpoint`` is the upper boundary of the interval whose lower
    edge is the smallest sampled z (inf when the predicate already fails
    there).  ``open_at_zmax`` flags a final interval cut off by the scan
    limit rather than by a predicate failure.
    """

    intervals: list[tuple[float, float]]
    principal_endpoint: float
    excluded_points: list[float]
    open_at_zmax: bool


def stability_function(t: ButcherTableau, z: float) -> float:
    """R(z) = det(I - zA + z e b^T) / det(I - zA)."""
    I = np.eye(t.s)
    E = np.outer(np.ones(t.s), t.b)
    den = lu_det(I - z * t.A)
    num = lu_det(I - z * t.A + z * E)
    if abs(den) <= _POLE_RTOL * max(1.0, abs(num)):
        raise PoleError(z, f"stability function pole at z = {z!r}")
    return num / den


def a1a2(pair: PartitionedPair, z: float) -> tuple[float, float]:
    """The two determinant-ratio scalars entering the elliptic criterion.

    a1 = det(I + z^2 A2 (A1 - e b1^T)) / det(I + z^2 A2 A1) and symmetrically
    for a2.  A vanishing denominator raises :class:`ExcludedPointError`.
    """
    A1, b1 = pair.first.A, pair.first.b
    A2, b2 = pair.second.A, pair.second.b
    s = pair.s
    I = np.eye(s)
    E1 = np.outer(np.ones(s), b1)
    E2 = np.outer(np.ones(s), b2)
    zz = z * z
    num1 = lu_det(I + zz * (A2 @ (A1 - E1)))
    den1 = lu_det(I + zz * (A2 @ A1))
    num2 = lu_det(I + zz * (A1 @ (A2 - E2)))
    den2 = lu_det(I + zz * (A1 @ A2))
    if abs(den1) <= _POLE_RTOL * max(1.0, abs(num1)) or abs(den2) <= _POLE_RTOL * max(
        1.0, abs(num2)
    ):
        raise ExcludedPointError(z, f"a1/a2 denominator vanishes at z = {z!r}")
    return num1 / den1, num2 / den2


def elliptic_report_srk(t: ButcherTableau, beta: float, h: float) -> SpectralReport:
    """Spectral report of the difference-quotient stability matrix J_N for a
    plain Runge-Kutta method on the elliptic problem.

    With D = b^T (I + h^2 beta^2 A^2)^(-1) the eigenvalues are
    ``-h beta^2 (D A e) +/- i beta (D e)``; the equilibrium stays elliptic
    exactly while the imaginary part is nonzero.
    """
    z = beta * h
    I = np.eye(t.s)
    e = np.ones(t.s)
    try:
        d = lu_solve((I + z * z * (t.A @ t.A)).T, t.b)
    except SingularMatrixError as exc:
        raise ExcludedPointError(z) from exc
    de = float(d @ e)
    dae = float(d @ (t.A @ e))
    re = -h * beta * beta * dae
    im = beta * de
    trace = 2.0 * re
    det = re * re + im * im
    return SpectralReport(
        z=z,
        a1=None,
        a2=None,
        trace=trace,
        det=det,
        discriminant=trace * trace - 4.0 * det,
        eigenvalues=(complex(re, im), complex(re, -im)),
        r_plus=None,
        r_minus=None,
    )


def _pair_of(method) -> PartitionedPair:
    return method if isinstance(method, PartitionedPair) else srk_pair(method)


def _composed_stability(scheme: CompositionScheme, z: float) -> tuple[float, float]:
    pair = _pair_of(scheme.base)
    r_minus = 1.0
    r_plus = 1.0
    for g in scheme.gammas:
        r_minus *= stability_function(pair.first, -g * z)
        r_plus *= stability_function(pair.second, g * z)
    return r_plus, r_minus


def spectral_report(method, z: float) -> SpectralReport:
    """Spectral report of the one-step propagation matrix at z (beta = 1).

    Works for tableaus (viewed as the pair (t, t)), partitioned pairs and
    composition schemes.  Stability-function values are omitted near their
    poles rather than failing the whole report.
    """
    M = dynamics.propagation_matrix(StepMap(method, ModelProblem.elliptic(1.0), z))
    trace = float(M[0, 0] + M[1, 1])
    det = float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    try:
        if isinstance(method, CompositionScheme):
            a1, a2 = float(M[0, 0]), float(M[1, 1])
            r_plus, r_minus = _composed_stability(method, z)
        else:
            pair = _pair_of(method)
            a1, a2 = a1a2(pair, z)
            r_plus = stability_function(pair.second, z)
            r_minus = stability_function(pair.first, -z)
    except PoleError:
        r_plus = r_minus = None
    return SpectralReport(
        z=z,
        a1=a1,
        a2=a2,
        trace=trace,
        det=det,
        discriminant=trace * trace - 4.0 * det,
        eigenvalues=eig2(M),
        r_plus=r_plus,
        r_minus=r_minus,
    )


def elliptic_predicate_sprk(pair: PartitionedPair, z: float) -> bool:
    """Strict elliptic criterion |a1 + a2| < 2."""
    a1, a2 = a1a2(pair, z)
    return abs(a1 + a2) < 2.0


def hyperbolic_predicate_srk(t: ButcherTableau, z: float) -> bool:
    """Strict hyperbolic criterion R(-z) < 1 and R(z) > 1.

    For A-stable methods the equivalent shortcut det(I - zA) > 0 is evaluated
    as well; a disagreement between the two routes raises ArithmeticError.
    """
    value = stability_function(t, -z) < 1.0 and stability_function(t, z) > 1.0
    if t.a_stable and z > 0.0:
        shortcut = lu_det(np.eye(t.s) - z * t.A) > 0.0
        if shortcut != value:
            raise ArithmeticError(
                f"hyperbolic criterion routes disagree at z = {z!r} for {t.name}"
            )
    return value


def hyperbolic_predicate_sprk(pair: PartitionedPair, z: float) -> bool:
    """Strict hyperbolic criterion R1(-z) < 1 and R2(z) > 1."""
    return (
        stability_function(pair.first, -z) < 1.0
        and stability_function(pair.second, z) > 1.0
    )


def composed_predicate(scheme: CompositionScheme, kind: str, z: float) -> bool:
    """Structure-preservation criterion for a composition scheme.

    Elliptic: |trace| < 2 for the composed propagation matrix, with its
    determinant within 1e-8 of 1.  Hyperbolic: both diagonal factors on the
    right side of 1; one-stage bases additionally require every substep
    factor 1 - |gamma_i| z to stay positive, which is what shrinks the region
    of a triple-jump composition below the base method's.
    """
    if kind == dynamics.ELLIPTIC:
        M = dynamics.propagation_matrix(
            StepMap(scheme, ModelProblem.elliptic(1.0), z)
        )
        trace = float(M[0, 0] + M[1, 1])
        det = float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
        return abs(trace) < 2.0 and abs(det - 1.0) <= 1e-8
    if kind == dynamics.HYPERBOLIC:
        if _pair_of(scheme.base).s == 1:
            if any(1.0 - abs(g) * z <= 0.0 for g in scheme.gammas):
                return False
        r_plus, r_minus = _composed_stability(scheme, z)
        return r_minus < 1.0 and r_plus > 1.0
    raise ValueError(f"unknown region kind {kind!r}")


def _grid_size(n: int | None) -> int:
    if n is None:
        n = int(os.environ.get(GRID_ENV_VAR, DEFAULT_GRID_N))
    if n < 2:
        raise ValueError(f"grid resolution must be at least 2, got {n}")
    return n


def _refine_boundary(predicate, z_true: float, z_false: float) -> float:
    # Bisect keeping the side where the predicate holds; undefined points
    # count as failures.  Returns the midpoint of the final bracket.
    while abs(z_false - z_true) > _BOUNDARY_RTOL * max(
        1.0, abs(z_true), abs(z_false)
    ):
        mid = 0.5 * (z_true + z_false)
        try:
            good = bool(predicate(mid))
        except ExcludedPointError:
            good = False
        if good:
            z_true = mid
        else:
            z_false = mid
    return 0.5 * (z_true + z_false)


def find_region(predicate, z_max: float, n: int | None = None) -> RegionResult:
    """Scan a uniform grid on (0, z_max] and assemble maximal true intervals.

    Boundaries between grid points are refined by bisection to a relative
    width of 1e-10.  Grid points where the predicate raises
    :class:`ExcludedPointError` are recorded and treated as failures.  The
    resolution defaults to 20000 and can be overridden by the
    ``SYMPREG_GRID_N`` environment variable or the ``n`` argument.

    Features narrower than the grid spacing are invisible to the scan; see
    :func:`lobatto_elliptic_endpoint` for the one catalog family where that
    matters.
    """
    if not (math.isfinite(z_max) and z_max > 0.0):
        raise ValueError(f"z_max must be positive, got {z_max!r}")
    n = _grid_size(n)
    zs = z_max * np.arange(1, n + 1) / n
    ok = np.empty(n, dtype=bool)
    excluded: list[float] = []
    for i in range(n):
        z = float(zs[i])
        try:
            ok[i] = bool(predicate(z))
        except ExcludedPointError:
            ok[i] = False
            excluded.append(z)
    intervals: list[tuple[float, float]] = []
    open_at_zmax = False
    i = 0
    while i < n:
        if not ok[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and ok[j + 1]:
            j += 1
        lo = float(zs[0]) if i == 0 else _refine_boundary(
            predicate, float(zs[i]), float(zs[i - 1])
        )
        if j == n - 1:
            hi = float(z_max)
            open_at_zmax = True
        else:
            hi = _refine_boundary(predicate, float(zs[j]), float(zs[j + 1]))
        intervals.append((lo, hi))
        i = j + 1
    if intervals and intervals[0][0] == float(zs[0]):
        principal = intervals[0][1]
    else:
        principal = math.inf
    return RegionResult(intervals, principal, excluded, open_at_zmax)


def region_to_csv(result: RegionResult) -> str:
    lines = ["z_lo,z_hi,principal"]
    for lo, hi in result.intervals:
        lines.append(f"{lo:.17g},{hi:.17g},{result.principal_endpoint:.17g}")
    return "\n".join(lines) + "\n"


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def _mp_dlegendre(mpf_one, n: int, x):
    # (P_n', P_n'') inside (-1, 1), by the recurrence at working precision
    p0, p1 = mpf_one, x
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    d = n * (x * p1 - p0) / (x * x - 1)
    dd = (2 * x * d - n * (n + 1) * p1) / (1 - x * x)
    return d, dd


def _mp_lobatto_pair_a1(s: int):
    # High-precision Lobatto IIIA-IIIB pair, returned as an a1(z) evaluator.
    from mpmath import det, eye, lu_solve as mp_lu_solve, matrix, mp, mpf

    n = s - 1
    digits = mpf(10) ** (-(mp.dps - 5))
    interior = []
    for c0 in lobatto_nodes(s)[1:-1]:
        x = mpf(2.0 * c0 - 1.0)
        for _ in range(80):
            d, dd = _mp_dlegendre(mpf(1), n, x)
            dx = d / dd
            x -= dx
            if abs(dx) < digits:
                break
        interior.append(x)
    c = [mpf(0)] + [(x + 1) / 2 for x in interior] + [mpf(1)]
    V = matrix(s, s)
    for k in range(s):
        for j in range(s):
            V[k, j] = c[j] ** k
    b = mp_lu_solve(V, matrix([mpf(1) / k for k in range(1, s + 1)]))
    A1 = matrix(s, s)
    for i in range(s):
        row = mp_lu_solve(V, matrix([c[i] ** k / k for k in range(1, s + 1)]))
        for j in range(s):
            A1[i, j] = row[j]
    W = matrix(s, s)
    for k in range(s):
        for i in range(s):
            W[k, i] = b[i] * c[i] ** k
    A2 = matrix(s, s)
    for j in range(s):
        col = mp_lu_solve(
            W, matrix([b[j] * (1 - c[j] ** k) / k for k in range(1, s + 1)])
        )
        for i in range(s):
            A2[i, j] = col[i]
    E = matrix(s, s)
    for i in range(s):
        for j in range(s):
            E[i, j] = b[j]
    M_num = A2 * (A1 - E)
    M_den = A2 * A1
    I = eye(s)

    def a1(z):
        zz = z * z
        return det(I + zz * M_num) / det(I + zz * M_den)

    return a1


@lru_cache(maxsize=None)
def lobatto_elliptic_endpoint(s: int, dps: int = 60) -> float:
    """Endpoint of the principal elliptic interval (0, z*) for the s-stage
    Lobatto IIIA-IIIB pair, computed in extended precision.

    The margin by which |a1| exceeds 1 inside the first failure window
    collapses with the stage count (about 5e-7 at s=5, 1.7e-17 at s=8 and
    1e-25 at s=10), far below float64 resolution, so the determinant ratio is
    evaluated with mpmath and the crossing bracketed by bisection.  The grid
    scanner of :func:`find_region` reproduces these endpoints only up to s=5.
    """
    if s < 2:
        raise ValueError(f"stage count must be at least 2, got {s}")
    from mpmath import mp, pi

    with mp.workdps(dps):
        a1 = _mp_lobatto_pair_a1(s)
        lo, hi = mp.mpf("0.5"), +pi
        if not abs(a1(lo)) < 1:
            raise ArithmeticError("lower bracket is outside the elliptic region")
        if abs(a1(hi)) < 1:
            raise ArithmeticError("upper bracket is inside the elliptic region")
        for _ in range(140):
            mid = (lo + hi) / 2
            if abs(a1(mid)) < 1:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)
