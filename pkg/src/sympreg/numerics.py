"""Dense linear algebra for small matrices plus Legendre-type node finding.

Everything operates on plain float64 numpy arrays and is deliberately
self-contained: a partially pivoted LU factorisation backs every determinant
and solve, and the collocation nodes are polished by Newton iterations on the
Legendre three-term recurrence.  Dimensions are capped at ``MAX_DIM``; this
module is not meant for large or structured systems.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, SingularMatrixError

MAX_DIM = 16

# A pivot below this multiple of the largest initial entry is treated as an
# exact singularity.
PIVOT_RTOL = 1e-13


def as_matrix(m) -> np.ndarray:
    """Validate a square matrix of finite float64 entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionError(
            f"dimension {a.shape[0]} exceeds the supported maximum {MAX_DIM}"
        )
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def as_vector(v, n: int | None = None) -> np.ndarray:
    """Validate a vector of finite float64 entries, optionally of length n."""
    a = np.asarray(v, dtype=float)
    if a.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise DimensionError(f"vector length {a.shape[0]} does not match {n}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector entries must be finite")
    return a


def lu_det(m) -> float:
    """Determinant via pivoted triangular factorisation, exact sign preserved.

    A structurally singular matrix returns exactly 0.0 rather than raising.
    """
    a = as_matrix(m).copy()
    n = a.shape[0]
    sign = 1.0
    for k in range(n - 1):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0.0:
            return 0.0
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            sign = -sign
        a[k + 1 :, k] /= a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :])
    return float(sign * np.prod(np.diag(a)))


def lu_solve(m, v) -> np.ndarray:
    """Solve m @ x = v by LU with partial pivoting.

    Raises :class:`SingularMatrixError` (carrying the failing pivot index)
    when a pivot falls below ``PIVOT_RTOL`` times the largest initial entry.
    """
    a = as_matrix(m).copy()
    n = a.shape[0]
    x = as_vector(v, n).copy()
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise SingularMatrixError(0, 0.0)
    floor = PIVOT_RTOL * scale
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) < floor:
            raise SingularMatrixError(k, float(a[piv, k]))
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
        if k + 1 < n:
            mult = a[k + 1 :, k] / a[k, k]
            a[k + 1 :, k + 1 :] -= np.outer(mult, a[k, k + 1 :])
            x[k + 1 :] -= mult * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x


def eig2(m) -> tuple[complex, complex]:
    """Both eigenvalues of a 2x2 matrix.

    The discriminant sign selects the representation: a negative discriminant
    yields an exactly conjugate complex pair, otherwise two real roots are
    returned (larger first).
    """
    a = as_matrix(m)
    if a.shape[0] != 2:
        raise DimensionError(f"eig2 expects a 2x2 matrix, got {a.shape}")
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = tr * tr - 4.0 * det
    if disc < 0.0:
        im = math.sqrt(-disc) / 2.0
        return complex(tr / 2.0, im), complex(tr / 2.0, -im)
    r = math.sqrt(disc) / 2.0
    return complex(tr / 2.0 + r, 0.0), complex(tr / 2.0 - r, 0.0)


def _legendre_pair(n: int, x: float) -> tuple[float, float]:
    # (P_n, P_{n-1}) by the three-term recurrence
    p0, p1 = 1.0, x
    if n == 0:
        return 1.0, 0.0
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1, p0


def _legendre_p_dp(n: int, x: float) -> tuple[float, float]:
    # (P_n, P_n') for x strictly inside (-1, 1)
    p, pm1 = _legendre_pair(n, x)
    return p, n * (x * p - pm1) / (x * x - 1.0)


def _dlegendre_pair(n: int, x: float) -> tuple[float, float]:
    # (P_n', P_n'') for x strictly inside (-1, 1)
    p, dp = _legendre_p_dp(n, x)
    return dp, (2.0 * x * dp - n * (n + 1) * p) / (1.0 - x * x)


def _newton_root(f_df, x0: float) -> float:
    # Newton confined to (-1, 1); falls back to a bracketing scan when the
    # iteration leaves the interval or stalls.
    x = x0
    for _ in range(100):
        f, df = f_df(x)
        if df == 0.0:
            break
        dx = f / df
        x_new = x - dx
        if not -1.0 < x_new < 1.0:
            break
        x = x_new
        if abs(dx) < 1e-16:
            return x
    f, _ = f_df(x)
    if abs(f) <= 1e-13:
        return x
    return _bracketed_root(f_df, x0)


def _bracketed_root(f_df, x0: float) -> float:
    # Dense scan for a sign change near x0, then bisection.
    grid = np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, 4001)
    vals = np.array([f_df(g)[0] for g in grid])
    sign_flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if sign_flips.size == 0:
        raise ArithmeticError(f"no bracket found near x0={x0!r}")
    k = sign_flips[int(np.argmin(np.abs(grid[sign_flips] - x0)))]
    lo, hi = grid[k], grid[k + 1]
    flo = f_df(lo)[0]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f_df(mid)[0]
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def gauss_nodes(s: int) -> np.ndarray:
    """Roots of the degree-s shifted Legendre polynomial, on (0, 1).

    Strictly increasing; each root is Newton-refined until the polynomial
    residual is at most 1e-14.
    """
    if s < 1:
        raise ValueError(f"stage count must be at least 1, got {s}")
    if s == 1:
        return np.array([0.5])
    roots = np.empty(s)
    for k in range(1, s + 1):
        guess = math.cos(math.pi * (4 * k - 1) / (4 * s + 2))
        roots[k - 1] = _newton_root(lambda x: _legendre_p_dp(s, x), guess)
    roots = np.sort(roots)
    roots = (roots - roots[::-1]) / 2.0  # enforce symmetry about the origin
    nodes = (roots + 1.0) / 2.0
    if np.any(np.diff(nodes) <= 0.0):
        raise ArithmeticError("node refinement produced non-increasing roots")
    return nodes


def lobatto_nodes(s: int) -> np.ndarray:
    """Lobatto abscissae on [0, 1]: endpoints plus the interior extrema of
    the degree-(s-1) Legendre polynomial.

    Strictly increasing and symmetric about 1/2.
    """
    if s < 2:
        raise ValueError(f"stage count must be at least 2, got {s}")
    if s == 2:
        return np.array([0.0, 1.0])
    n = s - 1
    interior = np.empty(s - 2)
    for k in range(1, n):
        guess = math.cos(math.pi * k / n)
        interior[k - 1] = _newton_root(lambda x: _dlegendre_pair(n, x), guess)
    interior = np.sort(interior)
    x = np.concatenate(([-1.0], interior, [1.0]))
    nodes = (x + 1.0) / 2.0
    nodes = (nodes + 1.0 - nodes[::-1]) / 2.0  # exact symmetry about 1/2
    if np.any(np.diff(nodes) <= 0.0):
        raise ArithmeticError("node refinement produced non-increasing roots")
    return nodes
