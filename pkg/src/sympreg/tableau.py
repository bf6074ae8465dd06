"""Runge-Kutta tableaus: the symplectic catalog and its algebraic checks.

The catalog holds Gauss collocation methods, Lobatto IIIA/IIIB tableaus and
their symplectic pair, and the symplectic Euler pair.  Construction is by
collocation and adjoint order conditions on the node sets from
:mod:`sympreg.numerics`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .numerics import as_matrix, as_vector, gauss_nodes, lobatto_nodes, lu_solve

_WEIGHT_SUM_TOL = 1e-12
_COLLOCATION_TOL = 1e-12


def _frozen_array(obj, field_name, value):
    arr = np.array(value, dtype=float)
    arr.setflags(write=False)
    object.__setattr__(obj, field_name, arr)


@dataclass(frozen=True)
class ButcherTableau:
    """One Runge-Kutta method: coefficient matrix A, weights b, abscissae c."""

    s: int
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    name: str
    classical_order: int
    a_stable: bool = False

    def __post_init__(self):
        A = as_matrix(self.A)
        b = as_vector(self.b, self.s)
        c = as_vector(self.c, self.s)
        if A.shape != (self.s, self.s):
            raise DimensionError(f"A has shape {A.shape}, expected ({self.s}, {self.s})")
        if abs(float(b.sum()) - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {b.sum()!r}")
        _frozen_array(self, "A", A)
        _frozen_array(self, "b", b)
        _frozen_array(self, "c", c)


@dataclass(frozen=True)
class PartitionedPair:
    """A partitioned method: ``first`` advances p, ``second`` advances q."""

    first: ButcherTableau
    second: ButcherTableau
    name: str

    def __post_init__(self):
        if self.first.s != self.second.s:
            raise DimensionError(
                f"stage counts differ: {self.first.s} vs {self.second.s}"
            )

    @property
    def s(self) -> int:
        return self.first.s


def _vandermonde(c: np.ndarray) -> np.ndarray:
    # V[k, j] = c_j ** k for k = 0..s-1
    s = len(c)
    return np.vander(c, s, increasing=True).T


def _solve_refined(V: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # One round of iterative refinement; the moment Vandermonde systems get
    # mildly ill-conditioned around ten stages and lose a digit without it.
    x = lu_solve(V, rhs)
    return x + lu_solve(V, rhs - V @ x)


def _collocation_rows(c: np.ndarray) -> np.ndarray:
    # Row i solves sum_j a_ij c_j^(k-1) = c_i^k / k for k = 1..s.
    s = len(c)
    V = _vandermonde(c)
    A = np.empty((s, s))
    for i in range(s):
        rhs = np.array([c[i] ** k / k for k in range(1, s + 1)])
        A[i] = _solve_refined(V, rhs)
    return A


def _quadrature_weights(c: np.ndarray) -> np.ndarray:
    s = len(c)
    rhs = np.array([1.0 / k for k in range(1, s + 1)])
    return _solve_refined(_vandermonde(c), rhs)


def _check_collocation(A: np.ndarray, c: np.ndarray) -> None:
    if float(np.max(np.abs(A.sum(axis=1) - c))) > _COLLOCATION_TOL:
        raise ArithmeticError("collocation row sums do not reproduce the abscissae")


def gauss(s: int) -> ButcherTableau:
    """Gauss collocation method with s stages (order 2s, A-stable)."""
    c = gauss_nodes(s)
    A = _collocation_rows(c)
    b = _quadrature_weights(c)
    _check_collocation(A, c)
    return ButcherTableau(s, A, b, c, f"gauss-{s}", 2 * s, a_stable=True)


def midpoint() -> ButcherTableau:
    """The implicit midpoint rule (the 1-stage Gauss method)."""
    return dataclasses.replace(gauss(1), name="midpoint")


def lobatto_iiia(s: int) -> ButcherTableau:
    """Lobatto IIIA tableau with s stages (order 2s-2, A-stable)."""
    c = lobatto_nodes(s)
    A = _collocation_rows(c)
    b = _quadrature_weights(c)
    _check_collocation(A, c)
    return ButcherTableau(s, A, b, c, f"lobatto-iiia-{s}", 2 * s - 2, a_stable=True)


def lobatto_iiib(s: int) -> ButcherTableau:
    """Lobatto IIIB tableau with s stages (order 2s-2, A-stable).

    Column j solves the adjoint conditions
    ``sum_i b_i c_i^(k-1) a_ij = b_j (1 - c_j^k)/k`` for k = 1..s.
    """
    c = lobatto_nodes(s)
    b = _quadrature_weights(c)
    W = _vandermonde(c) * b  # W[k, i] = b_i c_i^k
    A = np.empty((s, s))
    for j in range(s):
        rhs = np.array([b[j] * (1.0 - c[j] ** k) / k for k in range(1, s + 1)])
        A[:, j] = _solve_refined(W, rhs)
    return ButcherTableau(s, A, b, c, f"lobatto-iiib-{s}", 2 * s - 2, a_stable=True)


def lobatto_pair(s: int) -> PartitionedPair:
    """The symplectic Lobatto IIIA-IIIB pair with s stages."""
    return PartitionedPair(lobatto_iiia(s), lobatto_iiib(s), f"lobatto-{s}")


def symplectic_euler() -> PartitionedPair:
    """The 1-stage symplectic Euler pair: explicit in p, implicit in q."""
    first = ButcherTableau(
        1, [[0.0]], [1.0], [0.0], "euler-explicit", 1, a_stable=False
    )
    second = ButcherTableau(
        1, [[1.0]], [1.0], [1.0], "euler-implicit", 1, a_stable=True
    )
    return PartitionedPair(first, second, "symplectic-euler")


def srk_pair(t: ButcherTableau) -> PartitionedPair:
    """View a plain Runge-Kutta method as the partitioned pair (t, t)."""
    return PartitionedPair(t, t, t.name)


def check_srk_symplectic(t: ButcherTableau) -> float:
    """Max-norm residual of the symplecticity condition B A + A^T B = b b^T."""
    B = np.diag(t.b)
    R = B @ t.A + t.A.T @ B - np.outer(t.b, t.b)
    return float(np.max(np.abs(R)))


def check_sprk_symplectic(pair: PartitionedPair) -> float:
    """Max-norm residual of the partitioned symplecticity conditions.

    Returns the larger of ``|B2 A1 + A2^T B1 - b2 b1^T|`` and ``|b1 - b2|``.
    """
    t1, t2 = pair.first, pair.second
    if t1.s != t2.s:
        raise DimensionError("stage counts differ")
    B1, B2 = np.diag(t1.b), np.diag(t2.b)
    R = B2 @ t1.A + t2.A.T @ B1 - np.outer(t2.b, t1.b)
    return float(max(np.max(np.abs(R)), np.max(np.abs(t1.b - t2.b))))


def lobatto_x_matrices(s: int) -> tuple[np.ndarray, np.ndarray]:
    """Banded similarity forms of the Lobatto IIIA/IIIB coefficient matrices.

    These are the classical W-transformation shapes: tridiagonal with 1/2 in
    the top-left corner, off-diagonal entries ``xi_k = 1/(2 sqrt(4k^2-1))``,
    and a one-sided last band (IIIA keeps the subdiagonal entry, IIIB the
    superdiagonal one).  They share their characteristic polynomial with the
    corresponding tableau matrices, which is what tests assert.
    """
    if s < 2:
        raise ValueError(f"stage count must be at least 2, got {s}")
    xi = [0.5 / np.sqrt(4.0 * k * k - 1.0) for k in range(1, s)]
    X1 = np.zeros((s, s))
    X2 = np.zeros((s, s))
    for X in (X1, X2):
        X[0, 0] = 0.5
        for k in range(1, s - 1):
            X[k, k - 1] = xi[k - 1]
            X[k - 1, k] = -xi[k - 1]
    X1[s - 1, s - 2] = xi[s - 2]
    X1[s - 2, s - 1] = 0.0
    X2[s - 2, s - 1] = -xi[s - 2]
    X2[s - 1, s - 2] = 0.0
    return X1, X2


def _format(x: float) -> str:
    return f"{x:.17g}"


def tableau_to_text(t: ButcherTableau) -> str:
    """Serialize as: header ``s name order``, then A rows, then b, then c.

    Numbers carry 17 significant digits, so a round trip is bit-faithful.
    """
    if any(ch.isspace() for ch in t.name):
        raise ValueError(f"tableau name may not contain whitespace: {t.name!r}")
    lines = [f"{t.s} {t.name} {t.classical_order}"]
    for row in t.A:
        lines.append(" ".join(_format(x) for x in row))
    lines.append(" ".join(_format(x) for x in t.b))
    lines.append(" ".join(_format(x) for x in t.c))
    return "\n".join(lines) + "\n"


def tableau_from_text(text: str) -> ButcherTableau:
    """Parse the output of :func:`tableau_to_text`.

    The ``a_stable`` flag is not part of the exchange format and comes back
    as False.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty tableau text")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"malformed header: {lines[0]!r}")
    s, name, order = int(head[0]), head[1], int(head[2])
    if len(lines) != s + 3:
        raise ValueError(f"expected {s + 3} lines, got {len(lines)}")
    A = [[float(x) for x in lines[1 + i].split()] for i in range(s)]
    b = [float(x) for x in lines[s + 1].split()]
    c = [float(x) for x in lines[s + 2].split()]
    return ButcherTableau(s, A, b, c, name, order)


def pair_to_text(pair: PartitionedPair) -> str:
    """Serialize a partitioned pair as a ``pair`` header plus two tableaus."""
    if any(ch.isspace() for ch in pair.name):
        raise ValueError(f"pair name may not contain whitespace: {pair.name!r}")
    return (
        f"pair {pair.name}\n"
        + tableau_to_text(pair.first)
        + tableau_to_text(pair.second)
    )


def pair_from_text(text: str) -> PartitionedPair:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("pair "):
        raise ValueError("missing pair header")
    name = lines[0].split()[1]
    s1 = int(lines[1].split()[0])
    first = tableau_from_text("\n".join(lines[1 : s1 + 4]))
    second = tableau_from_text("\n".join(lines[s1 + 4 :]))
    return PartitionedPair(first, second, name)
