import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympreg.errors import DimensionError, SingularMatrixError
from sympreg.numerics import eig2, gauss_nodes, lobatto_nodes, lu_det, lu_solve
from sympreg.tableau import gauss, lobatto_iiia


def test_lu_det_identity():
    assert lu_det(np.eye(3)) == 1.0


def test_lu_det_rotation_like():
    z = 2.0
    m = [[1.0, -z / 2], [z / 2, 1.0]]
    assert lu_det(m) == pytest.approx(1 + z * z / 4, abs=1e-15)


def test_lu_det_lobatto_iiib_shifted():
    # det(I - z A) for the 2-stage Lobatto IIIB matrix at z=1
    A = np.array([[0.5, 0.0], [0.5, 0.0]])
    assert lu_det(np.eye(2) - A) == pytest.approx(0.5, abs=1e-15)


def test_lu_det_sign():
    assert lu_det([[0.0, 1.0], [1.0, 0.0]]) == -1.0


def test_lu_det_structurally_singular():
    assert lu_det([[1.0, 1.0], [1.0, 1.0]]) == 0.0


def test_lu_det_rejects_nonsquare():
    with pytest.raises(DimensionError):
        lu_det(np.ones((2, 3)))


def test_lu_solve_identity():
    assert np.array_equal(lu_solve(np.eye(2), [3.0, 4.0]), [3.0, 4.0])


def test_lu_solve_diagonal():
    assert np.allclose(lu_solve([[2.0, 0.0], [0.0, 4.0]], [2.0, 4.0]), [1.0, 1.0])


def test_lu_solve_midpoint_shift():
    # (I + z^2 A^2) with A = [[1/2]] at z = 2
    assert lu_solve([[2.0]], [1.0])[0] == pytest.approx(0.5, abs=1e-15)


def test_lu_solve_singular_reports_pivot():
    with pytest.raises(SingularMatrixError) as exc:
        lu_solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])
    assert exc.value.pivot_index == 1


def test_lu_det_product_rule():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = rng.integers(1, 9)
        a = rng.uniform(-10, 10, (n, n))
        b = rng.uniform(-10, 10, (n, n))
        lhs = lu_det(a @ b)
        rhs = lu_det(a) * lu_det(b)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * max(1.0, abs(rhs)))


def test_lu_solve_roundtrip():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 200:
        n = rng.integers(1, 9)
        a = rng.uniform(-10, 10, (n, n))
        if np.linalg.cond(a) > 1e6:
            continue
        v = rng.uniform(-10, 10, n)
        x = lu_solve(a, v)
        assert np.max(np.abs(a @ x - v)) <= 1e-12 * max(1.0, np.max(np.abs(v)))
        checked += 1


@given(
    st.lists(st.floats(-100, 100), min_size=4, max_size=4),
)
@settings(derandomize=True, max_examples=200)
def test_eig2_trace_det(entries):
    m = np.array(entries).reshape(2, 2)
    lam1, lam2 = eig2(m)
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(1.0, float(np.max(np.abs(m))) ** 2)
    assert abs((lam1 + lam2) - tr) <= 1e-12 * scale
    assert abs(lam1 * lam2 - det) <= 1e-12 * scale


def test_eig2_pure_rotation_generator():
    lam1, lam2 = eig2([[0.0, -4.0], [1.0, 0.0]])
    assert lam1 == 2j and lam2 == -2j


def test_eig2_saddle():
    lam1, lam2 = eig2([[-1.0, 0.0], [0.0, 1.0]])
    assert {lam1, lam2} == {1.0, -1.0}
    assert lam1.imag == 0.0


def test_eig2_identity():
    assert eig2(np.eye(2)) == (1 + 0j, 1 + 0j)


def test_eig2_conjugate_exactly():
    lam1, lam2 = eig2([[0.3, -1.7], [0.9, 0.4]])
    assert lam1 == lam2.conjugate()


def test_eig2_rejects_wrong_size():
    with pytest.raises(DimensionError):
        eig2(np.eye(3))


def test_gauss_nodes_small():
    assert np.array_equal(gauss_nodes(1), [0.5])
    assert np.allclose(gauss_nodes(2), [0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6], atol=1e-15)
    assert np.allclose(
        gauss_nodes(3),
        [0.5 - math.sqrt(15) / 10, 0.5, 0.5 + math.sqrt(15) / 10],
        atol=1e-15,
    )


def test_gauss_nodes_residuals():
    from sympreg.numerics import _legendre_pair

    for s in range(1, 13):
        for c in gauss_nodes(s):
            p, _ = _legendre_pair(s, 2 * c - 1)
            assert abs(p) <= 1e-14


def test_lobatto_nodes_small():
    assert np.array_equal(lobatto_nodes(2), [0.0, 1.0])
    assert np.allclose(lobatto_nodes(3), [0.0, 0.5, 1.0], atol=1e-15)
    r = 1 / math.sqrt(5)
    assert np.allclose(
        lobatto_nodes(4), [0.0, (1 - r) / 2, (1 + r) / 2, 1.0], atol=1e-15
    )


def test_lobatto_nodes_symmetric_increasing():
    for s in range(2, 13):
        c = lobatto_nodes(s)
        assert np.all(np.diff(c) > 0)
        assert np.max(np.abs(c + c[::-1] - 1.0)) <= 1e-13
        assert c[0] == 0.0 and c[-1] == 1.0


def test_lobatto_nodes_rejects_one_stage():
    with pytest.raises(ValueError):
        lobatto_nodes(1)


@pytest.mark.parametrize("s", range(1, 11))
def test_gauss_quadrature_exactness(s):
    # Gauss nodes with the tableau weights integrate degree 2s-1 exactly.
    t = gauss(s)
    for k in range(2 * s):
        approx = float(np.sum(t.b * t.c**k))
        assert approx == pytest.approx(1.0 / (k + 1), abs=1e-10)


@pytest.mark.parametrize("s", range(2, 11))
def test_lobatto_quadrature_exactness(s):
    # Lobatto nodes with the tableau weights integrate degree 2s-3 exactly.
    t = lobatto_iiia(s)
    for k in range(2 * s - 2):
        approx = float(np.sum(t.b * t.c**k))
        assert approx == pytest.approx(1.0 / (k + 1), abs=1e-10)
    # one degree higher visibly fails for small s (the rule is not Gaussian);
    # for larger s the first inexact degree has error below 1e-10 itself
    if s <= 4:
        k = 2 * s - 2
        assert abs(float(np.sum(t.b * t.c**k)) - 1.0 / (k + 1)) > 1e-10
