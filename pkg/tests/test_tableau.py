import math

import numpy as np
import pytest

from sympreg.errors import DimensionError
from sympreg.numerics import lu_det
from sympreg.tableau import (
    ButcherTableau,
    PartitionedPair,
    check_sprk_symplectic,
    check_srk_symplectic,
    gauss,
    lobatto_iiia,
    lobatto_iiib,
    lobatto_pair,
    lobatto_x_matrices,
    midpoint,
    pair_from_text,
    pair_to_text,
    symplectic_euler,
    tableau_from_text,
    tableau_to_text,
)


def test_gauss_one_is_midpoint():
    t = gauss(1)
    assert t.A[0, 0] == 0.5 and t.b[0] == 1.0 and t.c[0] == 0.5
    assert t.classical_order == 2 and t.a_stable
    assert midpoint().name == "midpoint"


def test_gauss_two_coefficients():
    t = gauss(2)
    r = math.sqrt(3) / 6
    assert np.allclose(t.A, [[0.25, 0.25 - r], [0.25 + r, 0.25]], atol=1e-15)
    assert np.allclose(t.b, [0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("s", range(1, 11))
def test_gauss_row_sums(s):
    t = gauss(s)
    assert np.max(np.abs(t.A.sum(axis=1) - t.c)) <= 1e-12


def test_lobatto_two():
    a = lobatto_iiia(2)
    b = lobatto_iiib(2)
    assert np.allclose(a.A, [[0.0, 0.0], [0.5, 0.5]], atol=1e-15)
    assert np.allclose(b.A, [[0.5, 0.0], [0.5, 0.0]], atol=1e-15)
    assert np.allclose(a.b, [0.5, 0.5], atol=1e-15)
    assert a.classical_order == 2


def test_lobatto_three_rows():
    a = lobatto_iiia(3)
    assert np.allclose(a.A[1], [5 / 24, 1 / 3, -1 / 24], atol=1e-14)
    b = lobatto_iiib(3)
    assert np.allclose(b.A[1], [1 / 6, 1 / 3, 0.0], atol=1e-14)


@pytest.mark.parametrize("s", range(2, 11))
def test_lobatto_structure(s):
    a = lobatto_iiia(s)
    b = lobatto_iiib(s)
    # IIIA collocates, so its last row equals the weights
    assert np.max(np.abs(a.A[-1] - a.b)) <= 1e-12
    # IIIB: last column zero, first column is b_1 replicated
    assert np.max(np.abs(b.A[:, -1])) <= 1e-12
    assert np.max(np.abs(b.A[:, 0] - b.b[0])) <= 1e-12
    # abscissae are reversal-symmetric
    assert np.max(np.abs(a.c[::-1] - (1.0 - a.c))) <= 1e-12


def test_symplectic_euler_pair():
    pair = symplectic_euler()
    assert pair.first.A[0, 0] == 0.0 and pair.second.A[0, 0] == 1.0
    assert pair.first.b[0] == 1.0 and pair.second.b[0] == 1.0
    assert pair.first.classical_order == 1
    assert check_sprk_symplectic(pair) == 0.0
    assert not np.array_equal(pair.first.A, lobatto_pair(2).first.A)


@pytest.mark.parametrize("s", range(1, 6))
def test_gauss_symplectic(s):
    assert check_srk_symplectic(gauss(s)) <= 1e-10


@pytest.mark.parametrize("s", range(2, 11))
def test_lobatto_pair_symplectic(s):
    assert check_sprk_symplectic(lobatto_pair(s)) <= 1e-10


def test_iiia_alone_not_symplectic():
    assert check_srk_symplectic(lobatto_iiia(2)) == pytest.approx(0.25, abs=1e-15)


def test_iiia_iiia_pair_not_symplectic():
    t = lobatto_iiia(2)
    pair = PartitionedPair(t, t, "iiia-iiia")
    assert check_sprk_symplectic(pair) == pytest.approx(0.25, abs=1e-15)


def test_pair_stage_mismatch():
    with pytest.raises(DimensionError):
        PartitionedPair(lobatto_iiia(2), lobatto_iiib(3), "bad")


def test_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        ButcherTableau(1, [[0.5]], [0.9], [0.5], "broken", 1)


@pytest.mark.parametrize("s", [2, 3])
def test_lobatto_x_matrices_share_characteristic_polynomial(s):
    # det(I - z A) agrees between the tableau matrices and the banded forms,
    # for both pair members, at enough z values to pin the polynomial.
    X1, X2 = lobatto_x_matrices(s)
    A1 = lobatto_iiia(s).A
    A2 = lobatto_iiib(s).A
    I = np.eye(s)
    for z in np.linspace(0.1, 3.0, 2 * s + 3):
        d = lu_det(I - z * A1)
        assert lu_det(I - z * X1) == pytest.approx(d, rel=1e-12, abs=1e-13)
        assert lu_det(I - z * X2) == pytest.approx(d, rel=1e-12, abs=1e-13)
        assert lu_det(I - z * A2) == pytest.approx(d, rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("s", [1, 2, 3, 7])
def test_tableau_text_roundtrip_bit_faithful(s):
    t = gauss(s)
    back = tableau_from_text(tableau_to_text(t))
    assert back.s == t.s and back.name == t.name
    assert back.classical_order == t.classical_order
    assert np.array_equal(back.A, t.A)
    assert np.array_equal(back.b, t.b)
    assert np.array_equal(back.c, t.c)


@pytest.mark.parametrize("s", [2, 5, 10])
def test_pair_text_roundtrip_bit_faithful(s):
    pair = lobatto_pair(s)
    back = pair_from_text(pair_to_text(pair))
    assert back.name == pair.name
    for mine, theirs in [(back.first, pair.first), (back.second, pair.second)]:
        assert np.array_equal(mine.A, theirs.A)
        assert np.array_equal(mine.b, theirs.b)
        assert np.array_equal(mine.c, theirs.c)


def test_tableau_arrays_are_readonly():
    t = gauss(2)
    with pytest.raises(ValueError):
        t.A[0, 0] = 7.0
