import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympreg.composition import (
    CompositionScheme,
    compose,
    compose_step,
    scheme_from_text,
    scheme_to_text,
    triple_jump,
)
from sympreg.dynamics import ModelProblem, StepMap, propagation_matrix
from sympreg.tableau import lobatto_pair, midpoint


def test_triple_jump_identity():
    assert np.array_equal(triple_jump(2, 2), [1.0])


def test_triple_jump_fourth_order():
    g = triple_jump(2, 4)
    g1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
    assert g[0] == pytest.approx(1.351207, abs=1e-6)
    assert g[1] == pytest.approx(-1.702414, abs=1e-6)
    assert np.allclose(g, [g1, -(2.0 ** (1.0 / 3.0)) * g1, g1], atol=1e-15)


def test_triple_jump_sixth_order():
    g = triple_jump(2, 6)
    assert len(g) == 9
    assert np.max(np.abs(g - g[::-1])) == 0.0
    assert abs(g.sum() - 1.0) <= 1e-12


@given(st.integers(1, 4), st.integers(0, 3))
@settings(derandomize=True, max_examples=40)
def test_triple_jump_symmetric_and_consistent(half_base, levels):
    base = 2 * half_base
    target = base + 2 * levels
    g = triple_jump(base, target)
    assert len(g) == 3**levels
    assert np.max(np.abs(g - g[::-1])) <= 1e-14
    assert abs(g.sum() - 1.0) <= 1e-12


@pytest.mark.parametrize("bad", [(3, 5), (2, 3), (0, 2), (4, 2)])
def test_triple_jump_rejects_bad_orders(bad):
    with pytest.raises(ValueError):
        triple_jump(*bad)


def test_scheme_validates_symmetry():
    with pytest.raises(ValueError):
        CompositionScheme(midpoint(), [0.75, 0.25], 2, "lopsided")


def test_scheme_validates_sum():
    with pytest.raises(ValueError):
        CompositionScheme(midpoint(), [0.75, 0.75], 2, "overweight")


def test_compose_step_matrix_is_substep_product():
    scheme = compose(lobatto_pair(2), 4)
    problem = ModelProblem.elliptic(1.0)
    h = 0.8
    M = propagation_matrix(compose_step(scheme, problem, h))
    expected = np.eye(2)
    for g in scheme.gammas:
        expected = propagation_matrix(StepMap(scheme.base, problem, g * h)) @ expected
    assert np.allclose(M, expected, atol=1e-14)


def test_single_fraction_reduces_to_base():
    scheme = CompositionScheme(midpoint(), [1.0], 2, "plain")
    problem = ModelProblem.hyperbolic(1.0)
    for h in (0.3, 0.9, 1.7):
        M1 = propagation_matrix(StepMap(scheme, problem, h))
        M2 = propagation_matrix(StepMap(midpoint(), problem, h))
        assert np.array_equal(M1, M2)


@pytest.mark.parametrize("order", [2, 4, 6])
def test_composed_elliptic_determinant_is_one(order):
    scheme = compose(lobatto_pair(2), order)
    problem = ModelProblem.elliptic(1.0)
    for z in np.linspace(0.1, 3.0, 30):
        M = propagation_matrix(StepMap(scheme, problem, float(z)))
        assert abs(float(np.linalg.det(M)) - 1.0) <= 1e-10


def test_composed_trace_matches_elliptic_criterion():
    # |trace| < 2 exactly characterises elliptic preservation for the
    # composed pair; cross-checked against the region predicate.
    from sympreg.dynamics import ELLIPTIC
    from sympreg.region import composed_predicate

    scheme = compose(lobatto_pair(2), 4)
    problem = ModelProblem.elliptic(1.0)
    for z in (0.5, 1.0, 1.5, 1.6, 2.0):
        M = propagation_matrix(StepMap(scheme, problem, z))
        by_trace = abs(float(M[0, 0] + M[1, 1])) < 2.0
        assert by_trace == composed_predicate(scheme, ELLIPTIC, z)


def test_scheme_text_roundtrip():
    scheme = compose(lobatto_pair(2), 4)
    line = scheme_to_text(scheme)
    back = scheme_from_text(line, {"lobatto-2": lobatto_pair(2)}.__getitem__)
    assert back.name == scheme.name and back.order == scheme.order
    assert np.array_equal(back.gammas, scheme.gammas)
    assert back.base.name == scheme.base.name
