import numpy as np
import pytest
from conftest import pair, random_generic_pair
from hypothesis import given, settings
from hypothesis import strategies as st

from safer.core import (
    Belief,
    DecisionProblem,
    NonGenericError,
    SaferError,
    Tolerance,
    classify_states,
)
from safer.relation import (
    NOT_SAFER,
    SAFER,
    is_safer,
    is_safer_two_state,
    order_report,
    slope_report,
    smooth_reduce,
)
from safer.transforms import ConcaveTransform


def test_two_state_examples():
    v = is_safer_two_state(pair((5, 3), (1, 4)))
    assert v.relation == NOT_SAFER
    w = v.witness
    assert (w.theta_a, w.theta_b, w.lhs, w.rhs) == ("s0", "s1", 4.0, 5.0)
    assert "4.0 < alpha[s0]=5.0" in w.describe()
    assert is_safer_two_state(pair((3, 2), (1, 4))).relation == SAFER
    assert is_safer_two_state(pair((1, 0), (0, 1))).safer
    assert is_safer_two_state(pair((0, 1), (1, 0))).safer


def test_two_state_rejects_more_states():
    with pytest.raises(SaferError):
        is_safer_two_state(pair((3, 2, 2), (1, 4, 4)))


def test_general_examples():
    assert is_safer(pair((3, 2, 2), (1, 4, 4))).safer
    v = is_safer(pair((5, 3, 3), (1, 4, 4)))
    assert v.relation == NOT_SAFER
    assert (v.witness.theta_a, v.witness.theta_b) == ("s0", "s1")
    assert (v.witness.lhs, v.witness.rhs) == (4.0, 5.0)


def test_boundary_flag():
    v = is_safer(pair((4, 2), (1, 4)))  # beta1 == alpha0
    assert v.safer and v.boundary
    assert not is_safer(pair((3, 2), (1, 4))).boundary


def test_nongeneric_refused():
    with pytest.raises(NonGenericError):
        is_safer(pair((2, 2), (2, 5)))


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), min_size=2, max_size=2))
@settings(max_examples=200)
def test_general_matches_two_state(rows):
    alpha, beta = [r[0] for r in rows], [r[1] for r in rows]
    c = pair(alpha, beta)
    if not c.is_generic:
        return
    assert is_safer(c).relation == is_safer_two_state(c).relation


def test_hull_form(rng):
    for _ in range(300):
        c = random_generic_pair(rng, int(rng.integers(2, 7)))
        a = np.array(c.alpha)
        b = np.array(c.beta)
        A, B = c.idx_A, c.idx_B
        expect = a[A].max() <= b[B].min() and b[A].max() <= a[B].min()
        assert is_safer(c).safer == expect


def test_affine_invariance(rng):
    for _ in range(200):
        c = random_generic_pair(rng, int(rng.integers(2, 6)))
        k, s = rng.uniform(0.1, 5.0), rng.uniform(0.0, 3.0)
        d = pair([k * v + s for v in c.alpha], [k * v + s for v in c.beta])
        assert is_safer(c).safer == is_safer(d).safer


def test_slope_report_examples():
    r = slope_report(pair((5, 3), (1, 4)))
    assert (r.gamma_a, r.gamma_b, r.flatter) == (-2.0, 3.0, True)
    r = slope_report(pair((2, 3), (1, 4)))
    assert (r.gamma_a, r.gamma_b, r.W_monotone, r.flatter) == (1.0, 3.0, True, True)
    assert is_safer_two_state(pair((2, 3), (1, 4))).safer
    r = slope_report(pair((2, 2), (1, 4)))
    assert (r.gamma_a, r.flatter, r.W_monotone) == (0.0, True, True)


def test_slope_corollaries(rng):
    for _ in range(500):
        c = random_generic_pair(rng, 2)
        r = slope_report(c)
        safe = is_safer(c).safer
        if safe:
            assert abs(r.gamma_a) <= abs(r.gamma_b)
        if r.W_monotone and r.flatter:
            assert safe


def test_risk_free_strict(rng):
    for _ in range(100):
        b = rng.uniform(0, 10, size=3)
        level = rng.uniform(b.min() + 0.01, b.max() - 0.01)
        c = pair([level] * 3, b.tolist())
        if not c.is_generic:
            continue
        assert is_safer(c).safer
        assert not is_safer(c.swapped()).safer


def test_symmetric_pair_antisymmetry():
    p = DecisionProblem.from_arrays([[5, 2], [2, 5]], actions=["a", "b"])
    r = order_report(p)
    assert r.relates("a", "b") and r.relates("b", "a")
    assert not r.antisymmetric
    assert r.symmetric_pairs == [("a", "b")]


def test_order_chain():
    p = DecisionProblem.from_arrays([[3, 2], [1, 4], [0, 5]], actions=["a", "b", "c"])
    r = order_report(p)
    assert r.relates("a", "b") and r.relates("b", "c") and r.relates("a", "c")
    assert not r.relates("b", "a")
    assert r.transitive and r.total and r.reflexive
    assert r.to_dict()["total"] is True


def test_order_nontransitive_example():
    # a >= b and b >= c hold but a >= c fails
    p = DecisionProblem.from_arrays([[5, 5, 2], [1, 6, 6], [0, 4, 7]], actions=["a", "b", "c"])
    r = order_report(p)
    assert r.relates("a", "b") and r.relates("b", "c")
    assert not r.relates("a", "c")
    assert ("a", "b", "c") in r.transitivity_violations
    assert not r.transitive


def test_order_refuses_nongeneric():
    p = DecisionProblem.from_arrays([[2, 2], [2, 5]])
    with pytest.raises(NonGenericError, match="a0"):
        order_report(p)


def test_prop2_conditions():
    p = DecisionProblem.from_arrays([[3, 2], [1, 4], [0, 5]], actions=["a", "b", "c"])
    r = order_report(p)
    assert r.prop2_conditions["common_direction"] is None
    assert not r.prop2_applicable
    assert r.total  # the conditions are sufficient, not necessary

    # payoffs 1 - a^2 + 2 a theta all increase in theta
    q = DecisionProblem.from_arrays([[1 - a * a + 2 * a * t for t in (0.0, 0.5, 1.0)]
                                     for a in (0.2, 0.55, 0.9)])
    r = order_report(q)
    assert r.prop2_conditions["common_direction"] == "increasing"
    assert r.prop2_applicable and r.total


def test_smooth_reduce_identity():
    p = DecisionProblem.from_arrays([[3, 2, 2], [1, 4, 4]])
    priors = [Belief.point_mass(3, k) for k in range(3)]
    q = smooth_reduce(p, priors, ConcaveTransform.identity())
    assert np.allclose(q.matrix, p.matrix)


def test_smooth_reduce_sqrt():
    p = DecisionProblem.from_arrays([[4, 1], [0, 9]], actions=["a", "b"])
    q = smooth_reduce(p, [Belief((1.0, 0.0)), Belief((0.0, 1.0))], ConcaveTransform.power(2))
    assert np.allclose(q.matrix, [[2, 1], [0, 3]])
    assert is_safer(classify_states(q, "a", "b")).safer


def test_smooth_reduce_single_prior():
    p = DecisionProblem.from_arrays([[4, 1], [0, 9]])
    with pytest.raises(NonGenericError):
        smooth_reduce(p, [Belief((0.5, 0.5))], ConcaveTransform.identity())


def test_verdict_serialization():
    d = is_safer(pair((5, 3), (1, 4))).to_dict()
    assert d["relation"] == NOT_SAFER
    assert d["witness"]["theta_a"] == "s0"
    assert is_safer(pair((3, 2), (1, 4))).to_dict()["witness"] is None


def test_tolerance_changes_boundary():
    c = pair((4.0 + 1e-12, 2), (1, 4))
    assert is_safer(c, Tolerance(1e-9, 0)).boundary
    assert not is_safer(c, Tolerance(0, 0)).safer
