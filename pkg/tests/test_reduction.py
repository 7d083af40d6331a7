import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steiner_lab.errors import ValidationError
from steiner_lab.lp_gadgets import lp_tuple, theta_valid
from steiner_lab.metric import tree_cost
from steiner_lab.reduction import (
    EmbeddabilityTuple,
    build_completeness_tree,
    build_space,
    completeness_cost,
    gap_factor,
    general_metric_gap,
    is_metric_compatible,
    is_steiner_embeddable,
    realizable_gamma_triple,
    soundness_bound,
    soundness_ratio,
    triangle_violations,
)
from steiner_lab.setsystems import SetSystem, SoundnessParams
from steiner_lab.solvers import exact_dst

INF = math.inf
PARTITIONABLE = SetSystem(6, ((1, 2, 3), (4, 5, 6), (1, 2, 4), (3, 5, 6), (1, 4, 5)))


def test_ones_tuple_fails_utility_only():
    res = is_steiner_embeddable(EmbeddabilityTuple.ones())
    assert res.status == "fail"
    assert is_metric_compatible(EmbeddabilityTuple.ones()).ok
    assert any("utility" in v for v in res.violations)


def test_nonpositive_entry_rejected():
    t = EmbeddabilityTuple(1, 1, 1, 1, 1, 1, 0, 1)
    with pytest.raises(ValidationError):
        is_metric_compatible(t)


def test_violation_is_named():
    t = EmbeddabilityTuple(0.1, 1.0, 0.9, 1.0, 0.1, 0.1, 0.1, 5.0)
    res = is_metric_compatible(t)
    assert "tau <= 2 alpha_p" in res.violations


def test_linf_tuple_embeddable():
    assert is_steiner_embeddable(lp_tuple(INF, 0.5)).ok


def test_realizable_triples_by_enumeration():
    # oracle: enumerate 3-subsets of a 9-element universe
    from itertools import combinations

    subsets = [frozenset(c) for c in combinations(range(9), 3)]
    A = subsets[0]
    seen = set()
    for B in subsets:
        for C in subsets:
            seen.add((len(A & C), len(A & B), len(B & C)))
    for i in range(3):
        for j in range(3):
            for k in range(3):
                assert realizable_gamma_triple(i, j, k) == ((i, j, k) in seen)


def test_literal_check_flags_unrealizable_triangle():
    t = lp_tuple(1.5, 0.02)
    assert is_metric_compatible(t).ok
    lit = is_metric_compatible(t, literal=True)
    assert "gamma0 <= gamma2 + gamma2" in lit.violations


@pytest.mark.parametrize("p,theta", [(1.5, 0.02), (2, 1 / 6), (3, 0.3), (4, 0.5), (INF, 0.5), (INF, 0.2)])
def test_space_is_a_metric(p, theta):
    space = build_space(PARTITIONABLE, lp_tuple(p, theta))
    assert triangle_violations(space.weights) == 0
    assert np.allclose(space.weights, space.weights.T)


def test_triangle_violations_counts():
    W = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    assert triangle_violations(W) == 2


@pytest.mark.parametrize("p,theta", [(2, 1 / 6), (3, 0.3), (INF, 0.5)])
def test_completeness_tree_is_optimal(p, theta):
    t = lp_tuple(p, theta)
    space = build_space(PARTITIONABLE, t)
    tree = build_completeness_tree(PARTITIONABLE, [(1, 2, 3), (4, 5, 6)], space)
    expected = completeness_cost(6, t)
    assert tree.cost == pytest.approx(expected, abs=1e-12)
    inst = space.dst_instance()
    assert tree_cost(tree, inst) == pytest.approx(expected, abs=1e-12)
    assert exact_dst(inst).cost == pytest.approx(expected, abs=1e-9)


def test_completeness_tree_rejects_bad_partition():
    space = build_space(PARTITIONABLE, lp_tuple(2, 1 / 6))
    with pytest.raises(ValidationError):
        build_completeness_tree(PARTITIONABLE, [(1, 2, 3)], space)
    with pytest.raises(ValidationError):
        build_completeness_tree(PARTITIONABLE, [(1, 2, 5), (3, 4, 6)], space)


def test_soundness_ratio_zero_params():
    t = lp_tuple(2, 1 / 6)
    assert soundness_ratio(t, SoundnessParams(0, 0)) == 1.0
    assert gap_factor(t, SoundnessParams(0, 0)) == 1.0


def test_soundness_bound_on_intersecting_system():
    # every pair of sets meets: eps = delta = 1/2
    sys_ = SetSystem(6, ((1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 5, 6)))
    sp = SoundnessParams(0.5, 0.5)
    for p, theta in [(2, 1 / 6), (INF, 0.5), (4, 0.5)]:
        t = lp_tuple(p, theta)
        opt = exact_dst(build_space(sys_, t).dst_instance()).cost
        assert opt >= soundness_bound(6, t, sp) - 1e-9


def test_general_metric_gap():
    assert general_metric_gap(SoundnessParams(0.1, 0.05)) == pytest.approx(1.0125)


def test_non_embeddable_rejected():
    with pytest.raises(ValidationError):
        completeness_cost(6, EmbeddabilityTuple.ones())
    with pytest.raises(ValidationError):
        completeness_cost(5, lp_tuple(2, 1 / 6))


@st.composite
def valid_lp(draw):
    p = draw(st.sampled_from([2.0, 2.5, 3.0, 4.0, 6.0, INF]))
    theta = draw(st.floats(0.01, 0.5))
    if not theta_valid(p, theta):
        theta = 0.5 if p >= 4 else 0.1
    return p, theta


@settings(max_examples=80, deadline=None)
@given(valid_lp(), st.floats(0, 1), st.floats(0, 1))
def test_soundness_at_least_completeness(pt, eps, delta):
    t = lp_tuple(*pt)
    assert is_steiner_embeddable(t).status != "fail"
    assert soundness_ratio(t, SoundnessParams(eps, delta)) >= 1 - 1e-12


@settings(max_examples=80, deadline=None)
@given(valid_lp(), st.floats(0, 0.5), st.floats(0, 0.5), st.floats(0, 0.5))
def test_soundness_ratio_monotone(pt, eps, delta, bump):
    t = lp_tuple(*pt)
    base = soundness_ratio(t, SoundnessParams(eps, delta))
    assert soundness_ratio(t, SoundnessParams(eps, delta + bump)) >= base - 1e-12
