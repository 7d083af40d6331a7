import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steiner_lab import lp_gadgets as lg
from steiner_lab.errors import ValidationError
from steiner_lab.graphs import complete, cycle, min_vertex_cover_size, path, small_graphs, star
from steiner_lab.metric import pairwise
from steiner_lab.reduction import is_steiner_embeddable
from steiner_lab.setsystems import SetSystem, SoundnessParams
from steiner_lab.solvers import brute_force_dst, exact_dst

INF = math.inf
SP = SoundnessParams(0.1, 0.05)
SYS = SetSystem(6, ((1, 2, 3), (4, 5, 6), (1, 2, 4), (1, 5, 6), (3, 4, 5)))


def _classes_from_geometry(sys_, p, theta):
    """Read the eight distance classes off the actual point configuration."""
    inst = lg.build_lp_dst_instance(sys_, lg.LpGadgetParams(p, theta))
    D = pairwise(inst.metric, inst.all_points())
    n, r = sys_.n, sys_.n
    fac = [n + 1 + j for j in range(sys_.m)]
    s0, s1 = sys_.sets[0], sys_.sets[1]
    inside = s0[0] - 1
    outside = next(i for i in range(1, n + 1) if i not in s0) - 1
    by_overlap = {}
    for a in range(sys_.m):
        for b in range(a + 1, sys_.m):
            by_overlap.setdefault(len(set(sys_.sets[a]) & set(sys_.sets[b])), D[fac[a], fac[b]])
    return (
        D[fac[0], r],
        D[0, r],
        D[fac[0], inside],
        D[fac[0], outside],
        by_overlap[0],
        by_overlap[1],
        by_overlap[2],
        D[0, 1],
    )


def test_reference_tuple_p2():
    t = lg.lp_tuple(2, 1 / 6)
    expected = (0.288675, 1.0, 0.866025, 1.040833, 0.408248, 0.333333, 0.235702, 1.414214)
    assert np.allclose(tuple(t), expected, atol=5e-7)
    assert is_steiner_embeddable(t).ok


@pytest.mark.parametrize("p,theta", [(2, 1 / 6), (3, 0.3), (4, 0.5), (8, 0.5), (INF, 0.5), (INF, 0.3)])
def test_tuple_matches_geometry(p, theta):
    geo = _classes_from_geometry(SYS, p, theta)
    assert np.allclose(geo, tuple(lg.lp_tuple(p, theta)), atol=1e-12)


def test_thresholds():
    assert lg.TIGHT_P == pytest.approx(3.8188416, abs=1e-6)
    assert 3 ** (1 / lg.TIGHT_P) == pytest.approx(4 / 3)
    assert 3 ** (1 / lg.HALF_VALID_P) == pytest.approx(3 / 2)


def test_theta_validity_basics():
    assert lg.theta_valid(INF, 0.5)
    assert lg.theta_valid(2, 1 / 6)
    assert not lg.theta_valid(2, 0.6)
    assert not lg.theta_valid(2, 0.0)
    with pytest.raises(ValidationError):
        lg.theta_valid(1.0, 0.1)
    with pytest.raises(ValidationError):
        lg.lp_tuple(2, 0.45)


def test_half_valid_exactly_above_threshold():
    assert lg.theta_valid(lg.HALF_VALID_P * 1.01, 0.5)
    assert not lg.theta_valid(lg.HALF_VALID_P * 0.99, 0.5)


def test_no_valid_theta_at_p_1_1():
    assert lg.valid_theta_range(1.1) is None
    with pytest.raises(ValidationError):
        lg.optimal_theta(1.1, SP)


def test_valid_range_p_1_5():
    lo, hi = lg.valid_theta_range(1.5)
    assert lo < 1e-4 and 0.04 < hi < 0.06


@pytest.mark.parametrize("p", [4.0, 5.0, 8.0, INF])
def test_tight_closed_form_agrees_with_general(p):
    assert lg.tight_lp_gap(p, SP) == pytest.approx(lg.lp_gap_factor(p, 0.5, SP), abs=1e-12)
    assert 1 + lg.intro_gamma(p, SP) == pytest.approx(lg.tight_lp_gap(p, SP), abs=1e-12)


def test_linf_gap_value():
    assert lg.tight_lp_gap(INF, SP) == pytest.approx(1.0125, abs=1e-12)
    assert lg.intro_gamma(INF, SP) == pytest.approx(SP.delta / 4)


def test_intro_gamma_at_threshold():
    assert lg.intro_gamma(lg.TIGHT_P, SP) == pytest.approx(SP.eps / 8)
    assert lg.intro_gamma(lg.TIGHT_P, SP) == pytest.approx(lg.tight_lp_gap(lg.TIGHT_P, SP) - 1, abs=1e-9)


def test_tight_closed_form_rejects_small_p():
    with pytest.raises(ValidationError):
        lg.tight_lp_gap(2, SP)


def test_gap_factor_matches_generic_route():
    from steiner_lab.reduction import gap_factor

    for p, theta in [(2, 1 / 6), (3, 0.25), (1.5, 0.02), (INF, 0.4)]:
        assert lg.lp_gap_factor(p, theta, SP) == pytest.approx(gap_factor(lg.lp_tuple(p, theta), SP), abs=1e-12)


def test_gap_factor_p2_frozen():
    assert lg.lp_gap_factor(2, 1 / 6, SP) == pytest.approx(1.0039230484541326, abs=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_optimal_theta_against_dense_scan(p):
    t_star = lg.optimal_theta(p, SP)
    grid = np.linspace(1e-6, 0.5, 200001)
    vals = [lg.lp_gap_factor(p, t, SP) for t in grid if lg.theta_valid(p, t)]
    assert lg.lp_gap_factor(p, t_star, SP) >= max(vals) - 1e-9
    assert lg.optimal_theta(p, SP) == t_star


def test_optimal_theta_half_from_threshold():
    assert lg.optimal_theta(4, SP) == 0.5
    assert lg.optimal_theta(INF, SP) == 0.5
    rep = lg.gap_report(INF, SP)
    assert rep["theta"] == 0.5 and rep["gap"] == pytest.approx(1.0125)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 0.5), st.floats(0.01, 0.5))
def test_gap_concave_probe(a, b):
    # midpoint check on the valid θ interval at p = 3
    p = 3.0
    if not (lg.theta_valid(p, a) and lg.theta_valid(p, b)):
        return
    f = lambda t: lg.lp_gap_factor(p, t, SP)  # noqa: E731
    m = (a + b) / 2
    assert lg.theta_valid(p, m)
    assert f(m) >= min(f(a), f(b)) - 1e-12


def test_lp_instance_shape():
    inst = lg.build_lp_dst_instance(SYS, lg.LpGadgetParams(2, 1 / 6))
    assert inst.root_index == 6
    assert np.all(inst.terminals[6] == 0)
    assert inst.facilities.shape == (5, 6)
    assert inst.facilities[0].tolist() == [1 / 6] * 3 + [0] * 3


def test_vc_star_and_path():
    for g in (star(3), path(4), cycle(4), complete(4)):
        inst = lg.build_vc_dst_instance(g)
        assert exact_dst(inst).cost == pytest.approx(g.m + min_vertex_cover_size(g), abs=1e-9)
    assert exact_dst(lg.build_vc_dst_instance(star(3))).cost == pytest.approx(4.0)


def test_vc_hamming_agrees_with_brute_force():
    for g in small_graphs(5, min_edges=2)[:15]:
        inst = lg.build_vc_dst_instance(g, "hamming")
        assert brute_force_dst(inst).cost == pytest.approx(g.m + min_vertex_cover_size(g), abs=1e-9)


def test_vc_gap_factor():
    assert lg.vc_gap_factor(4, 0.52025, 0.53036) == pytest.approx((2 + 0.53036) / (2 + 0.52025))
    with pytest.raises(ValidationError):
        lg.vc_gap_factor(4, 0.6, 0.5)


def test_euclidean_gap():
    c = 5 * math.sqrt(3) / 9 - 1
    expected = (0.969 * c + 1) / (0.979 * c + 1)
    assert lg.euclidean_ab_gap(0.021, 0.031) == pytest.approx(expected, abs=1e-15)
    assert lg.euclidean_ab_gap(0.021, 0.031) > 1
