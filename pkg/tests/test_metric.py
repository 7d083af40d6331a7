import math
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steiner_lab.errors import ValidationError
from steiner_lab.instances import CstInstance, DstInstance, instance_from_json
from steiner_lab.metric import (
    INF,
    MetricKind,
    Node,
    Point,
    SteinerTree,
    check_tree,
    distance,
    pairwise,
    string_distance,
    tree_cost,
)

KINDS = [MetricKind.lp(1), MetricKind.lp(1.5), MetricKind.lp(2), MetricKind.lp(3), MetricKind.lp(INF), MetricKind.hamming()]


def _lev_oracle(a, b):
    """Plain recursive Levenshtein, independent of the iterative DP."""

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def test_l2_unit_vectors():
    assert distance(MetricKind.lp(2), [1, 0, 0], [0, 1, 0]) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_hamming_identity():
    a = [1.0, 0.0, 2.0]
    assert distance(MetricKind.hamming(), a, a) == 0


def test_linf_adjacent_gadget_vertices():
    # K2 oriented (1, 2): terminals (1) and (-1)
    assert distance(MetricKind.lp(INF), [1.0], [-1.0]) == 2.0


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        distance(MetricKind.lp(2), [0, 0], [0, 0, 0])


def test_p_out_of_range():
    with pytest.raises(ValidationError):
        MetricKind.lp(0.5)
    assert MetricKind.lp(0).name == "hamming"


def test_graph_metric_validation():
    with pytest.raises(ValidationError):
        MetricKind.graph([[0, 1], [2, 0]])
    with pytest.raises(ValidationError):
        MetricKind.graph([[1, 1], [1, 0]])
    g = MetricKind.graph([[0, 3], [3, 0]])
    assert distance(g, [0], [1]) == 3
    assert distance(g, [1], [1]) == 0


def test_point_sparse_dense_agree():
    p = Point.from_sparse(5, {0: 2.0, 3: -1.0})
    assert p.coords == (2.0, 0.0, 0.0, -1.0, 0.0)
    assert p.sparse == {0: 2.0, 3: -1.0}
    assert p.dim == 5
    with pytest.raises(ValidationError):
        Point(())


@pytest.mark.parametrize(
    "a,b,expected",
    [("1234", "1243", 2), ("abc", "abc", 0), ("", "abc", 3), ("kitten", "sitting", 3)],
)
def test_string_distance_examples(a, b, expected):
    kind = "ulam" if len(set(a)) == len(a) and len(set(b)) == len(b) else "edit"
    assert string_distance(kind, a, b) == expected


def test_ulam_rejects_repeats():
    with pytest.raises(ValidationError):
        string_distance("ulam", "aab", "abc")


@settings(max_examples=200, deadline=None)
@given(st.text("abcd", max_size=7), st.text("abcd", max_size=7))
def test_edit_distance_matches_recursive_oracle(a, b):
    assert string_distance("edit", a, b) == _lev_oracle(a, b)


def test_symmetry_and_triangle_sampled():
    rng = np.random.default_rng(0)
    for kind in KINDS:
        X = rng.integers(-2, 3, (3000, 4)).astype(float) if kind.name == "hamming" else rng.normal(size=(3000, 4))
        a, b, c = X[:1000], X[1000:2000], X[2000:]
        dab = np.array([distance(kind, x, y) for x, y in zip(a, b)])
        dba = np.array([distance(kind, y, x) for x, y in zip(a, b)])
        dbc = np.array([distance(kind, x, y) for x, y in zip(b, c)])
        dac = np.array([distance(kind, x, y) for x, y in zip(a, c)])
        assert np.array_equal(dab, dba)
        assert np.all(dac <= dab + dbc + 1e-9)


def test_graph_metric_triangle_for_metric_matrix():
    rng = np.random.default_rng(1)
    pts = rng.random((12, 2))
    W = pairwise(MetricKind.lp(1), pts)
    g = MetricKind.graph(W)
    idx = rng.integers(0, 12, (1000, 3))
    for i, j, k in idx:
        assert distance(g, [i], [k]) <= distance(g, [i], [j]) + distance(g, [j], [k]) + 1e-9


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-10, 10), min_size=1, max_size=6),
    st.floats(1, 6),
    st.floats(0, 6),
)
def test_norm_monotone_in_p(v, p, extra):
    v = np.asarray(v)
    kp, kq = MetricKind.lp(p), MetricKind.lp(p + extra)
    z = np.zeros_like(v)
    assert distance(kq, v, z) <= distance(kp, v, z) * (1 + 1e-12) + 1e-12
    assert distance(MetricKind.lp(INF), v, z) <= distance(kq, v, z) * (1 + 1e-12) + 1e-12


def test_pairwise_matches_distance():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(5, 3))
    for kind in KINDS:
        D = pairwise(kind, X)
        for i in range(5):
            for j in range(5):
                assert D[i, j] == pytest.approx(distance(kind, X[i], X[j]), abs=1e-12)


def _two_point():
    return DstInstance(MetricKind.lp(2), [[0.0, 0.0], [1.0, 0.0]], 0, [[0.5, 0.5]])


def test_tree_cost_single_edge():
    inst = _two_point()
    tree = SteinerTree([Node.terminal(0), Node.terminal(1)], [(0, 1)], 1.0)
    assert tree_cost(tree, inst) == 1.0
    assert check_tree(tree, inst) == []


def test_tree_cost_empty_tree():
    inst = DstInstance(MetricKind.lp(2), [[0.0, 0.0]])
    assert tree_cost(SteinerTree([Node.terminal(0)], []), inst) == 0


def test_tree_cost_dangling_index():
    inst = _two_point()
    tree = SteinerTree([Node.terminal(0), Node.terminal(1)], [(0, 5)])
    with pytest.raises(ValidationError):
        tree_cost(tree, inst)
    assert any("dangling" in m for m in check_tree(tree, inst))


def test_tree_cost_reorder_invariant():
    inst = _two_point()
    nodes = [Node.terminal(0), Node.terminal(1), Node.facility(0), Node.free([0.2, 0.9])]
    edges = [(0, 2), (2, 1), (2, 3)]
    base = tree_cost(SteinerTree(nodes, edges), inst)
    perm = [3, 1, 0, 2]
    inv = {old: new for new, old in enumerate(perm)}
    shuffled = SteinerTree([nodes[i] for i in perm], [(inv[v], inv[u]) for u, v in reversed(edges)])
    assert tree_cost(shuffled, inst) == pytest.approx(base, abs=1e-12)


def test_check_tree_structure_errors():
    inst = _two_point()
    assert check_tree(SteinerTree([Node.terminal(0), Node.terminal(1)], []), inst)
    dup = SteinerTree([Node.terminal(0), Node.terminal(0)], [(0, 1)])
    assert any("terminal 1" in m for m in check_tree(dup, inst))


def test_tree_json_roundtrip():
    tree = SteinerTree([Node.terminal(0), Node.free([0.5, 0.25]), Node.facility(2)], [(0, 1), (1, 2)], 1.5)
    back = SteinerTree.from_json(tree.to_json())
    assert back == tree


def test_instance_json_roundtrip():
    dst = DstInstance(MetricKind.lp(INF), [[1.0, 0.0], [0.0, 0.0]], 1, [[0.5, 0.5]])
    assert instance_from_json(dst.to_json()) == dst
    cst = CstInstance(MetricKind.lp(3), [[1.0, 0.0], [0.0, 0.0]], 1)
    assert instance_from_json(cst.to_json()) == cst
    with pytest.raises(ValidationError):
        CstInstance(MetricKind.lp(2), [[0.0], [0.0]])
