import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steiner_lab.coloring import (
    Coloring,
    OrientedGraph,
    build_cst_instance,
    canonicalize_tree,
    class_point,
    completeness_tree_from_coloring,
    exact_chromatic_number,
    gadget_terminals,
    optimal_coloring,
    random_spanning_tree,
)
from steiner_lab.errors import CapExceeded, ValidationError
from steiner_lab.graphs import Graph, complete, cycle, path, small_graphs, star
from steiner_lab.metric import check_tree, tree_cost
from steiner_lab.solvers import exact_cst


def _chromatic_oracle(g: Graph) -> int:
    """Brute force over all colorings with networkx's coloring check as referee."""
    from itertools import product

    G = g.to_networkx()
    for k in range(1, g.n + 1):
        for colors in product(range(k), repeat=g.n):
            if all(colors[u] != colors[v] for u, v in G.edges):
                return k
    return 0


def test_k2_points_and_distance():
    og = OrientedGraph.from_graph(complete(2))
    T = gadget_terminals(og)
    assert T.tolist() == [[1.0], [-1.0], [0.0]]


def test_orientation_flip():
    og = OrientedGraph.from_graph(path(3), flips=[True, False])
    assert og.arcs == ((1, 0), (1, 2))
    assert og.underlying().edges == path(3).edges


def test_oriented_graph_rejects_double_orientation():
    with pytest.raises(ValidationError):
        OrientedGraph(2, ((0, 1), (1, 0)))


def test_isolated_vertex_point_set():
    # 3 vertices, one edge: the isolated vertex sits on the root
    og = OrientedGraph.from_graph(Graph(3, [(0, 1)]))
    T = gadget_terminals(og)
    assert np.array_equal(T[2], T[3])
    with pytest.raises(ValidationError, match="isolated"):
        build_cst_instance(Graph(3, [(0, 1)]))
    with pytest.raises(ValidationError):
        build_cst_instance(Graph(2, []))


@pytest.mark.parametrize("g,chi", [(complete(3), 3), (cycle(4), 2), (cycle(5), 3), (star(3), 2), (complete(5), 5)])
def test_chromatic_examples(g, chi):
    assert exact_chromatic_number(g) == chi
    col = optimal_coloring(g)
    assert col.n_colors == chi and col.is_proper(OrientedGraph.from_graph(g))


def test_chromatic_against_brute_force():
    for g in small_graphs(6)[::7]:
        assert exact_chromatic_number(g) == _chromatic_oracle(g)


def test_chromatic_against_petersen():
    assert exact_chromatic_number(Graph.from_networkx(nx.petersen_graph())) == 3
    with pytest.raises(CapExceeded):
        exact_chromatic_number(cycle(11))


def test_class_point_distances():
    og = OrientedGraph.from_graph(cycle(4))
    T = gadget_terminals(og)
    s = class_point(og, [0, 2])
    for v in (0, 2):
        assert np.max(np.abs(T[v] - s)) == 0.5
    assert np.max(np.abs(s)) == 0.5


def test_c4_completeness_tree():
    g = cycle(4)
    inst, og = build_cst_instance(g)
    tree = completeness_tree_from_coloring(og, Coloring((0, 1, 0, 1)))
    assert tree.cost == 3.0
    assert check_tree(tree, inst) == []
    assert tree_cost(tree, inst) == 3.0


def test_improper_coloring_rejected():
    _, og = build_cst_instance(cycle(4))
    with pytest.raises(ValidationError):
        completeness_tree_from_coloring(og, Coloring((0, 0, 1, 1)))


@pytest.mark.parametrize("g", [complete(2), complete(3), path(3), cycle(4), star(3)])
def test_gadget_optimum_is_half_n_plus_chi(g):
    inst, _ = build_cst_instance(g)
    assert exact_cst(inst).cost == pytest.approx((g.n + exact_chromatic_number(g)) / 2, abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(range(4)), st.integers(0, 6))
def test_canonicalizer_never_increases_cost(seed, which, n_steiner):
    g = [cycle(4), complete(3), path(4), star(3)][which]
    rng = np.random.default_rng(seed)
    inst, _ = build_cst_instance(g, rng.integers(0, 2, g.m).astype(bool))
    tree = random_spanning_tree(inst, n_steiner, rng)
    out = canonicalize_tree(tree, inst)
    assert check_tree(out, inst) == []
    assert out.cost <= tree.cost + 1e-12
    assert tree_cost(out, inst) == pytest.approx(out.cost, abs=1e-12)
    root = next(i for i, nd in enumerate(out.nodes) if nd.kind == "terminal" and nd.index == inst.root_index)
    deg = np.zeros(len(out.nodes), dtype=int)
    for u, v in out.edges:
        deg[u] += 1
        deg[v] += 1
        if root not in (u, v):
            P = np.array([inst.terminals[nd.index] if nd.kind == "terminal" else nd.point for nd in (out.nodes[u], out.nodes[v])])
            assert np.max(np.abs(P[0] - P[1])) < 1
    for nd, d in zip(out.nodes, deg):
        if nd.kind != "terminal":
            assert d >= 3 and np.all(np.abs(nd.point) <= 1)


def test_canonicalizer_rejects_non_tree():
    inst, _ = build_cst_instance(complete(2))
    from steiner_lab.metric import Node, SteinerTree

    with pytest.raises(ValidationError):
        canonicalize_tree(SteinerTree([Node.terminal(0), Node.terminal(1), Node.terminal(2)], [(0, 1)]), inst)
