"""
Cayley Digraph Tests
Construction, DRR / GRR decisions and the refinement engine, cross-checked
against networkx's VF2 matcher on small graphs
"""

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import DiGraphMatcher

from core.cayley import (build_cayley, extra_automorphism, graph_automorphisms, is_drr, is_grr,
                         normaliser_identity_check)
from core.errors import IdentityInS, NotInverseClosed, TooLarge
from core.group_automorphisms import set_stabilizer
from core.perm_engine import right_multiplication
from core.refinement import DigraphRefiner
from core.squarefree_group import make_group


def _vf2_count(adjacency: np.ndarray) -> int:
    G = nx.DiGraph()
    G.add_nodes_from(range(adjacency.shape[0]))
    G.add_edges_from(zip(*np.nonzero(adjacency)))
    return sum(1 for _ in DiGraphMatcher(G, G).isomorphisms_iter())


def test_arcs_go_to_left_products(F21):
    S = [F21.y(), F21.x()]
    graph = build_cayley(F21, S)
    T = F21.table
    for v in range(F21.order):
        assert graph.out_neighbours(v) == sorted(int(T[s, v]) for s in S)


def test_right_multiplications_are_automorphisms(F21):
    graph = build_cayley(F21, [F21.y(), F21.x()])
    for g in range(F21.order):
        assert graph.preserves_adjacency(right_multiplication(F21, g))


def test_identity_in_connection_set(D6):
    with pytest.raises(IdentityInS):
        build_cayley(D6, [0, 1])


def test_directed_cycle_is_drr():
    C5 = make_group(5, 1, 1, 1)
    assert is_drr(C5, [C5.z()])
    assert graph_automorphisms(build_cayley(C5, [C5.z()])).order() == 5


def test_undirected_cycle_is_not_grr():
    C5 = make_group(5, 1, 1, 1)
    S = [C5.z(), C5.z(4)]
    assert not is_grr(C5, S)
    assert graph_automorphisms(build_cayley(C5, S)).order() == 10


def test_grr_needs_inverse_closed(D6):
    with pytest.raises(NotInverseClosed):
        is_grr(D6, [D6.y()])


def test_d6_all_reflections(D6):
    reflections = [D6.index((0, b, 1)) for b in range(3)]
    graph = build_cayley(D6, reflections)
    assert graph.is_graph
    assert graph_automorphisms(graph).order() == 72
    assert extra_automorphism(graph) is not None


@pytest.mark.parametrize("params", [(6, 1, 1, 1), (1, 3, 2, 2), (10, 1, 1, 1), (1, 5, 2, 4)])
def test_automorphism_order_matches_vf2(params):
    R = make_group(*params)
    rng = np.random.default_rng(sum(params))
    for _ in range(6):
        S = [g for g in range(1, R.order) if rng.random() < 0.4]
        if len(S) in (0, R.order - 1):
            continue
        graph = build_cayley(R, S)
        assert graph_automorphisms(graph).order() == _vf2_count(graph.adjacency)


def test_refiner_on_directed_triangle():
    adjacency = np.zeros((3, 3), dtype=bool)
    adjacency[[0, 1, 2], [1, 2, 0]] = True
    result = DigraphRefiner(adjacency).automorphisms()
    assert result.order == 3
    assert result.complete


def test_refiner_stop_at_first():
    adjacency = ~np.eye(4, dtype=bool)
    result = DigraphRefiner(adjacency).automorphisms(fixed=[0], stop_at_first=True)
    assert len(result.generators) == 1
    assert not result.complete
    assert result.generators[0][0] == 0


def test_refiner_vertex_bound():
    with pytest.raises(TooLarge):
        DigraphRefiner(np.zeros((5, 5), dtype=bool), max_vertices=4)


def test_normaliser_identity(F21):
    report = normaliser_identity_check(F21, [F21.y(), F21.x()])
    assert report.equal
    assert report.normaliser_order == report.product_order


def test_normaliser_identity_complete_bipartite(D6):
    reflections = [D6.index((0, b, 1)) for b in range(3)]
    report = normaliser_identity_check(D6, reflections)
    assert report.equal
    assert report.aut_order == 72
    assert report.stabilizer_order == 6


def test_dot_output(D6):
    graph = build_cayley(D6, [D6.x()])
    dot = graph.to_dot()
    assert dot.startswith('graph ')
    assert dot.count('--') == 3
    directed = build_cayley(D6, [D6.y()]).to_dot()
    assert directed.count('->') == 6


def test_normaliser_identity_by_backtrack_search(isolated_settings, D6):
    isolated_settings.engine.normalizer_sweep_limit = 1
    reflections = [D6.index((0, b, 1)) for b in range(3)]
    report = normaliser_identity_check(D6, reflections)
    assert report.equal
    assert report.method.startswith('backtrack search')
    assert report.normaliser_order == 36


@pytest.mark.parametrize("params", [(6, 1, 1, 1), (1, 3, 2, 2), (1, 5, 2, 4), (1, 7, 3, 2),
                                    (15, 1, 1, 1)])
def test_normaliser_identity_on_random_sets(params):
    R = make_group(*params)
    rng = np.random.default_rng(R.order)
    checked = 0
    for _ in range(12):
        S = [v for v in range(1, R.order) if rng.random() < 0.4]
        if not S or graph_automorphisms(build_cayley(R, S)).order() > 5000:
            continue
        report = normaliser_identity_check(R, S)
        assert report.equal, report
        checked += 1
    assert checked > 0


@pytest.mark.parametrize("params", [(1, 3, 2, 2), (5, 1, 1, 1)])
def test_drr_sets_have_trivial_stabilizer(params):
    R = make_group(*params)
    for bits in range(1, 1 << (R.order - 1)):
        S = [v for v in range(1, R.order) if bits >> (v - 1) & 1]
        if is_drr(R, S):
            assert set_stabilizer(R, S).trivial


if __name__ == "__main__":
    print("=" * 80)
    print("CAYLEY DIGRAPH TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q"])
    print("[PASS]" if code == 0 else "[FAIL]", "cayley digraph tests")
    print("=" * 80)
