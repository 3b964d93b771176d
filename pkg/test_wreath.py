"""
Wreath Structure Tests
"""

import numpy as np
import pytest

from core.cayley import build_cayley, graph_automorphisms
from core.certificates import verify_witness_certificate
from core.errors import (BadChain, HypothesisFailed, HypothesisNotMet, HypothesisViolated,
                         NotAutSubgroup, NotInK)
from core.group_automorphisms import set_stabilizer
from core.perm_engine import PermGroup, regular_representation
from core.wreath import (check_star_star, enlarge_to_maximal, find_gen_wreath,
                         gen_wreath_from_stabilizer, stabilizer_normalises_h, wreath_pairs,
                         wreath_vertex_map, wreath_witness_certificate)
from core.squarefree_group import make_group
from core.witness_search import build_atom_space


def _reflections(D):
    return [D.index((0, b, 1)) for b in range(D.n)]


def _central_cosets(R):
    Z = R.subgroup([R.z()])
    return sorted(int(R.table[k, w]) for w in (R.y(), R.y(2)) for k in Z.elements)


def test_wreath_pair_count(F21):
    pairs = wreath_pairs(F21)
    assert len(pairs) == 8
    assert [H.order for _, H in pairs] == [3] * 7 + [7]


def test_check_star_star(D6):
    Y = D6.subgroup([D6.y()])
    certificate = check_star_star(D6, _reflections(D6), Y, Y)
    assert certificate is not None
    assert certificate.plain
    assert certificate.right_by_equivalence
    assert not certificate.degenerate


def test_check_star_star_fails(D6):
    X = D6.subgroup([D6.x()])
    assert check_star_star(D6, _reflections(D6), X, X) is None


def test_bad_chain(D6):
    with pytest.raises(BadChain):
        check_star_star(D6, [], D6.subgroup([D6.x()]), D6.subgroup([D6.y()]))
    with pytest.raises(BadChain):
        check_star_star(D6, [], D6.subgroup([]), D6.subgroup([D6.y()]))


def test_find_gen_wreath(D6):
    certificate = find_gen_wreath(D6, _reflections(D6))
    assert certificate.K.order == 3
    C5 = make_group(5, 1, 1, 1)
    assert find_gen_wreath(C5, [C5.z()]) is None


def test_wreath_vertex_map(D6):
    S = _reflections(D6)
    certificate = find_gen_wreath(D6, S)
    graph = build_cayley(D6, S)
    perm = wreath_vertex_map(graph, certificate, D6.y())
    assert graph.preserves_adjacency(perm)
    assert all(perm[s] == s for s in S)
    with pytest.raises(NotInK):
        wreath_vertex_map(graph, certificate, D6.x())


def test_wreath_witness_certificate(C6):
    K = C6.subgroup([C6.z(3)])
    S = [C6.z(), C6.z(4)]
    certificate = wreath_witness_certificate(C6, S, K, K)
    assert certificate.kind == 'digraph'
    assert certificate.aut_order > 6
    assert certificate.wreath.K_order == 2
    assert verify_witness_certificate(certificate)


def test_wreath_witness_needs_trivial_stabilizer(D6):
    Y = D6.subgroup([D6.y()])
    with pytest.raises(HypothesisFailed):
        wreath_witness_certificate(D6, _reflections(D6), Y, Y)


def test_enlarge_to_maximal(C7xD6):
    R = C7xD6
    Z = R.subgroup([R.z()])
    larger = enlarge_to_maximal(R, _central_cosets(R), Z, Z)
    assert larger.order == 14
    assert Z <= larger
    assert check_star_star(R, _central_cosets(R), Z, larger) is not None


def test_stabilizer_normalises_h(C7xD6):
    R = C7xD6
    K = R.subgroup([R.z()])
    H = R.subgroup([R.x(), R.z()])
    S = sorted([R.x()] + _central_cosets(R))
    assert stabilizer_normalises_h(R, S, K, H)


def test_stabilizer_normalises_h_hypotheses(D6):
    Y = D6.subgroup([D6.y()])
    with pytest.raises(HypothesisViolated):
        stabilizer_normalises_h(D6, _reflections(D6), Y, Y)


def test_gen_wreath_rejects_non_automorphisms(D6):
    bogus = PermGroup([[1, 0, 2, 3, 4, 5]], 6)
    Y = D6.subgroup([D6.y()])
    with pytest.raises(NotAutSubgroup):
        gen_wreath_from_stabilizer(D6, [D6.y(), D6.y(2)], bogus, Y, Y)


@pytest.mark.parametrize("name", ['D6', 'C7xD6'])
def test_wreath_vertex_maps_compose(name, request):
    R = request.getfixturevalue(name)
    if name == 'D6':
        S = _reflections(R)
        K = H = R.subgroup([R.y()])
    else:
        S = sorted([R.x()] + _central_cosets(R))
        K, H = R.subgroup([R.z()]), R.subgroup([R.x(), R.z()])
    certificate = check_star_star(R, S, K, H)
    graph = build_cayley(R, S)
    T = R.table
    nontrivial = [k for k in K.elements if k]
    for k in nontrivial:
        first = wreath_vertex_map(graph, certificate, k)
        for k2 in nontrivial:
            composed = first[wreath_vertex_map(graph, certificate, k2)]
            product = int(T[k, k2])
            if product == 0:
                assert np.array_equal(composed, np.arange(R.order))
            else:
                assert np.array_equal(composed, wreath_vertex_map(graph, certificate, product))


def _graph_sets(R):
    space = build_atom_space(R, 'graph')
    for mask in range(1 << space.size):
        yield space.elements(mask)


def test_order_21_wreath_graphs_have_stabilizing_automorphisms(F21):
    wreath_sets = 0
    for S in _graph_sets(F21):
        if find_gen_wreath(F21, S) is not None:
            wreath_sets += 1
            assert not set_stabilizer(F21, S).trivial, S
    assert wreath_sets > 0


def test_order_55_sampled_wreath_graphs(random_wreath_set):
    R = make_group(1, 11, 5, 3)
    rng = np.random.default_rng(55)
    for K, H in wreath_pairs(R):
        for _ in range(4):
            S = random_wreath_set(R, K, H, rng)
            assert not set_stabilizer(R, S).trivial, (K.describe(), H.describe(), S)


def _coset_product(elements, r):
    """Image tuples of G_0 G_r, composing left to right"""
    G0 = [g for g in elements if g[0] == 0]
    Gr = [g for g in elements if g[r] == r]
    return {tuple(int(v) for v in b[a]) for a in G0 for b in Gr}


def _coset_inclusions(R, G, K, H):
    elements = list(G.elements())
    T, inverse = R.table, R.inverse
    for r in range(R.order):
        if r in H:
            continue
        product = _coset_product(elements, r)
        for k in K.elements:
            conjugate = T[T[inverse[r], k], r]
            if tuple(int(v) for v in T[:, k]) not in product:
                return False
            if tuple(int(v) for v in T[:, conjugate]) not in product:
                return False
    return True


def test_gen_wreath_from_full_automorphism_group(C6):
    S = [C6.z(), C6.z(4)]
    G = graph_automorphisms(build_cayley(C6, S))
    assert G.order() == 24
    Z = C6.subgroup([C6.z(3)])
    assert _coset_inclusions(C6, G, Z, Z)
    certificate = gen_wreath_from_stabilizer(C6, S, G, Z, Z)
    assert certificate.K.order == 2
    assert certificate.plain


def test_gen_wreath_regular_group_fails_inclusions(D6):
    G = regular_representation(D6)
    Y = D6.subgroup([D6.y()])
    assert not _coset_inclusions(D6, G, Y, Y)
    with pytest.raises(HypothesisNotMet, match="G_0 K"):
        gen_wreath_from_stabilizer(D6, _reflections(D6), G, Y, Y)


def test_gen_wreath_h_must_normalise_stabilizer(D6):
    S = _reflections(D6)
    G = graph_automorphisms(build_cayley(D6, S))
    assert G.order() == 72
    Y = D6.subgroup([D6.y()])
    with pytest.raises(HypothesisNotMet, match="normalise"):
        gen_wreath_from_stabilizer(D6, S, G, Y, Y)


if __name__ == "__main__":
    print("=" * 80)
    print("WREATH STRUCTURE TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q"])
    print("[PASS]" if code == 0 else "[FAIL]", "wreath structure tests")
    print("=" * 80)
