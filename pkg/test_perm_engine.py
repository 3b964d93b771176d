"""
Permutation Engine Tests
"""

import numpy as np
import pytest

from core.errors import DegreeMismatch, NotSubgroup
from core.perm_engine import (PermGroup, compose, coset_action, invert, left_multiplication,
                              normalizer_in, normalizer_strategy, orbital_digraph, orbitals,
                              regular_representation, right_multiplication, symmetric_group)


def test_compose_is_right_action():
    p = [1, 2, 0]
    q = [0, 2, 1]
    # i -> p(i) -> q(p(i))
    assert list(compose(p, q)) == [2, 1, 0]
    assert list(compose(p, invert(p))) == [0, 1, 2]


def test_symmetric_group_order():
    assert symmetric_group(4).order() == 24
    assert symmetric_group(1).order() == 1


def test_regular_representation(F21):
    rho = regular_representation(F21)
    assert rho.order() == 21
    assert rho.is_regular()
    assert rho.point_stabilizer(0).order() == 1


def test_left_and_right_multiplications_commute(F21):
    for g in range(F21.order):
        left = left_multiplication(F21, g)
        right = right_multiplication(F21, F21.x())
        assert np.array_equal(left[right], right[left])


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        PermGroup([[1, 0, 2]], 4)


def test_normalizer_of_cyclic_in_s4():
    c4 = PermGroup([[1, 2, 3, 0]], 4)
    assert normalizer_in(symmetric_group(4), c4).order() == 8


def test_normalizer_requires_subgroup():
    with pytest.raises(NotSubgroup):
        normalizer_in(PermGroup([[1, 0, 2, 3]], 4), PermGroup([[1, 2, 3, 0]], 4))


def test_coset_action_on_point_stabilizer():
    S4 = symmetric_group(4)
    action = coset_action(S4, S4.point_stabilizer(3))
    assert action.degree == 4
    assert action.group.order() == 24
    assert action.group.is_transitive()


def test_orbitals_of_s4():
    found = orbitals(symmetric_group(4))
    assert [o.suborbit for o in found] == [(0,), (1, 2, 3)]
    assert all(o.self_paired for o in found)
    complete = orbital_digraph(symmetric_group(4), found[1:])
    assert np.array_equal(complete, ~np.eye(4, dtype=bool))


def test_orbitals_of_directed_cycle():
    found = orbitals(PermGroup([[1, 2, 0]], 3))
    assert len(found) == 3
    assert sum(o.self_paired for o in found) == 1


def test_normalizer_strategies(isolated_settings):
    S4 = symmetric_group(4)
    c4 = PermGroup([[1, 2, 3, 0]], 4)
    assert normalizer_strategy(S4, c4) == 'element sweep'
    assert normalizer_strategy(S4, S4) == 'normal'
    isolated_settings.engine.normalizer_sweep_limit = 1
    assert normalizer_strategy(S4, c4) == 'backtrack search'
    assert normalizer_in(S4, c4).order() == 8


def test_backtrack_and_sweep_normalizers_agree(isolated_settings):
    S5 = symmetric_group(5)
    c5 = PermGroup([[1, 2, 3, 4, 0]], 5)
    swept = normalizer_in(S5, c5)
    isolated_settings.engine.normalizer_sweep_limit = 1
    searched = normalizer_in(S5, c5)
    assert swept.order() == searched.order() == 20
    assert swept.element_set() == searched.element_set()


def _closure(G):
    """Elements of G by breadth-first multiplication by the generators"""
    identity = tuple(range(G.degree))
    seen, frontier = {identity}, [identity]
    gens = G.generators
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                image = tuple(int(v) for v in compose(e, g))
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    return seen


def test_order_matches_closure(F21, D6):
    from core.cayley import build_cayley, graph_automorphisms

    reflections = [D6.index((0, b, 1)) for b in range(3)]
    groups = [
        symmetric_group(4),
        regular_representation(F21),
        graph_automorphisms(build_cayley(D6, reflections)),
        PermGroup([[1, 0, 2, 3, 4, 5], [0, 1, 3, 4, 5, 2]], 6),
    ]
    for G in groups:
        closure = _closure(G)
        assert G.order() == len(closure)
        assert G.element_set() == closure


def _kernel_and_core(G, H):
    action = coset_action(G, H)
    elements = list(G.elements())
    kernel = {tuple(int(v) for v in g) for g in elements
              if np.array_equal(action.image(g), np.arange(action.degree))}
    core = set(H.element_set())
    for g in elements:
        core &= {tuple(int(v) for v in compose(compose(invert(g), h), g))
                 for h in H.elements()}
    return kernel, core


def test_coset_action_kernel_is_core():
    S4 = symmetric_group(4)
    kernel, core = _kernel_and_core(S4, S4.point_stabilizer(3))
    assert kernel == core == {(0, 1, 2, 3)}

    D8 = normalizer_in(S4, PermGroup([[1, 2, 3, 0]], 4))
    kernel, core = _kernel_and_core(S4, D8)
    assert kernel == core
    assert len(core) == 4


if __name__ == "__main__":
    print("=" * 80)
    print("PERMUTATION ENGINE TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q"])
    print("[PASS]" if code == 0 else "[FAIL]", "permutation engine tests")
    print("=" * 80)
