"""
Squarefree Group Tests
Hoelder normal form, enumeration, subgroup lattice and table identification
"""

from itertools import combinations
from math import prod

import numpy as np
import pytest
from sympy import divisors, primefactors

from core.errors import BadAction, NonSquarefree, NotCoprime, NotNormal
from core.squarefree_group import (enumerate_groups, identify_table, is_characteristic,
                                   is_squarefree, isomorphic, make_group)


@pytest.mark.parametrize("order,count", [(2, 1), (6, 2), (21, 2), (30, 4), (42, 6), (105, 2)])
def test_enumeration_counts(order, count):
    assert len(enumerate_groups(order)) == count


def test_enumeration_names():
    names = sorted(R.describe() for R in enumerate_groups(30))
    assert names == ['C3 x D10', 'C30', 'C5 x D6', 'D30']


def test_non_squarefree_order():
    with pytest.raises(NonSquarefree):
        enumerate_groups(12)
    with pytest.raises(NonSquarefree):
        make_group(1, 9, 2, 8)


def test_parameter_validation():
    with pytest.raises(NotCoprime):
        make_group(2, 3, 2, 2)
    with pytest.raises(BadAction):
        make_group(1, 7, 3, 1)
    with pytest.raises(BadAction):
        make_group(1, 7, 3, 3)


def test_canonical_exponent():
    assert make_group(1, 7, 3, 2) == make_group(1, 7, 3, 4)
    assert make_group(1, 7, 3, 2).literal == make_group(1, 7, 3, 4).literal


def test_table_is_a_group(F21):
    T = F21.table
    idx = np.arange(F21.order)
    assert np.array_equal(T[0], idx)
    assert np.array_equal(T[:, 0], idx)
    assert np.array_equal(T[T[:, :, None], idx[None, None, :]],
                          T[idx[:, None, None], T[None, :, :]])
    assert np.all(T[idx, F21.inverse] == 0)


def test_defining_relation(F21):
    x, y = F21.x(), F21.y()
    T, inv = F21.table, F21.inverse
    assert T[T[x, y], inv[x]] == F21.y(F21.j)


def test_element_orders(F21):
    counts = np.bincount(F21.orders)
    assert counts[1] == 1
    assert counts[3] == 14
    assert counts[7] == 6


def test_words(D6):
    assert D6.word(0) == '1'
    assert D6.word(D6.x()) == 'x'
    assert D6.word(D6.index((0, 2, 1))) == 'y^2*x'


def test_subgroup_lattice(D6, F21):
    assert [H.order for H in D6.subgroups()] == [1, 2, 2, 2, 3, 6]
    assert len(F21.subgroups()) == 10
    normal = [H.order for H in F21.subgroups() if H.is_normal]
    assert normal == [1, 7, 21]


def test_quotient(F21):
    Y = F21.subgroup([F21.y()])
    Q = F21.quotient(Y)
    assert Q.group.describe() == 'C3'
    assert Q.projection[F21.y()] == 0
    with pytest.raises(NotNormal):
        F21.quotient(F21.subgroup([F21.x()]))


def test_identify_subgroup(C7xD6):
    H = C7xD6.subgroup([C7xD6.y(), C7xD6.x()])
    group, embedding = C7xD6.identify_subgroup(H)
    assert group.describe() == 'D6'
    assert sorted(int(e) for e in embedding) == list(H.elements)
    T = C7xD6.table
    for a in range(group.order):
        for b in range(group.order):
            assert T[embedding[a], embedding[b]] == embedding[group.table[a, b]]


def test_identify_relabelled_table(F21):
    rng = np.random.default_rng(7)
    relabel = rng.permutation(F21.order)
    relabel[relabel == 0], relabel[0] = relabel[0], 0
    back = np.empty_like(relabel)
    back[relabel] = np.arange(F21.order)
    table = relabel[F21.table[np.ix_(back, back)]]
    group, embedding = identify_table(table)
    assert group == F21
    assert len(np.unique(embedding)) == F21.order


def test_centre_and_hall():
    R = make_group(5, 7, 3, 2)
    assert R.centre().order == 5
    assert R.hall_subgroup([3, 7]).order == 21


def test_centralizer(F21):
    assert F21.centralizer(F21.y()).order == 7
    assert F21.centralizer(F21.x()).order == 3
    assert F21.centralizer(F21.identity).order == 21


def test_isomorphic():
    assert isomorphic(make_group(1, 7, 3, 2), make_group(1, 7, 3, 4))
    assert not isomorphic(make_group(1, 7, 3, 2), make_group(21, 1, 1, 1))


def test_characteristic(C7xD6):
    assert is_characteristic(C7xD6, C7xD6.subgroup([C7xD6.y()]))
    assert not C7xD6.subgroup([C7xD6.x()]).is_characteristic


def _groups_up_to(bound):
    for N in range(2, bound + 1):
        if is_squarefree(N):
            yield from enumerate_groups(N)


def _hoelder_count(N):
    """Number of groups of squarefree order N, counted by formula"""
    total = 0
    for m in divisors(N):
        count = 1
        for p in primefactors(m):
            c = sum(1 for q in primefactors(N // m) if q % p == 1)
            count *= (p ** c - 1) // (p - 1)
        total += count
    return total


def test_enumeration_matches_counting_formula():
    for N in range(2, 111):
        if is_squarefree(N):
            assert len(enumerate_groups(N)) == _hoelder_count(N), N


def test_every_enumerated_table_is_a_group():
    for R in _groups_up_to(110):
        T = R.table
        idx = np.arange(R.order)
        assert np.array_equal(T[0], idx) and np.array_equal(T[:, 0], idx), R.literal
        assert np.array_equal(T[T[:, :, None], idx[None, None, :]],
                              T[idx[:, None, None], T[None, :, :]]), R.literal
        assert np.all(T[idx, R.inverse] == 0), R.literal
        assert all(sorted(row) == list(idx) for row in T.tolist()), R.literal


def test_hall_subgroups_and_order_pq_subgroups():
    for R in _groups_up_to(70):
        primes = primefactors(R.order)
        subgroups = R.subgroups()
        for size in range(1, len(primes) + 1):
            for chosen in combinations(primes, size):
                H = R.hall_subgroup(chosen)
                assert H.order == prod(chosen), R.literal
                assert H in subgroups
        for L in subgroups:
            factors = primefactors(L.order)
            if len(factors) != 2:
                continue
            D, _ = R.identify_subgroup(L)
            if not D.is_abelian:
                p, q = factors
                assert (q - 1) % p == 0, (R.literal, L.order)


if __name__ == "__main__":
    print("=" * 80)
    print("SQUAREFREE GROUP TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q"])
    print("[PASS]" if code == 0 else "[FAIL]", "squarefree group tests")
    print("=" * 80)
