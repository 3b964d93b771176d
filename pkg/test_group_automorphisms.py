"""
Group Automorphism Tests
Aut(R) sweeps, set stabilizers and the stabilizing automorphisms behind the
detection results for D6, D10 and C_q x D_2r
"""

from itertools import combinations

import numpy as np
import pytest

from core.errors import HypothesisFailed, IdentityInS, NotInverseClosed, WrongShape
from core.group_automorphisms import (GroupAutomorphism, automorphism_group, automorphism_order,
                                      automorphism_perms, conjugation_witness,
                                      cq_dihedral_wreath_witness, dihedral_inverting_automorphism,
                                      is_inverse_closed, set_stabilizer)
from core.squarefree_group import make_group


@pytest.mark.parametrize("params,order", [
    ((15, 1, 1, 1), 8),
    ((1, 3, 2, 2), 6),
    ((1, 5, 2, 4), 20),
    ((1, 7, 3, 2), 42),
    ((1, 15, 2, 14), 120),
    ((7, 3, 2, 2), 36),
])
def test_automorphism_orders(params, order):
    assert automorphism_order(make_group(*params)) == order


def test_automorphisms_are_multiplicative(F21):
    group = automorphism_group(F21)
    assert group[0].is_identity
    assert all(alpha.is_multiplicative() for alpha in group)
    assert len({alpha for alpha in group}) == len(group)


def test_rows_are_sorted(D10):
    perms = automorphism_perms(D10)
    assert np.array_equal(perms[0], np.arange(D10.order))
    assert [tuple(p) for p in perms] == sorted(tuple(p) for p in perms)


def test_from_images_and_inverse(D6):
    alpha = GroupAutomorphism.from_images(D6, 0, D6.y(2), D6.x())
    assert alpha.is_multiplicative()
    assert not alpha.is_identity
    assert alpha.then(alpha.inverse()).is_identity


def test_set_stabilizer(D6):
    assert set_stabilizer(D6, []).order == 6
    assert set_stabilizer(D6, [D6.y(), D6.y(2)]).order == 6
    assert set_stabilizer(D6, [D6.x()]).order == 2
    with pytest.raises(IdentityInS):
        set_stabilizer(D6, [0, D6.x()])


@pytest.mark.parametrize("params", [(1, 5, 2, 4), (1, 7, 3, 2), (7, 3, 2, 2)])
def test_stabilizer_of_inverse_set(params):
    R = make_group(*params)
    rng = np.random.default_rng(R.order)
    for _ in range(20):
        S = [v for v in range(1, R.order) if rng.random() < 0.3]
        S_inv = sorted(int(R.inverse[s]) for s in S)
        assert np.array_equal(set_stabilizer(R, S).perms, set_stabilizer(R, S_inv).perms)


def test_inverse_closed(D6):
    assert is_inverse_closed(D6, [D6.y(), D6.y(2)])
    assert not is_inverse_closed(D6, [D6.y()])


@pytest.mark.parametrize("params", [(1, 3, 2, 2), (1, 5, 2, 4)])
def test_dihedral_inverting_automorphism_all_sets(params):
    D = make_group(*params)
    nonidentity = range(1, D.order)
    for size in range(D.order):
        for S in combinations(nonidentity, size):
            if not is_inverse_closed(D, S):
                continue
            beta = dihedral_inverting_automorphism(D, S)
            assert not beta.is_identity
            assert beta.fixes_set(S)
            assert beta.apply(D.y()) == D.y(-1)


def test_dihedral_inverting_automorphism_shape(F21):
    with pytest.raises(WrongShape):
        dihedral_inverting_automorphism(F21, [])


def test_dihedral_inverting_automorphism_needs_inverse_closed(D6):
    with pytest.raises(NotInverseClosed):
        dihedral_inverting_automorphism(D6, [D6.y()])


def _central_coset_set(R):
    """{x} plus the cosets <z>y and <z>y^2 in C_q x D6"""
    Z = R.subgroup([R.z()])
    cosets = [int(R.table[k, w]) for w in (R.y(), R.y(2)) for k in Z.elements]
    return sorted([R.x()] + cosets)


def test_cq_dihedral_wreath_witness(C7xD6):
    S = _central_coset_set(C7xD6)
    K = C7xD6.subgroup([C7xD6.z()])
    H = C7xD6.subgroup([C7xD6.x(), C7xD6.z()])
    alpha = cq_dihedral_wreath_witness(C7xD6, K, H, S)
    assert not alpha.is_identity
    assert alpha.fixes_set(S)
    assert alpha.is_multiplicative()


def test_cq_dihedral_wreath_witness_shape(F21):
    K = F21.subgroup([F21.y()])
    with pytest.raises(WrongShape):
        cq_dihedral_wreath_witness(F21, K, K, [])


@pytest.mark.parametrize("q,r", [
    (7, 3), (11, 3), (13, 3), (7, 5),
    pytest.param(11, 5, marks=pytest.mark.slow),
    pytest.param(13, 5, marks=pytest.mark.slow),
])
def test_cq_dihedral_wreath_witness_every_prime_pair(q, r, random_wreath_set):
    from sympy import isprime
    from core.wreath import check_star_star, wreath_pairs

    R = make_group(q, r, 2, r - 1)
    rng = np.random.default_rng(q * r)
    pairs = [(K, H) for K, H in wreath_pairs(R) if isprime(K.order)]
    assert pairs
    for K, H in pairs:
        for _ in range(3):
            S = random_wreath_set(R, K, H, rng)
            assert check_star_star(R, S, K, H) is not None
            alpha = cq_dihedral_wreath_witness(R, K, H, S)
            assert not alpha.is_identity
            assert alpha.fixes_set(S)


def test_conjugation_witness(C7xD6):
    R = C7xD6
    # H = <x, z> is abelian and x is not central in R
    K = R.subgroup([R.x()])
    H = R.subgroup([R.x(), R.z()])
    S = [R.y(), R.y(2), R.index((0, 1, 1)), R.index((0, 2, 1))]
    alpha = conjugation_witness(R, K, H, S)
    assert not alpha.is_identity
    assert alpha.fixes_set(S)


def test_conjugation_witness_needs_noncentral(C7xD6):
    R = C7xD6
    Z = R.subgroup([R.z()])
    H = R.subgroup([R.x(), R.z()])
    with pytest.raises(HypothesisFailed):
        conjugation_witness(R, Z, H, _central_coset_set(R))


if __name__ == "__main__":
    print("=" * 80)
    print("GROUP AUTOMORPHISM TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q"])
    print("[PASS]" if code == 0 else "[FAIL]", "group automorphism tests")
    print("=" * 80)
