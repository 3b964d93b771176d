"""
Explicit Construction Tests
Graph witnesses for groups with three or more prime divisors, and the PSL(2,11)
orbital-graph witness
"""

import pytest

from core.certificates import verify_witness_certificate
from core.constructions import (construct_cyclic_cross_witness, construct_noncyclic_cross_witness,
                                construct_witness, cyclic_cross_pairs, excluded_shape)
from core.errors import HypothesisFailed, NotConfigured
from core.psl_witness import load_psl_generators, psl2_witness
from core.squarefree_group import make_group

D42 = (1, 21, 2, 20)
F42 = (1, 7, 6, 3)
C5xF21 = (5, 7, 3, 2)


@pytest.mark.parametrize("params,reason", [
    ((30, 1, 1, 1), "R is abelian"),
    ((1, 7, 3, 2), "|R| has fewer than three prime divisors"),
    ((1, 15, 2, 14), "R is D30"),
    ((5, 3, 2, 2), "R is C5 x D6"),
    ((3, 5, 2, 4), "R is C3 x D10"),
])
def test_excluded_shapes(params, reason):
    assert excluded_shape(make_group(*params)) == reason


def test_not_excluded():
    assert excluded_shape(make_group(*D42)) is None
    assert excluded_shape(make_group(*C5xF21)) is None


def test_cyclic_cross_pairs():
    assert cyclic_cross_pairs(make_group(*C5xF21)) == [(3, 5)]
    assert cyclic_cross_pairs(make_group(*D42)) == []
    assert cyclic_cross_pairs(make_group(*F42)) == []


def test_wrong_construction_is_refused():
    with pytest.raises(HypothesisFailed):
        construct_noncyclic_cross_witness(make_group(*C5xF21))
    with pytest.raises(HypothesisFailed):
        construct_cyclic_cross_witness(make_group(*D42))
    with pytest.raises(HypothesisFailed):
        construct_witness(make_group(1, 15, 2, 14))


def test_d42_witness():
    R = make_group(*D42)
    certificate = construct_noncyclic_cross_witness(R)
    assert certificate.kind == 'graph'
    assert certificate.wreath.K_order == 7
    assert certificate.wreath.H_order == 14
    S = certificate.element_indices(R)
    H = R.subgroup([R.y(3), R.x()])
    inside = [s for s in S if s in H]
    assert len(S) == len(inside) + 7
    assert verify_witness_certificate(certificate)


def test_index_prime_witness():
    R = make_group(*F42)
    certificate = construct_noncyclic_cross_witness(R)
    assert certificate.wreath.K_order == certificate.wreath.H_order == 21
    assert certificate.wreath.degenerate
    assert verify_witness_certificate(certificate)


@pytest.mark.slow
def test_c5_f21_witness():
    R = make_group(*C5xF21)
    certificate = construct_witness(R)
    assert len(certificate.connection_set) == 32
    assert certificate.wreath.K_order == 5
    assert certificate.wreath.H_order == 35
    assert verify_witness_certificate(certificate)


def test_psl_generators_need_configuration(isolated_settings):
    with pytest.raises(NotConfigured):
        load_psl_generators(13)
    isolated_settings.data.psl_generators = {}
    with pytest.raises(NotConfigured):
        load_psl_generators(11)


def test_psl_generators():
    G = load_psl_generators(11)
    assert G.degree == 12
    assert G.order() == 660


@pytest.mark.slow
def test_psl2_11_witness():
    certificate = psl2_witness(11)
    assert certificate.group_order == 55
    assert certificate.aut_order == 660
    assert certificate.kind == 'graph'
    assert verify_witness_certificate(certificate)


if __name__ == "__main__":
    print("=" * 80)
    print("EXPLICIT CONSTRUCTION TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q", "-m", ""])
    print("[PASS]" if code == 0 else "[FAIL]", "construction tests")
    print("=" * 80)
