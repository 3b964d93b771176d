"""
Acceptance Suite Tests
Small-order runs of the verify suites, including the failure paths
"""

import pytest

from core.acceptance_suites import (SuiteContext, SuiteFailure, classifier_consistency,
                                    dihedral_automorphisms, normaliser_identity, run_suite)
from core.squarefree_group import enumerate_groups, is_squarefree


def _group_count(order):
    return sum(len(enumerate_groups(N)) for N in range(2, order + 1) if is_squarefree(N))


def test_classifier_consistency_settles_every_verdict():
    details = classifier_consistency(SuiteContext(seed=5), sweep_order=10, clause_order=10)
    assert len(details['compared']) == 2 * _group_count(10)
    assert 'C6 digraph' in details['compared']


def test_unsettled_verdict_fails(isolated_settings):
    isolated_settings.search.sweep_max_atoms = 3
    with pytest.raises(SuiteFailure, match="C5 digraph"):
        classifier_consistency(SuiteContext(), sweep_order=5, clause_order=5)


def test_clause_coverage_without_search():
    details = classifier_consistency(SuiteContext(), clause_order=30, search=False)
    assert details['compared'] == []
    assert sum(details['clauses'].values()) == _group_count(30)


def test_normaliser_identity_sample():
    details = normaliser_identity(SuiteContext(seed=2), samples=25, max_order=21)
    assert details['samples'] == 25


def test_quick_suite_passes():
    [result] = run_suite('quick', SuiteContext())
    assert result.status == 'PASS'


@pytest.mark.slow
def test_dihedral_automorphisms_suite():
    details = dihedral_automorphisms(SuiteContext())
    assert details['D6']['sets'] == 16
    assert details['D10']['sets'] == 128


if __name__ == "__main__":
    print("=" * 80)
    print("ACCEPTANCE SUITE TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q", "-m", ""])
    print("[PASS]" if code == 0 else "[FAIL]", "acceptance suite tests")
    print("=" * 80)
