"""
Utility Tests
Literal decoding, settings, cache and certificate vault
"""

import inspect
import json

import pytest

from core.errors import ParseError
from core.squarefree_group import make_group
from utils.cache_manager import CacheManager
from utils.certificate_vault import CertificateVault
from utils.host_detector import host_detector
from utils.literal_decoder import LiteralDecoder
from utils.settings import load_settings


@pytest.mark.parametrize("text,params", [
    ("D6", (1, 3, 2, 2)),
    ("D30", (1, 15, 2, 14)),
    ("F21", (1, 7, 3, 2)),
    ("C15", (15, 1, 1, 1)),
    ("D14", (1, 7, 2, 6)),
    ("C5xF21", (5, 7, 3, 2)),
    ("C7 x D6", (7, 3, 2, 2)),
    ("sqfree:t=5,n=7,m=3,j=2", (5, 7, 3, 2)),
])
def test_group_literals(text, params):
    assert LiteralDecoder.parse_group(text) == make_group(*params)


@pytest.mark.parametrize("text", ["", "Q8", "D8", "sqfree:t=5,k=3", "C2xD6", "C12"])
def test_bad_group_literals(text):
    with pytest.raises(ParseError):
        LiteralDecoder.parse_group(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        LiteralDecoder.parse_group("sqfree:t=5,n=seven")
    assert info.value.position == len("sqfree:t=5,")


def test_elements(F21):
    assert LiteralDecoder.parse_element(F21, "1") == 0
    assert LiteralDecoder.parse_element(F21, "(0,2,1)") == F21.index((0, 2, 1))
    assert LiteralDecoder.parse_element(F21, "y^2*x") == F21.index((0, 2, 1))
    assert LiteralDecoder.parse_element(F21, "x*y") == F21.index((0, F21.j, 1))
    assert LiteralDecoder.parse_element(F21, "y^-1") == F21.y(6)
    with pytest.raises(ParseError):
        LiteralDecoder.parse_element(F21, "w^2")


def test_sets(D6):
    assert LiteralDecoder.parse_set(D6, "refl:all") == sorted(D6.index((0, b, 1)) for b in range(3))
    assert LiteralDecoder.parse_set(D6, "y, y^2") == [D6.y(), D6.y(2)]
    assert LiteralDecoder.parse_set(D6, "(0,1,0); (0,2,0)") == [D6.y(), D6.y(2)]
    assert LiteralDecoder.parse_set(D6, "<y>*x") == LiteralDecoder.parse_set(D6, "refl:all")
    with pytest.raises(ParseError):
        LiteralDecoder.parse_set(make_group(1, 7, 3, 2), "refl:all")


def test_named_subgroup_cosets(C7xD6):
    named = {'K': C7xD6.subgroup([C7xD6.z()]).elements}
    S = LiteralDecoder.parse_set(C7xD6, "K*y; y*K", named)
    assert len(S) == 7


def test_permutations():
    assert LiteralDecoder.parse_permutation("(0 1)(2 3)") == [1, 0, 3, 2]
    assert LiteralDecoder.parse_permutation("(0,2)", degree=4) == [2, 1, 0, 3]
    assert LiteralDecoder.parse_permutation("()", degree=2) == [0, 1]
    with pytest.raises(ParseError):
        LiteralDecoder.parse_permutation("(0 1)(1 2)")
    with pytest.raises(ParseError):
        LiteralDecoder.parse_permutation("(0 5)", degree=3)


def test_generator_file(tmp_path):
    path = tmp_path / 'gens'
    path.write_text("# two cycles\n(0 1 2)\n\n(3 4)\n")
    assert LiteralDecoder.parse_generator_file(path) == [[1, 2, 0, 3, 4], [0, 1, 2, 4, 3]]


def test_load_settings(tmp_path, monkeypatch):
    path = tmp_path / 'config.yaml'
    path.write_text("regrep:\n  engine:\n    exhaustive_max_order: 30\n  search:\n    seed: 9\n")
    monkeypatch.setenv('REGREP_THREADS', '3')
    settings = load_settings(str(path))
    assert settings.engine.exhaustive_max_order == 30
    assert settings.engine.max_group_order == 512
    assert settings.search.seed == 9
    assert settings.threads == 3


def test_missing_config_uses_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv('REGREP_THREADS', raising=False)
    settings = load_settings(str(tmp_path / 'absent.yaml'))
    assert settings.search.randomized_budget == 1_000_000
    assert settings.threads == host_detector.default_threads()


def test_cache_round_trip(tmp_path):
    cache = CacheManager(str(tmp_path / 'cache'))
    key = cache.generate_cache_key('regular-set', 'F21', 'graph')
    assert cache.get_cached_result(key) is None
    cache.cache_result(key, [[0, 1, 0], [0, 6, 0]])
    assert cache.get_cached_result(key) == [[0, 1, 0], [0, 6, 0]]

    fresh = CacheManager(str(tmp_path / 'cache'))
    assert fresh.get_cached_result(key) == [[0, 1, 0], [0, 6, 0]]
    fresh.clear_cache()
    assert fresh.get_cache_stats()['total_cache_entries'] == 0


def test_disabled_cache(tmp_path):
    cache = CacheManager(str(tmp_path / 'off'), enabled=False)
    cache.cache_result('k', 1)
    assert cache.get_cached_result('k') is None
    assert not (tmp_path / 'off').exists()


def test_vault_ledger(tmp_path):
    vault = CertificateVault(str(tmp_path / 'vault'))
    cert_id = vault.store_certificate({'group': 'F21', 'kind': 'digraph'}, label='C7:C3')
    assert ':' not in cert_id
    assert vault.get_certificate(cert_id) == {'group': 'F21', 'kind': 'digraph'}
    assert vault.verify_integrity(cert_id)

    path = vault.get_ledger()[0]['file_path']
    with open(path, 'w') as f:
        json.dump({'group': 'tampered'}, f)
    assert not vault.verify_integrity(cert_id)


def test_vault_reports(tmp_path):
    vault = CertificateVault(str(tmp_path / 'vault'))
    vault.save_report('RUN-1', '# report', report_type='verify')
    stats = vault.get_vault_stats()
    assert stats['total_reports'] == 1
    assert stats['ledger_entries'] == 1
    assert vault.verify_integrity('REP-RUN-1-verify')


def test_host_capabilities():
    caps = host_detector.get_capabilities()
    assert caps['logical_cpus'] >= 1
    assert host_detector.default_threads() >= 1


@pytest.mark.parametrize("cls", [CacheManager, CertificateVault])
def test_public_methods_are_documented(cls):
    for name, member in inspect.getmembers(cls, inspect.isfunction):
        if not name.startswith('_'):
            assert inspect.getdoc(member), f"{cls.__name__}.{name}"


if __name__ == "__main__":
    print("=" * 80)
    print("UTILITY TESTS")
    print("=" * 80)
    code = pytest.main([__file__, "-q"])
    print("[PASS]" if code == 0 else "[FAIL]", "utility tests")
    print("=" * 80)
