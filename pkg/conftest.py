"""
Shared pytest fixtures: isolated settings, cache and vault per test, plus the
small groups most tests lean on
"""

import numpy as np
import pytest

from core.squarefree_group import make_group
from utils.cache_manager import set_cache
from utils.settings import Settings, reset_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path):
    """Single-process, quiet, cache-free settings rooted in tmp_path"""
    settings = Settings()
    settings.search.progress = False
    settings.search.threads = 1
    settings.cache.enabled = False
    settings.cache.path = str(tmp_path / 'cache')
    settings.certificates.vault_path = str(tmp_path / 'certificates')
    settings.logging.file = None
    reset_settings(settings)
    set_cache(None)
    yield settings
    reset_settings(None)
    set_cache(None)


@pytest.fixture
def config_file(tmp_path):
    """config.yaml equivalent of isolated_settings, for the CLI's --config"""
    path = tmp_path / 'config.yaml'
    path.write_text(
        "regrep:\n"
        "  search:\n"
        "    progress: false\n"
        "    threads: 1\n"
        "  cache:\n"
        "    enabled: false\n"
        f"    path: {tmp_path / 'cache'}\n"
        "  certificates:\n"
        f"    vault_path: {tmp_path / 'certificates'}\n"
        "  logging:\n"
        "    file: null\n"
    )
    return str(path)


@pytest.fixture
def D6():
    return make_group(1, 3, 2, 2)


@pytest.fixture
def D10():
    return make_group(1, 5, 2, 4)


@pytest.fixture
def F21():
    return make_group(1, 7, 3, 2)


@pytest.fixture
def C6():
    return make_group(6, 1, 1, 1)


@pytest.fixture
def C7xD6():
    return make_group(7, 3, 2, 2)


def _random_wreath_set(R, K, H, rng):
    """Inverse-closed S whose part outside H is a union of double cosets KgK"""
    T, inverse = R.table, R.inverse
    K_el = np.asarray(K.elements)
    S, covered = set(), H.mask.copy()
    for h in H.elements:
        if h and rng.random() < 0.5:
            S |= {int(h), int(inverse[h])}
    for g in range(R.order):
        if covered[g]:
            continue
        block = np.unique(T[np.ix_(K_el, T[g, K_el])].ravel())
        block = np.union1d(block, inverse[block])
        covered[block] = True
        if rng.random() < 0.5:
            S |= {int(b) for b in block}
    return sorted(S)


@pytest.fixture
def random_wreath_set():
    """Sampler (R, K, H, rng) -> inverse-closed wreath set for the pair"""
    return _random_wreath_set
