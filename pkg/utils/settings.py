"""
Configuration Loader
Reads config/config.yaml (plus .env overrides) into validated settings objects
"""

import os
import threading
from pathlib import Path
from typing import Dict, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field

REPO_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_PATH = REPO_ROOT / 'config' / 'config.yaml'


class EngineLimits(BaseModel):
    """Size bounds of the exact engines"""
    max_group_order: int = 512
    max_graph_vertices: int = 1024
    normalizer_sweep_limit: int = 10_000_000
    element_list_limit: int = 100_000
    max_coset_index: int = 10_000
    exhaustive_max_order: int = 64
    normaliser_check_max_order: int = 64
    find_set_max_order: int = 128


class SearchSettings(BaseModel):
    randomized_budget: int = 1_000_000
    seed: int = 0
    chunk_size: int = 65_536
    structured_pair_cap: int = 1 << 22
    sweep_max_atoms: int = 29
    progress: bool = True
    threads: Optional[int] = None


class DataSettings(BaseModel):
    psl_generators: Dict[int, str] = Field(default_factory=lambda: {11: 'config/psl2_11.gens'})

    def generator_file(self, q: int) -> Optional[Path]:
        entry = self.psl_generators.get(q)
        if entry is None:
            return None
        path = Path(entry)
        return path if path.is_absolute() else REPO_ROOT / path


class CacheSettings(BaseModel):
    enabled: bool = True
    path: str = './cache'
    ttl_seconds: int = 30 * 24 * 3600


class CertificateSettings(BaseModel):
    vault_path: str = './certificates'


class LoggingSettings(BaseModel):
    level: str = 'INFO'
    file: Optional[str] = './logs/regrep.log'
    max_size_mb: int = 10
    backup_count: int = 3


class Settings(BaseModel):
    engine: EngineLimits = Field(default_factory=EngineLimits)
    search: SearchSettings = Field(default_factory=SearchSettings)
    data: DataSettings = Field(default_factory=DataSettings)
    cache: CacheSettings = Field(default_factory=CacheSettings)
    certificates: CertificateSettings = Field(default_factory=CertificateSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @property
    def threads(self) -> int:
        """Worker count: REGREP_THREADS, then config, then all cores"""
        if self.search.threads:
            return max(1, int(self.search.threads))
        from utils.host_detector import host_detector
        return host_detector.default_threads()


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Load settings from yaml, applying environment overrides

    Args:
        config_path: Explicit config file; falls back to REGREP_CONFIG, then config/config.yaml

    Returns:
        Validated Settings
    """
    load_dotenv()
    path = Path(config_path or os.getenv('REGREP_CONFIG') or DEFAULT_CONFIG_PATH)

    raw = {}
    if path.exists():
        with open(path, 'r') as f:
            raw = (yaml.safe_load(f) or {}).get('regrep', {}) or {}

    settings = Settings.model_validate(raw)

    threads = os.getenv('REGREP_THREADS')
    if threads:
        settings.search.threads = int(threads)
    level = os.getenv('REGREP_LOG_LEVEL')
    if level:
        settings.logging.level = level.upper()

    return settings


_settings: Optional[Settings] = None
_settings_lock = threading.Lock()


def get_settings() -> Settings:
    """Process-wide settings singleton"""
    global _settings
    with _settings_lock:
        if _settings is None:
            _settings = load_settings()
        return _settings


def reset_settings(settings: Optional[Settings] = None):
    """Drop the cached settings (or install a given object); used by tests and the CLI"""
    global _settings
    with _settings_lock:
        _settings = settings
