"""
Cache Manager
Memoize deterministic search results (GRR / DRR connection sets) across runs
"""

import hashlib
import json
import logging
import threading
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class CacheManager:
    """
    Two-level cache: an in-memory dict in front of one JSON file per key.
    Values must be JSON-serializable; connection sets are stored as
    element triples so they survive changes to the index layout.
    """

    def __init__(self, cache_dir: str = "./cache", ttl_seconds: int = 30 * 24 * 3600,
                 enabled: bool = True):
        """
        Args:
            cache_dir: where the JSON entries live
            ttl_seconds: entries older than this are discarded on lookup
            enabled: when False every lookup misses and nothing is written
        """
        self.cache_dir = Path(cache_dir)
        self.ttl = timedelta(seconds=ttl_seconds)
        self.enabled = enabled
        if enabled:
            self.cache_dir.mkdir(parents=True, exist_ok=True)

        self._entries: Dict[str, Dict[str, Any]] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _entry_path(self, key: str) -> Path:
        return self.cache_dir / f"{key}.json"

    def _fresh(self, entry: Dict[str, Any]) -> bool:
        try:
            stored = datetime.fromisoformat(entry['stored_at'])
        except (KeyError, TypeError, ValueError):
            return False
        return datetime.now() - stored <= self.ttl

    def _load_entry(self, key: str) -> Optional[Dict[str, Any]]:
        path = self._entry_path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
        except (OSError, ValueError) as e:
            logger.warning("Dropping unreadable cache entry %s: %s", path.name, e)
            path.unlink(missing_ok=True)
            return None
        if not self._fresh(entry):
            logger.debug("Cache entry %s expired", path.name)
            path.unlink(missing_ok=True)
            return None
        return entry

    def get_cached_result(self, cache_key: str) -> Optional[Any]:
        """
        Look up a cached value, memory first and then disk

        Args:
            cache_key: Key from generate_cache_key

        Returns:
            Stored value, or None on a miss or an expired entry
        """
        if not self.enabled:
            return None

        with self._lock:
            entry = self._entries.get(cache_key)
            if entry is None or not self._fresh(entry):
                entry = self._load_entry(cache_key)
            if entry is None:
                self.misses += 1
                return None
            self._entries[cache_key] = entry
            self.hits += 1
            return entry['value']

    def cache_result(self, cache_key: str, result: Any):
        """
        Store a value in memory and on disk

        Args:
            cache_key: Key from generate_cache_key
            result: JSON-serializable value
        """
        if not self.enabled:
            return

        entry = {'stored_at': datetime.now().isoformat(), 'value': result}
        with self._lock:
            self._entries[cache_key] = entry
            self._entry_path(cache_key).write_text(json.dumps(entry, indent=2))

    @staticmethod
    def generate_cache_key(*args, **kwargs) -> str:
        """
        Deterministic key for a call

        Args:
            *args: Positional arguments (JSON-serializable)
            **kwargs: Keyword arguments (JSON-serializable)

        Returns:
            md5 hex digest of the sorted-JSON form of the arguments
        """
        payload = json.dumps([list(args), kwargs], sort_keys=True)
        return hashlib.md5(payload.encode()).hexdigest()

    def clear_cache(self):
        """Drop every entry from memory and disk"""
        with self._lock:
            self._entries.clear()
            if self.cache_dir.exists():
                for path in self.cache_dir.glob("*.json"):
                    path.unlink()

    def get_cache_stats(self) -> Dict[str, Any]:
        """
        Returns:
            Entry counts, hit and miss counters, directory and TTL
        """
        on_disk = len(list(self.cache_dir.glob("*.json"))) if self.cache_dir.exists() else 0
        return {
            'enabled': self.enabled,
            'total_cache_entries': on_disk,
            'memory_cache_entries': len(self._entries),
            'total_cache_hits': self.hits,
            'misses': self.misses,
            'cache_directory': str(self.cache_dir),
            'ttl_seconds': int(self.ttl.total_seconds()),
        }


_cache: Optional[CacheManager] = None


def get_cache() -> CacheManager:
    """Process-wide cache built from settings"""
    global _cache
    if _cache is None:
        from utils.settings import get_settings
        cfg = get_settings().cache
        _cache = CacheManager(cfg.path, cfg.ttl_seconds, cfg.enabled)
    return _cache


def set_cache(cache: Optional[CacheManager]):
    """Install (or drop) the process-wide cache; used by tests and the CLI"""
    global _cache
    _cache = cache
