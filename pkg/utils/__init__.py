"""
regrep - Utility Modules
"""

from .cache_manager import CacheManager, get_cache
from .certificate_vault import CertificateVault
from .host_detector import host_detector, HostDetector
from .literal_decoder import LiteralDecoder
from .settings import Settings, get_settings, load_settings, reset_settings

__all__ = [
    'CacheManager',
    'get_cache',
    'CertificateVault',
    'host_detector',
    'HostDetector',
    'LiteralDecoder',
    'Settings',
    'get_settings',
    'load_settings',
    'reset_settings',
]
