"""
Logging setup driven by the `logging:` section of config.yaml
"""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from utils.settings import Settings

_FORMAT = '%(asctime)s %(levelname)-7s %(name)s: %(message)s'
_configured = False


def configure_logging(settings: Settings, verbose: bool = False, console: bool = True,
                      log_file: Optional[str] = None):
    """
    Install console and rotating-file handlers on the root logger (once)

    Args:
        settings: Loaded settings
        verbose: Force DEBUG level
        console: Attach a stderr handler
        log_file: Override the configured log file (empty string disables it)
    """
    global _configured
    if _configured:
        return

    level = logging.DEBUG if verbose else getattr(logging, settings.logging.level.upper(), logging.INFO)
    root = logging.getLogger()
    root.setLevel(level)
    formatter = logging.Formatter(_FORMAT)

    if console:
        stream = logging.StreamHandler()
        stream.setFormatter(formatter)
        stream.setLevel(logging.DEBUG if verbose else logging.WARNING)
        root.addHandler(stream)

    path = settings.logging.file if log_file is None else log_file
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(
            path,
            maxBytes=settings.logging.max_size_mb * 1024 * 1024,
            backupCount=settings.logging.backup_count,
            encoding='utf-8',
        )
        handler.setFormatter(formatter)
        root.addHandler(handler)

    _configured = True
