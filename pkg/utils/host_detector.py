"""
Host Detection
Reports the machine resources that size the parallel witness search
"""

import platform
from typing import Dict, Any

import psutil


class HostDetector:
    """
    Detect cpu and memory resources and derive worker defaults
    """

    def __init__(self):
        self.os_type = platform.system().lower()
        self.hostname = platform.node()
        self.logical_cpus = psutil.cpu_count(logical=True) or 1
        self.physical_cpus = psutil.cpu_count(logical=False) or self.logical_cpus

    def default_threads(self) -> int:
        """All logical cores"""
        return max(1, self.logical_cpus)

    def available_memory_mb(self) -> int:
        return int(psutil.virtual_memory().available / (1024 * 1024))

    def get_capabilities(self) -> Dict[str, Any]:
        """Resources as a JSON-friendly dict (embedded in run reports)"""
        return {
            'os_type': self.os_type,
            'logical_cpus': self.logical_cpus,
            'physical_cpus': self.physical_cpus,
            'available_memory_mb': self.available_memory_mb(),
        }


# Global host detector instance
host_detector = HostDetector()
