"""
Certificate Vault
Stores emitted certificates and run reports with a SHA-256 ledger
"""

import json
import hashlib
import logging
import threading
from datetime import datetime
from typing import Dict, Any, List, Optional
from pathlib import Path

logger = logging.getLogger(__name__)


class CertificateVault:
    """
    Certificate storage with an append-only hash ledger
    """

    def __init__(self, vault_path: str = "./certificates"):
        """
        Initialize Certificate Vault

        Args:
            vault_path: Path to certificate storage directory
        """
        self.vault_path = Path(vault_path)
        self.vault_path.mkdir(parents=True, exist_ok=True)
        (self.vault_path / "certificates").mkdir(exist_ok=True)
        (self.vault_path / "reports").mkdir(exist_ok=True)

        self.ledger_file = self.vault_path / "ledger.json"
        self._ledger_lock = threading.Lock()
        if not self.ledger_file.exists():
            with open(self.ledger_file, 'w') as f:
                json.dump([], f, indent=2)

    def store_certificate(self, certificate: Dict[str, Any], label: str = "witness") -> str:
        """
        Store a certificate and record its hash

        Args:
            certificate: JSON-ready certificate dict
            label: Short tag used in the identifier (e.g. group describe() or suite name)

        Returns:
            Certificate ID
        """
        timestamp = datetime.now()
        payload = json.dumps(certificate, indent=2, sort_keys=True)
        digest = hashlib.sha256(payload.encode()).hexdigest()
        safe_label = ''.join(ch if ch.isalnum() or ch in '-_' else '_' for ch in label)
        certificate_id = f"CERT-{timestamp.strftime('%Y%m%d-%H%M%S')}-{safe_label}-{digest[:8]}"

        certificate_file = self.vault_path / "certificates" / f"{certificate_id}.json"
        with open(certificate_file, 'w') as f:
            f.write(payload)

        self._add_ledger_entry({
            'certificate_id': certificate_id,
            'label': label,
            'timestamp': timestamp.isoformat(),
            'file_path': str(certificate_file),
            'hash_sha256': self._calculate_file_hash(certificate_file),
            'action': 'certificate_stored'
        })
        logger.info("Stored certificate %s", certificate_id)
        return certificate_id

    def get_certificate(self, certificate_id: str) -> Optional[Dict[str, Any]]:
        """
        Load a stored certificate

        Args:
            certificate_id: Identifier returned by store_certificate

        Returns:
            Certificate dict, or None if no such file exists
        """
        certificate_file = self.vault_path / "certificates" / f"{certificate_id}.json"
        if not certificate_file.exists():
            return None
        with open(certificate_file, 'r') as f:
            return json.load(f)

    def get_ledger(self, label: Optional[str] = None) -> List[Dict[str, Any]]:
        """
        Read the ledger

        Args:
            label: Keep only entries with this label when given

        Returns:
            Ledger entries in insertion order
        """
        with open(self.ledger_file, 'r') as f:
            entries = json.load(f)
        if label:
            return [e for e in entries if e.get('label') == label]
        return entries

    def verify_integrity(self, entry_id: str) -> bool:
        """
        Recompute the file hash of a stored certificate or report

        Args:
            entry_id: Certificate or report identifier

        Returns:
            True if the file exists and matches its ledger hash
        """
        for entry in self.get_ledger():
            if entry.get('certificate_id') == entry_id or entry.get('report_id') == entry_id:
                path = Path(entry['file_path'])
                if not path.exists():
                    return False
                return self._calculate_file_hash(path) == entry.get('hash_sha256')
        return False

    def save_report(self, run_id: str, report_content: str, report_type: str = "verify") -> str:
        """
        Save a rendered report

        Args:
            run_id: Run identifier
            report_content: Report text (markdown or JSON)
            report_type: Report kind, also the file suffix selector

        Returns:
            Report file path
        """
        timestamp = datetime.now()
        suffix = 'json' if report_type.endswith('json') else 'md'
        report_id = f"REP-{run_id}-{report_type}"
        report_file = self.vault_path / "reports" / f"{report_id}.{suffix}"

        with open(report_file, 'w', encoding='utf-8') as f:
            f.write(report_content)

        self._add_ledger_entry({
            'report_id': report_id,
            'label': run_id,
            'timestamp': timestamp.isoformat(),
            'file_path': str(report_file),
            'hash_sha256': self._calculate_file_hash(report_file),
            'action': 'report_generated'
        })
        return str(report_file)

    def get_vault_stats(self) -> Dict[str, Any]:
        """
        Returns:
            Certificate, report and ledger counts plus the vault path
        """
        return {
            'total_certificates': len(list((self.vault_path / "certificates").glob("*.json"))),
            'total_reports': len(list((self.vault_path / "reports").iterdir())),
            'vault_path': str(self.vault_path),
            'ledger_entries': len(self.get_ledger())
        }

    def _calculate_file_hash(self, file_path: Path) -> str:
        sha256_hash = hashlib.sha256()
        with open(file_path, "rb") as f:
            for byte_block in iter(lambda: f.read(4096), b""):
                sha256_hash.update(byte_block)
        return sha256_hash.hexdigest()

    def _add_ledger_entry(self, entry: Dict[str, Any]):
        with self._ledger_lock:
            with open(self.ledger_file, 'r') as f:
                ledger = json.load(f)
            ledger.append(entry)
            with open(self.ledger_file, 'w') as f:
                json.dump(ledger, f, indent=2)
