"""
Verification Report Generator
Creates markdown summaries of `verify` runs and stores them with their metadata
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class VerificationReportGenerator:
    """
    Renders suite results as a markdown report and saves it through the vault
    """

    def __init__(self, vault_path: str = "./certificates"):
        self.vault_path = Path(vault_path)
        self.runs_dir = self.vault_path / "runs"
        self.runs_dir.mkdir(parents=True, exist_ok=True)

    def generate_report(self, run_data: Dict[str, Any]) -> str:
        """
        Generate a verification report

        Args:
            run_data: Dictionary containing:
                - run_id: Unique run identifier
                - suite: Requested suite name
                - results: List of SuiteResult.to_dict() entries
                - seed: Seed used by randomized suites
                - engine_limits: Limits in force
                - certificates: Witness certificates produced during the run

        Returns:
            Path to generated report
        """
        run_id = run_data.get('run_id', f"RUN-{datetime.now().strftime('%Y%m%d-%H%M%S')}")
        run_dir = self.runs_dir / run_id
        run_dir.mkdir(parents=True, exist_ok=True)

        content = self._build_report_content(run_data)
        report_file = run_dir / "VERIFICATION_REPORT.md"
        with open(report_file, 'w', encoding='utf-8') as f:
            f.write(content)

        try:
            from utils.certificate_vault import CertificateVault
            vault = CertificateVault(str(self.vault_path))
            vault.save_report(run_id, content, report_type="verify")
            for certificate in run_data.get('certificates', []):
                vault.store_certificate(certificate, label=certificate.get('group_name', 'witness'))
        except OSError as e:
            logger.warning("Failed to save report %s to the vault: %s", run_id, e)

        metadata_file = run_dir / "run_metadata.json"
        with open(metadata_file, 'w', encoding='utf-8') as f:
            json.dump(run_data, f, indent=2, default=str)

        logger.info("Verification report written to %s", report_file)
        return str(report_file)

    def _build_report_content(self, run_data: Dict[str, Any]) -> str:
        run_id = run_data.get('run_id', 'UNKNOWN')
        results: List[Dict[str, Any]] = run_data.get('results', [])
        failed = [r for r in results if r['status'] == 'FAIL' and not r.get('stretch')]
        verdict = 'FAILED' if failed else 'PASSED'

        report = f"""# Verification Report: {run_id}

**Generated**: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}
**Suite**: {run_data.get('suite', 'N/A')}
**Seed**: {run_data.get('seed', 'N/A')}
**Host**: {self._format_host(run_data.get('host'))}
**Overall**: {verdict}

---

## Suites

| Suite | Status | Time (s) | Checks |
|-------|--------|----------|--------|
{self._format_rows(results)}

"""
        report += self._format_failures(results)
        report += self._format_certificates(run_data.get('certificates', []))
        report += self._format_limits(run_data.get('engine_limits'))
        return report

    @staticmethod
    def _format_host(host: Optional[Dict[str, Any]]) -> str:
        if not host:
            return 'N/A'
        return (f"{host['os_type']}, {host['logical_cpus']} logical cpus, "
                f"{host['available_memory_mb']} MB free")

    def _format_rows(self, results: List[Dict[str, Any]]) -> str:
        rows = []
        for r in results:
            status = r['status'] + (' (stretch)' if r.get('stretch') else '')
            rows.append(f"| {r['suite']} | {status} | {r['elapsed_seconds']:.1f} | {r['description']} |")
        return '\n'.join(rows)

    def _format_failures(self, results: List[Dict[str, Any]]) -> str:
        problems = [r for r in results if r['status'] in ('FAIL', 'SKIP')]
        if not problems:
            return ""
        lines = ["## Failures and skips", ""]
        for r in problems:
            lines.append(f"- **{r['suite']}** ({r['status']}): {r['message'] or 'no message'}")
        return '\n'.join(lines) + "\n\n"

    def _format_certificates(self, certificates: List[Dict[str, Any]]) -> str:
        if not certificates:
            return ""
        lines = ["## Witness certificates", ""]
        for c in certificates:
            words = ', '.join(c.get('connection_words', []))
            lines.append(f"- {c.get('group_name')} ({c.get('kind')}): |Aut| = {c.get('aut_order')}, "
                         f"S = {{{words}}}")
        return '\n'.join(lines) + "\n\n"

    def _format_limits(self, limits: Optional[Dict[str, Any]]) -> str:
        if not limits:
            return ""
        lines = ["## Engine limits", ""]
        lines += [f"- {key}: {value}" for key, value in sorted(limits.items())]
        return '\n'.join(lines) + "\n"
