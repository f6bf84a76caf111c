"""
Evidence collection for candidate verification checks.
"""

import hashlib
import json
from dataclasses import dataclass, field


@dataclass
class Evidence:
    """Outcome of one verification check on one candidate."""

    check: str
    subject: str
    passed: bool = False
    measured: float | None = None
    threshold: float | None = None
    error_message: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert evidence to dictionary representation."""
        return {
            "check": self.check,
            "subject": self.subject,
            "passed": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
            "error_message": self.error_message,
            "details_hash": self.details_hash(),
            "summary": self.summary(),
        }

    def details_hash(self) -> str:
        """Short digest of the details, stable across runs."""
        if not self.details:
            return ""
        data_str = json.dumps(self.details, sort_keys=True)
        return hashlib.sha256(data_str.encode()).hexdigest()[:16]

    def summary(self) -> str:
        """Generate a human-readable summary of the evidence."""
        if self.error_message:
            return f"Failed: {self.error_message}"
        if self.measured is None or self.threshold is None:
            return "Passed" if self.passed else "Failed"

        relation = "<" if self.passed else ">="
        return f"{self.measured:.3e} {relation} {self.threshold:.3e}"


class EvidenceCollector:
    """Collects and manages evidence from multiple checks."""

    def __init__(self) -> None:
        self.evidence_list: list[Evidence] = []

    def add_evidence(self, evidence: Evidence) -> None:
        self.evidence_list.append(evidence)

    def add_check(
        self,
        check: str,
        subject: str,
        passed: bool,
        measured: float | None = None,
        threshold: float | None = None,
        error_message: str = "",
        details: dict | None = None,
    ) -> Evidence:
        """Convenience method to create and add evidence from a check result."""
        evidence = Evidence(
            check=check,
            subject=subject,
            passed=passed,
            measured=measured,
            threshold=threshold,
            error_message=error_message,
            details=details or {},
        )
        self.add_evidence(evidence)
        return evidence

    def get_failed_checks(self) -> list[Evidence]:
        return [e for e in self.evidence_list if not e.passed]

    def get_passed_checks(self) -> list[Evidence]:
        return [e for e in self.evidence_list if e.passed]

    def all_passed(self) -> bool:
        return all(e.passed for e in self.evidence_list)

