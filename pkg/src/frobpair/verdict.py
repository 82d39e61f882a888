"""Tri-state decision results."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

YES = "CertifiedYes"
NO = "CertifiedNo"
INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    outcome: str
    certificate: Any = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome not in (YES, NO, INCONCLUSIVE):
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.outcome == YES and self.certificate is None:
            raise ValueError("CertifiedYes needs a certificate")
        if self.outcome == NO and not self.reason:
            raise ValueError("CertifiedNo needs a reason")

    @property
    def yes(self) -> bool:
        return self.outcome == YES

    @property
    def no(self) -> bool:
        return self.outcome == NO

    @property
    def inconclusive(self) -> bool:
        return self.outcome == INCONCLUSIVE

    def __str__(self) -> str:
        s = self.outcome
        if self.reason:
            s += f" ({self.reason})"
        return s


def yes(certificate, reason: str = "", **details) -> Verdict:
    return Verdict(YES, certificate, reason, details)


def no(reason: str, **details) -> Verdict:
    return Verdict(NO, None, reason, details)


def inconclusive(reason: str, **details) -> Verdict:
    return Verdict(INCONCLUSIVE, None, reason, details)
