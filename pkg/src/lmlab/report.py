"""Machine-readable pass/fail records for single chart-level claims."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
UNCERTIFIED = "uncertified"
TIMEOUT = "timeout"


@dataclass
class VerificationReport:
    check: str
    instance: dict
    status: str
    unit_notes: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    runtime_ms: int = 0
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "check": self.check,
            "instance": dict(self.instance),
            "status": self.status,
            "unit_notes": list(self.unit_notes),
            "certificates": list(self.certificates),
            "runtime_ms": self.runtime_ms,
            "details": dict(self.details),
        }

    @property
    def ok(self):
        return self.status == PASS


class Stopwatch:
    def __init__(self):
        self.t0 = time.monotonic()

    def ms(self):
        return int((time.monotonic() - self.t0) * 1000)
