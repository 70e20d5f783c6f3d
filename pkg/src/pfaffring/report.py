"""Structured verification reports (JSON schema version 1)."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

SCHEMA_VERSION = 1
STATUSES = ("pass", "fail", "info")


@dataclass
class Check:
    name: str
    status: str
    witnesses: dict[str, str] = field(default_factory=dict)
    dimensions: dict[str, list[int]] = field(default_factory=dict)
    millis: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")
        if self.status == "fail" and not self.witnesses:
            raise ValueError(f"failed check {self.name!r} needs a witness")

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "witnesses": dict(sorted(self.witnesses.items())),
            "dimensions": {k: list(v) for k, v in sorted(self.dimensions.items())},
            "millis": self.millis,
        }


def check(name: str, ok: bool, witnesses: dict | None = None, dimensions: dict | None = None,
          millis: int = 0, informational: bool = False) -> Check:
    status = "info" if informational else ("pass" if ok else "fail")
    witnesses = {k: str(v) for k, v in (witnesses or {}).items()}
    if status == "fail" and not witnesses:
        witnesses = {"reason": "check returned false"}
    return Check(name, status, witnesses, dict(dimensions or {}), millis)


@contextmanager
def stopwatch():
    """Yields a one-element list that receives elapsed milliseconds on exit."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int((time.perf_counter() - start) * 1000)


@dataclass
class VerificationReport:
    command: str
    field: str
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witnesses, c.dimensions, c.millis))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = True) -> dict:
        checks = []
        for c in sorted(self.checks, key=lambda c: c.name):
            d = c.to_dict()
            if not timing:
                d.pop("millis")
            checks.append(d)
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "seed": self.seed,
            "field": self.field,
            "checks": checks,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            lines.append(f"[{c.status.upper():4}] {c.name} ({c.millis} ms)")
            if c.status == "fail":
                for k, v in sorted(c.witnesses.items()):
                    lines.append(f"       {k}: {v}")
        n_fail = len(self.failures())
        verdict = "OK" if n_fail == 0 else f"FAILED ({n_fail} check{'s' if n_fail > 1 else ''})"
        lines.append(f"{self.command}: {verdict}")
        return "\n".join(lines)
