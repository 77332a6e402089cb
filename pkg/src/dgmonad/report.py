"""Structured pass/fail verdicts with replayable witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INFEASIBLE = "infeasible"


@dataclass
class Check:
    name: str
    status: str
    witness: Any = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": self.status, "witness": self.witness}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Verdict:
    """A named list of checks; passes iff every check passes."""

    subject: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    field: str | None = None
    elapsed_ms: float | None = None

    def add(self, name: str, ok: bool, witness: Any = None, detail: str = "",
            failure: str = FAIL) -> Check:
        c = Check(name, PASS if ok else failure, witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other: Verdict, prefix: str | None = None):
        for c in other.checks:
            name = f"{prefix}/{c.name}" if prefix else c.name
            self.checks.append(Check(name, c.status, c.witness, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def status(self) -> str:
        for c in self.checks:
            if c.status == INFEASIBLE:
                return INFEASIBLE
        return PASS if self.ok else FAIL

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        from . import __version__

        out: dict[str, Any] = {
            "subject": self.subject,
            "status": self.status,
            "tool": "dgmonad",
            "version": __version__,
            "field": self.field,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.data:
            out["data"] = self.data
        if self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, default=str)

    def __str__(self):
        lines = [f"{self.subject}: {self.status}"]
        for c in self.checks:
            extra = f"  ({c.detail})" if c.detail else ""
            lines.append(f"  [{c.status:>10}] {c.name}{extra}")
        return "\n".join(lines)
