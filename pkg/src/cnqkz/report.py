"""Pass/fail records shared by every verification suite."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = "1"


@dataclass
class Check:
    identity: str
    parameters: dict[str, Any]
    passed: bool
    counterexample: Any = None
    residual: float | None = None

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "parameters": self.parameters,
            "status": "pass" if self.passed else "fail",
        }
        if self.residual is not None:
            out["residual"] = self.residual
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, identity: str, passed: bool, counterexample=None, residual=None, **parameters) -> Check:
        c = Check(identity, parameters, bool(passed), counterexample, residual)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]

    def dumps(self, **extra) -> str:
        payload = {"schema": SCHEMA_VERSION, "suite": self.suite, **extra,
                   "passed": self.passed, "checks": self.to_json()}
        return json.dumps(payload, indent=2, sort_keys=False)

    def summary(self) -> str:
        n_fail = len(self.failures)
        return f"{self.suite}: {len(self.checks) - n_fail}/{len(self.checks)} checks passed"
