"""Structured verification results."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float = 0.0
    witness: Optional[Any] = None  # JSON-serializable description, if any

    def to_json_dict(self) -> dict:
        out = {"name": self.name, "pass": bool(self.passed),
               "residual": float(self.residual)}
        out["witness-ref"] = self.witness
        return out


@dataclass
class Report:
    checks: list = field(default_factory=list)
    seed: Optional[int] = None
    tolerances: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, residual: float = 0.0,
            witness=None) -> CheckResult:
        result = CheckResult(name, bool(passed), float(residual), witness)
        self.checks.append(result)
        return result

    def merge(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.name, c.passed,
                                           c.residual, c.witness))
        self.tolerances.update(other.tolerances)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json_dict(self) -> dict:
        return {
            "checks": [c.to_json_dict() for c in self.checks],
            "passed": self.passed,
            "seed": self.seed,
            "tolerances": self.tolerances,
        }
