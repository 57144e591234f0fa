"""Structured results of identity verification runs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import mpmath

SCHEMA = {
    "type": "object",
    "required": ["suite", "config", "checks", "status"],
    "properties": {
        "suite": {"type": "string"},
        "config": {"type": "object"},
        "status": {"enum": ["pass", "fail"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "identity",
                    "anchor",
                    "max_residual",
                    "exact",
                    "passed",
                    "samples",
                    "elapsed",
                ],
                "properties": {
                    "identity": {"type": "string"},
                    "anchor": {"type": "string"},
                    "max_residual": {"type": ["string", "null"]},
                    "tolerance": {"type": ["string", "null"]},
                    "exact": {"type": "boolean"},
                    "passed": {"type": "boolean"},
                    "samples": {"type": "integer", "minimum": 0},
                    "elapsed": {"type": "string"},
                    "error": {"type": ["string", "null"]},
                },
            },
        },
    },
}


def _decimal(value) -> str | None:
    if value is None:
        return None
    return mpmath.nstr(mpmath.mpf(value), 6, min_fixed=-3, max_fixed=3)


@dataclass
class CheckRecord:
    """One verified identity: its worst residual (or exact verdict) and cost."""

    identity: str
    anchor: str
    max_residual: float | None
    passed: bool
    samples: int = 0
    elapsed: float = 0.0
    tolerance: float | None = None
    exact: bool = False
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "anchor": self.anchor,
            "max_residual": _decimal(self.max_residual),
            "tolerance": _decimal(self.tolerance),
            "exact": self.exact,
            "passed": self.passed,
            "samples": self.samples,
            "elapsed": f"{self.elapsed:.3f}",
            "error": self.error,
        }

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        if self.exact:
            detail = "exact"
        elif self.max_residual is None:
            detail = "no residual"
        else:
            detail = f"max residual {_decimal(self.max_residual)} (tol {_decimal(self.tolerance)})"
        if self.error:
            detail += f" [{self.error}]"
        return f"{verdict}  {self.identity:<44} {detail}  {self.elapsed:.2f}s"


@dataclass
class IdentityReport:
    suite: str
    config: dict[str, Any]
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def max_residual(self) -> float:
        values = [c.max_residual for c in self.checks if c.max_residual is not None]
        return max(values, default=0.0)

    def extend(self, other: "IdentityReport") -> None:
        self.checks.extend(other.checks)

    def to_json(self) -> dict:
        config = {k: (v if isinstance(v, (int, str, bool, list, type(None))) else str(v))
                  for k, v in self.config.items()}
        return {
            "suite": self.suite,
            "config": config,
            "checks": [c.to_json() for c in self.checks],
            "status": self.status,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def table(self) -> str:
        lines = [f"suite {self.suite}: {self.status.upper()}"]
        lines += ["  " + c.line() for c in self.checks]
        return "\n".join(lines)
