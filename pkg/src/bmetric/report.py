"""Pass/fail bookkeeping shared by validation, classification and verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .tensor import Index, Tensor, first_difference


@dataclass
class Check:
    name: str
    passed: bool
    witness: Index | None = None  # 0-based frame indices of a failing component
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = [i + 1 for i in self.witness]
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.detail))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
        }


def identity(name: str, lhs: Tensor, rhs: Tensor) -> Check:
    """Exact component-wise comparison, recording where it first breaks."""
    where = first_difference(lhs, rhs)
    if where is None:
        return Check(name, True)
    diff = lhs[where] - rhs[where]
    return Check(name, False, where, f"lhs - rhs = {diff}")


def vanishes(name: str, t: Tensor) -> Check:
    for idx, x in t.items():
        if x:
            return Check(name, False, idx, f"component = {x}")
    return Check(name, True)
