from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    count: int | None = None

    def as_dict(self) -> dict:
        d: dict = {"name": self.name, "pass": bool(self.passed)}
        if self.count is not None:
            d["count"] = self.count
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name: str, passed: bool, witness=None, count=None) -> Check:
        c = Check(name, passed, witness, count)
        self.checks.append(c)
        return c
