"""Named pass/fail checks collected by validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    violations: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        d = {"name": self.name, "passed": self.passed, "violations": self.violations}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def record(self, name: str, witnesses: list, detail: str = "") -> Check:
        """Add a check that passes iff ``witnesses`` is empty; keeps the first one."""
        c = Check(name, not witnesses, witnesses[0] if witnesses else None, len(witnesses), detail)
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    return x
