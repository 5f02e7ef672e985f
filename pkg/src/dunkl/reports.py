"""Pass/fail reports emitted by every verification routine."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class Check:
    name: str
    identity: str
    passed: bool
    detail: str = ""
    error: float | None = None
    tolerance: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{status}  {self.name}  [{self.identity}]"]
        if self.error is not None:
            parts.append(f"err={self.error:.3e}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:.1e}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, identity, passed, detail="", error=None, tolerance=None) -> Check:
        c = Check(name, identity, bool(passed), detail,
                  None if error is None else float(error),
                  None if tolerance is None else float(tolerance))
        self.checks.append(c)
        return c

    def extend(self, other: Report) -> Report:
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list:
        return [c.line() for c in self.checks]

    def text(self) -> str:
        head = f"== {self.title}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks)"
        return "\n".join([head] + self.lines())

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def __bool__(self):
        return self.passed

    def __str__(self):
        return self.text()
