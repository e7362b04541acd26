"""Residual records shared by every check in the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        # NaN residuals never pass
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "residual": _jsonable(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class Report:
    """A named bundle of checks; passes iff every check passes.

    ``flags`` carries observations that are worth surfacing but do not
    affect the verdict; ``data`` carries auxiliary numbers (decay
    certificates, horizons, extracted values).
    """

    name: str
    checks: list[Check] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, residual: float, tolerance: float) -> Check:
        check = Check(name, float(residual), float(tolerance))
        self.checks.append(check)
        return check

    def bound(self, name: str, value: float, limit: float, slack: float) -> Check:
        """Record ``value <= limit`` as a check whose residual is the excess."""
        return self.add(name, max(0.0, float(value) - limit), slack)

    def extend(self, other: Report, prefix: str | None = None) -> None:
        pre = f"{prefix or other.name}." if (prefix or other.name) else ""
        for c in other.checks:
            self.checks.append(Check(pre + c.name, c.residual, c.tolerance))
        self.flags.extend(other.flags)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "checks": [c.to_dict() for c in self.checks],
            "flags": list(self.flags),
            "pass": self.passed,
        }

    def summary(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            mark = "ok " if c.passed else "BAD"
            lines.append(f"  [{mark}] {c.name}: {c.residual:.3e} (tol {c.tolerance:.1e})")
        lines.extend(f"  flag: {f}" for f in self.flags)
        return "\n".join(lines)


def _jsonable(x: float) -> float | str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x
