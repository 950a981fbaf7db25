from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple = ()
    detail: str = ""

    def __str__(self):
        w = ", ".join(repr(x) for x in self.witness)
        s = f"{self.law} violated"
        if w:
            s += f" at ({w})"
        if self.detail:
            s += f": {self.detail}"
        return s


@dataclass(frozen=True)
class Report:
    """Outcome of a law check.  Truthy iff no violation was found."""

    violations: tuple[Violation, ...] = ()
    info: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations[:5]) + (
            f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        )

    @classmethod
    def collect(cls, violations: Iterable[Violation], first_only=False, **info: Any) -> "Report":
        if first_only:
            v = next(iter(violations), None)
            return cls(() if v is None else (v,), info)
        return cls(tuple(violations), info)
