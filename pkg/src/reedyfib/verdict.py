"""Three-valued results for semi-decidable checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable


class Status(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    ``Holds`` and ``Fails`` carry a JSON-able ``evidence`` payload (a
    certificate or a witness); ``Unknown`` carries only a ``reason``.
    ``bound`` records the truncation the answer is qualified by.
    """

    status: Status
    evidence: Any = None
    reason: str | None = None
    bound: tuple | None = None

    def __post_init__(self) -> None:
        if self.status is Status.UNKNOWN:
            if self.evidence is not None:
                raise ValueError("Unknown verdicts carry no evidence")
        elif self.evidence is None:
            raise ValueError(f"{self.status.value} verdict needs evidence")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    @property
    def decided(self) -> bool:
        return self.status is not Status.UNKNOWN

    def with_bound(self, bound) -> "Verdict":
        return Verdict(self.status, self.evidence, self.reason, tuple(bound) if bound is not None else None)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status.value}
        if self.evidence is not None:
            out["evidence"] = self.evidence
        if self.reason is not None:
            out["reason"] = self.reason
        if self.bound is not None:
            out["bound"] = list(self.bound)
        return out

    def __repr__(self) -> str:
        tail = self.reason if self.unknown else _short(self.evidence)
        return f"{self.status.value}({tail})"


def _short(x: Any, n: int = 80) -> str:
    s = repr(x)
    return s if len(s) <= n else s[: n - 3] + "..."


def holds(evidence: Any, bound=None) -> Verdict:
    return Verdict(Status.HOLDS, evidence=evidence, bound=tuple(bound) if bound is not None else None)


def fails(evidence: Any, bound=None) -> Verdict:
    return Verdict(Status.FAILS, evidence=evidence, bound=tuple(bound) if bound is not None else None)


def unknown(reason: str, bound=None) -> Verdict:
    return Verdict(Status.UNKNOWN, reason=reason, bound=tuple(bound) if bound is not None else None)


def meet(verdicts: Iterable[tuple[str, Verdict]], bound=None) -> Verdict:
    """Fails if any part fails, Unknown if any part is undecided, else Holds.

    The first failing (or undecided) part is reported.
    """
    items = list(verdicts)
    for name, v in items:
        if v.fails:
            return fails({"part": name, "witness": v.evidence}, bound)
    for name, v in items:
        if v.unknown:
            return unknown(f"{name}: {v.reason}", bound)
    return holds({"parts": [name for name, _ in items]}, bound)


@dataclass
class FibrationReport:
    """Per-condition verdicts of a fibration check, merged by :func:`meet`."""

    kind: str
    bounds: tuple
    parts: list[tuple[str, Verdict]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, v: Verdict) -> Verdict:
        self.parts.append((name, v))
        return v

    @property
    def verdict(self) -> Verdict:
        return meet(self.parts, self.bounds)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "bounds": list(self.bounds),
            "verdict": self.verdict.to_json(),
            "parts": [{"name": n, **v.to_json()} for n, v in self.parts],
            "notes": list(self.notes),
        }
