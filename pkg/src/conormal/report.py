"""Shared check-report structure and its JSON serialization.

Every verification entry point returns a :class:`CheckReport`: a list of named
residual statistics plus a verdict.  A report passes only when every residual
maximum is below its tolerance and at most 10% of the sample points were
skipped (coordinate singularities are reported per point, not as global
failures).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

ARTIFACT_VERSION = "0.1.0"
REPORT_SCHEMA_VERSION = 1

MAX_SKIPPED_FRACTION = 0.10


@dataclass
class ConditionStat:
    """Aggregated residual statistics for one named condition."""

    name: str
    max: float
    mean: float
    count: int
    skipped: int = 0
    tolerance: float = 1e-8

    @property
    def passed(self) -> bool:
        if self.count == 0:
            return False
        total = self.count + self.skipped
        return (
            self.max < self.tolerance
            and self.skipped <= MAX_SKIPPED_FRACTION * total
        )

    @property
    def inconclusive(self) -> bool:
        total = self.count + self.skipped
        return total == 0 or self.skipped > MAX_SKIPPED_FRACTION * total


class ResidualAccumulator:
    """Builds a ConditionStat from per-point residual magnitudes."""

    def __init__(self, name: str, tolerance: float):
        self.name = name
        self.tolerance = tolerance
        self._max = 0.0
        self._sum = 0.0
        self._count = 0
        self._skipped = 0

    def add(self, value: float):
        value = abs(float(value))
        if value > self._max:
            self._max = value
        self._sum += value
        self._count += 1

    def skip(self):
        self._skipped += 1

    def stat(self) -> ConditionStat:
        mean = self._sum / self._count if self._count else 0.0
        return ConditionStat(
            name=self.name,
            max=self._max,
            mean=mean,
            count=self._count,
            skipped=self._skipped,
            tolerance=self.tolerance,
        )


@dataclass
class CheckReport:
    """Named residuals with max/mean over a sample set, plus a verdict."""

    title: str
    conditions: list
    verdict: str = "fail"  # pass | fail | inconclusive
    seed: int | None = None
    command: list | None = None
    notes: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def condition(self, name: str) -> ConditionStat:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "artifact_version": ARTIFACT_VERSION,
            "title": self.title,
            "command": self.command,
            "seed": self.seed,
            "conditions": [
                {
                    "name": c.name,
                    "max": c.max,
                    "mean": c.mean,
                    "count": c.count,
                    "skipped": c.skipped,
                    "tolerance": c.tolerance,
                }
                for c in self.conditions
            ],
            "notes": self.notes,
            "verdict": self.verdict,
            "wall_time": self.wall_time,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def summary_lines(self) -> list:
        width = max((len(c.name) for c in self.conditions), default=4)
        lines = [f"# {self.title}"]
        for c in self.conditions:
            mark = "pass" if c.passed else ("skip" if c.inconclusive else "FAIL")
            lines.append(
                f"  {c.name:<{width}}  max={c.max:.3e}  mean={c.mean:.3e}  "
                f"n={c.count}  skipped={c.skipped}  tol={c.tolerance:.1e}  [{mark}]"
            )
        lines.append(f"verdict: {self.verdict}")
        return lines


def finalize_report(title, accumulators, seed=None, notes=None) -> CheckReport:
    """Aggregate accumulators into a report with the standard verdict policy."""
    conditions = [acc.stat() for acc in accumulators]
    if any(c.inconclusive for c in conditions):
        verdict = "inconclusive"
    elif all(c.passed for c in conditions):
        verdict = "pass"
    else:
        verdict = "fail"
    return CheckReport(
        title=title,
        conditions=conditions,
        verdict=verdict,
        seed=seed,
        notes=notes or {},
    )
