"""Pass/fail records produced by the verification sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

# Counterexamples kept per report; the failure count is always exact.
MAX_COUNTEREXAMPLES = 100


@dataclass(frozen=True)
class Sampled:
    seed: int
    count: int

    def __str__(self) -> str:
        return f"sampled(seed={self.seed}, count={self.count})"


FULL = "full"


@dataclass(frozen=True)
class Counterexample:
    input: Any
    relation: str
    observed: Any


@dataclass
class Report:
    """Outcome of checking one claim over a range of inputs.

    ``passed`` is derived: a report passes exactly when no counterexample was
    recorded. ``info`` carries non-asserted observations (thresholds, witness
    lists, tables) that a caller may want to print.
    """

    claim_id: str
    checked_range: str
    strategy: str = FULL
    checked: int = 0
    failures: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)
    failures_by_relation: dict[str, int] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def check(self, ok: bool, input: Any, relation: str, observed: Any = None) -> bool:
        self.checked += 1
        if not ok:
            self.failures += 1
            self.failures_by_relation[relation] = self.failures_by_relation.get(relation, 0) + 1
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(Counterexample(input, relation, observed))
        return ok

    def merge(self, other: Report) -> Report:
        if other.claim_id != self.claim_id or other.strategy != self.strategy:
            raise ValueError(
                f"cannot merge {self.claim_id}/{self.strategy} with {other.claim_id}/{other.strategy}"
            )
        by_relation = dict(self.failures_by_relation)
        for rel, count in other.failures_by_relation.items():
            by_relation[rel] = by_relation.get(rel, 0) + count
        room = MAX_COUNTEREXAMPLES - len(self.counterexamples)
        return Report(
            claim_id=self.claim_id,
            checked_range=f"{self.checked_range}, {other.checked_range}",
            strategy=self.strategy,
            checked=self.checked + other.checked,
            failures=self.failures + other.failures,
            counterexamples=self.counterexamples + other.counterexamples[:max(room, 0)],
            failures_by_relation=by_relation,
            info={**self.info, **other.info},
        )

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CLAIM {self.claim_id} {status} checked={self.checked}"
