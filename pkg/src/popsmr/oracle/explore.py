"""Exhaustive breadth-first exploration of a protocol model.

BFS over the interleaving graph with visited-state hashing; a violating state
yields a shortest (minimal) trace reconstructed from parent links.  A state
with no enabled transition before all threads finished is reported as a
deadlock.  The search aborts once the visited-state budget is exceeded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .model import ModelBase


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int) -> None:
        super().__init__(f"state-space budget of {budget} states exceeded")
        self.budget = budget


@dataclass
class ExploreResult:
    verdict: str                 # "SAFE" | "UNSAFE" | "DEADLOCK"
    states: int
    trace: list[str] = field(default_factory=list)
    detail: str = ""

    @property
    def safe(self) -> bool:
        return self.verdict == "SAFE"


def _trace_to(state, parents) -> list[str]:
    out = []
    while True:
        prev = parents[state]
        if prev is None:
            break
        state, label = prev
        out.append(label)
    out.reverse()
    return out


def explore(model: ModelBase, budget: int = 10_000_000) -> ExploreResult:
    init = model.initial()
    parents = {init: None}
    queue = deque([init])
    transitions = model.transitions
    violation = model.violation
    done = model.done

    while queue:
        state = queue.popleft()
        steps = transitions(state)
        if not steps:
            if not done(state):
                return ExploreResult(
                    verdict="DEADLOCK",
                    states=len(parents),
                    trace=_trace_to(state, parents),
                    detail="no enabled step before all threads finished",
                )
            continue
        for label, nxt in steps:
            if nxt in parents:
                continue
            parents[nxt] = (state, label)
            bad = violation(nxt)
            if bad:
                return ExploreResult(
                    verdict="UNSAFE",
                    states=len(parents),
                    trace=_trace_to(nxt, parents),
                    detail=bad,
                )
            if len(parents) > budget:
                raise BudgetExceeded(budget)
            queue.append(nxt)

    return ExploreResult(verdict="SAFE", states=len(parents))
