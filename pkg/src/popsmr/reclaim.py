"""Scheme registry plus debug-checked guard variants.

Debug guards layer dereference checks (freed-node canary, covering-reservation
assertion), non-reentrancy tracking and double-retire detection over the hot
paths; the release classes stay branch-free.
"""

from __future__ import annotations

from .config import LIVE
from .classic import ClassicHeGuard, ClassicHpGuard, EbrGuard, NoReclaimGuard
from .domain import ReclamationDomain
from .epoch_pop import EpochPopGuard
from .he_pop import HePopGuard
from .hp_pop import HpPopGuard


class DebugMixin:
    __slots__ = ()

    def begin(self):
        assert not self._in_op, f"{self.scheme}: guard session is not reentrant"
        self._in_op = True
        super().begin()

    def end(self):
        assert self._in_op, f"{self.scheme}: end() without begin()"
        self._in_op = False
        super().end()

    def protect_next(self, i, node):
        self._check_deref(node)
        return super().protect_next(i, node)

    def retire(self, node):
        assert not node.freed, f"{self.scheme}: retiring a freed node"
        assert node.retire_epoch == LIVE and node.retire_era == LIVE, (
            f"{self.scheme}: node retired twice"
        )
        node.retire_epoch = self.domain.global_epoch
        super().retire(node)


class DebugNoReclaimGuard(DebugMixin, NoReclaimGuard):
    __slots__ = ()


class DebugClassicHpGuard(DebugMixin, ClassicHpGuard):
    __slots__ = ()


class DebugClassicHeGuard(DebugMixin, ClassicHeGuard):
    __slots__ = ()


class DebugEbrGuard(DebugMixin, EbrGuard):
    __slots__ = ()


class DebugHpPopGuard(DebugMixin, HpPopGuard):
    __slots__ = ()


class DebugHePopGuard(DebugMixin, HePopGuard):
    __slots__ = ()


class DebugEpochPopGuard(DebugMixin, EpochPopGuard):
    __slots__ = ()


GUARDS = {
    "nr": NoReclaimGuard,
    "hp": ClassicHpGuard,
    "he": ClassicHeGuard,
    "ebr": EbrGuard,
    "hp-pop": HpPopGuard,
    "he-pop": HePopGuard,
    "epoch-pop": EpochPopGuard,
}

DEBUG_GUARDS = {
    "nr": DebugNoReclaimGuard,
    "hp": DebugClassicHpGuard,
    "he": DebugClassicHeGuard,
    "ebr": DebugEbrGuard,
    "hp-pop": DebugHpPopGuard,
    "he-pop": DebugHePopGuard,
    "epoch-pop": DebugEpochPopGuard,
}

RECLAIMER_NAMES = tuple(GUARDS)

#: Recognized in CLIs and CSV schemas but deliberately unimplemented.
STUBBED_RECLAIMERS = ("hp-asym",)


def make_guard(domain: ReclamationDomain, scheme: str, tid: int):
    """Bind a per-thread guard session for the given scheme."""
    if scheme in STUBBED_RECLAIMERS:
        raise NotImplementedError(
            f"reclaimer {scheme!r} is a recognized name but is not implemented "
            "(requires a process-wide membarrier; out of scope)"
        )
    table = DEBUG_GUARDS if domain.debug else GUARDS
    try:
        cls = table[scheme]
    except KeyError:
        raise ValueError(f"unknown reclaimer {scheme!r}; choose from {RECLAIMER_NAMES}") from None
    return cls(domain, tid)
