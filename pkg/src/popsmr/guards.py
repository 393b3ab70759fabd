"""Uniform per-thread guard interface implemented by every reclamation scheme.

A guard is the per-thread facade a data structure talks to: begin/end bracket
one operation, protect_next performs one guarded read of a node's next word,
and retire hands over an unlinked node.  Next words are (successor, marked)
tuples; a mark flip replaces the tuple, so identity comparison of words doubles
as the full-raw-word validation check while reservation slots always receive
the untagged node.
"""

from __future__ import annotations

from .domain import ReclamationDomain, ThreadSlot


class GuardBase:
    """State shared by all schemes; subclasses add the scheme's hot paths."""

    scheme = "?"
    uses_ping = False

    __slots__ = ("domain", "slot", "tid", "_local", "_shared", "_leras", "_seras",
                 "_rf", "_visit", "_fence", "_cas", "_in_op")

    def __init__(self, domain: ReclamationDomain, tid: int) -> None:
        self._in_op = False
        self.domain = domain
        self.slot: ThreadSlot = domain.slots[tid]
        self.tid = tid
        self._local = self.slot.local_res
        self._shared = self.slot.shared_res
        self._leras = self.slot.local_eras
        self._seras = self.slot.shared_eras
        self._rf = domain.config.reclaim_freq
        self._visit = domain.visit_range
        self._fence = domain.fence_range
        self._cas = domain.cas_next

    # Operation brackets; schemes override what they need.
    def begin(self) -> None:
        pass

    def end(self) -> None:
        pass

    def clear(self) -> None:
        """Drop local reservations; shared slots go stale until the next publish."""
        local = self._local
        for i in range(len(local)):
            local[i] = None

    # -- retire bookkeeping shared by all schemes ---------------------------

    def _append_retired(self, node) -> list:
        slot = self.slot
        lst = slot.retire_list
        lst.append(node)
        slot.retired += 1
        n = len(lst)
        if n > slot.peak_retire:
            slot.peak_retire = n
        return lst

    # -- debug support -------------------------------------------------------

    def _covered(self, node) -> bool:
        """Debug-only: is a dereference of node covered by this guard?"""
        raise NotImplementedError

    def _check_deref(self, node) -> None:
        self.domain.check_deref(node)
        if not self._covered(node):
            raise AssertionError(
                f"{self.scheme}: dereference of {node!r} without covering reservation"
            )
