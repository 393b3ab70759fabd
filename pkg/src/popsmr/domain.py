"""Thread registry, per-thread reservation state and the shared epoch/era clock.

A ReclamationDomain is created once per workload and shared by every
participating thread.  Per-slot fields are single-writer multi-reader: only the
owning thread (or the ping bus acting as the signal-delivery mechanism) writes
them.  Under CPython's GIL each individual slot read/write is atomic, which is
the visibility model the rest of the package relies on.
"""

from __future__ import annotations

import signal as _signal
import threading
from typing import Any

from .config import MAX, NONE_ERA, LIVE, DomainConfig
from .oracle.debug_alloc import DebugAllocator

SKIP = -1


def _ping_noop(_signum, _frame) -> None:
    # The Python-level handler always runs on the main thread, so the publish
    # semantics ride the token bus; the OS delivery only exists for fidelity
    # and zombie detection.
    return None


class CapacityError(RuntimeError):
    """All max_threads slots are active."""


class ReclaimableNode:
    """Header carried by every node a reclaimer may destroy.

    birth_era/retire_era bracket the node's reachable lifespan (era schemes);
    freed is a debug canary that every dereference may be checked against.
    """

    __slots__ = ("birth_era", "retire_era", "retire_epoch", "freed")

    def __init__(self) -> None:
        self.birth_era = 0
        self.retire_era = LIVE
        self.retire_epoch = LIVE
        self.freed = False


class ThreadSlot:
    """Reservation state owned by one registered thread."""

    __slots__ = (
        "tid", "active", "os_ident", "thread",
        "local_res", "shared_res", "local_eras", "shared_eras",
        "publish_counter", "reserved_epoch", "op_counter",
        "retire_list", "retired", "freed", "peak_retire",
        "ping_pending", "ping_served", "handler_runs", "signals_sent",
    )

    def __init__(self, tid: int, max_hp: int) -> None:
        self.tid = tid
        self.active = False
        self.os_ident: int | None = None
        self.thread: threading.Thread | None = None
        self.local_res: list[Any] = [None] * max_hp
        self.shared_res: list[Any] = [None] * max_hp
        self.local_eras: list[int] = [NONE_ERA] * max_hp
        self.shared_eras: list[int] = [NONE_ERA] * max_hp
        self.publish_counter = 0
        self.reserved_epoch = MAX
        self.op_counter = 0
        self.retire_list: list[Any] = []
        self.retired = 0
        self.freed = 0
        self.peak_retire = 0
        self.ping_pending = 0   # tokens written by pingers
        self.ping_served = 0    # tokens consumed by publishes
        self.handler_runs = 0
        self.signals_sent = 0

    def reset_for_registration(self) -> None:
        for i in range(len(self.local_res)):
            self.local_res[i] = None
            self.shared_res[i] = None
            self.local_eras[i] = NONE_ERA
            self.shared_eras[i] = NONE_ERA
        self.reserved_epoch = MAX
        # publish_counter deliberately survives slot recycling (monotone).


class ReclamationDomain:
    """Registry of participating threads plus the shared epoch/era counter."""

    def __init__(self, config: DomainConfig | None = None) -> None:
        self.config = config or DomainConfig()
        self.slots = [ThreadSlot(t, self.config.max_hp) for t in range(self.config.max_threads)]
        self.global_epoch = 0
        self._epoch_lock = threading.Lock()
        self._registry_lock = threading.Lock()
        self._cas_lock = threading.Lock()
        self._orphans: list[Any] = []
        self._orphan_lock = threading.Lock()
        self.allocated = 0
        self.freed_private = 0
        self.debug = self.config.debug
        self.allocator = DebugAllocator(self.config.quarantine_depth) if self.debug else None
        # Cost-model spin ranges (see README); None disables the inline loop.
        self.fence_range = range(self.config.fence_spins) if self.config.fence_spins > 0 else None
        self.visit_range = range(self.config.visit_spins) if self.config.visit_spins > 0 else None
        if self.config.transport == "os-signal":
            try:
                _signal.signal(self.config.signal_id, _ping_noop)
            except ValueError:
                # Not the main thread; the embedder must have installed a
                # handler already or the default disposition would kill us.
                pass

    # -- registry ----------------------------------------------------------

    def register_thread(self) -> int:
        """Claim a dense index for the calling thread; its OS identity is recorded
        so pings can target it."""
        me = threading.current_thread()
        with self._registry_lock:
            for slot in self.slots:
                if not slot.active:
                    slot.reset_for_registration()
                    slot.os_ident = me.ident
                    slot.thread = me
                    slot.active = True
                    return slot.tid
        raise CapacityError(f"all {self.config.max_threads} thread slots are active")

    def deregister_thread(self, tid: int) -> None:
        """Idempotent.  Shared reservations are nulled before the slot goes
        inactive so a concurrent scan never sees a stale reservation from a
        thread that reclaimers are about to skip.  Any leftover retire list
        moves to the orphan list and is drained by the next reclamation pass."""
        slot = self.slots[tid]
        if not slot.active:
            return
        for i in range(len(slot.shared_res)):
            slot.shared_res[i] = None
            slot.shared_eras[i] = NONE_ERA
        slot.reserved_epoch = MAX
        if slot.retire_list:
            with self._orphan_lock:
                self._orphans.extend(slot.retire_list)
            slot.retire_list = []
        slot.active = False
        with self._registry_lock:
            slot.thread = None
            slot.os_ident = None

    def active_slots(self) -> list[ThreadSlot]:
        return [s for s in self.slots if s.active]

    # -- epoch/era clock ---------------------------------------------------

    def advance_epoch(self) -> int:
        """Atomic increment; returns the new value."""
        with self._epoch_lock:
            self.global_epoch += 1
            return self.global_epoch

    # -- node lifecycle ----------------------------------------------------

    def stamp_birth(self, node: ReclaimableNode) -> None:
        node.birth_era = self.global_epoch
        node.retire_era = LIVE
        node.retire_epoch = LIVE
        node.freed = False
        self.allocated += 1
        if self.allocator is not None:
            self.allocator.note_alloc(node)

    def free_node(self, node: ReclaimableNode, slot: ThreadSlot) -> None:
        """Destroy a retired node (reclamation passes only)."""
        slot.freed += 1
        if self.allocator is not None:
            self.allocator.free(node)
        else:
            node.freed = True

    def free_private(self, node: ReclaimableNode) -> None:
        """Destroy a node that was never linked (failed insert)."""
        self.freed_private += 1
        if self.allocator is not None:
            self.allocator.free(node)
        else:
            node.freed = True

    def check_deref(self, node: Any) -> None:
        if self.allocator is not None:
            self.allocator.check_access(node)

    # -- orphans -----------------------------------------------------------

    def drain_orphans(self, into: list[Any]) -> int:
        if not self._orphans:
            return 0
        with self._orphan_lock:
            taken = self._orphans
            self._orphans = []
        into.extend(taken)
        return len(taken)

    @property
    def orphan_count(self) -> int:
        return len(self._orphans)

    # -- atomic word update for tagged next-cells ---------------------------

    def cas_next(self, node: Any, expected: tuple, new: tuple) -> bool:
        """Compare-and-swap on a node's next word (identity compare)."""
        with self._cas_lock:
            if node.next is expected:
                node.next = new
                return True
            return False

    # -- accounting --------------------------------------------------------

    def total_retired(self) -> int:
        return sum(s.retired for s in self.slots)

    def total_freed(self) -> int:
        return sum(s.freed for s in self.slots)

    def total_unreclaimed(self) -> int:
        return sum(len(s.retire_list) for s in self.slots) + len(self._orphans)

    def total_signals_sent(self) -> int:
        return sum(s.signals_sent for s in self.slots)

    def total_handler_runs(self) -> int:
        return sum(s.handler_runs for s in self.slots)

    def assert_conservation(self) -> None:
        """retired == freed-from-retired + still-listed (+ orphans); checked at
        quiescent points by tests."""
        listed = self.total_unreclaimed()
        retired = self.total_retired()
        freed = self.total_freed()
        if retired != freed + listed:
            raise AssertionError(
                f"retire accounting broken: retired={retired} freed={freed} listed={listed}"
            )
