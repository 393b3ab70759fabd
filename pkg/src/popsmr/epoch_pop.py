"""Dual-mode reclaimer: epoch-based freeing on the common path, with privately
tracked pointer reservations so a ping handshake can unblock reclamation when a
delayed thread pins the epoch.  No global mode switch: different threads can
free via either path concurrently."""

from __future__ import annotations

from .config import MAX
from .guards import GuardBase
from .hp_pop import collect_shared_handles
from .pingbus import maybe_publish_self, run_handshake


class EpochPopGuard(GuardBase):
    scheme = "epoch-pop"
    uses_ping = True
    __slots__ = ("_epoch_freq", "_fallback_at")

    def __init__(self, domain, tid) -> None:
        super().__init__(domain, tid)
        self._epoch_freq = domain.config.epoch_freq
        self._fallback_at = domain.config.fallback_threshold

    def begin(self) -> None:
        slot = self.slot
        domain = self.domain
        slot.op_counter += 1
        if slot.op_counter % self._epoch_freq == 0:
            domain.advance_epoch()
        slot.reserved_epoch = domain.global_epoch
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(domain, slot)

    def end(self) -> None:
        slot = self.slot
        slot.reserved_epoch = MAX
        self.clear()
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)

    # Same fence-free reserve-and-validate loop as hp-pop.
    def protect_next(self, i: int, node):
        vr = self._visit
        if vr is not None:
            for _ in vr:
                pass
        local = self._local
        w = node.next
        local[i] = w[0]
        if node.next is w:
            return w
        slot = self.slot
        domain = self.domain
        while True:
            if slot.ping_pending != slot.ping_served:
                maybe_publish_self(domain, slot)
            w = node.next
            local[i] = w[0]
            if node.next is w:
                return w

    def retire(self, node) -> None:
        node.retire_epoch = self.domain.global_epoch
        lst = self._append_retired(node)
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)
        if len(lst) % self._rf == 0:
            self.reclaim_epoch_freeable()
            if len(slot.retire_list) >= self._fallback_at:
                # Some thread reserving an older epoch has apparently been
                # delayed; ping everyone and fall back to pointer scanning.
                run_handshake(self.domain, self.tid)
                self._scan_and_free_hp()

    def reclaim_epoch_freeable(self) -> int:
        """Free everything retired strictly before the minimum announced epoch.
        Never reads reservation slots (they may be stale on this path)."""
        domain = self.domain
        slot = self.slot
        domain.drain_orphans(slot.retire_list)
        m = MAX
        for s in domain.slots:
            if s.active:
                e = s.reserved_epoch
                if e < m:
                    m = e
        keep = []
        freed = 0
        for n in slot.retire_list:
            if n.retire_epoch < m:
                domain.free_node(n, slot)
                freed += 1
            else:
                keep.append(n)
        slot.retire_list = keep
        return freed

    def _scan_and_free_hp(self) -> int:
        domain = self.domain
        slot = self.slot
        reserved = collect_shared_handles(domain)
        keep = []
        freed = 0
        for n in slot.retire_list:
            if id(n) in reserved:
                keep.append(n)
            else:
                domain.free_node(n, slot)
                freed += 1
        slot.retire_list = keep
        return freed

    def _covered(self, node) -> bool:
        return (getattr(node, "pinned", False)
                or self.slot.reserved_epoch != MAX
                or any(r is node for r in self._local))
