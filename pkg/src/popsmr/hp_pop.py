"""Hazard pointers with publish-on-ping: fence-free local reservation in the
read path, full handshake only when a retire-list threshold is crossed."""

from __future__ import annotations

from .guards import GuardBase
from .pingbus import maybe_publish_self, run_handshake


def collect_shared_handles(domain) -> set:
    """Union of every active thread's published reservation slots."""
    res = set()
    for s in domain.slots:
        if not s.active:
            continue
        for v in s.shared_res:
            if v is not None:
                res.add(id(v))
    return res


class HpPopGuard(GuardBase):
    scheme = "hp-pop"
    uses_ping = True
    __slots__ = ()

    def begin(self) -> None:
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)

    def end(self) -> None:
        self.clear()
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)

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
        # Contended: keep re-reserving until the word is stable across the
        # validating re-read.  Cold path, so also serve any pending ping.
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
        lst = self._append_retired(node)
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)
        if len(lst) >= self._rf:
            self.reclaim_pass()

    def reclaim_pass(self) -> int:
        """Handshake, then free everything not present in any published slot."""
        domain = self.domain
        slot = self.slot
        domain.drain_orphans(slot.retire_list)
        run_handshake(domain, self.tid)
        return self._scan_and_free()

    def _scan_and_free(self) -> int:
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
        return getattr(node, "pinned", False) or any(r is node for r in self._local)
