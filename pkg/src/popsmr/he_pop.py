"""Hazard eras with publish-on-ping: era values are reserved locally without
fencing; a node is freeable when no published era falls inside its lifespan."""

from __future__ import annotations

from .config import NONE_ERA
from .guards import GuardBase
from .pingbus import maybe_publish_self, run_handshake


def can_free(birth_era: int, retire_era: int, collected) -> bool:
    """True iff no collected era e satisfies birth_era <= e <= retire_era.

    NONE_ERA is the maximum counter value, so quiescent slots compare above any
    real retire era and fall out without a special case.
    """
    for e in collected:
        if birth_era <= e <= retire_era:
            return False
    return True


def collect_shared_eras(domain) -> list[int]:
    eras = set()
    for s in domain.slots:
        if not s.active:
            continue
        for e in s.shared_eras:
            if e != NONE_ERA:
                eras.add(e)
    return list(eras)


class HePopGuard(GuardBase):
    scheme = "he-pop"
    uses_ping = True
    __slots__ = ()

    def begin(self) -> None:
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)

    def end(self) -> None:
        leras = self._leras
        for i in range(len(leras)):
            leras[i] = NONE_ERA
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)

    def protect_next(self, i: int, node):
        vr = self._visit
        if vr is not None:
            for _ in vr:
                pass
        leras = self._leras
        w = node.next
        g = self.domain.global_epoch
        if leras[i] == g:
            return w
        domain = self.domain
        while True:
            leras[i] = g
            w = node.next
            g2 = domain.global_epoch
            if g2 == g:
                return w
            g = g2

    def retire(self, node) -> None:
        node.retire_era = self.domain.global_epoch
        lst = self._append_retired(node)
        slot = self.slot
        if slot.ping_pending != slot.ping_served:
            maybe_publish_self(self.domain, slot)
        if len(lst) >= self._rf:
            self.reclaim_pass()

    def reclaim_pass(self) -> int:
        domain = self.domain
        slot = self.slot
        domain.drain_orphans(slot.retire_list)
        domain.advance_epoch()
        run_handshake(domain, self.tid)
        return self._scan_and_free()

    def _scan_and_free(self) -> int:
        domain = self.domain
        slot = self.slot
        eras = collect_shared_eras(domain)
        keep = []
        freed = 0
        for n in slot.retire_list:
            if can_free(n.birth_era, n.retire_era, eras):
                domain.free_node(n, slot)
                freed += 1
            else:
                keep.append(n)
        slot.retire_list = keep
        return freed

    def _covered(self, node) -> bool:
        if getattr(node, "pinned", False):
            return True
        b = node.birth_era
        r = node.retire_era
        return any(e != NONE_ERA and b <= e <= r for e in self._leras)
