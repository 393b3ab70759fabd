"""Reference reclaimers: classic hazard pointers (fenced per-read publication),
classic hazard eras (fenced era publication), epoch-based reclamation, and the
no-reclamation ceiling.  They share the POP variants' slot arrays and
thresholds so benchmark comparisons isolate the publication mechanism."""

from __future__ import annotations

from .config import MAX, NONE_ERA
from .guards import GuardBase
from .he_pop import can_free, collect_shared_eras
from .hp_pop import collect_shared_handles


class ClassicHpGuard(GuardBase):
    """Every read stores straight to the shared slot and pays a store-load
    fence before the validating re-read; scans need no handshake because the
    shared slots are always current."""

    scheme = "hp"
    __slots__ = ()

    def end(self) -> None:
        shared = self._shared
        for i in range(len(shared)):
            shared[i] = None

    def protect_next(self, i: int, node):
        vr = self._visit
        if vr is not None:
            for _ in vr:
                pass
        shared = self._shared
        fr = self._fence
        w = node.next
        while True:
            shared[i] = w[0]
            if fr is not None:
                for _ in fr:
                    pass
            w2 = node.next
            if w2 is w:
                return w
            w = w2

    def retire(self, node) -> None:
        lst = self._append_retired(node)
        if len(lst) >= self._rf:
            self.reclaim_pass()

    def reclaim_pass(self) -> int:
        domain = self.domain
        slot = self.slot
        domain.drain_orphans(slot.retire_list)
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
        return getattr(node, "pinned", False) or any(r is node for r in self._shared)


class ClassicHeGuard(GuardBase):
    """Era reservation published (with a fence) whenever the global era moved
    since this slot's last publication."""

    scheme = "he"
    __slots__ = ()

    def end(self) -> None:
        seras = self._seras
        for i in range(len(seras)):
            seras[i] = NONE_ERA

    def protect_next(self, i: int, node):
        vr = self._visit
        if vr is not None:
            for _ in vr:
                pass
        seras = self._seras
        w = node.next
        g = self.domain.global_epoch
        if seras[i] == g:
            return w
        domain = self.domain
        fr = self._fence
        while True:
            seras[i] = g
            if fr is not None:
                for _ in fr:
                    pass
            w = node.next
            g2 = domain.global_epoch
            if g2 == g:
                return w
            g = g2

    def retire(self, node) -> None:
        node.retire_era = self.domain.global_epoch
        lst = self._append_retired(node)
        if len(lst) >= self._rf:
            self.reclaim_pass()

    def reclaim_pass(self) -> int:
        domain = self.domain
        slot = self.slot
        domain.drain_orphans(slot.retire_list)
        domain.advance_epoch()
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
        return any(e != NONE_ERA and b <= e <= r for e in self._seras)


class EbrGuard(GuardBase):
    """Textbook epoch-based reclamation; no per-node tracking, no fallback."""

    scheme = "ebr"
    __slots__ = ("_epoch_freq",)

    def __init__(self, domain, tid) -> None:
        super().__init__(domain, tid)
        self._epoch_freq = domain.config.epoch_freq

    def begin(self) -> None:
        slot = self.slot
        domain = self.domain
        slot.op_counter += 1
        if slot.op_counter % self._epoch_freq == 0:
            domain.advance_epoch()
        slot.reserved_epoch = domain.global_epoch

    def end(self) -> None:
        self.slot.reserved_epoch = MAX

    def protect_next(self, i: int, node):
        vr = self._visit
        if vr is not None:
            for _ in vr:
                pass
        return node.next

    def retire(self, node) -> None:
        node.retire_epoch = self.domain.global_epoch
        lst = self._append_retired(node)
        if len(lst) % self._rf == 0:
            self.reclaim_epoch_freeable()

    def reclaim_epoch_freeable(self) -> int:
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

    def _covered(self, node) -> bool:
        return getattr(node, "pinned", False) or self.slot.reserved_epoch != MAX


class NoReclaimGuard(GuardBase):
    """Leak everything; the throughput ceiling for comparisons."""

    scheme = "nr"
    __slots__ = ()

    def protect_next(self, i: int, node):
        vr = self._visit
        if vr is not None:
            for _ in vr:
                pass
        return node.next

    def retire(self, node) -> None:
        self._append_retired(node)

    def _covered(self, node) -> bool:
        return True
