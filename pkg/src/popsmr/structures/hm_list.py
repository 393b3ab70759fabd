"""Harris-Michael ordered-set list.

Deletion is two-phase: CAS the victim's next word to a marked tuple (logical
delete), then CAS it out of the predecessor (physical unlink).  Traversals help
unlink marked nodes they encounter; whichever thread wins the unlink CAS owns
the retire.  contains() is a read-only walk that never writes, so readers are
never forced to restart by reclaimers.
"""

from __future__ import annotations

import time

from .nodes import SetNode, make_sentinel, KEY_MIN, KEY_MAX


class HarrisMichaelList:
    name = "hml"

    def __init__(self, domain, tail: SetNode | None = None) -> None:
        self.domain = domain
        self.tail = tail if tail is not None else make_sentinel(KEY_MAX)
        if self.tail.next is None:
            self.tail.next = (None, False)
        self.head = make_sentinel(KEY_MIN)
        self.head.next = (self.tail, False)

    # Traversal with help-and-retire.  Slot roles rotate through {0,1,2} so the
    # predecessor and current node stay reserved while the successor is read.
    def _find(self, g, key: int):
        protect = g.protect_next
        cas = self.domain.cas_next
        head = self.head
        while True:
            sp, sc, sn = 0, 1, 2
            prev = head
            pw = protect(sc, prev)
            curr = pw[0]
            restart = False
            while True:
                cw = protect(sn, curr)
                succ, cmark = cw
                if cmark:
                    nw = (succ, False)
                    if not cas(prev, pw, nw):
                        restart = True
                        break
                    g.retire(curr)
                    pw = nw
                    curr = succ
                    sc, sn = sn, sc
                    continue
                ck = curr.key
                if ck >= key:
                    return prev, pw, curr, cw, ck == key
                prev = curr
                curr = succ
                pw = cw
                sp, sc, sn = sc, sn, sp
            if restart:
                continue

    def insert(self, g, key: int) -> bool:
        g.begin()
        try:
            domain = self.domain
            while True:
                prev, pw, curr, _cw, found = self._find(g, key)
                if found:
                    return False
                node = SetNode(key)
                domain.stamp_birth(node)
                node.next = (curr, False)
                if domain.cas_next(prev, pw, (node, False)):
                    return True
                domain.free_private(node)
        finally:
            g.end()

    def remove(self, g, key: int) -> bool:
        g.begin()
        try:
            domain = self.domain
            while True:
                prev, pw, curr, cw, found = self._find(g, key)
                if not found:
                    return False
                succ, cmark = cw
                if cmark:
                    continue
                if not domain.cas_next(curr, cw, (succ, True)):
                    continue
                if domain.cas_next(prev, pw, (succ, False)):
                    g.retire(curr)
                else:
                    self._find(g, key)  # helper unlinks and retires
                return True
        finally:
            g.end()

    def contains(self, g, key: int) -> bool:
        """Read-only search.  A marked node forces a restart: once a node is
        marked its next field may be a stale edge into already-reclaimed
        territory, so a traversal may only cross links observed unmarked.
        Marks are transient (the remover or a helping updater unlinks them);
        after a streak of restarts the reader yields so a descheduled remover
        can finish its unlink.  Readers never CAS and never retire."""
        g.begin()
        try:
            protect = g.protect_next
            head = self.head
            restarts = 0
            while True:
                w = protect(0, head)
                curr = w[0]
                si = 1
                while True:
                    cw = protect(si, curr)
                    ck = curr.key
                    if cw[1]:
                        break  # marked: restart from the head
                    if ck >= key:
                        return ck == key
                    curr = cw[0]
                    si = 1 - si
                restarts += 1
                if restarts % 8 == 0:
                    time.sleep(0)
        finally:
            g.end()

    # -- bulk/diagnostic helpers (not part of the concurrent surface) --------

    def prefill(self, keys) -> int:
        """Build the list directly from distinct keys (quiescent set-up only)."""
        domain = self.domain
        prev = self.head
        count = 0
        for key in sorted(keys):
            node = SetNode(key)
            domain.stamp_birth(node)
            node.next = (self.tail, False)
            prev.next = (node, False)
            prev = node
            count += 1
        return count

    def snapshot_keys(self) -> list[int]:
        """Quiescent-only walk of unmarked keys."""
        out = []
        curr = self.head.next[0]
        while curr is not self.tail:
            w = curr.next
            if not w[1]:
                out.append(curr.key)
            curr = w[0]
        return out
