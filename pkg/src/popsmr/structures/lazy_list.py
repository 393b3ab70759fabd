"""Lazy ordered-set list: optimistic traversal, per-node locks for updates,
read-only contains.  The marked flag is a plain field (set under the node's
lock before unlinking), so readers observing a marked node treat it as absent
and never cross its outgoing edge."""

from __future__ import annotations

import time

from .nodes import SetNode, make_sentinel, KEY_MIN, KEY_MAX


class LazyList:
    name = "ll"

    def __init__(self, domain) -> None:
        self.domain = domain
        self.tail = make_sentinel(KEY_MAX, with_lock=True)
        self.tail.next = (None, False)
        self.head = make_sentinel(KEY_MIN, with_lock=True)
        self.head.next = (self.tail, False)

    def _walk(self, g, key: int):
        """Protected traversal to (pred, curr) with pred.key < key <= curr.key.

        The marked flag is re-checked after each protected read: a node
        observed unmarked at that point was still reachable, so the successor
        just read from it was reachable too.  Seeing a mark means the next
        edge may be stale, and the walk restarts from the head."""
        protect = g.protect_next
        head = self.head
        restarts = 0
        while True:
            pred = head
            w = protect(0, pred)
            curr = w[0]
            si = 1
            restart = False
            while curr.key < key:
                cw = protect(si, curr)
                if curr.marked:
                    restart = True
                    break
                pred = curr
                curr = cw[0]
                si = 1 - si
            if not restart:
                return pred, curr
            restarts += 1
            if restarts % 8 == 0:
                time.sleep(0)  # let a descheduled remover finish its unlink

    @staticmethod
    def _validate(pred: SetNode, curr: SetNode) -> bool:
        return (not pred.marked) and (not curr.marked) and pred.next[0] is curr

    def insert(self, g, key: int) -> bool:
        g.begin()
        try:
            domain = self.domain
            while True:
                pred, curr = self._walk(g, key)
                with pred.lock:
                    with curr.lock:
                        if not self._validate(pred, curr):
                            continue
                        if curr.key == key:
                            return False
                        node = SetNode(key, with_lock=True)
                        domain.stamp_birth(node)
                        node.next = (curr, False)
                        pred.next = (node, False)
                        return True
        finally:
            g.end()

    def remove(self, g, key: int) -> bool:
        g.begin()
        try:
            while True:
                pred, curr = self._walk(g, key)
                if curr.key != key:
                    return False
                with pred.lock:
                    with curr.lock:
                        if not self._validate(pred, curr):
                            continue
                        if curr.key != key:
                            return False
                        curr.marked = True          # logical delete
                        pred.next = (curr.next[0], False)  # physical unlink
                        g.retire(curr)
                        return True
        finally:
            g.end()

    def contains(self, g, key: int) -> bool:
        g.begin()
        try:
            _pred, curr = self._walk(g, key)
            return curr.key == key and not curr.marked
        finally:
            g.end()

    def prefill(self, keys) -> int:
        domain = self.domain
        prev = self.head
        count = 0
        for key in sorted(keys):
            node = SetNode(key, with_lock=True)
            domain.stamp_birth(node)
            node.next = (self.tail, False)
            prev.next = (node, False)
            prev = node
            count += 1
        return count

    def snapshot_keys(self) -> list[int]:
        out = []
        curr = self.head.next[0]
        while curr is not self.tail:
            if not curr.marked:
                out.append(curr.key)
            curr = curr.next[0]
        return out
