"""Shared node layout for the set implementations.

Every next cell holds a (successor, marked) tuple.  Replacing the tuple is the
only way to change either component, so a single attribute load observes both
atomically and tuple identity serves as the word-level compare for validation
and CAS.  Reservation slots always receive the untagged successor.
"""

from __future__ import annotations

import threading

from ..domain import ReclaimableNode

KEY_MIN = -(1 << 120)
KEY_MAX = 1 << 120


class SetNode(ReclaimableNode):
    __slots__ = ("key", "next", "pinned", "marked", "lock")

    def __init__(self, key: int, with_lock: bool = False) -> None:
        super().__init__()
        self.key = key
        self.next = None
        self.pinned = False
        self.marked = False
        self.lock = threading.Lock() if with_lock else None

    def __repr__(self) -> str:  # debugging aid only
        return f"<SetNode {self.key}{' freed' if self.freed else ''}>"


def make_sentinel(key: int, with_lock: bool = False) -> SetNode:
    node = SetNode(key, with_lock=with_lock)
    node.pinned = True
    return node
