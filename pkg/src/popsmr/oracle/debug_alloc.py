"""Runtime use-after-free oracle.

Freed nodes are poisoned and parked in a bounded quarantine (keeping a strong
reference so CPython cannot recycle the object's identity while a delayed
dereference could still hit it).  Every guarded dereference in a debug domain
lands in check_access, which trips on the freed flag or the poison pattern.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Any

POISON_KEY = -0x5AFE_C0DE_5AFE_C0DE


class UseAfterFreeError(AssertionError):
    pass


class DoubleFreeError(AssertionError):
    pass


class DebugAllocator:
    def __init__(self, quarantine_depth: int = 4096, soft: bool = False) -> None:
        self.quarantine: deque = deque()
        self.quarantine_depth = quarantine_depth
        self.soft = soft
        self.n_alloc = 0
        self.n_freed = 0
        self.uaf_detected = 0
        self.double_free_detected = 0
        self._lock = threading.Lock()

    def note_alloc(self, node: Any) -> None:
        self.n_alloc += 1

    def free(self, node: Any) -> None:
        if node.freed:
            self.double_free_detected += 1
            if not self.soft:
                raise DoubleFreeError(f"double free of {node!r}")
            return
        node.freed = True
        if hasattr(node, "key"):
            node.key = POISON_KEY
        with self._lock:
            self.quarantine.append(node)
            if len(self.quarantine) > self.quarantine_depth:
                self.quarantine.popleft()
            self.n_freed += 1

    def check_access(self, node: Any) -> None:
        if node is None:
            return
        if getattr(node, "freed", False) or getattr(node, "key", None) == POISON_KEY:
            self.uaf_detected += 1
            if not self.soft:
                raise UseAfterFreeError(f"dereference of freed node {node!r}")

    @property
    def live(self) -> int:
        return self.n_alloc - self.n_freed

    def assert_clean(self) -> None:
        if self.uaf_detected or self.double_free_detected:
            raise AssertionError(
                f"oracle tripped: uaf={self.uaf_detected} double_free={self.double_free_detected}"
            )
