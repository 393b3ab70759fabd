"""Fixed-bucket hash set: an array of Harris-Michael lists sharing one tail
sentinel.  Bucket count is size // load_factor, fixed at construction."""

from __future__ import annotations

from collections import defaultdict

from .hm_list import HarrisMichaelList
from .nodes import make_sentinel, KEY_MAX


class HashTable:
    name = "hmht"

    def __init__(self, domain, size: int = 8192, load_factor: int = 6) -> None:
        if size < 1 or load_factor < 1:
            raise ValueError("size and load_factor must be positive")
        self.domain = domain
        self.bucket_count = max(1, size // load_factor)
        tail = make_sentinel(KEY_MAX)
        tail.next = (None, False)
        self.tail = tail
        self.buckets = [HarrisMichaelList(domain, tail=tail) for _ in range(self.bucket_count)]

    def _bucket(self, key: int) -> HarrisMichaelList:
        return self.buckets[key % self.bucket_count]

    def insert(self, g, key: int) -> bool:
        return self._bucket(key).insert(g, key)

    def remove(self, g, key: int) -> bool:
        return self._bucket(key).remove(g, key)

    def contains(self, g, key: int) -> bool:
        return self._bucket(key).contains(g, key)

    def prefill(self, keys) -> int:
        grouped = defaultdict(list)
        for key in keys:
            grouped[key % self.bucket_count].append(key)
        count = 0
        for b, ks in grouped.items():
            count += self.buckets[b].prefill(ks)
        return count

    def snapshot_keys(self) -> list[int]:
        out = []
        for b in self.buckets:
            out.extend(b.snapshot_keys())
        out.sort()
        return out
