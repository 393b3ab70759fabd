"""Shared helpers: parked peer threads and scripted nodes for deterministic
two-step scheduler tests."""

from __future__ import annotations

import threading

from popsmr import make_guard


class Peer:
    """Registered helper thread that runs an optional setup under its own
    identity, then parks until released."""

    def __init__(self, domain, scheme="hp-pop"):
        self.domain = domain
        self.scheme = scheme
        self.ready = threading.Event()
        self.release = threading.Event()
        self.tid = None
        self.guard = None
        self.setup = None
        self.teardown = None
        self.thread = threading.Thread(target=self._run, daemon=True)

    def _run(self):
        self.tid = self.domain.register_thread()
        self.guard = make_guard(self.domain, self.scheme, self.tid)
        if self.setup is not None:
            self.setup(self.guard)
        self.ready.set()
        self.release.wait()
        if self.teardown is not None:
            self.teardown(self.guard)
        self.domain.deregister_thread(self.tid)

    def start(self, setup=None, teardown=None):
        self.setup = setup
        self.teardown = teardown
        self.thread.start()
        self.ready.wait()
        return self

    def stop(self):
        self.release.set()
        self.thread.join()


class ScriptedNode:
    """Node whose next-word reads follow a script; the last word repeats.
    Drives the validate-retry paths deterministically."""

    def __init__(self, words, key=0, on_read=None):
        self._words = list(words)
        self.key = key
        self.pinned = True
        self.freed = False
        self.birth_era = 0
        self.retire_era = 1 << 62
        self.retire_epoch = 1 << 62
        self.reads = 0
        self.on_read = on_read

    @property
    def next(self):
        self.reads += 1
        if self.on_read is not None:
            self.on_read(self.reads)
        if len(self._words) > 1:
            return self._words.pop(0)
        return self._words[0]


class CountingList(list):
    """List that counts item writes (for fast-path assertions)."""

    def __init__(self, *a):
        super().__init__(*a)
        self.writes = 0

    def __setitem__(self, i, v):
        self.writes += 1
        super().__setitem__(i, v)
