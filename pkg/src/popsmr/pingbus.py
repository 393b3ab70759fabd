"""Publish-on-ping handshake: snapshot counters, ping every peer, wait until
each one has republished.

Delivery model.  A ping deposits a token on the target's slot.  The target
consumes tokens at guard safepoints (operation begin/end, retire, protect retry
paths) by running the publish routine itself.  A reclaimer waiting on the
handshake runs the publish routine on behalf of any thread that has not yet
responded: under the GIL each slot copy is a single atomic action, so a proxy
publish is indistinguishable from the handler running inside the target at that
point in the interleaving.  This realizes the bounded-publish-time assumption
for stalled or sleeping threads; CPython cannot run a Python-level signal
handler on a non-main thread, so in-thread delivery via a real signal handler is
not available in-process.

The "os-signal" transport additionally sends a real per-thread signal, which
surfaces OS-level delivery errors for threads that died without deregistering;
the semantic work still travels over the token bus.
"""

from __future__ import annotations

import signal as _signal
import threading
import time

from .domain import ReclamationDomain, ThreadSlot, SKIP


class StalledSystemError(RuntimeError):
    """Watchdog expired while waiting for a peer to publish."""


def publish_reservations(domain: ReclamationDomain, slot: ThreadSlot,
                         via_bus: bool = False, ping_triggered: bool = True) -> None:
    """Copy every local reservation (handles and eras) to the shared slots,
    then bump the publish counter and pay the single publish fence.

    Runs in the owning thread (safepoint or reclaimer self-publish) or in a
    waiting reclaimer acting as the delivery mechanism (via_bus).  Reentrancy
    safe; no allocation, locking or blocking.
    """
    if domain.debug and not via_bus:
        assert threading.get_ident() == slot.os_ident, (
            f"slot {slot.tid} published by foreign thread without bus authority"
        )
    pending = slot.ping_pending
    local = slot.local_res
    shared = slot.shared_res
    for i in range(len(local)):
        shared[i] = local[i]
    le = slot.local_eras
    se = slot.shared_eras
    for i in range(len(le)):
        se[i] = le[i]
    slot.publish_counter += 1
    slot.ping_served = pending
    if ping_triggered:
        slot.handler_runs += 1
    fr = domain.fence_range
    if fr is not None:
        for _ in fr:
            pass


def maybe_publish_self(domain: ReclamationDomain, slot: ThreadSlot) -> None:
    """Safepoint check: serve any pending ping in the owning thread."""
    if slot.ping_pending != slot.ping_served:
        publish_reservations(domain, slot)


def collect_published_counters(domain: ReclamationDomain, caller_tid: int) -> list[int]:
    """Snapshot every active peer's publish counter; inactive threads -> SKIP."""
    snap = [SKIP] * domain.config.max_threads
    for slot in domain.slots:
        if slot.active:
            snap[slot.tid] = slot.publish_counter
    return snap


def ping_all_to_publish(domain: ReclamationDomain, caller_tid: int,
                        snapshot: list[int] | None = None) -> None:
    """Deposit a ping on every active peer.  A peer whose thread already
    terminated (without deregistering) is marked SKIP in the snapshot so the
    wait loop ignores it, mirroring the error return of a kill on a zombie."""
    use_os = domain.config.transport == "os-signal"
    sig = domain.config.signal_id
    me = domain.slots[caller_tid]
    for slot in domain.slots:
        if not slot.active or slot.tid == caller_tid:
            continue
        thread = slot.thread
        if thread is None or not thread.is_alive():
            if snapshot is not None:
                snapshot[slot.tid] = SKIP
            continue
        slot.ping_pending += 1
        me.signals_sent += 1
        if use_os:
            try:
                _signal.pthread_kill(thread.ident, sig)
            except (ProcessLookupError, ValueError, OSError):
                if snapshot is not None:
                    snapshot[slot.tid] = SKIP


def wait_for_all_published(domain: ReclamationDomain, caller_tid: int,
                           snapshot: list[int]) -> None:
    """Return once every active, non-SKIP peer's counter strictly exceeds its
    snapshot.  The caller publishes its own slot synchronously first (its scan
    reads its own shared slots too), then delivers proxy publishes to peers
    that have not responded."""
    me = domain.slots[caller_tid]
    publish_reservations(domain, me, ping_triggered=False)

    deadline = None
    if domain.config.watchdog_s is not None:
        deadline = time.monotonic() + domain.config.watchdog_s

    for slot in domain.slots:
        tid = slot.tid
        if tid == caller_tid or snapshot[tid] == SKIP:
            continue
        if not slot.active:
            continue
        taken = snapshot[tid]
        while slot.publish_counter <= taken:
            if not slot.active:
                break
            thread = slot.thread
            if thread is None or not thread.is_alive():
                break
            # Deliver on the target's behalf; its own safepoint publish may
            # race in, which is harmless (counters are monotone, copies are
            # per-slot atomic).
            publish_reservations(domain, slot, via_bus=True)
            if slot.publish_counter > taken:
                break
            if deadline is not None and time.monotonic() > deadline:
                raise StalledSystemError(
                    f"thread {tid} did not publish within watchdog "
                    f"({domain.config.watchdog_s}s)"
                )
            time.sleep(0)


def run_handshake(domain: ReclamationDomain, caller_tid: int) -> None:
    """snapshot -> ping all -> wait: the full publish-on-ping round."""
    snapshot = collect_published_counters(domain, caller_tid)
    ping_all_to_publish(domain, caller_tid, snapshot)
    wait_for_all_published(domain, caller_tid, snapshot)
