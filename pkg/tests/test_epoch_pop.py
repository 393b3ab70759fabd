import threading

from popsmr import DomainConfig, MAX, ReclamationDomain, make_guard
from popsmr.structures.nodes import SetNode

from support import Peer, ScriptedNode


def fresh(n=4, rf=8, epoch_freq=3, factor=None):
    if factor is None:
        factor = max(0.5, n * 3 / rf)
    return ReclamationDomain(DomainConfig(
        max_threads=n, reclaim_freq=rf, max_hp=3, fallback_factor=factor,
        epoch_freq=epoch_freq, debug=True, fence_spins=0, visit_spins=0))


def retired_node(domain, key=0):
    n = SetNode(key)
    domain.stamp_birth(n)
    return n


def test_start_op_ticks_every_epoch_freq():
    dom = fresh(epoch_freq=3)
    tid = dom.register_thread()
    g = make_guard(dom, "epoch-pop", tid)
    e0 = dom.global_epoch
    g.begin(); g.end()
    g.begin(); g.end()
    assert dom.global_epoch == e0
    g.begin(); g.end()      # third call ticks
    assert dom.global_epoch == e0 + 1


def test_reserved_epoch_announce_and_quiesce():
    dom = fresh()
    tid = dom.register_thread()
    g = make_guard(dom, "epoch-pop", tid)
    slot = dom.slots[tid]
    assert slot.reserved_epoch == MAX
    g.begin()
    assert slot.reserved_epoch == dom.global_epoch
    g.end()
    assert slot.reserved_epoch == MAX
    assert all(r is None for r in slot.local_res)


def test_concurrent_ticks_accumulate_exactly():
    dom = fresh(n=2, rf=16, epoch_freq=1)  # every op ticks
    e0 = dom.global_epoch
    per_thread = 400
    barrier = threading.Barrier(2)
    def work():
        tid = dom.register_thread()
        g = make_guard(dom, "epoch-pop", tid)
        barrier.wait()
        for _ in range(per_thread):
            g.begin(); g.end()
        dom.deregister_thread(tid)
    ts = [threading.Thread(target=work) for _ in range(2)]
    for t in ts: t.start()
    for t in ts: t.join()
    assert dom.global_epoch == e0 + 2 * per_thread


def test_quiescent_peers_epoch_path_frees_without_signals():
    dom = fresh(rf=4, epoch_freq=2)
    tid = dom.register_thread()
    g = make_guard(dom, "epoch-pop", tid)
    peer = Peer(dom, scheme="epoch-pop").start()  # parked at MAX
    for i in range(64):
        g.begin()
        g.retire(retired_node(dom, i))
        g.end()
    assert dom.total_signals_sent() == 0
    assert len(dom.slots[tid].retire_list) <= dom.config.reclaim_freq
    assert dom.total_freed() >= 56
    peer.stop()
    dom.assert_conservation()


def test_stalled_peer_forces_fallback_with_bounded_survivors():
    dom = fresh(n=3, rf=20, epoch_freq=1, factor=0.5)
    me = dom.register_thread()
    g = make_guard(dom, "epoch-pop", me)
    held = SetNode(999)
    dom.stamp_birth(held)

    def setup(guard):
        guard.begin()                      # announces an epoch and stays in-op
        guard.protect_next(0, ScriptedNode([(held, False)]))

    def teardown(guard):
        guard.end()

    peer = Peer(dom, scheme="epoch-pop").start(setup=setup, teardown=teardown)
    signals_before = dom.total_signals_sent()
    g.begin()
    g.retire(held)
    for i in range(39):
        g.retire(retired_node(dom, i))
    g.end()
    # epoch path is pinned by the stalled peer, so the ping fallback must have
    # fired and freed everything except published reservations
    assert dom.total_signals_sent() > signals_before
    bound = dom.config.max_threads * dom.config.max_hp
    assert len(dom.slots[me].retire_list) <= bound
    assert not held.freed                  # peer's published reservation
    peer.stop()


def test_fallback_scan_never_needed_when_epoch_path_wins():
    dom = fresh(rf=4, epoch_freq=1)
    tid = dom.register_thread()
    g = make_guard(dom, "epoch-pop", tid)
    for i in range(40):
        g.begin()
        g.retire(retired_node(dom, i))
        g.end()
    assert dom.total_signals_sent() == 0


def test_concurrent_epoch_and_fallback_reclaimers():
    # no global mode switch: while a stalled peer pins the epoch, one
    # reclaimer frees old-stamped garbage via the epoch path (no signals of
    # its own) while another falls back to the ping path, concurrently
    dom = fresh(n=4, rf=24, epoch_freq=1000, factor=0.5)
    pin_epoch = dom.global_epoch

    def setup(guard):
        guard.begin()   # pins reserved_epoch = pin_epoch

    def teardown(guard):
        guard.end()

    staller = Peer(dom, scheme="epoch-pop").start(setup=setup, teardown=teardown)
    results = {}
    barrier = threading.Barrier(2)

    def epoch_mode():
        tid = dom.register_thread()
        g = make_guard(dom, "epoch-pop", tid)
        nodes = []
        for i in range(23):
            n = SetNode(i)
            dom.stamp_birth(n)
            n.retire_epoch = pin_epoch - 1   # retired before the stall began
            nodes.append(n)
            dom.slots[tid].retire_list.append(n)
            dom.slots[tid].retired += 1
        barrier.wait()
        g.begin()
        g.retire(retired_node(dom, 50))      # 24th entry triggers the pass
        g.end()
        results["epoch"] = (dom.slots[tid].signals_sent,
                            len(dom.slots[tid].retire_list))
        dom.deregister_thread(tid)

    def fallback_mode():
        tid = dom.register_thread()
        g = make_guard(dom, "epoch-pop", tid)
        barrier.wait()
        g.begin()
        for i in range(24):
            g.retire(retired_node(dom, 100 + i))   # stamps >= pinned epoch
        g.end()
        results["fallback"] = (dom.slots[tid].signals_sent,
                               len(dom.slots[tid].retire_list))
        dom.deregister_thread(tid)

    ts = [threading.Thread(target=epoch_mode), threading.Thread(target=fallback_mode)]
    for t in ts: t.start()
    for t in ts: t.join()
    staller.stop()
    ep_signals, ep_left = results["epoch"]
    fb_signals, fb_left = results["fallback"]
    assert ep_left == 1                     # old stamps free via epochs alone;
                                            # only the fresh trigger node stays
    assert fb_signals > 0                   # the other thread had to ping
    assert fb_left <= dom.config.max_threads * dom.config.max_hp
    # pre-stall stamps clear entirely on the epoch path, so that reclaimer
    # never needed a ping
    assert ep_signals == 0


def test_epoch_free_boundary_is_strict():
    # an object stamped with the minimum announced epoch survives
    dom = fresh(n=2, rf=4, epoch_freq=100)
    me = dom.register_thread()
    g = make_guard(dom, "epoch-pop", me)

    def setup(guard):
        guard.begin()   # peer announces current epoch e and stalls in-op

    def teardown(guard):
        guard.end()

    peer = Peer(dom, scheme="epoch-pop").start(setup=setup, teardown=teardown)
    e = dom.slots[peer.tid].reserved_epoch
    nodes = [retired_node(dom, i) for i in range(4)]
    g.begin()
    for n in nodes:
        g.retire(n)                       # stamps == current epoch == e
    g.end()
    assert all(n.retire_epoch >= e for n in nodes)
    # none were epoch-freed (strict <); fallback may have freed them instead,
    # so check the epoch scan outcome directly on a fresh batch
    dom2 = fresh(n=2, rf=1000, epoch_freq=100)
    me2 = dom2.register_thread()
    g2 = make_guard(dom2, "epoch-pop", me2)
    peer2 = Peer(dom2, scheme="epoch-pop").start(setup=setup, teardown=teardown)
    m = retired_node(dom2, 0)
    g2.begin()
    g2.retire(m)
    g2.end()
    freed = g2.reclaim_epoch_freeable()
    assert freed == 0 and not m.freed      # retire_epoch == min, not < min
    dom2.advance_epoch()
    peer2.stop()                           # peer leaves, announces MAX
    n2 = retired_node(dom2, 1)
    n2.retire_epoch = m.retire_epoch       # same stamp, min has moved past
    dom2.slots[me2].retire_list.append(n2)
    dom2.slots[me2].retired += 1
    assert g2.reclaim_epoch_freeable() == 2
