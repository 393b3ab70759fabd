import threading
import time

from popsmr import DomainConfig, MAX, ReclamationDomain, make_guard
from popsmr.structures.nodes import SetNode

from support import Peer, ScriptedNode, CountingList


def fresh(n=4, rf=8, epoch_freq=3):
    factor = max(1.0, n * 3 / rf)
    return ReclamationDomain(DomainConfig(
        max_threads=n, reclaim_freq=rf, max_hp=3, fallback_factor=factor,
        epoch_freq=epoch_freq, debug=True, fence_spins=0, visit_spins=0))


def retired_node(domain, key=0):
    n = SetNode(key)
    domain.stamp_birth(n)
    return n


# -- classic hazard pointers ----------------------------------------------------

def test_hp_read_publishes_immediately(domain):
    tid = domain.register_thread()
    g = make_guard(domain, "hp", tid)
    p = SetNode(1)
    w = g.protect_next(0, ScriptedNode([(p, False)]))
    assert w[0] is p
    assert domain.slots[tid].shared_res[0] is p  # visible without any handshake


def test_hp_read_retries_when_source_moves(domain):
    tid = domain.register_thread()
    g = make_guard(domain, "hp", tid)
    p, q = SetNode(1), SetNode(2)
    src = ScriptedNode([(p, False), (q, False), (q, False)])
    w = g.protect_next(0, src)
    assert w[0] is q
    assert domain.slots[tid].shared_res[0] is q


def test_hp_null_source(domain):
    tid = domain.register_thread()
    g = make_guard(domain, "hp", tid)
    assert g.protect_next(0, ScriptedNode([(None, False)]))[0] is None


def test_hp_retire_scans_without_signals():
    dom = fresh(rf=4)
    me = dom.register_thread()
    g = make_guard(dom, "hp", me)
    victim = retired_node(dom, 9)

    def setup(guard):
        guard.protect_next(0, ScriptedNode([(victim, False)]))

    peer = Peer(dom, scheme="hp").start(setup=setup)
    for i in range(3):
        g.retire(retired_node(dom, i))
    g.retire(victim)
    assert dom.total_freed() == 3
    assert dom.total_signals_sent() == 0
    assert not victim.freed
    peer.stop()


def test_hp_end_clears_shared(domain):
    tid = domain.register_thread()
    g = make_guard(domain, "hp", tid)
    g.begin()
    g.protect_next(0, ScriptedNode([(SetNode(1), False)]))
    g.end()
    assert all(r is None for r in domain.slots[tid].shared_res)


# -- classic hazard eras ----------------------------------------------------------

def test_he_read_fast_path_and_fenced_publish(domain):
    tid = domain.register_thread()
    slot = domain.slots[tid]
    slot.shared_eras = CountingList(slot.shared_eras)
    g = make_guard(domain, "he", tid)
    domain.global_epoch = 4
    p = SetNode(1)
    g.protect_next(0, ScriptedNode([(p, False)]))
    assert slot.shared_eras[0] == 4                 # published directly
    w1 = slot.shared_eras.writes
    g.protect_next(0, ScriptedNode([(p, False)]))
    assert slot.shared_eras.writes == w1            # fast path, no write
    domain.advance_epoch()
    g.protect_next(0, ScriptedNode([(p, False)]))
    assert slot.shared_eras[0] == 5


def test_he_retire_advances_era_and_scans():
    dom = fresh(rf=4)
    me = dom.register_thread()
    g = make_guard(dom, "he", me)
    e0 = dom.global_epoch
    for i in range(4):
        g.retire(retired_node(dom, i))
    assert dom.global_epoch == e0 + 1
    assert dom.total_freed() == 4
    assert dom.total_signals_sent() == 0


def test_he_pinned_era_blocks_interval():
    dom = fresh(rf=1)
    me = dom.register_thread()
    g = make_guard(dom, "he", me)
    peer = Peer(dom, scheme="he").start()
    dom.slots[peer.tid].shared_eras[0] = dom.global_epoch  # published pin
    n = retired_node(dom, 1)
    g.retire(n)
    assert not n.freed
    peer.stop()


# -- EBR ---------------------------------------------------------------------------

def test_ebr_quiescent_peers_full_free():
    dom = fresh(rf=4, epoch_freq=1)
    me = dom.register_thread()
    g = make_guard(dom, "ebr", me)
    for i in range(8):
        g.begin()
        g.retire(retired_node(dom, i))
        g.end()
    assert dom.total_freed() >= 4
    assert dom.total_signals_sent() == 0


def test_ebr_min_over_all_max_frees_everything():
    dom = fresh(n=2, rf=4, epoch_freq=1)
    me = dom.register_thread()
    g = make_guard(dom, "ebr", me)
    nodes = [retired_node(dom, i) for i in range(4)]
    g.begin()
    for n in nodes[:3]:
        g.retire(n)
    g.end()   # reserved -> MAX
    dom.advance_epoch()
    g.begin()
    g.retire(nodes[3])  # 4th: pass runs with min == our fresh announce
    g.end()
    freed_now = g.reclaim_epoch_freeable()  # min over {MAX}: all remaining go
    assert dom.total_freed() == 4


def test_ebr_stalled_peer_grows_unbounded():
    # the non-robustness demonstrator: a peer parked inside an operation pins
    # the epoch and EBR can free nothing retired afterwards
    dom = fresh(n=2, rf=4, epoch_freq=1)
    me = dom.register_thread()
    g = make_guard(dom, "ebr", me)

    def setup(guard):
        guard.begin()

    def teardown(guard):
        guard.end()

    peer = Peer(dom, scheme="ebr").start(setup=setup, teardown=teardown)
    dom.advance_epoch()
    for i in range(100):
        g.begin()
        g.retire(retired_node(dom, i))
        g.end()
    assert dom.total_freed() == 0
    assert len(dom.slots[me].retire_list) == 100   # unbounded growth
    peer.stop()
    for i in range(4):
        g.begin()
        g.retire(retired_node(dom, 200 + i))
        g.end()
    assert dom.total_freed() >= 100                 # recovers once unpinned


# -- NR ------------------------------------------------------------------------------

def test_nr_leaks_everything():
    dom = fresh(rf=4)
    me = dom.register_thread()
    g = make_guard(dom, "nr", me)
    n_objs = 10_000
    for i in range(n_objs):
        g.retire(retired_node(dom, i))
    assert dom.total_freed() == 0
    assert dom.total_unreclaimed() == n_objs
    assert len(dom.slots[me].retire_list) == n_objs  # memory grows monotonically
    assert dom.total_signals_sent() == 0
