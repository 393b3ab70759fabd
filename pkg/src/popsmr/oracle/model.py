"""Abstract protocol models for exhaustive interleaving exploration.

Each model is a finite transition system: one reader thread walking a row of
entry cells (cell j initially holds object j+1; 0 stands for null), plus one
or two reclaimer threads, reclaimer t owning object t and unlinking it from
cell t-1.  Every step performs exactly one shared action.  Publish counters
are abstracted to per-(waiter, peer) advanced-since-snapshot bits, which is
exactly the information the wait-exit comparison consumes (counters are
monotone, only strict advance past the snapshot matters).  Signal delivery is
a handler step that becomes enabled once a thread is pinged and fires at any
later point, which encodes bounded-but-arbitrary delivery delay.

A violation is an Access of an object after its Free by a reader whose
protection protocol said the access was safe.  Mutants re-create the classic
implementation mistakes: dropping the validation re-read, letting the
reservation store reorder past the validation (the fence-equivalent ordering),
and exiting the publish wait without the counter condition.
"""

from __future__ import annotations

from collections import namedtuple

NONE = -1
EP_MAX = 99  # quiescent epoch announcement; compares above any real epoch

SCHEMES = ("hp", "hp-pop", "he-pop", "epoch-pop")
MUTANTS = ("no-validate", "reorder-store", "no-wait")

# Reader phases (pointer protocols)
R_LOAD, R_STORE, R_VALIDATE, R_ACCESS, R_CLEAR, R_DONE = range(6)
# Reader phases (era protocol)
E_LOADREF, E_LOADERA, E_CHECK, E_STOREERA, E_ACCESS, E_CLEAR, E_DONE = range(7)


def _tset(t: tuple, i: int, v) -> tuple:
    return t[:i] + (v,) + t[i + 1:]


class ModelBase:
    """threads = 1 reader + n_rec reclaimers; thread 0 is the reader."""

    scheme = "?"

    def __init__(self, threads: int = 2, mutant: str | None = None) -> None:
        if threads not in (2, 3):
            raise ValueError("models support 2 or 3 threads")
        if mutant is not None and mutant not in MUTANTS:
            raise ValueError(f"unknown mutant {mutant!r}; choose from {MUTANTS}")
        self.threads = threads
        self.n_rec = threads - 1
        self.mutant = mutant
        self.no_validate = mutant == "no-validate"
        self.reorder_store = mutant == "reorder-store"
        self.no_wait = mutant == "no-wait"

    # Reclaimer peers, in the order snapshots/pings/waits/scans walk them.
    def peers(self, t: int) -> tuple:
        return tuple(p for p in range(self.threads) if p != t)

    def transitions(self, state) -> list:
        out = []
        for t in range(self.threads):
            out.extend(self.thread_steps(state, t))
        out.extend(self.async_steps(state))
        return out

    def async_steps(self, state) -> list:
        return []

    def initial(self):
        raise NotImplementedError

    def thread_steps(self, state, t: int) -> list:
        raise NotImplementedError

    def violation(self, state) -> str | None:
        return state.bad or None

    def done(self, state) -> bool:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Shared reclaimer machinery for the handshake schemes (hp-pop, he-pop,
# epoch-pop fallback).  Reclaimer program counters are dense ints; the
# per-scheme prologue decides where the handshake block starts.
# ---------------------------------------------------------------------------

HpState = namedtuple("HpState", [
    "rpc", "rj", "tmp", "local", "shared",   # reader
    "cells", "freed",                        # objects
    "pinged", "adv", "reserved", "rec",      # handshake + reclaimer pcs
    "bad",
])


class HazardPtrPopModel(ModelBase):
    """Reader: load ref, store local reservation, validate, access.
    Reclaimer: unlink, retire, snapshot peers, ping peers, self-publish,
    wait peers, scan peers, free."""

    scheme = "hp-pop"
    has_ping = True

    def initial(self):
        k = self.n_rec
        return HpState(
            rpc=R_LOAD, rj=0, tmp=0, local=0,
            shared=(0,) * self.threads,
            cells=tuple(i + 1 for i in range(k)),
            freed=(False,) * k,
            pinged=(False,) * self.threads,
            adv=tuple((False,) * self.threads for _ in range(k)),
            reserved=(False,) * k,
            rec=(0,) * k,
            bad="",
        )

    # -- reader ---------------------------------------------------------------

    def _reader_next(self, s, j):
        if j + 1 < self.n_rec:
            return s._replace(rpc=R_LOAD, rj=j + 1)
        return s._replace(rpc=R_CLEAR)

    def reader_steps(self, s) -> list:
        j = s.rj
        pc = s.rpc
        if pc == R_LOAD:
            nxt = R_VALIDATE if self.reorder_store else R_STORE
            return [("reader:LoadRef", s._replace(tmp=s.cells[j], rpc=nxt))]
        if pc == R_STORE:
            if self.reorder_store:
                # store was deferred past validation; access comes next
                return [("reader:StoreLocal", s._replace(local=s.tmp, rpc=R_ACCESS))]
            return [("reader:StoreLocal", s._replace(local=s.tmp, rpc=R_VALIDATE))]
        if pc == R_VALIDATE:
            ok_pc = R_STORE if self.reorder_store else R_ACCESS
            if self.no_validate or s.cells[j] == s.tmp:
                return [("reader:Validate", s._replace(rpc=ok_pc))]
            return [("reader:Validate", s._replace(rpc=R_LOAD))]
        if pc == R_ACCESS:
            if s.tmp != 0 and s.freed[s.tmp - 1]:
                return [("reader:Access", s._replace(bad=f"use-after-free of object {s.tmp}"))]
            return [("reader:Access", self._reader_next(s, j))]
        if pc == R_CLEAR:
            return [("reader:Clear", s._replace(local=0, rpc=R_DONE))]
        return []

    # -- reclaimer ------------------------------------------------------------
    # pc layout for reclaimer index r (thread t = r + 1), peers P = threads - 1:
    #   0 Unlink, 1 Retire,
    #   2..2+P-1         Snapshot peer
    #   2+P..2+2P-1      Ping peer
    #   2+2P             SelfPublish
    #   3+2P..2+3P       Wait peer
    #   3+3P..2+4P       Scan peer
    #   3+4P             Free
    #   4+4P             Done

    def _rec_layout(self):
        P = self.threads - 1
        return P, 2, 2 + P, 2 + 2 * P, 3 + 2 * P, 3 + 3 * P, 3 + 4 * P, 4 + 4 * P

    def reclaimer_steps(self, s, r: int) -> list:
        t = r + 1
        obj = r + 1
        pc = s.rec[r]
        P, SNAP0, PING0, SELF, WAIT0, SCAN0, FREE, DONE = self._rec_layout()
        peers = self.peers(t)
        lbl = f"rec{r + 1}"

        def adv_pc(ns, to=None):
            return ns._replace(rec=_tset(s.rec, r, pc + 1 if to is None else to))

        if pc == 0:
            return [(f"{lbl}:Unlink", adv_pc(s._replace(cells=_tset(s.cells, r, 0))))]
        if pc == 1:
            return [(f"{lbl}:Retire", adv_pc(s))]
        if SNAP0 <= pc < PING0:
            p = peers[pc - SNAP0]
            adv = _tset(s.adv, r, _tset(s.adv[r], p, False))
            return [(f"{lbl}:Snapshot({p})", adv_pc(s._replace(adv=adv)))]
        if PING0 <= pc < SELF:
            p = peers[pc - PING0]
            return [(f"{lbl}:Ping({p})", adv_pc(s._replace(pinged=_tset(s.pinged, p, True))))]
        if pc == SELF:
            # own slots are published for other waiters' exit conditions
            adv = tuple(
                _tset(s.adv[q], t, True) if q != r else s.adv[q]
                for q in range(self.n_rec)
            )
            return [(f"{lbl}:SelfPublish", adv_pc(s._replace(adv=adv)))]
        if WAIT0 <= pc < SCAN0:
            p = peers[pc - WAIT0]
            if self.no_wait or s.adv[r][p]:
                return [(f"{lbl}:WaitExit({p})", adv_pc(s))]
            return []  # blocked until peer publishes
        if SCAN0 <= pc < FREE:
            p = peers[pc - SCAN0]
            ns = s
            if self.scan_hit(s, p, obj):
                ns = s._replace(reserved=_tset(s.reserved, r, True))
            return [(f"{lbl}:Scan({p})", adv_pc(ns))]
        if pc == FREE:
            ns = s if s.reserved[r] else s._replace(freed=_tset(s.freed, r, True))
            return [(f"{lbl}:Free", adv_pc(ns))]
        return []

    def scan_hit(self, s, p: int, obj: int) -> bool:
        return s.shared[p] == obj

    def thread_steps(self, s, t: int) -> list:
        if t == 0:
            return self.reader_steps(s)
        return self.reclaimer_steps(s, t - 1)

    def async_steps(self, s) -> list:
        out = []
        for t in range(self.threads):
            if s.pinged[t]:
                out.append((f"handler({t}):Publish", self.publish(s, t)))
        return out

    def publish(self, s, t: int):
        shared = _tset(s.shared, t, s.local if t == 0 else 0)
        adv = tuple(_tset(s.adv[q], t, True) for q in range(self.n_rec))
        return s._replace(shared=shared, adv=adv, pinged=_tset(s.pinged, t, False))

    def done(self, s) -> bool:
        DONE = self._rec_layout()[-1]
        return s.rpc == R_DONE and all(pc == DONE for pc in s.rec)


class ClassicHpModel(HazardPtrPopModel):
    """Eagerly published reservations; no handshake.  The no-wait mutant slot is
    taken by a reclaimer-side ordering fault: scanning before unlinking."""

    scheme = "hp"
    has_ping = False

    def reader_steps(self, s) -> list:
        steps = super().reader_steps(s)
        # reservation stores and clears go straight to the shared slot
        renamed = []
        for label, ns in steps:
            if label == "reader:StoreLocal":
                ns = ns._replace(shared=_tset(ns.shared, 0, ns.tmp))
                label = "reader:StoreShared"
            elif label == "reader:Clear":
                ns = ns._replace(shared=_tset(ns.shared, 0, 0))
            renamed.append((label, ns))
        return renamed

    # pc layout: scan-before-unlink mutant reorders the program.
    #   normal: 0 Unlink, 1 Retire, 2..2+P-1 Scan, 2+P Free, 3+P Done
    #   mutant: 0..P-1 Scan, P Unlink, P+1 Retire, P+2 Free, P+3 Done
    def reclaimer_steps(self, s, r: int) -> list:
        t = r + 1
        obj = r + 1
        pc = s.rec[r]
        P = self.threads - 1
        peers = self.peers(t)
        lbl = f"rec{r + 1}"

        def adv_pc(ns):
            return ns._replace(rec=_tset(s.rec, r, pc + 1))

        if self.no_wait:  # scan-before-unlink ordering fault
            if pc < P:
                p = peers[pc]
                ns = s
                if s.shared[p] == obj:
                    ns = s._replace(reserved=_tset(s.reserved, r, True))
                return [(f"{lbl}:Scan({p})", adv_pc(ns))]
            if pc == P:
                return [(f"{lbl}:Unlink", adv_pc(s._replace(cells=_tset(s.cells, r, 0))))]
            if pc == P + 1:
                return [(f"{lbl}:Retire", adv_pc(s))]
            if pc == P + 2:
                ns = s if s.reserved[r] else s._replace(freed=_tset(s.freed, r, True))
                return [(f"{lbl}:Free", adv_pc(ns))]
            return []
        if pc == 0:
            return [(f"{lbl}:Unlink", adv_pc(s._replace(cells=_tset(s.cells, r, 0))))]
        if pc == 1:
            return [(f"{lbl}:Retire", adv_pc(s))]
        if 2 <= pc < 2 + P:
            p = peers[pc - 2]
            ns = s
            if s.shared[p] == obj:
                ns = s._replace(reserved=_tset(s.reserved, r, True))
            return [(f"{lbl}:Scan({p})", adv_pc(ns))]
        if pc == 2 + P:
            ns = s if s.reserved[r] else s._replace(freed=_tset(s.freed, r, True))
            return [(f"{lbl}:Free", adv_pc(ns))]
        return []

    def async_steps(self, s) -> list:
        return []

    def done(self, s) -> bool:
        P = self.threads - 1
        fin = P + 3 if self.no_wait else P + 3
        return s.rpc == R_DONE and all(pc == fin for pc in s.rec)


# ---------------------------------------------------------------------------

HeState = namedtuple("HeState", [
    "rpc", "rj", "tmp", "etmp", "lera", "sera",
    "era", "cells", "freed", "retire_era",
    "pinged", "adv", "reserved", "rec",
    "bad",
])


class HazardEraPopModel(ModelBase):
    """Era-interval variant: the reader reserves era values locally; a node is
    freeable when no published era lies inside [birth, retire]."""

    scheme = "he-pop"
    has_ping = True

    def initial(self):
        k = self.n_rec
        return HeState(
            rpc=E_LOADREF, rj=0, tmp=0, etmp=NONE, lera=NONE,
            sera=(NONE,) * self.threads,
            era=0,
            cells=tuple(i + 1 for i in range(k)),
            freed=(False,) * k,
            retire_era=(NONE,) * k,
            pinged=(False,) * self.threads,
            adv=tuple((False,) * self.threads for _ in range(k)),
            reserved=(False,) * k,
            rec=(0,) * k,
            bad="",
        )

    def _reader_next(self, s, j):
        if j + 1 < self.n_rec:
            return s._replace(rpc=E_LOADREF, rj=j + 1)
        return s._replace(rpc=E_CLEAR)

    def reader_steps(self, s) -> list:
        j = s.rj
        pc = s.rpc
        if pc == E_LOADREF:
            return [("reader:LoadRef", s._replace(tmp=s.cells[j], rpc=E_LOADERA))]
        if pc == E_LOADERA:
            return [("reader:LoadEra", s._replace(etmp=s.era, rpc=E_CHECK))]
        if pc == E_CHECK:
            if self.no_validate or s.lera == s.etmp:
                return [("reader:EraCheck", s._replace(rpc=E_ACCESS))]
            if self.reorder_store:
                # era store deferred: access first on the stale reservation
                return [("reader:EraCheck", s._replace(rpc=E_ACCESS))]
            return [("reader:EraCheck", s._replace(rpc=E_STOREERA))]
        if pc == E_STOREERA:
            return [("reader:StoreEra", s._replace(lera=s.etmp, rpc=E_LOADREF))]
        if pc == E_ACCESS:
            if s.tmp != 0 and s.freed[s.tmp - 1]:
                return [("reader:Access", s._replace(bad=f"use-after-free of object {s.tmp}"))]
            ns = self._reader_next(s, j)
            if self.reorder_store and s.lera != s.etmp:
                ns = ns._replace(lera=s.etmp)  # late store after the access
            return [("reader:Access", ns)]
        if pc == E_CLEAR:
            return [("reader:Clear", s._replace(lera=NONE, rpc=E_DONE))]
        return []

    # reclaimer pc layout:
    #   0 Unlink, 1 Retire(stamp), 2 EraInc,
    #   3..3+P-1 Snapshot, 3+P..3+2P-1 Ping, 3+2P SelfPublish,
    #   4+2P..3+3P Wait, 4+3P..3+4P Scan, 4+4P Free, 5+4P Done
    def _rec_layout(self):
        P = self.threads - 1
        return P, 3, 3 + P, 3 + 2 * P, 4 + 2 * P, 4 + 3 * P, 4 + 4 * P, 5 + 4 * P

    def reclaimer_steps(self, s, r: int) -> list:
        t = r + 1
        pc = s.rec[r]
        P, SNAP0, PING0, SELF, WAIT0, SCAN0, FREE, DONE = self._rec_layout()
        peers = self.peers(t)
        lbl = f"rec{r + 1}"

        def adv_pc(ns):
            return ns._replace(rec=_tset(s.rec, r, pc + 1))

        if pc == 0:
            return [(f"{lbl}:Unlink", adv_pc(s._replace(cells=_tset(s.cells, r, 0))))]
        if pc == 1:
            return [(f"{lbl}:Retire", adv_pc(s._replace(retire_era=_tset(s.retire_era, r, s.era))))]
        if pc == 2:
            return [(f"{lbl}:EraInc", adv_pc(s._replace(era=s.era + 1)))]
        if SNAP0 <= pc < PING0:
            p = peers[pc - SNAP0]
            adv = _tset(s.adv, r, _tset(s.adv[r], p, False))
            return [(f"{lbl}:Snapshot({p})", adv_pc(s._replace(adv=adv)))]
        if PING0 <= pc < SELF:
            p = peers[pc - PING0]
            return [(f"{lbl}:Ping({p})", adv_pc(s._replace(pinged=_tset(s.pinged, p, True))))]
        if pc == SELF:
            adv = tuple(
                _tset(s.adv[q], t, True) if q != r else s.adv[q]
                for q in range(self.n_rec)
            )
            return [(f"{lbl}:SelfPublish", adv_pc(s._replace(adv=adv)))]
        if WAIT0 <= pc < SCAN0:
            p = peers[pc - WAIT0]
            if self.no_wait or s.adv[r][p]:
                return [(f"{lbl}:WaitExit({p})", adv_pc(s))]
            return []
        if SCAN0 <= pc < FREE:
            p = peers[pc - SCAN0]
            e = s.sera[p]
            ns = s
            if e != NONE and 0 <= e <= s.retire_era[r]:  # birth era is 0
                ns = s._replace(reserved=_tset(s.reserved, r, True))
            return [(f"{lbl}:ScanEra({p})", adv_pc(ns))]
        if pc == FREE:
            ns = s if s.reserved[r] else s._replace(freed=_tset(s.freed, r, True))
            return [(f"{lbl}:Free", adv_pc(ns))]
        return []

    def thread_steps(self, s, t: int) -> list:
        if t == 0:
            return self.reader_steps(s)
        return self.reclaimer_steps(s, t - 1)

    def async_steps(self, s) -> list:
        out = []
        for t in range(self.threads):
            if s.pinged[t]:
                sera = _tset(s.sera, t, s.lera if t == 0 else NONE)
                adv = tuple(_tset(s.adv[q], t, True) for q in range(self.n_rec))
                out.append((f"handler({t}):Publish",
                            s._replace(sera=sera, adv=adv, pinged=_tset(s.pinged, t, False))))
        return out

    def done(self, s) -> bool:
        DONE = self._rec_layout()[-1]
        return s.rpc == E_DONE and all(pc == DONE for pc in s.rec)


# ---------------------------------------------------------------------------

EpState = namedtuple("EpState", [
    "rpc", "rj", "tmp", "local", "shared",
    "epoch", "res_ep", "retire_ep",
    "cells", "freed",
    "pinged", "adv", "reserved", "rec",
    "bad",
])

# Reader phases for epoch-pop: StartOp then the hp-pop pointer protocol.
P_START, P_LOAD, P_STORE, P_VALIDATE, P_ACCESS, P_END, P_DONE = range(7)


class EpochPopModel(ModelBase):
    """EpochPOP with the fallback path exercised: the reclaimer first tries the
    epoch condition, then runs the full handshake and pointer scan."""

    scheme = "epoch-pop"
    has_ping = True

    def initial(self):
        k = self.n_rec
        return EpState(
            rpc=P_START, rj=0, tmp=0, local=0,
            shared=(0,) * self.threads,
            epoch=0,
            res_ep=(EP_MAX,) * self.threads,
            retire_ep=(NONE,) * k,
            cells=tuple(i + 1 for i in range(k)),
            freed=(False,) * k,
            pinged=(False,) * self.threads,
            adv=tuple((False,) * self.threads for _ in range(k)),
            reserved=(False,) * k,
            rec=(0,) * k,
            bad="",
        )

    def _reader_next(self, s, j):
        if j + 1 < self.n_rec:
            return s._replace(rpc=P_LOAD, rj=j + 1)
        return s._replace(rpc=P_END)

    def reader_steps(self, s) -> list:
        j = s.rj
        pc = s.rpc
        if pc == P_START:
            return [("reader:StartOp",
                     s._replace(res_ep=_tset(s.res_ep, 0, s.epoch), rpc=P_LOAD))]
        if pc == P_LOAD:
            nxt = P_VALIDATE if self.reorder_store else P_STORE
            return [("reader:LoadRef", s._replace(tmp=s.cells[j], rpc=nxt))]
        if pc == P_STORE:
            nxt = P_ACCESS if self.reorder_store else P_VALIDATE
            return [("reader:StoreLocal", s._replace(local=s.tmp, rpc=nxt))]
        if pc == P_VALIDATE:
            ok_pc = P_STORE if self.reorder_store else P_ACCESS
            if self.no_validate or s.cells[j] == s.tmp:
                return [("reader:Validate", s._replace(rpc=ok_pc))]
            return [("reader:Validate", s._replace(rpc=P_LOAD))]
        if pc == P_ACCESS:
            if s.tmp != 0 and s.freed[s.tmp - 1]:
                return [("reader:Access", s._replace(bad=f"use-after-free of object {s.tmp}"))]
            return [("reader:Access", self._reader_next(s, j))]
        if pc == P_END:
            return [("reader:EndOp",
                     s._replace(local=0, res_ep=_tset(s.res_ep, 0, EP_MAX), rpc=P_DONE))]
        return []

    # reclaimer pc layout:
    #   0 StartOp, 1 Unlink, 2 Retire(stamp), 3 EpochInc,
    #   4 ReAnnounce (the next operation's epoch announcement), 5 EpochScan,
    #   6..6+P-1 Snapshot, 6+P..6+2P-1 Ping, 6+2P SelfPublish,
    #   7+2P..6+3P Wait, 7+3P..6+4P Scan, 7+4P Free, 8+4P EndOp, 9+4P Done
    def _rec_layout(self):
        P = self.threads - 1
        return P, 6, 6 + P, 6 + 2 * P, 7 + 2 * P, 7 + 3 * P, 7 + 4 * P, 8 + 4 * P, 9 + 4 * P

    def reclaimer_steps(self, s, r: int) -> list:
        t = r + 1
        obj = r + 1
        pc = s.rec[r]
        P, SNAP0, PING0, SELF, WAIT0, SCAN0, FREE, ENDOP, DONE = self._rec_layout()
        peers = self.peers(t)
        lbl = f"rec{r + 1}"

        def adv_pc(ns, to=None):
            return ns._replace(rec=_tset(s.rec, r, pc + 1 if to is None else to))

        if pc == 0:
            return [(f"{lbl}:StartOp", adv_pc(s._replace(res_ep=_tset(s.res_ep, t, s.epoch))))]
        if pc == 1:
            return [(f"{lbl}:Unlink", adv_pc(s._replace(cells=_tset(s.cells, r, 0))))]
        if pc == 2:
            return [(f"{lbl}:Retire", adv_pc(s._replace(retire_ep=_tset(s.retire_ep, r, s.epoch))))]
        if pc == 3:
            return [(f"{lbl}:EpochInc", adv_pc(s._replace(epoch=s.epoch + 1)))]
        if pc == 4:
            return [(f"{lbl}:ReAnnounce", adv_pc(s._replace(res_ep=_tset(s.res_ep, t, s.epoch))))]
        if pc == 5:
            m = min(s.res_ep)
            if s.retire_ep[r] < m:
                ns = s._replace(freed=_tset(s.freed, r, True))
                return [(f"{lbl}:EpochFree", adv_pc(ns, to=ENDOP))]
            return [(f"{lbl}:EpochScan", adv_pc(s))]
        if SNAP0 <= pc < PING0:
            p = peers[pc - SNAP0]
            adv = _tset(s.adv, r, _tset(s.adv[r], p, False))
            return [(f"{lbl}:Snapshot({p})", adv_pc(s._replace(adv=adv)))]
        if PING0 <= pc < SELF:
            p = peers[pc - PING0]
            return [(f"{lbl}:Ping({p})", adv_pc(s._replace(pinged=_tset(s.pinged, p, True))))]
        if pc == SELF:
            adv = tuple(
                _tset(s.adv[q], t, True) if q != r else s.adv[q]
                for q in range(self.n_rec)
            )
            return [(f"{lbl}:SelfPublish", adv_pc(s._replace(adv=adv)))]
        if WAIT0 <= pc < SCAN0:
            p = peers[pc - WAIT0]
            if self.no_wait or s.adv[r][p]:
                return [(f"{lbl}:WaitExit({p})", adv_pc(s))]
            return []
        if SCAN0 <= pc < FREE:
            p = peers[pc - SCAN0]
            ns = s
            if s.shared[p] == obj:
                ns = s._replace(reserved=_tset(s.reserved, r, True))
            return [(f"{lbl}:Scan({p})", adv_pc(ns))]
        if pc == FREE:
            ns = s if s.reserved[r] else s._replace(freed=_tset(s.freed, r, True))
            return [(f"{lbl}:Free", adv_pc(ns))]
        if pc == ENDOP:
            return [(f"{lbl}:EndOp", adv_pc(s._replace(res_ep=_tset(s.res_ep, t, EP_MAX))))]
        return []

    def thread_steps(self, s, t: int) -> list:
        if t == 0:
            return self.reader_steps(s)
        return self.reclaimer_steps(s, t - 1)

    def async_steps(self, s) -> list:
        out = []
        for t in range(self.threads):
            if s.pinged[t]:
                shared = _tset(s.shared, t, s.local if t == 0 else 0)
                adv = tuple(_tset(s.adv[q], t, True) for q in range(self.n_rec))
                out.append((f"handler({t}):Publish",
                            s._replace(shared=shared, adv=adv, pinged=_tset(s.pinged, t, False))))
        return out

    def done(self, s) -> bool:
        DONE = self._rec_layout()[-1]
        return s.rpc == P_DONE and all(pc == DONE for pc in s.rec)


MODELS = {
    "hp": ClassicHpModel,
    "hp-pop": HazardPtrPopModel,
    "he-pop": HazardEraPopModel,
    "epoch-pop": EpochPopModel,
}


def build(scheme: str, threads: int = 2, mutant: str | None = None) -> ModelBase:
    try:
        cls = MODELS[scheme]
    except KeyError:
        raise ValueError(f"unknown model scheme {scheme!r}; choose from {SCHEMES}") from None
    return cls(threads=threads, mutant=mutant)
