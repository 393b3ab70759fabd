"""Timed workload execution: prefill, spawn workers, sample memory metrics,
aggregate results.  Also the long-running-reads variant and stall injection."""

from __future__ import annotations

import os
import random
import sys
import threading
import time

from ..config import DEFAULT_VISIT_SPINS, DomainConfig, derive_seed
from ..domain import ReclamationDomain
from ..reclaim import make_guard
from ..structures import STRUCTURES
from .config import BenchConfig, BenchResult


def build_domain(cfg: BenchConfig) -> ReclamationDomain:
    # Benchmarks default to the full cost model (visit spins on); the library
    # default leaves visit spins off.  Explicit zeros disable either part.
    visit = DEFAULT_VISIT_SPINS if cfg.visit_spins is None else cfg.visit_spins
    kw = dict(
        max_threads=cfg.threads,
        reclaim_freq=cfg.reclaim_freq,
        epoch_freq=cfg.epoch_freq,
        max_hp=cfg.max_hp,
        fallback_factor=cfg.fallback_factor,
        debug=cfg.debug,
        transport=cfg.transport,
        watchdog_s=cfg.watchdog_s,
        visit_spins=visit,
    )
    if cfg.fence_spins is not None:
        kw["fence_spins"] = cfg.fence_spins
    return ReclamationDomain(DomainConfig(**kw))


def build_structure(cfg: BenchConfig, domain: ReclamationDomain):
    if cfg.ds == "hmht":
        return STRUCTURES["hmht"](domain, size=cfg.key_range,
                                  load_factor=cfg.hmht_load_factor)
    return STRUCTURES[cfg.ds](domain)


def prefill_structure(cfg: BenchConfig, ds) -> int:
    """Half the key range, distinct uniform keys, deterministic in the seed."""
    rng = random.Random(derive_seed("prefill", cfg.seed))
    target = cfg.key_range // 2
    keys = rng.sample(range(cfg.key_range), target)
    return ds.prefill(keys)


class _Worker(threading.Thread):
    def __init__(self, wid: int, ctx: "_TrialContext") -> None:
        super().__init__(name=f"bench-w{wid}", daemon=True)
        self.wid = wid
        self.ctx = ctx
        self.tid: int | None = None
        self.n_insert = 0
        self.n_delete = 0
        self.n_contains = 0
        self.error: str = ""

    def run(self) -> None:
        ctx = self.ctx
        cfg = ctx.cfg
        try:
            if cfg.pin_threads and hasattr(os, "sched_setaffinity"):
                cpus = sorted(os.sched_setaffinity(0))
                os.sched_setaffinity(0, {cpus[self.wid % len(cpus)]})
            tid = ctx.domain.register_thread()
            self.tid = tid
            guard = make_guard(ctx.domain, cfg.reclaimer, tid)
            try:
                ctx.start_barrier.wait()
                self._loop(guard)
            finally:
                ctx.domain.deregister_thread(tid)
        except Exception as e:  # surfaced in the result's error column
            self.error = f"{type(e).__name__}: {e}"
            ctx.stop = True
            try:
                ctx.start_barrier.abort()
            except Exception:
                pass

    # -- roles ---------------------------------------------------------------

    def _loop(self, guard) -> None:
        ctx = self.ctx
        cfg = ctx.cfg
        if cfg.lrr and self.wid < cfg.threads // 2:
            self._reader_loop(guard)
        elif cfg.lrr:
            self._updater_loop(guard, span=max(2, cfg.key_range * cfg.lrr_update_span_pct // 100))
        else:
            self._mixed_loop(guard)

    def _mixed_loop(self, guard) -> None:
        ctx = self.ctx
        cfg = ctx.cfg
        ds = ctx.ds
        rng = random.Random(derive_seed(cfg.seed, self.wid, cfg.trial))
        rnd = rng.random
        ins_f = cfg.insert_pct / 100.0
        del_f = ins_f + cfg.delete_pct / 100.0
        key_range = cfg.key_range
        insert = ds.insert
        remove = ds.remove
        contains = ds.contains
        stall_at = None
        if cfg.stall is not None and cfg.stall.tid == self.wid:
            stall_at = ctx.t0 + cfg.stall.at_ms / 1000.0
        n_ins = n_del = n_ctn = 0
        while not ctx.stop:
            x = rnd()
            key = int(rnd() * key_range)
            if x < ins_f:
                insert(guard, key)
                n_ins += 1
            elif x < del_f:
                remove(guard, key)
                n_del += 1
            else:
                contains(guard, key)
                n_ctn += 1
            if stall_at is not None and time.monotonic() >= stall_at:
                stall_at = None
                self._stall(guard)
        self.n_insert, self.n_delete, self.n_contains = n_ins, n_del, n_ctn

    def _reader_loop(self, guard) -> None:
        ctx = self.ctx
        cfg = ctx.cfg
        ds = ctx.ds
        rng = random.Random(derive_seed(cfg.seed, self.wid, cfg.trial))
        rnd = rng.random
        key_range = cfg.key_range
        contains = ds.contains
        n = 0
        while not ctx.stop:
            contains(guard, int(rnd() * key_range))
            n += 1
        self.n_contains = n

    def _updater_loop(self, guard, span: int) -> None:
        ctx = self.ctx
        cfg = ctx.cfg
        ds = ctx.ds
        rng = random.Random(derive_seed(cfg.seed, self.wid, cfg.trial))
        rnd = rng.random
        insert = ds.insert
        remove = ds.remove
        n_ins = n_del = 0
        while not ctx.stop:
            key = int(rnd() * span)
            if rnd() < 0.5:
                insert(guard, key)
                n_ins += 1
            else:
                remove(guard, key)
                n_del += 1
        self.n_insert, self.n_delete = n_ins, n_del

    def _stall(self, guard) -> None:
        """Sleep mid-operation while holding live reservations."""
        ctx = self.ctx
        head = ctx.ds.buckets[0].head if ctx.cfg.ds == "hmht" else ctx.ds.head
        guard.begin()
        try:
            guard.protect_next(0, head)
            time.sleep(ctx.cfg.stall.for_ms / 1000.0)
        finally:
            guard.end()


class _TrialContext:
    def __init__(self, cfg: BenchConfig) -> None:
        self.cfg = cfg
        self.domain = build_domain(cfg)
        self.ds = build_structure(cfg, self.domain)
        self.stop = False
        self.start_barrier = threading.Barrier(cfg.threads + 1)
        self.t0 = 0.0


def run_trial(cfg: BenchConfig) -> BenchResult:
    """Prefill, run the timed mixed workload, sample metrics each sample_ms."""
    result = BenchResult(config=cfg)
    old_si = sys.getswitchinterval()
    if cfg.switch_interval_us is not None:
        sys.setswitchinterval(cfg.switch_interval_us / 1e6)
    try:
        ctx = _TrialContext(cfg)
        prefill_structure(cfg, ctx.ds)
        workers = [_Worker(w, ctx) for w in range(cfg.threads)]
        for w in workers:
            w.start()
        ctx.t0 = time.monotonic()
        try:
            ctx.start_barrier.wait(timeout=30)
        except threading.BrokenBarrierError:
            pass
        ctx.t0 = time.monotonic()
        deadline = ctx.t0 + cfg.duration_ms / 1000.0
        sample_s = cfg.sample_ms / 1000.0
        slots = ctx.domain.slots
        max_listed = 0
        while True:
            now = time.monotonic()
            if now >= deadline or ctx.stop:
                break
            time.sleep(min(sample_s, deadline - now))
            peak = max(len(s.retire_list) for s in slots)
            result.samples.append((int((time.monotonic() - ctx.t0) * 1000), peak))
            if peak > max_listed:
                max_listed = peak
        ctx.stop = True
        for w in workers:
            w.join()
        wall = time.monotonic() - ctx.t0

        domain = ctx.domain
        result.insert_ops = sum(w.n_insert for w in workers)
        result.delete_ops = sum(w.n_delete for w in workers)
        result.contains_ops = sum(w.n_contains for w in workers)
        result.total_ops = result.insert_ops + result.delete_ops + result.contains_ops
        result.wall_time_s = wall
        result.throughput_mops = result.total_ops / wall / 1e6 if wall > 0 else 0.0
        if cfg.lrr:
            readers = cfg.threads // 2
            result.read_ops = sum(w.n_contains for w in workers[:readers])
            result.read_throughput_mops = result.read_ops / wall / 1e6 if wall > 0 else 0.0
        result.max_retire_list = max_listed
        result.total_unreclaimed = domain.total_unreclaimed()
        result.signals_sent = domain.total_signals_sent()
        result.handler_runs = domain.total_handler_runs()
        if domain.allocator is not None:
            result.uaf_detected = domain.allocator.uaf_detected
            result.double_free_detected = domain.allocator.double_free_detected
        errors = [w.error for w in workers if w.error]
        if errors:
            result.error = errors[0]
        return result
    finally:
        sys.setswitchinterval(old_si)


def run_lrr(cfg: BenchConfig) -> BenchResult:
    """Long-running-reads mode: half the threads do full-range searches, half
    update the lowest few percent of the key range."""
    if not cfg.lrr:
        raise ValueError("run_lrr requires cfg.lrr=True")
    return run_trial(cfg)
