"""Benchmark workload description and measured results."""

from __future__ import annotations

from dataclasses import dataclass, field

#: Exact column order of every CSV row the bench emits.
CSV_COLUMNS = (
    "ds", "reclaimer", "threads", "key_range", "insert_pct", "delete_pct",
    "duration_ms", "seed", "trial", "total_ops", "throughput_mops",
    "max_retire_list", "total_unreclaimed", "signals_sent", "handler_runs",
    "error",
)

DS_NAMES = ("hml", "ll", "hmht")


@dataclass
class StallSpec:
    """One worker goes to sleep mid-operation, holding its reservations."""
    tid: int
    at_ms: int
    for_ms: int

    @classmethod
    def parse(cls, text: str) -> "StallSpec":
        """Accepts the CLI form 'tid=3,at-ms=200,for-ms=500'."""
        fields = {}
        for part in text.split(","):
            k, _, v = part.partition("=")
            fields[k.strip().replace("-", "_")] = int(v)
        try:
            return cls(tid=fields["tid"], at_ms=fields["at_ms"], for_ms=fields["for_ms"])
        except KeyError as e:
            raise ValueError(f"stall spec needs tid=,at-ms=,for-ms= (got {text!r})") from e


@dataclass
class BenchConfig:
    ds: str = "hml"
    reclaimer: str = "hp-pop"
    threads: int = 4
    key_range: int = 2048
    insert_pct: int = 50
    delete_pct: int = 50
    duration_ms: int = 1000
    reclaim_freq: int = 1024
    epoch_freq: int = 100
    seed: int = 42
    trial: int = 1
    stall: StallSpec | None = None
    lrr: bool = False
    lrr_update_span_pct: int = 5
    hmht_load_factor: int = 6
    sample_ms: int = 100
    debug: bool = False
    visit_spins: int | None = None   # None = DomainConfig default policy
    fence_spins: int | None = None
    transport: str = "virtual"
    watchdog_s: float | None = None
    pin_threads: bool = False
    switch_interval_us: float | None = None
    max_hp: int = 3
    fallback_factor: float = 0.5

    def __post_init__(self) -> None:
        if self.ds not in DS_NAMES:
            raise ValueError(f"unknown data structure {self.ds!r}; choose from {DS_NAMES}")
        if not (0 <= self.insert_pct and 0 <= self.delete_pct
                and self.insert_pct + self.delete_pct <= 100):
            raise ValueError("insert_pct + delete_pct must be within [0, 100]")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.lrr and self.threads % 2 != 0:
            raise ValueError("lrr mode needs an even thread count")
        if self.key_range < 2:
            raise ValueError("key_range must be >= 2")

    @property
    def contains_pct(self) -> int:
        return 100 - self.insert_pct - self.delete_pct


@dataclass
class BenchResult:
    config: BenchConfig
    total_ops: int = 0
    throughput_mops: float = 0.0
    insert_ops: int = 0
    delete_ops: int = 0
    contains_ops: int = 0
    read_ops: int = 0                 # lrr: reader-side ops
    read_throughput_mops: float = 0.0
    max_retire_list: int = 0          # sampled at sample_ms cadence
    total_unreclaimed: int = 0
    signals_sent: int = 0
    handler_runs: int = 0
    wall_time_s: float = 0.0
    uaf_detected: int = 0
    double_free_detected: int = 0
    samples: list = field(default_factory=list)   # (t_ms, max_retire_list)
    error: str = ""

    def csv_row(self) -> dict:
        c = self.config
        return {
            "ds": c.ds, "reclaimer": c.reclaimer, "threads": c.threads,
            "key_range": c.key_range, "insert_pct": c.insert_pct,
            "delete_pct": c.delete_pct, "duration_ms": c.duration_ms,
            "seed": c.seed, "trial": c.trial,
            "total_ops": self.total_ops,
            "throughput_mops": f"{self.throughput_mops:.6f}",
            "max_retire_list": self.max_retire_list,
            "total_unreclaimed": self.total_unreclaimed,
            "signals_sent": self.signals_sent,
            "handler_runs": self.handler_runs,
            "error": self.error,
        }
