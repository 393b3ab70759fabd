"""Domain-wide configuration and shared sentinels."""

from __future__ import annotations

import hashlib
import os
import signal as _signal
from dataclasses import dataclass, field


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary labels (immune to hash randomization)."""
    text = "\x1f".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big")

# Single sentinel space: MAX doubles as the quiescent epoch announcement and the
# "no era reserved" marker, so min-scans and interval compares need no branches.
MAX = (1 << 63) - 1
NONE_ERA = MAX
LIVE = MAX

#: Iterations of a plain spin loop standing in for one store-load fence
#: (~7us on the reference box; 10x the modeled visit cost, in line with
#: fence-to-cached-load ratios on real hardware).
DEFAULT_FENCE_SPINS = 1000
#: Iterations standing in for one shared-node memory access; applied uniformly
#: to every protected read of every scheme when enabled (benchmarks default to
#: this, the library default is off).
DEFAULT_VISIT_SPINS = 100


def default_signal_id() -> int:
    """Signal used by the os-signal transport; POP_SIGNAL is an offset from SIGRTMIN."""
    base = getattr(_signal, "SIGRTMIN", _signal.SIGUSR1)
    try:
        off = int(os.environ.get("POP_SIGNAL", "0"))
    except ValueError:
        off = 0
    return int(base) + off


_DEFAULT_SIGNAL_ID = default_signal_id()


@dataclass
class DomainConfig:
    """Tuning knobs shared by every reclamation scheme.

    reclaim_freq:    retire-list size that triggers a reclamation pass.
    epoch_freq:      operations between global-epoch increments (epoch/era schemes).
    max_hp:          reservation slots per thread.
    fallback_factor: EpochPOP falls back to the ping path when more than
                     fallback_factor * reclaim_freq objects survive an epoch pass.
    max_threads:     capacity of every per-thread array.
    signal_id:       OS signal used when transport="os-signal".
    transport:       "virtual" (ping bus only) or "os-signal" (also pthread_kill).
    watchdog_s:      optional bound on the publish wait; None = wait forever.
    debug:           enable the debug allocator, dereference checks and
                     single-writer assertions.
    fence_spins / visit_spins: cost model for benchmarks, see README.
    """

    max_threads: int = 8
    reclaim_freq: int = 1024
    epoch_freq: int = 100
    max_hp: int = 3
    fallback_factor: float = 0.5
    signal_id: int = field(default_factory=lambda: _DEFAULT_SIGNAL_ID)
    transport: str = "virtual"
    watchdog_s: float | None = None
    debug: bool = False
    fence_spins: int = DEFAULT_FENCE_SPINS
    visit_spins: int = 0
    quarantine_depth: int = 4096

    def __post_init__(self) -> None:
        if self.max_threads < 1:
            raise ValueError("max_threads must be >= 1")
        if self.reclaim_freq < 1:
            raise ValueError("reclaim_freq must be >= 1")
        if self.max_hp < 1:
            raise ValueError("max_hp must be >= 1")
        if self.epoch_freq < 1:
            raise ValueError("epoch_freq must be >= 1")
        if self.fallback_factor <= 0:
            raise ValueError("fallback_factor must be positive")
        if self.transport not in ("virtual", "os-signal"):
            raise ValueError(f"unknown transport {self.transport!r}")
        # Otherwise the fallback pass could never shrink the list below its trigger.
        if self.fallback_factor * self.reclaim_freq < self.max_threads * self.max_hp:
            raise ValueError(
                "fallback_factor * reclaim_freq must be >= max_threads * max_hp "
                f"({self.fallback_factor * self.reclaim_freq:.0f} < "
                f"{self.max_threads * self.max_hp})"
            )

    @property
    def fallback_threshold(self) -> int:
        return int(self.fallback_factor * self.reclaim_freq)
