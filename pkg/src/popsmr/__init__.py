"""Publish-on-ping safe memory reclamation for concurrent linked structures.

Seven reclamation schemes behind one per-thread guard interface, three set
implementations, a runtime use-after-free oracle, an exhaustive protocol model
checker and a benchmark harness.
"""

from .config import MAX, NONE_ERA, LIVE, DomainConfig
from .domain import CapacityError, ReclaimableNode, ReclamationDomain, SKIP
from .pingbus import (
    StalledSystemError,
    collect_published_counters,
    ping_all_to_publish,
    publish_reservations,
    run_handshake,
    wait_for_all_published,
)
from .reclaim import GUARDS, RECLAIMER_NAMES, STUBBED_RECLAIMERS, make_guard
from .structures import STRUCTURES, HarrisMichaelList, HashTable, LazyList

__version__ = "0.1.0"

__all__ = [
    "MAX", "NONE_ERA", "LIVE", "SKIP",
    "DomainConfig", "ReclamationDomain", "ReclaimableNode",
    "CapacityError", "StalledSystemError",
    "collect_published_counters", "ping_all_to_publish", "publish_reservations",
    "wait_for_all_published", "run_handshake",
    "GUARDS", "RECLAIMER_NAMES", "STUBBED_RECLAIMERS", "make_guard",
    "STRUCTURES", "HarrisMichaelList", "LazyList", "HashTable",
    "__version__",
]
