from __future__ import annotations

import sys

import pytest

from popsmr import DomainConfig, ReclamationDomain


@pytest.fixture
def domain():
    """Small debug domain with the cost model off."""
    return ReclamationDomain(DomainConfig(
        max_threads=4, reclaim_freq=32, epoch_freq=5,
        debug=True, fence_spins=0, visit_spins=0,
    ))


@pytest.fixture
def fast_switch():
    """Aggressive GIL handoffs for interleaving-heavy tests."""
    old = sys.getswitchinterval()
    sys.setswitchinterval(5e-5)
    yield
    sys.setswitchinterval(old)
