from .debug_alloc import DebugAllocator, UseAfterFreeError
from .explore import ExploreResult, explore
from . import model

__all__ = ["DebugAllocator", "UseAfterFreeError", "ExploreResult", "explore", "model"]
