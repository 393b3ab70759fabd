from .nodes import SetNode, KEY_MIN, KEY_MAX
from .hm_list import HarrisMichaelList
from .lazy_list import LazyList
from .hash_table import HashTable

STRUCTURES = {
    "hml": HarrisMichaelList,
    "ll": LazyList,
    "hmht": HashTable,
}

__all__ = ["SetNode", "KEY_MIN", "KEY_MAX", "HarrisMichaelList", "LazyList",
           "HashTable", "STRUCTURES"]
