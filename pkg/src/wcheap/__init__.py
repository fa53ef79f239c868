"""Worst-case DecreaseKey heaps with optional meld.

>>> from wcheap import Heap
>>> h = Heap(variant='simple')
>>> for v in (5, 3, 8):
...     _ = h.insert(v)
>>> h.delete_min()[0]
3
"""

from .core import (
    CostCounters, EmptyHeap, HeapError, InvalidHandle, InvalidHeap,
    KeyIncrease, Node, UnsupportedOperation, Variant, VariantConfig,
    default_rank_bound,
)
from .heap import Heap, make_heap

__all__ = [
    'CostCounters', 'EmptyHeap', 'Heap', 'HeapError', 'InvalidHandle',
    'InvalidHeap', 'KeyIncrease', 'Node', 'UnsupportedOperation', 'Variant',
    'VariantConfig', 'default_rank_bound', 'make_heap',
]
