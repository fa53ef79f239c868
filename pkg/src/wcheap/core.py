"""Node, rank-list and heap records plus the intrusive list primitives.

Every list in the structure (child lists, the root list, the node list and
the violation lists) is doubly linked with cyclic left links: the left
neighbour of the leftmost element is the rightmost element, while the right
link of the rightmost element is ``None``.  Both ends are reachable in O(1).

The root list of a heap is stored in ``HeapRecord.child`` so the same
sibling-list helpers serve child lists and the root list.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum

# Stored node states.  The effective state is overridden by being a tree
# root (parent is None) or by implicit deferral (owning record size < 0).
RANK_CHILD = 0
NONRANK = 1
DEFERRED = 2

STATE_NAMES = {RANK_CHILD: 'SolidRankChild', NONRANK: 'SolidNonrankChild',
               DEFERRED: 'ExplicitDeferred'}

_ids = itertools.count()

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class HeapError(Exception):
    '''Base class for heap usage errors.'''


class EmptyHeap(HeapError):
    pass


class InvalidHeap(HeapError):
    '''Operation on a heap that was consumed by meld (or a self-meld).'''


class InvalidHandle(HeapError):
    '''Node handle is deleted or belongs to another heap.'''


class KeyIncrease(HeapError):
    pass


class UnsupportedOperation(HeapError):
    pass


class Variant(str, Enum):
    FULL = 'full'
    SIMPLE = 'simple'


def default_rank_bound(n):
    return 6 + 2 * math.log2(max(n, 1))


@dataclass(frozen=True)
class VariantConfig:
    variant: Variant = Variant.FULL
    key_type: str = 'int'
    rank_bound: object = default_rank_bound

    def __post_init__(self):
        object.__setattr__(self, 'variant', Variant(self.variant))
        if self.key_type not in ('int', 'float'):
            raise ValueError(f'unknown key type {self.key_type!r}')


@dataclass(frozen=True)
class CostCounters:
    comparisons: int = 0
    structural_steps: int = 0


class Node:
    '''One heap element.

    ``rank`` caches the integer distance of ``rank_entry`` from the start of
    its rank list; ``rank_shift`` keeps the two in lockstep.
    '''

    __slots__ = ('value', 'id', 'state', 'rank_entry', 'rank', 'loss',
                 'parent', 'child', 'left', 'right', 'degree',
                 'nl_prev', 'nl_next', 'ventry', 'alive', 'item')

    def __init__(self, value, rank_entry, item=None):
        self.value = value
        self.id = next(_ids)
        self.state = NONRANK
        self.rank_entry = rank_entry
        self.rank = 0
        self.loss = 0
        self.parent = None
        self.child = None
        self.left = None
        self.right = None
        self.degree = 0
        self.nl_prev = None
        self.nl_next = None
        self.ventry = None
        self.alive = True
        self.item = item

    @property
    def key(self):
        return (self.value, self.id)

    def implicitly_deferred(self):
        return self.rank_entry.heap.size < 0

    def deferred(self):
        return self.state == DEFERRED or self.rank_entry.heap.size < 0

    def children(self):
        x = self.child
        while x is not None:
            yield x
            x = x.right

    def __repr__(self):
        return f'<Node {self.value!r}#{self.id} r={self.rank} loss={self.loss}>'


class RankEntry:
    '''One rank value in a heap-private rank list.

    ``refcount`` counts the nodes pointing here plus one if a next entry
    exists.  ``anchors`` holds the per-violation-type anchor entries
    (indexed by violation type A, G, L).
    '''

    __slots__ = ('index', 'refcount', 'prev', 'next', 'heap', 'anchors')

    def __init__(self, index, heap, prev=None):
        self.index = index
        self.refcount = 0
        self.prev = prev
        self.next = None
        self.heap = heap
        self.anchors = [None, None, None]

    def __repr__(self):
        return f'<RankEntry {self.index} ref={self.refcount}>'


class HeapRecord:
    '''Per-heap metadata.  ``size`` is -1 once the heap was melded away.'''

    def __init__(self, config):
        from .violations import ViolationList, VA, VG, VL

        self.config = config
        self.full = config.variant is Variant.FULL
        self.size = 0
        self.rank_head = RankEntry(0, self)
        self.rank_tail = self.rank_head
        self.child = None           # root list head
        self.nl_head = None         # global node list (full variant only)
        self.A = ViolationList(VA)
        self.G = ViolationList(VG) if self.full else None
        self.L = ViolationList(VL)
        self.loss_sum = 0
        self.comparisons = 0
        self.steps = 0
        self.merged_into = None
        self.reclaimed = False
        self.recorder = None

    @property
    def live(self):
        return self.size >= 0

    def counters(self):
        return CostCounters(self.comparisons, self.steps)

    def roots(self):
        x = self.child
        while x is not None:
            yield x
            x = x.right

    def node_list(self):
        x = self.nl_head
        while x is not None:
            yield x
            x = x.nl_next

    def rank_entries(self):
        e = self.rank_head
        while e is not None:
            yield e
            e = e.next


def less(heap, a, b):
    '''Instrumented (value, id) comparison: the only place keys are compared.'''
    heap.comparisons += 1
    av = a.value
    bv = b.value
    return av < bv or (av == bv and a.id < b.id)


def new_node(heap, value, item=None):
    e = heap.rank_head
    e.refcount += 1
    return Node(value, e, item)


# Sibling lists (child lists and the root list) ---------------------------

def sl_push_left(heap, owner, x):
    heap.steps += 1
    h = owner.child
    if h is None:
        x.left = x
        x.right = None
    else:
        x.left = h.left
        x.right = h
        h.left = x
    owner.child = x


def sl_push_right(heap, owner, x):
    heap.steps += 1
    h = owner.child
    if h is None:
        x.left = x
        x.right = None
        owner.child = x
    else:
        t = h.left
        t.right = x
        x.left = t
        x.right = None
        h.left = x


def sl_remove(heap, owner, x):
    heap.steps += 1
    h = owner.child
    r = x.right
    if x is h:
        if r is not None:
            r.left = x.left
        owner.child = r
    else:
        lf = x.left
        lf.right = r
        if r is None:
            h.left = lf
        else:
            r.left = lf
    x.left = x.right = None


def attach_child(heap, parent, child, edge):
    '''Attach a detached ``child`` below ``parent``.

    Solid children go to the left end in the full variant; deferred
    children to the right end.  The simplified variant keeps rank children
    left and nonrank children right.  The parent's rank is not touched.
    '''
    if edge == RANK_CHILD:
        assert child.rank == parent.rank, 'rank edge between unequal ranks'
        sl_push_left(heap, parent, child)
    elif edge == NONRANK and heap.full:
        sl_push_left(heap, parent, child)
    else:
        sl_push_right(heap, parent, child)
    child.state = edge
    child.parent = parent
    parent.degree += 1


def detach(heap, child):
    '''Splice ``child`` out of its parent's child list or the root list.'''
    p = child.parent
    if p is None:
        sl_remove(heap, heap, child)
    else:
        sl_remove(heap, p, child)
        p.degree -= 1
        child.parent = None


# Global node list --------------------------------------------------------

def nl_push_right(heap, x):
    heap.steps += 1
    h = heap.nl_head
    if h is None:
        x.nl_prev = x
        x.nl_next = None
        heap.nl_head = x
    else:
        t = h.nl_prev
        t.nl_next = x
        x.nl_prev = t
        x.nl_next = None
        h.nl_prev = x


def nl_remove(heap, x):
    heap.steps += 1
    h = heap.nl_head
    r = x.nl_next
    if x is h:
        if r is not None:
            r.nl_prev = x.nl_prev
        heap.nl_head = r
    else:
        lf = x.nl_prev
        lf.nl_next = r
        if r is None:
            h.nl_prev = lf
        else:
            r.nl_prev = lf
    x.nl_prev = x.nl_next = None


def nl_prepend(heap, other_head):
    '''Splice a whole node list (given by its head) in front of heap's list.'''
    if other_head is None:
        return
    heap.steps += 1
    h = heap.nl_head
    if h is not None:
        ot = other_head.nl_prev
        ht = h.nl_prev
        ot.nl_next = h
        h.nl_prev = ot
        other_head.nl_prev = ht
    heap.nl_head = other_head


def sl_prepend(heap, owner, other_head):
    '''Splice a whole sibling list in front of ``owner``'s list.'''
    if other_head is None:
        return
    heap.steps += 1
    h = owner.child
    if h is not None:
        ot = other_head.left
        ht = h.left
        ot.right = h
        h.left = ot
        other_head.left = ht
    owner.child = other_head


# Rank list ---------------------------------------------------------------

def _trim(rec):
    t = rec.rank_tail
    while t.refcount == 0 and t.prev is not None:
        p = t.prev
        p.next = None
        t.prev = None
        p.refcount -= 1
        t = p
    rec.rank_tail = t


def rank_shift(heap, x, delta):
    '''Move ``x`` to the neighbouring rank entry (delta is +1 or -1).'''
    heap.steps += 1
    e = x.rank_entry
    if delta > 0:
        n = e.next
        if n is None:
            rec = e.heap
            n = RankEntry(e.index + 1, rec, e)
            e.next = n
            e.refcount += 1
            rec.rank_tail = n
        e.refcount -= 1
        n.refcount += 1
        x.rank_entry = n
        x.rank += 1
    else:
        if e.prev is None:
            raise AssertionError('rank decrement at rank 0')
        p = e.prev
        p.refcount += 1
        e.refcount -= 1
        x.rank_entry = p
        x.rank -= 1
        if e.next is None:
            _trim(e.heap)


def release_rank(x):
    '''Drop ``x``'s rank reference, reclaiming a dead record when drained.'''
    e = x.rank_entry
    rec = e.heap
    e.refcount -= 1
    x.rank_entry = None
    if e.next is None:
        _trim(rec)
    if rec.size < 0 and rec.rank_head.refcount == 0:
        reclaim(rec)


def reclaim(rec):
    rec.reclaimed = True
    rec.A = rec.G = rec.L = None
    rec.child = None
    rec.nl_head = None
