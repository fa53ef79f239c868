"""Structure rewriting steps: links, child removal, rank bookkeeping,
deferral conversions, degree reduction and the A/G/L reduction steps.

Every function takes the live heap performing the operation as its first
argument; implicitly deferred nodes are re-homed into that heap when they
are first touched.  Step functions return whether they applied.
"""

from dataclasses import dataclass
from enum import Enum

from .core import (
    DEFERRED, NONRANK, RANK_CHILD, attach_child, detach, less, rank_shift,
    release_rank, sl_push_right, sl_remove, nl_push_right, nl_remove,
)
from .violations import (
    VA, vl_insert, vl_insert_loss2, vl_remove, vl_take_loss2,
    vl_take_same_rank_pair,
)


class DecrementCause(Enum):
    CHILD_REMOVAL = 'alpha'
    CHILD_CONVERSION = 'beta'


REMOVAL = DecrementCause.CHILD_REMOVAL
CONVERSION = DecrementCause.CHILD_CONVERSION


@dataclass(frozen=True)
class StepOutcome:
    applied: bool
    comparisons_used: int
    violations_delta: tuple   # (delta loss sum, delta |A|, delta |G|)


def _sizes(heap):
    return (heap.loss_sum, heap.A.size, heap.G.size if heap.G is not None else 0)


def run_step(heap, step, *args):
    '''Run one transformation and report its measured effect.'''
    before = _sizes(heap)
    c0 = heap.comparisons
    applied = bool(step(heap, *args))
    after = _sizes(heap)
    return StepOutcome(applied, heap.comparisons - c0,
                       tuple(b - a for a, b in zip(before, after)))


def _record(heap, kind, c0):
    rec = heap.recorder
    if rec is not None:
        rec.step(kind, heap.comparisons - c0)


# Deferral ----------------------------------------------------------------

def make_explicit_deferred(heap, x):
    '''Re-home an implicitly deferred node as explicit-deferred, rank 0.'''
    if x.rank_entry.heap.size >= 0:
        raise AssertionError(f'{x!r} is not implicitly deferred')
    if x.ventry is not None:
        vl_remove(heap, x)
    release_rank(x)
    e = heap.rank_head
    e.refcount += 1
    x.rank_entry = e
    x.rank = 0
    x.state = DEFERRED
    x.loss = 0
    heap.steps += 1


def make_solid_root(heap, x):
    '''Turn a deferred root solid at rank 0 and register it (G, or A when
    the heap has no G list).'''
    if x.rank_entry.heap.size < 0:
        make_explicit_deferred(heap, x)
    x.state = NONRANK
    x.loss = 0
    vl_insert(heap, heap.G if heap.full else heap.A, x)


# Rank bookkeeping --------------------------------------------------------

def rank_decrement(heap, p, cause):
    '''Decrement the rank of solid ``p`` and update its violation list.

    Returns True when ``p`` is a rank child whose loss went from 0 to 1
    (the caller decides whether a degree reduction is due).
    '''
    if p.state != RANK_CHILD:
        t = p.ventry.vtype
        vl_remove(heap, p)
        rank_shift(heap, p, -1)
        if not heap.full:
            target = heap.A
        elif cause is REMOVAL or t != VA:
            target = heap.G
        else:
            target = heap.A
        vl_insert(heap, target, p)
        return False
    loss = p.loss
    if loss == 1:
        vl_remove(heap, p)
    rank_shift(heap, p, -1)
    p.loss = loss + 1
    heap.loss_sum += 1
    if loss == 0:
        vl_insert(heap, heap.L, p)
        return True
    if loss == 1:
        vl_insert_loss2(heap, heap.L, p)
    return False


def rank_increment_rank_root(heap, s):
    '''Increment the rank of rank root ``s``, moving it between A and G.'''
    v = s.ventry
    if v is None or v.vtype > 1:
        raise AssertionError(f'{s!r} is not on A or G')
    vl_remove(heap, s)
    rank_shift(heap, s, 1)
    if not heap.full:
        vl_insert(heap, heap.A, s)
    elif v.vtype == VA:
        vl_insert(heap, heap.G, s)
        degree_reduction_step(heap, s)
    else:
        vl_insert(heap, heap.A, s)


def remove_child(heap, c):
    '''Cut ``c`` from its parent onto the root list.'''
    p = c.parent
    if p is None:
        raise AssertionError(f'{c!r} has no parent')
    rank_edge = c.state == RANK_CHILD and c.rank_entry.heap.size >= 0
    sl_remove(heap, p, c)
    p.degree -= 1
    c.parent = None
    if rank_edge:
        c.state = NONRANK
        if c.loss:
            vl_remove(heap, c)
            heap.loss_sum -= c.loss
            c.loss = 0
        rank_decrement(heap, p, REMOVAL)
    sl_push_right(heap, heap, c)


def link(heap, a, b):
    '''Link two solid tree roots; return the smaller one.

    A rank edge (equal ranks) takes the loser off A/G and increments the
    winner's rank; a nonrank edge leaves the loser's A/G entry in place.
    '''
    if less(heap, a, b):
        s, h = a, b
    else:
        s, h = b, a
    detach(heap, h)
    if h.rank == s.rank:
        vl_remove(heap, h)
        attach_child(heap, s, h, RANK_CHILD)
        rank_increment_rank_root(heap, s)
    else:
        attach_child(heap, s, h, NONRANK)
    return s


# Degree reduction --------------------------------------------------------

# List receiving the rank root created by a degree reduction.
NEW_ROOT_LIST = VA


def degree_reduction_step(heap, x):
    '''Bundle the three rightmost deferred children of ``x``.

    The smallest (s) becomes a solid rank-1 nonrank child of ``x`` with the
    middle (m) as its rank child and the largest (h) deferred below m.
    Degree of ``x`` drops by 2.
    '''
    if x.rank_entry.heap.size < 0:
        make_explicit_deferred(heap, x)
    if x.degree < 3:
        return False
    c3 = x.child.left
    if not (c3.state == DEFERRED or c3.rank_entry.heap.size < 0):
        return False
    c2 = c3.left
    if not (c2.state == DEFERRED or c2.rank_entry.heap.size < 0):
        return False
    c1 = c2.left
    if not (c1.state == DEFERRED or c1.rank_entry.heap.size < 0):
        return False
    c0 = heap.comparisons
    for c in (c3, c2, c1):
        sl_remove(heap, x, c)
        c.parent = None
        if c.rank_entry.heap.size < 0:
            make_explicit_deferred(heap, c)
    x.degree -= 3
    if less(heap, c2, c1):
        c1, c2 = c2, c1
    if less(heap, c3, c2):
        c2, c3 = c3, c2
    if less(heap, c2, c1):
        c1, c2 = c2, c1
    s, m, h = c1, c2, c3
    s.state = NONRANK
    attach_child(heap, s, m, RANK_CHILD)
    rank_shift(heap, s, 1)
    attach_child(heap, m, h, DEFERRED)
    attach_child(heap, x, s, NONRANK)
    vl_insert(heap, heap.A if NEW_ROOT_LIST == VA or not heap.full else heap.G, s)
    _record(heap, 'degree', c0)
    return True


def node_list_maintenance(heap):
    '''Twice: two degree reductions on the node-list head, then rotate it.'''
    for _ in range(2):
        f = heap.nl_head
        if f is None:
            return
        degree_reduction_step(heap, f)
        degree_reduction_step(heap, f)
        if f.nl_next is not None:
            nl_remove(heap, f)
            nl_push_right(heap, f)


# Reduction steps ---------------------------------------------------------

def _rank_root_step(heap, vl, kind):
    # same-rank pair at the right end?
    hd = vl.head
    if hd is None:
        return False
    vb = hd.prev
    va = vb.prev
    if va is vb:
        return False
    a = va.node
    b = vb.node
    if a.rank_entry is not b.rank_entry:
        return False
    c0 = heap.comparisons
    heap.comparisons = c0 + 1
    av = a.value
    bv = b.value
    if av < bv or (av == bv and a.id < b.id):
        s, h = a, b
    else:
        s, h = b, a
    vl_remove(heap, h)
    # h is a tree root or a nonrank child; s is not its descendant
    p = h.parent
    sl_remove(heap, heap if p is None else p, h)
    if p is not None:
        p.degree -= 1
    # leftmost rank child of s
    heap.steps += 1
    f = s.child
    if f is None:
        h.left = h
        h.right = None
    else:
        h.left = f.left
        h.right = f
        f.left = h
    s.child = h
    h.state = RANK_CHILD
    h.parent = s
    s.degree += 1
    rank_increment_rank_root(heap, s)
    rec = heap.recorder
    if rec is not None:
        rec.step(kind, heap.comparisons - c0)
    return True


def reduction_step_A(heap):
    '''Link a same-rank pair of A; in the full variant the winner moves to
    G and gets one degree reduction.'''
    return _rank_root_step(heap, heap.A, 'A')


def reduction_step_G(heap):
    '''Link a same-rank pair of G; the winner moves to A.'''
    return _rank_root_step(heap, heap.G, 'G')


def _convert_rank_child(heap, x):
    """Turn rank child ``x`` into a rank root (nonrank child of its parent)."""
    p = x.parent
    if x.ventry is not None:
        vl_remove(heap, x)
    heap.loss_sum -= x.loss
    x.loss = 0
    x.state = NONRANK
    vl_insert(heap, heap.G if heap.full else heap.A, x)
    if rank_decrement(heap, p, CONVERSION) and heap.full:
        degree_reduction_step(heap, p)


def reduction_step_L(heap):
    """Lower the loss sum: convert a loss >= 2 node, else link a same-rank
    pair of loss-1 nodes."""
    L = heap.L
    x = vl_take_loss2(L)
    c0 = heap.comparisons
    if x is not None:
        _convert_rank_child(heap, x)
        _record(heap, 'L', c0)
        return True
    pair = vl_take_same_rank_pair(L)
    if pair is None:
        return False
    a, b = pair
    if a.parent is b or b.parent is a:
        # the pair cannot be relinked; converting the child pushes the
        # parent to loss 2, and converting the parent then drops the sum
        h, s = (a, b) if a.parent is b else (b, a)
        _convert_rank_child(heap, h)
        _convert_rank_child(heap, s)
        _record(heap, 'L', c0)
        return True
    if less(heap, a, b):
        s, h = a, b
    else:
        s, h = b, a
    p = h.parent
    vl_remove(heap, h)
    vl_remove(heap, s)
    heap.loss_sum -= 2
    h.loss = 0
    s.loss = 0
    sl_remove(heap, p, h)
    p.degree -= 1
    h.parent = None
    rank_decrement(heap, p, REMOVAL)
    attach_child(heap, s, h, RANK_CHILD)
    rank_shift(heap, s, 1)
    _record(heap, 'L', c0)
    return True
