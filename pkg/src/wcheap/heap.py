"""Public heap interface and the reduction planner."""

import math

from .core import (
    DEFERRED, NONRANK, RANK_CHILD, INT64_MAX, INT64_MIN, HeapRecord, Variant, VariantConfig,
    EmptyHeap, InvalidHandle, InvalidHeap, KeyIncrease, UnsupportedOperation,
    new_node, nl_prepend, nl_push_right, nl_remove, reclaim, release_rank,
    sl_prepend, sl_push_right,
)
from .transformations import (
    link, make_solid_root, node_list_maintenance, reduction_step_A,
    reduction_step_G, reduction_step_L, remove_child,
)
from .violations import vl_insert, vl_remove

STEP_L = 0
STEP_A = 1
STEP_G = 2


def plan_counts(variant, l, a, g):
    '''Numbers of (L, A, G) steps planned for violation increases l, a, g.'''
    if Variant(variant) is Variant.FULL:
        half = (g + 1) // 2
        return l, a + l + half, a + 2 * l + 2 * half
    return l, a + l, 0


def plan_budget(variant, l, a, g):
    '''Comparison budget of one plan execution.'''
    if Variant(variant) is Variant.FULL:
        return 9 * l + 5 * a + 3 * g + 1
    return 2 * l + a


class Heap(HeapRecord):
    '''Worst-case DecreaseKey heap.

    ``Heap(variant='full')`` supports meld; ``Heap(variant='simple')`` is the
    no-meld variant with a single rank-root list and no deferred nodes.

    Public operations: insert, find_min (peek), delete_min, decrease_key,
    meld.  After every public operation the heap is a single tree whose
    root holds the minimum key.
    '''

    def __init__(self, config=None, *, variant=None):
        if config is None:
            config = VariantConfig(variant or Variant.FULL)
        elif variant is not None:
            raise TypeError('give either config or variant')
        super().__init__(config)
        self._steps = (reduction_step_L, reduction_step_A,
                       reduction_step_G if self.full else None)
        # worst-case comparisons of one L, A and G step
        self._max_cost = (3, 4, 1) if self.full else (1, 1, 0)

    def __len__(self):
        self._check_live()
        return self.size

    def __repr__(self):
        return f'<Heap {self.config.variant.value} size={self.size}>'

    @property
    def variant(self):
        return self.config.variant

    # Validation ----------------------------------------------------------

    def _check_live(self):
        if self.size < 0:
            raise InvalidHeap('heap was melded away')

    def _check_key(self, value):
        if self.config.key_type == 'int':
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f'integer key expected, got {value!r}')
            if not INT64_MIN <= value <= INT64_MAX:
                raise OverflowError(f'key {value} outside 64-bit range')
        else:
            value = float(value)
            if math.isnan(value):
                raise ValueError('NaN key')
        return value

    def _check_handle(self, node):
        if not node.alive:
            raise InvalidHandle(f'{node!r} was deleted')
        rec = node.rank_entry.heap
        while rec.size < 0 and rec.merged_into is not None:
            rec = rec.merged_into
        if rec is not self:
            raise InvalidHandle(f'{node!r} belongs to another heap')

    def _sizes(self):
        return (self.loss_sum, self.A.size,
                self.G.size if self.G is not None else 0)

    # Public operations ---------------------------------------------------

    def insert(self, value, item=None):
        '''Insert a key and return its node handle.'''
        self._check_live()
        value = self._check_key(value)
        snap = self._sizes()
        x = new_node(self, value, item)
        self.size += 1
        sl_push_right(self, self, x)
        if self.full:
            nl_push_right(self, x)
        self._find_min(snap)
        return x

    def find_min(self):
        '''Peek at the minimum node (None when empty).'''
        self._check_live()
        return self.child

    def delete_min(self):
        '''Remove the minimum and return its key as ``(value, id)``.'''
        self._check_live()
        if self.size == 0:
            raise EmptyHeap('delete_min on an empty heap')
        snap = self._sizes()
        rho = self.child
        if self.full:
            nl_remove(self, rho)
        self.size -= 1
        if self.full:
            node_list_maintenance(self)
        self.child = None
        c = rho.child
        rho.child = None
        rho.degree = 0
        self.child = c
        while c is not None:
            c.parent = None
            if c.state == RANK_CHILD and c.rank_entry.heap.size >= 0:
                c.state = NONRANK
                if c.loss:
                    vl_remove(self, c)
                    self.loss_sum -= c.loss
                    c.loss = 0
            c = c.right
        vl_remove(self, rho)
        release_rank(rho)
        rho.alive = False
        self.steps += 1
        self._find_min(snap)
        return rho.value, rho.id

    def decrease_key(self, node, value):
        '''Lower ``node``'s key to ``value``.'''
        self._check_live()
        self._check_handle(node)
        value = self._check_key(value)
        if value > node.value:
            raise KeyIncrease(f'{value!r} > {node.value!r}')
        snap = self._sizes()
        if node.parent is not None:
            remove_child(self, node)
        node.value = value
        self._find_min(snap)

    def meld(self, other):
        '''Meld two heaps; returns the surviving (larger) heap.

        The smaller heap is consumed: its size becomes -1, which defers all
        of its nodes implicitly until they are first touched.
        '''
        if not self.full:
            raise UnsupportedOperation('meld needs the full variant')
        if not isinstance(other, Heap) or not other.full:
            raise UnsupportedOperation('meld needs two full-variant heaps')
        if other is self:
            raise InvalidHeap('cannot meld a heap with itself')
        self._check_live()
        other._check_live()
        if other.config.key_type != self.config.key_type:
            raise InvalidHeap('key types differ')
        if self.size >= other.size:
            big, small = self, other
        else:
            big, small = other, self
        snap = big._sizes()
        nl_prepend(big, small.nl_head)
        small.nl_head = None
        big.size += small.size
        small.size = -1
        small.merged_into = big
        sl_prepend(big, big, small.child)
        small.child = None
        if small.rank_head.refcount == 0:
            reclaim(small)
        big._find_min(snap)
        return big

    # Normalization and planning -----------------------------------------

    def _find_min(self, snap):
        '''Reduce the root list to one tree, restoring violation bounds.'''
        x = self.child
        if x is None:
            return None
        full = self.full
        A = self.A
        G = self.G
        l0, a0, g0 = snap
        l = self.loss_sum - l0
        a = A.size - a0
        g = G.size - g0 if full else 0
        k = 0
        while x is not None:
            k += 1
            if x.state == DEFERRED or x.rank_entry.heap.size < 0:
                make_solid_root(self, x)
            elif x.ventry is None:
                vl_insert(self, A, x)
            x = x.right
        if l > 0 or a > 0 or g > 0:
            self.plan_and_reduce(max(l, 0), max(a, 0), max(g, 0))
        c0 = self.comparisons
        budget = 5 * k + 1 if full else k
        if full:
            self._execute([STEP_A, STEP_G] * k + [STEP_G], budget)
        else:
            self._execute([STEP_A] * k, budget)
        rec = self.recorder
        if rec is not None:
            rec.plan('phase1', 0, k, 0, self.comparisons - c0, budget)
        root = self.child
        if root.right is None:
            return root
        l0 = self.loss_sum
        a0 = A.size
        g0 = G.size if full else 0
        c = root.left
        while self.child.right is not None:
            c = link(self, c, c.left).left
        l = self.loss_sum - l0
        a = A.size - a0
        g = G.size - g0 if full else 0
        if l > 0 or a > 0 or g > 0:
            self.plan_and_reduce(max(l, 0), max(a, 0), max(g, 0), 'phase2')
        return self.child

    def plan_and_reduce(self, l, a, g, tag='pending'):
        '''Execute the reduction plan for violation increases (l, a, g).'''
        if not (l or a or g):
            return
        c0 = self.comparisons
        seq = [STEP_L] * l
        if self.full:
            half = (g + 1) // 2
            seq += [STEP_A, STEP_G, STEP_G] * (l + half) + [STEP_A, STEP_G] * a
            budget = 9 * l + 5 * a + 3 * g + 1
        else:
            seq += [STEP_A] * (a + l)
            budget = 2 * l + a
        self._execute(seq, budget)
        rec = self.recorder
        if rec is not None:
            rec.plan(tag, l, a, g, self.comparisons - c0, budget)

    def _execute(self, seq, budget):
        '''Run planned steps to the extent possible.

        A step that is inapplicable stays planned and is retried after some
        other step applied; execution stops when no remaining planned step
        applies.  Never more steps than planned are executed, and a step is
        skipped when its worst-case cost no longer fits the budget.
        '''
        fns = self._steps
        cost = self._max_cost
        limit = self.comparisons + budget
        failed = [0, 0, 0]
        stale = [False, False, False]
        for kind in seq:
            if stale[kind]:
                failed[kind] += 1
            elif self.comparisons + cost[kind] > limit:
                continue
            elif fns[kind](self):
                stale[0] = stale[1] = stale[2] = False
            else:
                failed[kind] += 1
                stale[kind] = True
        while failed[0] or failed[1] or failed[2]:
            progress = False
            for kind in (STEP_L, STEP_A, STEP_G):
                while (failed[kind] and self.comparisons + cost[kind] <= limit
                       and fns[kind](self)):
                    failed[kind] -= 1
                    progress = True
            if not progress:
                break

    # Introspection -------------------------------------------------------

    def check_invariants(self):
        from .verification.checker import check_invariants
        return check_invariants(self)


def make_heap(config=None, *, variant=None):
    return Heap(config, variant=variant)
