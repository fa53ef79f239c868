"""Full-structure invariant checker.

The checker never mutates the heap.  It recomputes every derived quantity
(ranks from the rank lists, loss sums, list sizes, rank-list reference
counts) independently of the counters the heap maintains.
"""

import math
from dataclasses import dataclass, field

from ..core import DEFERRED, RANK_CHILD, STATE_NAMES
from ..violations import VA, VG, VL, VL2, VTYPE_NAMES

CHECKS = (
    'forest', 'heap_order', 'single_tree', 'rank_count', 'child_layout',
    'cyclic_left', 'violation_membership', 'pair_at_right_end', 'anchors',
    'violation_bounds', 'rank_bound', 'degree_bound', 'refcounts',
    'l_segmentation', 'counters', 'node_list',
)


def degree_bound(n, position):
    return 24 + 4 * math.log2(max(2 * n - position, 2))


@dataclass
class InvariantReport:
    '''Per-invariant verdicts; ``None`` means pass, otherwise the first
    failure found.'''

    results: dict = field(default_factory=lambda: {c: None for c in CHECKS})
    stats: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(v is None for v in self.results.values())

    def failures(self):
        return {k: v for k, v in self.results.items() if v is not None}

    def fail(self, check, message):
        if self.results[check] is None:
            self.results[check] = message

    def __str__(self):
        if self.ok:
            return 'all invariants hold'
        return '\n'.join(f'{k}: {v}' for k, v in self.failures().items())


def _walk_sibling_list(owner_name, head, report, parent=None):
    '''Return the elements of a left-cyclic sibling list.'''
    out = []
    if head is None:
        return out
    x = head
    prev = None
    while x is not None:
        out.append(x)
        if prev is not None and x.left is not prev:
            report.fail('cyclic_left', f'{owner_name}: left link of #{x.id} broken')
        if x.parent is not parent:
            report.fail('forest', f'{owner_name}: #{x.id} has wrong parent pointer')
        prev = x
        x = x.right
        if len(out) > 10_000_000:
            report.fail('forest', f'{owner_name}: runaway list')
            break
    if head.left is not out[-1]:
        report.fail('cyclic_left', f'{owner_name}: left of leftmost is not rightmost')
    return out


def _walk_vlist(name, vl, report):
    out = []
    v = vl.head
    prev = None
    while v is not None:
        out.append(v)
        if prev is not None and v.prev is not prev:
            report.fail('cyclic_left', f'list {name}: left link broken')
        if v.owner is not vl:
            report.fail('violation_membership', f'list {name}: entry owner mismatch')
        prev = v
        v = v.next
    if out and vl.head.prev is not out[-1]:
        report.fail('cyclic_left', f'list {name}: left of leftmost is not rightmost')
    if len(out) != vl.size:
        report.fail('counters', f'list {name}: size {vl.size} but {len(out)} entries')
    return out


def check_invariants(heap):
    report = InvariantReport()
    if heap.size < 0:
        report.stats['dead'] = True
        return report
    full = heap.full
    n = heap.size
    nodes = []
    seen = set()
    roots = _walk_sibling_list('root list', heap.child, report)
    if len(roots) > 1:
        report.fail('single_tree', f'{len(roots)} trees')
    stack = list(roots)
    rank_users = {}
    max_rank = 0
    loss_sum = 0
    expect = {VA: 0, VG: 0, VL: 0, VL2: 0}
    while stack:
        x = stack.pop()
        if id(x) in seen:
            report.fail('forest', f'#{x.id} reachable twice')
            continue
        seen.add(id(x))
        nodes.append(x)
        if not x.alive:
            report.fail('forest', f'#{x.id} is deleted but reachable')
        e = x.rank_entry
        rank_users[id(e)] = rank_users.get(id(e), 0) + 1
        # rank from the rank list, independent of the cached integer
        walked = 0
        p = e.prev
        while p is not None:
            walked += 1
            p = p.prev
        if walked != x.rank or e.index != x.rank:
            report.fail('rank_count', f'#{x.id}: cached rank {x.rank}, list position {walked}')
        implicit = e.heap.size < 0
        deferred = implicit or x.state == DEFERRED
        if not implicit and e.heap is not heap:
            report.fail('forest', f'#{x.id} points to a foreign live rank list')
        kids = _walk_sibling_list(f'children of #{x.id}', x.child, report, x)
        if len(kids) != x.degree:
            report.fail('counters', f'#{x.id}: degree {x.degree} but {len(kids)} children')
        rank_kids = 0
        seen_deferred = False
        for c in kids:
            if not (x.value < c.value or (x.value == c.value and x.id < c.id)):
                report.fail('heap_order', f'#{x.id} ({x.value}) above #{c.id} ({c.value})')
            c_def = c.state == DEFERRED or c.rank_entry.heap.size < 0
            if not c_def and c.state == RANK_CHILD:
                rank_kids += 1
            if full:
                if c_def:
                    seen_deferred = True
                elif seen_deferred:
                    report.fail('child_layout', f'#{x.id}: solid child #{c.id} right of a deferred one')
            stack.append(c)
        v = x.ventry
        if v is not None and v.node is not x:
            report.fail('violation_membership', f'#{x.id}: entry backlink broken')
        if implicit:
            continue
        if deferred:
            if x.rank != 0 or rank_kids:
                report.fail('rank_count', f'explicit-deferred #{x.id} has rank {x.rank}')
            if x.loss:
                report.fail('violation_membership', f'explicit-deferred #{x.id} has loss {x.loss}')
            if v is not None:
                report.fail('violation_membership', f'explicit-deferred #{x.id} is on list {VTYPE_NAMES[v.vtype]}')
            continue
        if rank_kids != x.rank:
            report.fail('rank_count', f'#{x.id}: rank {x.rank} but {rank_kids} rank children')
        if x.rank > max_rank:
            max_rank = x.rank
        if x.state == RANK_CHILD and x.parent is not None:
            loss_sum += x.loss
            want = None if x.loss == 0 else (VL if x.loss == 1 else VL2)
        else:
            if x.loss:
                report.fail('violation_membership', f'rank root #{x.id} has loss {x.loss}')
            want = (VA, VG) if full else (VA,)
            if x.state == RANK_CHILD:
                report.fail('violation_membership', f'root #{x.id} still marked rank child')
        if want is None:
            if v is not None:
                report.fail('violation_membership', f'#{x.id} (loss 0 rank child) on list {VTYPE_NAMES[v.vtype]}')
        elif isinstance(want, tuple):
            if v is None or v.vtype not in want:
                report.fail('violation_membership', f'rank root #{x.id} not on A/G')
            else:
                expect[v.vtype] += 1
        else:
            if v is None or v.vtype != want:
                report.fail('l_segmentation' if v is not None and v.vtype in (VL, VL2) else 'violation_membership',
                            f'#{x.id} (loss {x.loss}) not in the right part of L')
            else:
                expect[want] += 1
    for x in nodes:
        if x.parent is None and x.state == DEFERRED:
            report.fail('violation_membership', f'root #{x.id} is deferred')

    if len(nodes) != n:
        report.fail('forest', f'{len(nodes)} reachable nodes, size {n}')

    # violation lists -------------------------------------------------------
    lists = [('A', heap.A, VA), ('L', heap.L, VL), ('L2', heap.L.unranked, VL2)]
    if full:
        lists.append(('G', heap.G, VG))
    for name, vl, t in lists:
        entries = _walk_vlist(name, vl, report)
        if len(entries) != expect[t]:
            report.fail('violation_membership',
                        f'list {name}: {len(entries)} entries, {expect[t]} nodes claim membership')
        for v in entries:
            if v.vtype != t:
                report.fail('l_segmentation' if t in (VL, VL2) else 'violation_membership',
                            f'list {name}: entry of type {VTYPE_NAMES[v.vtype]}')
            if id(v.node) not in seen or v.node.ventry is not v:
                report.fail('violation_membership', f'list {name}: stale entry for #{v.node.id}')
        if t == VL2:
            for v in entries:
                if v.node.loss < 2:
                    report.fail('l_segmentation', f'#{v.node.id} with loss {v.node.loss} in the loss>=2 part')
            continue
        if t == VL:
            for v in entries:
                if v.node.loss != 1:
                    report.fail('l_segmentation', f'#{v.node.id} with loss {v.node.loss} in the ranked part')
        _check_rank_organization(name, t, entries, report)
        grouped = {id(v.node.rank_entry) for v in entries}
        for e in heap.rank_entries():
            if e.anchors[t] is not None and id(e) not in grouped:
                report.fail('anchors', f'list {name}: rank {e.index} has an anchor but no entries')

    # counters and bounds ---------------------------------------------------
    if loss_sum != heap.loss_sum:
        report.fail('counters', f'loss sum {heap.loss_sum}, recomputed {loss_sum}')
    bound = heap.config.rank_bound(n)
    sizes = {'A': heap.A.size, 'G': heap.G.size if full else 0, 'loss': loss_sum}
    for name, size in sizes.items():
        if size > bound + 1:
            report.fail('violation_bounds', f'|{name}| = {size} > R(n)+1 = {bound + 1:.2f}')
    if max_rank > bound:
        report.fail('rank_bound', f'max rank {max_rank} > R(n) = {bound:.2f}')

    # node list and degree bound ---------------------------------------------
    max_excess = None
    if full:
        pos = 0
        listed = set()
        x = heap.nl_head
        prev = None
        while x is not None:
            pos += 1
            if id(x) in listed:
                report.fail('node_list', f'#{x.id} listed twice')
                break
            listed.add(id(x))
            if prev is not None and x.nl_prev is not prev:
                report.fail('cyclic_left', 'node list: left link broken')
            b = degree_bound(n, pos)
            excess = x.degree - b
            if max_excess is None or excess > max_excess:
                max_excess = excess
            if x.degree > b:
                report.fail('degree_bound', f'#{x.id} at position {pos}: degree {x.degree} > {b:.2f}')
            prev = x
            x = x.nl_next
        if heap.nl_head is not None and heap.nl_head.nl_prev is not prev:
            report.fail('cyclic_left', 'node list: left of leftmost is not rightmost')
        if listed != seen:
            report.fail('node_list', f'node list has {len(listed)} nodes, heap has {len(seen)}')
    elif heap.nl_head is not None:
        report.fail('node_list', 'simplified variant keeps a node list')

    # rank-list reference counts ---------------------------------------------
    records = {id(heap): heap}
    for x in nodes:
        rec = x.rank_entry.heap
        records[id(rec)] = rec
    for rec in records.values():
        if rec.reclaimed:
            report.fail('refcounts', 'node points into a reclaimed record')
            continue
        e = rec.rank_head
        last = None
        while e is not None:
            want = rank_users.get(id(e), 0) + (1 if e.next is not None else 0)
            if e.refcount != want:
                report.fail('refcounts', f'rank {e.index}: refcount {e.refcount}, expected {want}')
            if e.heap is not rec:
                report.fail('refcounts', f'rank {e.index}: wrong record backlink')
            last = e
            e = e.next
        if rec.rank_tail is not last:
            report.fail('refcounts', 'rank list tail pointer stale')
        if last is not rec.rank_head and last.refcount == 0:
            report.fail('refcounts', 'rank list not trimmed')
        if rec.size < 0 and rec.rank_head.refcount == 0:
            report.fail('refcounts', 'drained dead record not reclaimed')

    report.stats.update(n=n, max_rank=max_rank, A=sizes['A'], G=sizes['G'],
                        loss=loss_sum, rank_bound=bound, max_degree_excess=max_excess)
    _margins(report.stats)
    return report


def _margins(stats):
    b = stats['rank_bound']
    stats['A_margin'] = stats['A'] - (b + 1)
    stats['G_margin'] = stats['G'] - (b + 1)
    stats['loss_margin'] = stats['loss'] - (b + 1)
    stats['rank_margin'] = stats['max_rank'] - b
    stats['degree_margin'] = stats['max_degree_excess']


def check_bounds(heap):
    '''Cheap probe of the size, rank and degree bounds.

    Reads the maintained counters instead of recounting; the full checker
    cross-checks those counters.  Cost is one node-list pass (full variant).
    '''
    report = InvariantReport()
    if heap.size < 0:
        report.stats['dead'] = True
        return report
    n = heap.size
    full = heap.full
    bound = heap.config.rank_bound(n)
    sizes = {'A': heap.A.size, 'G': heap.G.size if full else 0, 'loss': heap.loss_sum}
    for name, size in sizes.items():
        if size > bound + 1:
            report.fail('violation_bounds', f'|{name}| = {size} > R(n)+1 = {bound + 1:.2f}')
    max_rank = heap.rank_tail.index
    if max_rank > bound:
        report.fail('rank_bound', f'max rank {max_rank} > R(n) = {bound:.2f}')
    root = heap.child
    if root is not None and root.right is not None:
        report.fail('single_tree', 'more than one tree')
    max_excess = None
    if full:
        # the bound falls with position, so per degree only the last node counts
        degs = []
        x = heap.nl_head
        while x is not None:
            degs.append(x.degree)
            x = x.nl_next
        last = {d: p for p, d in enumerate(degs, 1)}
        for d, p in last.items():
            excess = d - degree_bound(n, p)
            if max_excess is None or excess > max_excess:
                max_excess = excess
            if excess > 0:
                report.fail('degree_bound', f'node at position {p}: degree {d} > {d - excess:.2f}')
    report.stats.update(n=n, max_rank=max_rank, A=sizes['A'], G=sizes['G'],
                        loss=sizes['loss'], rank_bound=bound, max_degree_excess=max_excess)
    _margins(report.stats)
    return report


def _check_rank_organization(name, t, entries, report):
    ranks = [v.node.rank_entry for v in entries]
    groups = []
    for i, e in enumerate(ranks):
        if i and ranks[i - 1] is e:
            groups[-1][1] += 1
        else:
            groups.append([e, 1, entries[i]])
    seen = set()
    for e, count, first in groups:
        if id(e) in seen:
            report.fail('anchors', f'list {name}: rank {e.index} not contiguous')
        seen.add(id(e))
        if e.anchors[t] is not first:
            report.fail('anchors', f'list {name}: anchor of rank {e.index} is not its leftmost entry')
    dup = any(count > 1 for _, count, _ in groups)
    pair = len(ranks) >= 2 and ranks[-1] is ranks[-2]
    if dup != pair:
        report.fail('pair_at_right_end', f'list {name}: duplicate ranks but no pair at the right end')
    # multi-entry groups must form a suffix
    multi = [count > 1 for _, count, _ in groups]
    if True in multi and False in multi[multi.index(True):]:
        report.fail('pair_at_right_end', f'list {name}: singleton group right of a multi group')
