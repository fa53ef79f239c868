"""Benchmark workloads over any heap with insert / delete_min /
decrease_key and ``comparisons`` / ``steps`` counters."""

import random
import time

from .baselines import BinaryHeap, PairingHeap
from .core import VariantConfig
from .heap import Heap
from .verification.replay import CostRow

IMPLS = ('wcheap-full', 'wcheap-simple', 'binary', 'pairing')
WORKLOADS = ('sorted', 'reverse', 'random', 'dijkstra')


def make_impl(name):
    if name == 'wcheap-full':
        return Heap(VariantConfig('full'))
    if name == 'wcheap-simple':
        return Heap(VariantConfig('simple'))
    if name == 'binary':
        return BinaryHeap()
    if name == 'pairing':
        return PairingHeap()
    raise ValueError(f'unknown impl {name!r}')


class _Meter:
    '''Runs heap calls and records one CostRow per call.'''

    def __init__(self, heap, rows):
        self.heap = heap
        self.rows = rows
        self.i = 0

    def call(self, op, fn, *args):
        h = self.heap
        n = len(h)
        c0 = h.comparisons
        s0 = h.steps
        t0 = time.perf_counter_ns()
        out = fn(*args)
        wall = time.perf_counter_ns() - t0
        if self.rows is not None:
            self.rows.append(CostRow(self.i, op, n, h.comparisons - c0, h.steps - s0, wall))
        self.i += 1
        return out


def _sort_workload(heap, values, rows):
    m = _Meter(heap, rows)
    for v in values:
        m.call('ins', heap.insert, v)
    out = [m.call('delmin', heap.delete_min)[0] for _ in values]
    return sum(out)


def random_graph(n, seed=0, degree=4, max_weight=1000):
    '''Seeded digraph: a random Hamiltonian path (so every vertex is
    reachable from vertex 0) plus ``degree - 1`` random out-edges each.'''
    rnd = random.Random(seed)
    order = list(range(1, n))
    rnd.shuffle(order)
    adj = [[] for _ in range(n)]
    prev = 0
    for v in order:
        adj[prev].append((v, rnd.randint(1, max_weight)))
        prev = v
    for u in range(n):
        for _ in range(degree - 1):
            adj[u].append((rnd.randrange(n), rnd.randint(1, max_weight)))
    return adj


def dijkstra(heap, adj, source=0, rows=None):
    '''Shortest-path distances from ``source`` using decrease_key.'''
    m = _Meter(heap, rows)
    inf = None
    dist = [inf] * len(adj)
    handle = [None] * len(adj)
    done = [False] * len(adj)
    dist[source] = 0
    handle[source] = m.call('ins', heap.insert, 0, source)
    while len(heap):
        x = heap.find_min()
        u = x.item
        m.call('delmin', heap.delete_min)
        done[u] = True
        du = dist[u]
        for v, w in adj[u]:
            if done[v]:
                continue
            d = du + w
            if dist[v] is None:
                dist[v] = d
                handle[v] = m.call('ins', heap.insert, d, v)
            elif d < dist[v]:
                dist[v] = d
                m.call('deckey', heap.decrease_key, handle[v], d)
    return dist


def run_workload(name, n, impl, seed=0, rows=None):
    '''Run one workload; returns a result value (sum of outputs or of
    shortest-path distances) that must agree across implementations.'''
    heap = make_impl(impl)
    if name == 'sorted':
        return _sort_workload(heap, range(n), rows)
    if name == 'reverse':
        return _sort_workload(heap, range(n - 1, -1, -1), rows)
    if name == 'random':
        rnd = random.Random(seed)
        return _sort_workload(heap, [rnd.randrange(1 << 40) for _ in range(n)], rows)
    if name == 'dijkstra':
        dist = dijkstra(heap, random_graph(n, seed), rows=rows)
        return sum(d for d in dist if d is not None)
    raise ValueError(f'unknown workload {name!r}')
