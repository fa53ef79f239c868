import math
import random

import pytest

from wcheap import Heap
from wcheap.verification.checker import (
    CHECKS, check_bounds, check_invariants, degree_bound,
)


def mixed_heap(variant='full', n_ops=1000, seed=0):
    rnd = random.Random(seed)
    h = Heap(variant=variant)
    live = []
    for _ in range(n_ops):
        r = rnd.random()
        if r < 0.45 or not live:
            live.append(h.insert(rnd.randrange(1 << 20)))
        elif r < 0.7:
            h.delete_min()
            live = [x for x in live if x.alive]
        elif r < 0.95:
            x = rnd.choice(live)
            h.decrease_key(x, x.value - rnd.randrange(1, 1 << 12))
        elif variant == 'full':
            side = Heap()
            live += [side.insert(rnd.randrange(1 << 20)) for _ in range(rnd.randrange(9))]
            h = h.meld(side)
    return h


def first(h, pred):
    return next(x for x in h.node_list() if pred(x))


def test_fresh_heap_passes():
    for v in ('full', 'simple'):
        report = check_invariants(Heap(variant=v))
        assert report.ok and set(report.results) == set(CHECKS)


@pytest.mark.parametrize('variant', ['full', 'simple'])
def test_mixed_heap_passes(variant):
    h = mixed_heap(variant)
    report = check_invariants(h)
    assert report.ok, str(report)
    assert report.stats['n'] == len(h)


def test_degree_bound_formula():
    assert degree_bound(1, 1) == 24 + 4
    assert degree_bound(8, 0) == 24 + 4 * 4
    assert math.isclose(degree_bound(100, 37), 24 + 4 * math.log2(163))


def test_corrupted_loss_flags_l_membership():
    h = mixed_heap()
    x = first(h, lambda y: y.parent is not None and y.state == 0 and y.loss == 0
              and y.ventry is None)
    x.loss = 1
    report = check_invariants(h)
    assert report.results['violation_membership'] is not None
    assert f'#{x.id}' in report.results['violation_membership']


def test_corrupted_rank_cache():
    h = mixed_heap()
    x = first(h, lambda y: y.rank > 0)
    x.rank += 1
    assert check_invariants(h).results['rank_count'] is not None


def test_broken_heap_order():
    h = mixed_heap()
    c = first(h, lambda y: y.parent is not None)
    c.value = c.parent.value - 1
    assert check_invariants(h).results['heap_order'] is not None


def test_refcount_drift():
    h = mixed_heap()
    h.rank_head.refcount += 1
    assert check_invariants(h).results['refcounts'] is not None


def test_broken_left_link():
    h = mixed_heap()
    p = first(h, lambda y: y.degree >= 2)
    p.child.left = p.child
    assert check_invariants(h).results['cyclic_left'] is not None


def test_excess_degree_reported():
    h = mixed_heap(n_ops=200)
    report = check_invariants(h)
    assert report.stats['degree_margin'] < 0
    h.nl_head.degree += 1000
    bad = check_invariants(h)
    assert bad.results['degree_bound'] is not None
    assert check_bounds(h).results['degree_bound'] is not None


def test_bounds_probe_agrees_with_full_check():
    for seed in range(3):
        h = mixed_heap(seed=seed)
        full, quick = check_invariants(h), check_bounds(h)
        assert quick.ok
        for k in ('n', 'max_rank', 'A', 'G', 'loss', 'A_margin', 'rank_margin'):
            assert full.stats[k] == quick.stats[k]
        assert math.isclose(full.stats['degree_margin'], quick.stats['degree_margin'])


def test_report_text():
    h = mixed_heap(n_ops=50)
    assert str(check_invariants(h)) == 'all invariants hold'
    h.A.size += 1
    assert 'counters' in str(check_invariants(h))
