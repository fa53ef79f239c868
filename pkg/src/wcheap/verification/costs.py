"""Per-operation cost measurement and worst-case envelopes."""

import math
import random
from dataclasses import dataclass, field

from ..trace import DecKey, DelMin, Ins, Meld, Segment, TraceFile
from .oracle import ReferenceQueue
from .replay import run_trace


@dataclass
class OpStats:
    count: int = 0
    max_comparisons: int = 0
    max_steps: int = 0
    total_comparisons: int = 0
    total_steps: int = 0

    def add(self, row):
        self.count += 1
        self.total_comparisons += row.comparisons
        self.total_steps += row.steps
        if row.comparisons > self.max_comparisons:
            self.max_comparisons = row.comparisons
        if row.steps > self.max_steps:
            self.max_steps = row.steps


@dataclass
class CostSummary:
    per_op: dict = field(default_factory=dict)     # op name -> OpStats
    envelope: tuple = (0.0, 0.0)                   # (C1, C2) for delmin comparisons
    step_envelope: tuple = (0.0, 0.0)              # (C1, C2) for delmin steps
    plan_count: int = 0
    plan_violations: list = field(default_factory=list)
    step_max: dict = field(default_factory=dict)
    passed: bool = True
    failure: str = None


def fit_log_envelope(rows, op='delmin', metric='comparisons'):
    '''Fit ``metric <= C1*log2(n+2) + C2`` over the rows of ``op``.

    C1 is the least-squares slope through the per-bucket maxima (buckets
    of equal floor(log2(n+2))), clamped at 0; C2 is the smallest offset
    covering every row.
    '''
    best = {}
    pts = []
    for r in rows:
        if r.op != op:
            continue
        x = math.log2(r.n + 2)
        y = getattr(r, metric)
        pts.append((x, y))
        b = int(x)
        if b not in best or y > best[b][1]:
            best[b] = (x, y)
    if not pts:
        return 0.0, 0.0
    pm = list(best.values())
    c1 = 0.0
    if len(pm) >= 2:
        mx = sum(p[0] for p in pm) / len(pm)
        my = sum(p[1] for p in pm) / len(pm)
        sxx = sum((p[0] - mx) ** 2 for p in pm)
        if sxx > 0:
            c1 = max(0.0, sum((p[0] - mx) * (p[1] - my) for p in pm) / sxx)
    c2 = max(y - c1 * x for x, y in pts)
    return c1, c2


def measure_costs(trace, variant=None, check_every=0):
    '''Replay ``trace`` and return (rows, CostSummary).'''
    if variant is not None and variant != trace.variant:
        trace = TraceFile(trace.seed, variant, trace.items)
    rows = []
    verdict = run_trace(trace, check_every, rows=rows)
    summary = CostSummary()
    for r in rows:
        summary.per_op.setdefault(r.op, OpStats()).add(r)
    summary.envelope = fit_log_envelope(rows)
    summary.step_envelope = fit_log_envelope(rows, metric='steps')
    rec = verdict.budget
    summary.plan_count = rec.plan_count
    summary.plan_violations = [v for v in rec.violations if 'plan' in v]
    summary.step_max = dict(rec.step_max)
    summary.passed = verdict.passed
    summary.failure = verdict.failure
    return rows, summary


def sized_workload(seed, n, variant='full', mixed_ops=None, key_range=1 << 30,
                   max_segment=16):
    '''Grow to ``n`` nodes, run ``mixed_ops`` (default ``n``) mixed ops
    around that size, then drain.

    The mixed phase keeps the size near ``n`` (balanced inserts and
    delete-mins) and includes decrease-keys and, for the full variant,
    melds of small side heaps.
    '''
    rnd = random.Random(seed)
    model = ReferenceQueue()
    items = []
    live = []
    slot = {}

    def add(v):
        i = model.insert(v)
        slot[i] = len(live)
        live.append(i)

    def drop(i):
        j = slot.pop(i)
        last = live.pop()
        if last != i:
            live[j] = last
            slot[last] = j

    for _ in range(n):
        v = rnd.randrange(key_range)
        items.append(Ins(v))
        add(v)
    seg = 0
    for _ in range(n if mixed_ops is None else mixed_ops):
        r = rnd.random()
        if r < 0.3 or not live:
            v = rnd.randrange(key_range)
            items.append(Ins(v))
            add(v)
        elif r < 0.6:
            items.append(DelMin())
            drop(model.delete_min()[1])
        elif r < 0.95 or variant != 'full':
            i = live[rnd.randrange(len(live))]
            v = model.value_of(i) - rnd.randint(1, key_range >> 6)
            items.append(DecKey(i, v))
            model.decrease_key(i, v)
        else:
            vals = tuple(rnd.randrange(key_range) for _ in range(rnd.randrange(max_segment + 1)))
            items.append(Segment(seg, vals))
            items.append(Meld(seg))
            seg += 1
            for v in vals:
                add(v)
    items.extend(DelMin() for _ in range(len(model)))
    return TraceFile(seed, variant, items)
