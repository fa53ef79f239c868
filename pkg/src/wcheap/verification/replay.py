"""Lockstep replay of a trace on the heap, checked against the oracle."""

import os
import time
from dataclasses import dataclass, field
from typing import Optional

from ..core import VariantConfig
from ..heap import Heap
from ..trace import DecKey, DelMin, Ins, Meld, Peek, Segment, TraceError, TraceFile
from .checker import check_bounds, check_invariants
from .oracle import oracle_apply

CSV_HEADER = 'op_index,op,n,comparisons,steps,wall_ns'

# Largest comparison count of one applied step, per variant.  Degree
# reduction and G steps are exact.
STEP_LIMITS = {
    'full': {'degree': 3, 'A': 4, 'G': 1, 'L': 3},
    'simple': {'A': 1, 'L': 1},
}
EXACT_STEPS = {'degree': 3, 'G': 1}


@dataclass(frozen=True)
class CostRow:
    op_index: int
    op: str
    n: int
    comparisons: int
    steps: int
    wall_ns: int = 0
    plans: tuple = ()     # (tag, l, a, g) of every plan run by the op

    def csv(self, wall=True):
        w = self.wall_ns if wall else ''
        return f'{self.op_index},{self.op},{self.n},{self.comparisons},{self.steps},{w}'


class BudgetRecorder:
    '''Heap recorder hook checking per-step and per-plan comparison budgets.'''

    def __init__(self, variant):
        self.variant = str(getattr(variant, 'value', variant))
        self.limits = STEP_LIMITS[self.variant]
        self.step_counts = {}
        self.step_max = {}
        self.plan_count = 0
        self.plan_slack = None    # min over plans of budget - used
        self.violations = []
        self.current = []

    def step(self, kind, comparisons):
        self.step_counts[kind] = self.step_counts.get(kind, 0) + 1
        if comparisons > self.step_max.get(kind, -1):
            self.step_max[kind] = comparisons
        limit = self.limits.get(kind)
        if limit is None:
            self.violations.append(f'{kind} step in the {self.variant} variant')
        elif comparisons > limit or (kind in EXACT_STEPS and comparisons != EXACT_STEPS[kind]):
            self.violations.append(f'{kind} step used {comparisons} comparisons (limit {limit})')

    def plan(self, tag, l, a, g, comparisons, budget):
        self.plan_count += 1
        slack = budget - comparisons
        if self.plan_slack is None or slack < self.plan_slack:
            self.plan_slack = slack
        if comparisons > budget:
            self.violations.append(
                f'{tag} plan (l={l}, a={a}, g={g}) used {comparisons} > {budget}')
        self.current.append((tag, l, a, g))

    def take_plans(self):
        out = tuple(self.current)
        self.current.clear()
        return out


@dataclass
class Verdict:
    passed: bool
    trace: TraceFile
    ops_run: int = 0
    failure: Optional[str] = None
    op_index: Optional[int] = None
    checks: int = 0
    full_checks: int = 0
    margins: dict = field(default_factory=dict)   # worst (observed - bound)
    budget: Optional[BudgetRecorder] = None
    reproducer: Optional[TraceFile] = None

    def __bool__(self):
        return self.passed


def _merge_margins(margins, stats):
    for k in ('A', 'G', 'loss', 'rank', 'degree'):
        v = stats.get(k + '_margin')
        if v is not None and (k not in margins or v > margins[k]):
            margins[k] = v


def check_every_from_env(check_every):
    return 1 if os.environ.get('WCHEAP_CHECK') == '1' else check_every


def run_trace(trace, check_every=0, full_every=None, budgets=False, rows=None,
              key_type='int'):
    '''Replay ``trace`` on a fresh heap in lockstep with the oracle.

    Every ``check_every`` ops (0 disables) the violation, rank and degree
    bounds are checked; every ``full_every`` ops (default: same as
    check_every) the full invariant checker runs.  The final state is
    always checked in full.  ``rows`` (a list) receives one CostRow per op.
    '''
    check_every = check_every_from_env(check_every)
    if full_every is None:
        full_every = check_every
    elif check_every == 1:
        full_every = 1
    expected = oracle_apply(trace)     # raises TraceError on malformed traces
    config = VariantConfig(trace.variant, key_type)
    heap = Heap(config)
    recorder = BudgetRecorder(trace.variant) if budgets or rows is not None else None
    heap.recorder = recorder
    verdict = Verdict(True, trace, budget=recorder)
    nodes = []
    index_of = {}
    pending = {}
    out_i = 0
    op_i = -1

    def fail(msg):
        verdict.passed = False
        verdict.failure = msg
        verdict.op_index = op_i
        return verdict

    perf = time.perf_counter_ns
    for it in trace.items:
        if isinstance(it, Segment):
            pending[it.id] = it
            continue
        op_i += 1
        n0 = heap.size
        c0 = heap.comparisons
        s0 = heap.steps
        t0 = perf()
        try:
            if isinstance(it, Ins):
                x = heap.insert(it.value)
                index_of[x.id] = len(nodes)
                nodes.append(x)
                name = 'ins'
            elif isinstance(it, DelMin):
                value, nid = heap.delete_min()
                got = (value, index_of[nid])
                name = 'delmin'
            elif isinstance(it, DecKey):
                heap.decrease_key(nodes[it.index], it.value)
                name = 'deckey'
            elif isinstance(it, Peek):
                x = heap.find_min()
                got = None if x is None else (x.value, index_of[x.id])
                name = 'peek'
            elif isinstance(it, Meld):
                side = Heap(config)
                side.recorder = recorder
                for v in pending.pop(it.segment).values:
                    y = side.insert(v)
                    index_of[y.id] = len(nodes)
                    nodes.append(y)
                if recorder is not None:
                    recorder.take_plans()
                c0 += side.comparisons
                s0 += side.steps
                res = heap.meld(side)
                other = side if res is heap else heap
                heap = res
                c1 = heap.comparisons + other.comparisons
                s1 = heap.steps + other.steps
                name = 'meld'
            else:
                raise TraceError(f'unknown op {it!r}')
        except TraceError:
            raise
        except Exception as e:
            return fail(f'op {op_i} ({it!r}) raised {type(e).__name__}: {e}')
        wall = perf() - t0
        if not isinstance(it, Meld):
            c1 = heap.comparisons
            s1 = heap.steps
        if rows is not None:
            rows.append(CostRow(op_i, name, n0, c1 - c0, s1 - s0, wall,
                                recorder.take_plans()))
        if isinstance(it, (DelMin, Peek)):
            want = expected[out_i]
            out_i += 1
            if got != want:
                return fail(f'op {op_i} ({name}): heap gave {got}, oracle {want}')
        root = heap.child
        if root is not None and root.right is not None:
            return fail(f'op {op_i} ({name}): {heap.size} nodes left in more than one tree')
        if recorder is not None and recorder.violations:
            return fail(f'op {op_i} ({name}): {recorder.violations[0]}')
        verdict.ops_run = op_i + 1
        if check_every and (op_i + 1) % check_every == 0:
            verdict.checks += 1
            if full_every and (op_i + 1) % full_every == 0:
                verdict.full_checks += 1
                report = check_invariants(heap)
            else:
                report = check_bounds(heap)
            _merge_margins(verdict.margins, report.stats)
            if not report.ok:
                return fail(f'op {op_i} ({name}): {report}')
    verdict.full_checks += 1
    report = check_invariants(heap)
    _merge_margins(verdict.margins, report.stats)
    if not report.ok:
        return fail(f'final state: {report}')
    return verdict
