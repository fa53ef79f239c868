"""Acceptance gate: one test and one printed verdict line per criterion.

Run alone with ``pytest tests/test_acceptance.py`` (about three minutes).
Correctness parts are hard assertions.  A missed wall-clock target is
reported as FAIL and marked xfail with the measured numbers.
"""

import math
import random
import time

import pytest

from wcheap import Heap
from wcheap.cli import main
from wcheap.verification.costs import fit_log_envelope, measure_costs, sized_workload
from wcheap.verification.fuzz import Mix, differential_fuzz, generate_trace

SEEDS = range(100)
N_OPS = 10_000
CHECK_EVERY = 16
FULL_EVERY = 4096
MIXES = {'full': Mix(ins=40, delmin=25, deckey=30, meld=5),
         'simple': Mix(ins=40, delmin=25, deckey=30, meld=0)}


@pytest.fixture(scope='module')
def sweep():
    '''Criterion 1's runs, shared by criteria 2 to 6.'''
    out = {'verdicts': [], 'margins': {}, 'plans': 0, 'plan_violations': [],
           'step_violations': [], 'step_max': {}, 'slack': None}
    t0 = time.perf_counter()
    for variant, mix in MIXES.items():
        for seed in SEEDS:
            v = differential_fuzz(seed, N_OPS, mix, variant, CHECK_EVERY, FULL_EVERY)
            out['verdicts'].append((variant, seed, v))
            for k, m in v.margins.items():
                if m is not None and (k not in out['margins'] or m > out['margins'][k]):
                    out['margins'][k] = m
            rec = v.budget
            out['plans'] += rec.plan_count
            for msg in rec.violations:
                kind = 'plan_violations' if 'plan' in msg else 'step_violations'
                out[kind].append(f'{variant} seed {seed}: {msg}')
            for kind, c in rec.step_max.items():
                key = (variant, kind)
                out['step_max'][key] = max(out['step_max'].get(key, 0), c)
            if rec.plan_slack is not None:
                out['slack'] = rec.plan_slack if out['slack'] is None else min(out['slack'], rec.plan_slack)
    out['seconds'] = time.perf_counter() - t0
    return out


def _failures(sweep, word):
    return [f'{var} seed {s}: {v.failure}' for var, s, v in sweep['verdicts']
            if not v.passed and word in (v.failure or '')]


def test_1_differential_correctness(sweep, criterion):
    bad = [f'{var} seed {s}: {v.failure}' for var, s, v in sweep['verdicts'] if not v.passed]
    runs = len(sweep['verdicts'])
    ops = sum(v.ops_run for _, _, v in sweep['verdicts'])
    secs = sweep['seconds']
    fast = secs < 60
    criterion(1, not bad and fast,
              f'{runs - len(bad)}/{runs} runs match the oracle ({ops} ops); '
              f'runtime {secs:.1f} s (target < 60 s)')
    assert not bad, bad[:3]
    assert ops == runs * N_OPS
    if not fast:
        pytest.xfail(f'outputs all equal, but the sweep took {secs:.1f} s > 60 s')


def test_2_violation_bounds(sweep, criterion):
    m = sweep['margins']
    worst = max(m['A'], m['G'], m['loss'])
    bad = _failures(sweep, 'violation_bounds')
    ok = worst <= 0 and not bad
    criterion(2, ok, f'max over checkpoints of size - (R(n)+1): A {m["A"]:.2f}, '
                     f'G {m["G"]:.2f}, loss {m["loss"]:.2f}; {len(bad)} violations')
    assert ok, bad[:3]


def test_3_rank_bound(sweep, criterion):
    m = sweep['margins']['rank']
    bad = _failures(sweep, 'rank_bound')
    ok = m <= 0 and not bad
    criterion(3, ok, f'max of (max rank - R(n)) = {m:.2f}; {len(bad)} violations')
    assert ok, bad[:3]


def test_4_degree_bound(sweep, criterion):
    m = sweep['margins']['degree']
    bad = _failures(sweep, 'degree_bound')
    ok = m <= 0 and not bad
    criterion(4, ok, f'full variant: max of (degree - bound) = {m:.2f}; {len(bad)} violations')
    assert ok, bad[:3]


def test_5_plan_budgets(sweep, criterion):
    bad = sweep['plan_violations']
    ok = not bad and sweep['plans'] > 0
    criterion(5, ok, f'{sweep["plans"]} plan executions, minimum slack {sweep["slack"]}, '
                     f'{len(bad)} over budget')
    assert ok, bad[:3]


def test_6_step_budgets(sweep, criterion):
    bad = sweep['step_violations']
    seen = ', '.join(f'{v}/{k}={c}' for (v, k), c in sorted(sweep['step_max'].items()))
    limits = {('full', 'degree'): 3, ('full', 'A'): 4, ('full', 'G'): 1, ('full', 'L'): 3,
              ('simple', 'A'): 1, ('simple', 'L'): 1}
    within = all(c <= limits[key] for key, c in sweep['step_max'].items())
    ok = not bad and within
    criterion(6, ok, f'max comparisons per applied step: {seen}; {len(bad)} violations')
    assert ok, bad[:3]


# Worst-case envelopes ---------------------------------------------------------

SIZES = (1 << 8, 1 << 12, 1 << 16)
MIXED = 1 << 15
CONSTANT_OPS = ('ins', 'deckey', 'meld')


def _window_maxima(n, seed):
    '''Per-op maxima of structural steps over the mixed phase at size n.'''
    tf = sized_workload(seed, n, 'full', mixed_ops=MIXED)
    rows, summary = measure_costs(tf)
    assert summary.passed, summary.failure
    window = rows[n:n + MIXED]
    top = {}
    for r in window:
        top[r.op] = max(top.get(r.op, 0), r.steps)
    return top, rows


def test_7_worst_case_envelopes(criterion):
    t0 = time.perf_counter()
    tops = {}
    rows_mid = None
    for i, n in enumerate(SIZES):
        tops[n], rows = _window_maxima(n, seed=700 + i)
        if n == SIZES[1]:
            rows_mid = rows
    c1, _ = fit_log_envelope(rows_mid, metric='steps')
    secs = time.perf_counter() - t0
    const = {op: [tops[n].get(op, 0) for n in SIZES] for op in CONSTANT_OPS}
    equal = all(len(set(v)) == 1 for v in const.values())
    lo, hi = tops[SIZES[0]]['delmin'], tops[SIZES[-1]]['delmin']
    log_ok = hi <= lo + 8 * c1
    fast = secs < 120
    detail = ('max steps at n=2^8/2^12/2^16: '
              + ', '.join(f'{op} {"/".join(map(str, v))}' for op, v in const.items())
              + f'; delmin {lo}/{tops[SIZES[1]]["delmin"]}/{hi} <= {lo} + 8*{c1:.2f}'
              f' = {lo + 8 * c1:.1f}: {log_ok}; runtime {secs:.1f} s')
    criterion(7, equal and log_ok and fast, detail)
    assert log_ok and fast
    if not equal:
        pytest.xfail('per-op maxima differ across sizes: ' + detail)


def test_8_sortedness_at_scale(criterion):
    rnd = random.Random(8)
    values = [rnd.randrange(1 << 62) for _ in range(100_000)]
    want = sorted(values)
    times = {}
    ok_sorted = True
    for variant in ('full', 'simple'):
        h = Heap(variant=variant)
        t0 = time.perf_counter()
        for v in values:
            h.insert(v)
        out = [h.delete_min()[0] for _ in values]
        times[variant] = time.perf_counter() - t0
        ok_sorted &= out == want
    fast = all(t < 5 for t in times.values())
    criterion(8, ok_sorted and fast,
              'sorted output: ' + str(ok_sorted) + '; '
              + ', '.join(f'{v} {t:.1f} s' for v, t in times.items()) + ' (target < 5 s each)')
    assert ok_sorted
    if not fast:
        pytest.xfail(f'sorted, but slower than 5 s: {times}')


def test_9_replay_determinism(tmp_path, criterion):
    trace = tmp_path / 'fixed.trace'
    generate_trace(2024, 5000).write(trace)
    outs = []
    for i in range(2):
        csv = tmp_path / f'run{i}.csv'
        assert main(['replay', '--trace', str(trace), '--costs', str(csv)]) == 0
        outs.append(csv.read_text())
    strip = [[line.rsplit(',', 1)[0] for line in o.splitlines()] for o in outs]
    same = strip[0] == strip[1] and len(strip[0]) == 5001
    walls_differ = outs[0] != outs[1]
    criterion(9, same, f'{len(strip[0]) - 1} rows identical without wall_ns '
                       f'(raw files differ only in wall_ns: {walls_differ})')
    assert same


if __name__ == '__main__':
    import sys
    sys.exit(pytest.main([__file__, '-q']))
