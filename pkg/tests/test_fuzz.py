import pytest

import wcheap.transformations
from wcheap.trace import DecKey, Ins, Meld, Segment, TraceFile
from wcheap.verification.fuzz import (
    Mix, _drop_items, differential_fuzz, generate_trace, minimize_trace,
)
from wcheap.verification.oracle import oracle_apply
from wcheap.verification.replay import check_every_from_env, run_trace


def test_mix_parse_and_str():
    m = Mix.parse('ins:4,delmin:2')
    assert (m.ins, m.delmin, m.deckey, m.meld, m.peek) == (4, 2, 0, 0, 0)
    assert Mix.parse(str(Mix())) == Mix()
    for bad in ('ins', 'foo:1', 'ins:-1', 'ins:x'):
        with pytest.raises(ValueError):
            Mix.parse(bad)


def test_mix_validation():
    Mix().validate('full')
    Mix.default('simple').validate('simple')
    with pytest.raises(ValueError):
        Mix().validate('simple')
    with pytest.raises(ValueError):
        Mix(delmin=0).validate('full')


def test_generated_trace_is_deterministic_and_well_formed():
    a, b = generate_trace(9, 3000), generate_trace(9, 3000)
    assert a == b and len(a.ops) == 3000
    oracle_apply(a)
    assert generate_trace(10, 3000) != a


def test_simple_traces_have_no_meld():
    tf = generate_trace(2, 3000, variant='simple')
    assert not any(isinstance(x, (Meld, Segment)) for x in tf.items)


def test_fuzz_seed_one_full():
    v = differential_fuzz(1, 10_000)
    assert v.passed and v.ops_run == 10_000 and v.checks == 625


def test_fuzz_simple():
    v = differential_fuzz(1, 5000, variant='simple')
    assert v.passed and v.budget.violations == []


def test_fuzz_slow_mode():
    v = differential_fuzz(4, 1500, check_every=1)
    assert v.passed and v.full_checks >= 1500


def test_env_forces_check_every_op(monkeypatch):
    monkeypatch.setenv('WCHEAP_CHECK', '1')
    assert check_every_from_env(16) == 1
    v = run_trace(generate_trace(5, 300), 16)
    assert v.passed and v.checks == 300


def test_injected_bug_gives_reproducer(monkeypatch):
    monkeypatch.setattr(wcheap.transformations, 'rank_decrement', lambda *a: False)
    v = differential_fuzz(1, 2000)
    assert not v.passed and v.failure
    rep = v.reproducer
    assert rep is not None and len(rep.ops) < 50
    assert not run_trace(rep, 1).passed
    oracle_apply(rep)


def test_drop_items_reindexes_deckeys():
    tf = TraceFile(0, 'full', [Ins(5), Ins(6), Segment(0, (7, 8)), Meld(0),
                               DecKey(3, 1), DecKey(1, 2), DecKey(0, 0)])
    out = _drop_items(tf, {0})
    assert out.items == [Ins(6), Segment(0, (7, 8)), Meld(0), DecKey(2, 1), DecKey(0, 2)]
    out = _drop_items(tf, {3})
    assert out.items == [Ins(5), Ins(6), DecKey(1, 2), DecKey(0, 0)]


def test_minimize_keeps_failure():
    tf = generate_trace(8, 400)
    target = 3

    def still_fails(t):
        return sum(isinstance(x, DecKey) for x in t.items) >= target

    small = minimize_trace(tf, still_fails)
    assert still_fails(small) and len(small.items) < len(tf.items)
    assert sum(isinstance(x, DecKey) for x in small.items) == target
    oracle_apply(small)
