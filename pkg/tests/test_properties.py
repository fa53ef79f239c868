from hypothesis import given, strategies as st

from wcheap import Heap

ops = st.lists(st.tuples(st.sampled_from(['ins', 'ins', 'del', 'dec', 'meld', 'peek']),
                         st.integers(-1000, 1000), st.integers(0, 1 << 20)),
               max_size=120)


def run_program(variant, program):
    h = Heap(variant=variant)
    live = {}       # id -> node
    for op, v, pick in program:
        if op == 'meld' and variant != 'full':
            op = 'ins'
        if op in ('del', 'dec', 'peek') and not live:
            op = 'ins'
        if op == 'ins':
            x = h.insert(v)
            live[x.id] = x
        elif op == 'del':
            want = min((x.value, x.id) for x in live.values())
            assert h.delete_min() == want
            del live[want[1]]
        elif op == 'dec':
            x = list(live.values())[pick % len(live)]
            h.decrease_key(x, min(v, x.value))
        elif op == 'peek':
            want = min((x.value, x.id) for x in live.values())
            assert h.find_min().key == want
        else:
            side = Heap()
            for i in range(pick % 7):
                y = side.insert(v + i)
                live[y.id] = y
            h = h.meld(side)
        assert len(h) == len(live)
        report = h.check_invariants()
        assert report.ok, str(report)


@given(ops)
def test_full_heap_matches_model(program):
    run_program('full', program)


@given(ops)
def test_simple_heap_matches_model(program):
    run_program('simple', program)


@given(st.lists(st.integers(-50, 50), max_size=200))
def test_heapsort(values):
    for variant in ('full', 'simple'):
        h = Heap(variant=variant)
        for v in values:
            h.insert(v)
        assert [h.delete_min()[0] for _ in values] == sorted(values)
