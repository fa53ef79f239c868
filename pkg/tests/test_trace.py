import pytest
from hypothesis import given, strategies as st

from wcheap import trace as T
from wcheap.verification.fuzz import generate_trace

ints = st.integers(-(1 << 63), (1 << 63) - 1)
plain_ops = st.one_of(
    st.builds(T.Ins, ints), st.just(T.DelMin()), st.just(T.Peek()),
    st.builds(T.DecKey, st.integers(0, 1 << 32), ints))


@st.composite
def trace_files(draw):
    variant = draw(st.sampled_from(['full', 'simple']))
    items = []
    for op in draw(st.lists(st.one_of(plain_ops, st.just('meld')), max_size=40)):
        if op == 'meld':
            if variant == 'simple':
                continue
            sid = len([x for x in items if isinstance(x, T.Segment)])
            items.append(T.Segment(sid, tuple(draw(st.lists(ints, max_size=4)))))
            items.append(T.Meld(sid))
        else:
            items.append(op)
    return T.TraceFile(draw(st.integers(0, T.U64_MAX)), variant, items)


@given(trace_files())
def test_round_trip(tf):
    text = tf.serialize()
    back = T.parse(text)
    assert back == tf
    assert back.serialize() == text


def test_fuzz_trace_round_trip(tmp_path):
    tf = generate_trace(3, 2000)
    path = tmp_path / 'a.trace'
    tf.write(path)
    assert path.read_bytes() == tf.serialize().encode()
    assert T.read(path) == tf


def test_example_text():
    text = ('wcheap-trace v1 seed=7 variant=full\n'
            'ins 5\nins -3\ndeckey 0 -4\npeek\nsegment 0\nins 9\nend\nmeld 0\ndelmin\n')
    tf = T.parse(text)
    assert tf.seed == 7 and tf.variant == 'full'
    assert tf.ops == [T.Ins(5), T.Ins(-3), T.DecKey(0, -4), T.Peek(), T.Meld(0), T.DelMin()]
    assert tf.segments() == {0: T.Segment(0, (9,))}
    assert T.parse(tf.serialize()).serialize() == text


H = 'wcheap-trace v1 seed=1 variant=full\n'


@pytest.mark.parametrize('text,line', [
    ('wcheap-trace v2 seed=1 variant=full\n', 1),
    ('wcheap-trace v1 seed=01 variant=full\n', 1),
    (f'wcheap-trace v1 seed={1 << 64} variant=full\n', 1),
    (H + 'ins 01\n', 2),
    (H + 'ins +1\n', 2),
    (H + 'ins -0\n', 2),
    (H + 'ins 1 \n', 2),
    (H + 'delmin\nDELMIN\n', 3),
    (H + 'deckey -1 3\n', 2),
    (H + 'meld 0\n', 2),
    (H + 'segment 0\nend\nmeld 0\nmeld 0\n', 5),
    (H + 'segment 0\nend\nsegment 0\nend\n', 4),
    (H + 'segment 0\ndelmin\nend\n', 3),
    (H + 'ins 1\nsegment 4\nins 2\n', 3),
    (H + '\n', 2),
    ('wcheap-trace v1 seed=1 variant=simple\nsegment 0\nend\nmeld 0\n', 4),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(T.TraceError) as e:
        T.parse(text)
    assert e.value.line == line
    assert f'line {line}' in str(e.value)


def test_missing_final_newline():
    with pytest.raises(T.TraceError):
        T.parse(H + 'delmin')
