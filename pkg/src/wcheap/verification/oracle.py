"""Brute-force reference model: a binary heap of (value, node-index) keys
with lazy invalidation.

Shares no code with the heap under test.  Node indices are assigned in
insertion order, which matches the heap's tiebreak ids, so both sides
order equal values identically.
"""

from heapq import heappop, heappush

from ..trace import DecKey, DelMin, Ins, Meld, Peek, Segment, TraceError


class ReferenceQueue:
    '''Decrease-key pushes a fresh key; stale keys are dropped when they
    surface at the top.'''

    __slots__ = ('_keys', '_value', '_next')

    def __init__(self):
        self._keys = []
        self._value = {}      # live node index -> current value
        self._next = 0

    def __len__(self):
        return len(self._value)

    def _prune(self):
        keys = self._keys
        while keys and self._value.get(keys[0][1]) != keys[0][0]:
            heappop(keys)

    def insert(self, value):
        i = self._next
        self._next += 1
        self._value[i] = value
        heappush(self._keys, (value, i))
        return i

    def peek(self):
        self._prune()
        return self._keys[0] if self._keys else None

    def delete_min(self):
        self._prune()
        if not self._keys:
            raise TraceError('delmin on an empty heap')
        k = heappop(self._keys)
        del self._value[k[1]]
        return k

    def decrease_key(self, index, value):
        old = self._value.get(index)
        if old is None:
            raise TraceError(f'deckey of dead or unknown node {index}')
        if value >= old:
            raise TraceError(f'deckey {index}: {value} is not below {old}')
        self._value[index] = value
        heappush(self._keys, (value, index))

    def live(self):
        return sorted(self._value)

    def value_of(self, index):
        return self._value.get(index)


def oracle_apply(trace):
    '''Outputs of every delmin and peek of ``trace``: ``(value, index)``
    pairs, or None for a peek at an empty heap.'''
    o = ReferenceQueue()
    pending = {}
    out = []
    for it in trace.items:
        if isinstance(it, Ins):
            o.insert(it.value)
        elif isinstance(it, DelMin):
            out.append(o.delete_min())
        elif isinstance(it, Peek):
            out.append(o.peek())
        elif isinstance(it, DecKey):
            o.decrease_key(it.index, it.value)
        elif isinstance(it, Segment):
            pending[it.id] = it
        elif isinstance(it, Meld):
            seg = pending.pop(it.segment, None)
            if seg is None:
                raise TraceError(f'meld of undefined segment {it.segment}')
            for v in seg.values:
                o.insert(v)
        else:
            raise TraceError(f'unknown op {it!r}')
    return out
