"""Random trace generation, differential fuzzing and trace minimization."""

import random
from dataclasses import dataclass

from ..trace import DecKey, DelMin, Ins, Meld, Peek, Segment, TraceError, TraceFile
from .oracle import ReferenceQueue, oracle_apply
from .replay import run_trace

OPS = ('ins', 'delmin', 'deckey', 'meld', 'peek')


@dataclass(frozen=True)
class Mix:
    '''Relative op weights.'''
    ins: int = 40
    delmin: int = 25
    deckey: int = 30
    meld: int = 5
    peek: int = 0

    @classmethod
    def parse(cls, text):
        '''Parse ``ins:40,delmin:25,...``; omitted ops get weight 0.'''
        weights = dict.fromkeys(OPS, 0)
        for part in text.split(','):
            name, sep, w = part.strip().partition(':')
            if not sep or name not in weights:
                raise ValueError(f'bad mix entry {part!r}')
            weights[name] = int(w)
            if weights[name] < 0:
                raise ValueError(f'negative weight in {part!r}')
        return cls(**weights)

    @classmethod
    def default(cls, variant='full'):
        return cls() if variant == 'full' else cls(meld=0)

    def validate(self, variant):
        if self.meld > 0 and variant != 'full':
            raise ValueError('meld needs the full variant')
        if self.ins <= 0 or self.delmin <= 0:
            raise ValueError('mix needs positive ins and delmin weights')

    def __str__(self):
        return ','.join(f'{k}:{getattr(self, k)}' for k in OPS)


def generate_trace(seed, n_ops, mix=None, variant='full', key_range=1 << 16,
                   max_segment=16):
    '''Random well-formed trace of ``n_ops`` ops.

    Ops that need a nonempty heap turn into inserts while it is empty.
    Decreased keys always drop strictly.
    '''
    mix = mix or Mix.default(variant)
    mix.validate(variant)
    rnd = random.Random(seed)
    model = ReferenceQueue()
    live = []            # node indices, in no particular order
    slot = {}
    names = [k for k in OPS if getattr(mix, k) > 0]
    weights = [getattr(mix, k) for k in names]
    items = []
    seg_id = 0

    def add(i):
        slot[i] = len(live)
        live.append(i)

    def drop(i):
        j = slot.pop(i)
        last = live.pop()
        if last != i:
            live[j] = last
            slot[last] = j

    for _ in range(n_ops):
        op = rnd.choices(names, weights)[0]
        if op in ('delmin', 'deckey') and not live:
            op = 'ins'
        if op == 'ins':
            v = rnd.randrange(key_range)
            items.append(Ins(v))
            add(model.insert(v))
        elif op == 'delmin':
            items.append(DelMin())
            drop(model.delete_min()[1])
        elif op == 'deckey':
            i = live[rnd.randrange(len(live))]
            v = model.value_of(i) - rnd.randint(1, max(1, key_range // 8))
            items.append(DecKey(i, v))
            model.decrease_key(i, v)
        elif op == 'peek':
            items.append(Peek())
        else:
            values = tuple(rnd.randrange(key_range)
                           for _ in range(rnd.randrange(max_segment + 1)))
            items.append(Segment(seg_id, values))
            items.append(Meld(seg_id))
            seg_id += 1
            for v in values:
                add(model.insert(v))
    return TraceFile(seed, variant, items)


def _drop_items(trace, drop):
    '''Copy of ``trace`` without the item positions in ``drop``.

    Deckeys are re-indexed past removed inserts; deckeys of removed nodes
    and segments without their meld go too.
    '''
    items = trace.items
    dead = set()
    segs = {}
    nxt = 0
    for pos, it in enumerate(items):
        if isinstance(it, Ins):
            if pos in drop:
                dead.add(nxt)
            nxt += 1
        elif isinstance(it, Segment):
            segs[it.id] = (pos, it)
        elif isinstance(it, Meld):
            spos, seg = segs[it.segment]
            if pos in drop or spos in drop:
                dead.update(range(nxt, nxt + len(seg.values)))
            nxt += len(seg.values)
    shift = []
    k = 0
    for i in range(nxt):
        shift.append(k)
        if i in dead:
            k += 1
    melded = {it.segment for p, it in enumerate(items)
              if isinstance(it, Meld) and p not in drop}
    out = []
    for pos, it in enumerate(items):
        if pos in drop:
            continue
        if isinstance(it, DecKey):
            if it.index in dead:
                continue
            it = DecKey(it.index - shift[it.index], it.value)
        elif isinstance(it, Segment):
            if it.id not in melded or segs[it.id][0] != pos:
                continue
        elif isinstance(it, Meld) and segs[it.segment][0] in drop:
            continue
        out.append(it)
    return trace.with_items(out)


def minimize_trace(trace, still_fails, max_replays=400):
    '''Shrink a failing trace: cut the suffix, then greedily delete chunks
    of items while the trace stays well formed and keeps failing.'''
    replays = 0
    n = len(trace.items)
    chunk = max(1, n // 2)
    while chunk >= 1 and replays < max_replays:
        pos = len(trace.items) - chunk
        changed = False
        while pos >= 0 and replays < max_replays:
            cand = _drop_items(trace, set(range(pos, pos + chunk)))
            replays += 1
            try:
                oracle_apply(cand)
                bad = still_fails(cand)
            except TraceError:
                bad = False
            if bad:
                trace = cand
                changed = True
            pos -= chunk
        if not changed:
            chunk //= 2
    return trace


def differential_fuzz(seed, n_ops, mix=None, variant='full', check_every=16,
                      full_every=None, minimize=True, budgets=True):
    '''Generate a trace, replay it against the oracle and return a Verdict.

    On failure ``verdict.reproducer`` holds the minimized trace.
    '''
    trace = generate_trace(seed, n_ops, mix, variant)
    verdict = run_trace(trace, check_every, full_every, budgets=budgets)
    if verdict.passed or not minimize:
        return verdict
    # cut everything after the failing op
    cut = verdict.op_index
    keep = []
    op_i = -1
    for it in trace.items:
        if not isinstance(it, Segment):
            op_i += 1
            if cut is not None and op_i > cut:
                break
        keep.append(it)
    small = trace.with_items(keep)

    def still_fails(t):
        return not run_trace(t, 1, 1, budgets=budgets).passed

    if not still_fails(small):
        small = trace
    verdict.reproducer = minimize_trace(small, still_fails)
    return verdict
