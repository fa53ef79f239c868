"""Line-oriented operation traces.

Format (one item per line, single spaces, no trailing blanks)::

    wcheap-trace v1 seed=<u64> variant=<full|simple>
    ins <value>
    delmin
    deckey <node-index> <value>
    peek
    segment <id>
    ins <value>
    end
    meld <id>

Node indices count inserts in execution order, starting at 0.  A segment
block lists the inserts of a side heap; they run (and take their node
indices) when the ``meld`` naming the segment executes.  Each segment is
defined once, before its meld, and melded at most once.

The parser only accepts canonical text, so parsing and serializing is the
identity on every accepted file.
"""

import re
from dataclasses import dataclass, field

HEADER_RE = re.compile(r'wcheap-trace v1 seed=(0|[1-9][0-9]*) variant=(full|simple)')
INT_RE = re.compile(r'0|-?[1-9][0-9]*')
INT_RE_NONNEG = re.compile(r'0|[1-9][0-9]*')

U64_MAX = (1 << 64) - 1


class TraceError(ValueError):
    '''Malformed trace; ``line`` is 1-based when known.'''

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f'line {line}: {message}')


@dataclass(frozen=True)
class Ins:
    value: int


@dataclass(frozen=True)
class DelMin:
    pass


@dataclass(frozen=True)
class DecKey:
    index: int
    value: int


@dataclass(frozen=True)
class Meld:
    segment: int


@dataclass(frozen=True)
class Peek:
    pass


@dataclass(frozen=True)
class Segment:
    id: int
    values: tuple


OP_NAMES = {Ins: 'ins', DelMin: 'delmin', DecKey: 'deckey', Meld: 'meld',
            Peek: 'peek'}


@dataclass
class TraceFile:
    seed: int = 0
    variant: str = 'full'
    items: list = field(default_factory=list)   # ops and Segment blocks

    @property
    def ops(self):
        return [x for x in self.items if not isinstance(x, Segment)]

    def segments(self):
        return {x.id: x for x in self.items if isinstance(x, Segment)}

    def serialize(self):
        lines = [f'wcheap-trace v1 seed={self.seed} variant={self.variant}']
        for it in self.items:
            if isinstance(it, Segment):
                lines.append(f'segment {it.id}')
                lines.extend(f'ins {v}' for v in it.values)
                lines.append('end')
            else:
                lines.append(format_op(it))
        return '\n'.join(lines) + '\n'

    def write(self, path):
        with open(path, 'w', newline='\n') as f:
            f.write(self.serialize())

    def with_items(self, items):
        return TraceFile(self.seed, self.variant, list(items))

    def __len__(self):
        return len(self.items)


def format_op(op):
    if isinstance(op, Ins):
        return f'ins {op.value}'
    if isinstance(op, DecKey):
        return f'deckey {op.index} {op.value}'
    if isinstance(op, Meld):
        return f'meld {op.segment}'
    return OP_NAMES[type(op)]


def _int(tok, lineno, nonneg=False):
    if not (INT_RE_NONNEG if nonneg else INT_RE).fullmatch(tok):
        raise TraceError(f'bad integer {tok!r}', lineno)
    return int(tok)


def parse(text):
    '''Parse canonical trace text into a TraceFile.'''
    if not text.endswith('\n'):
        raise TraceError('missing final newline')
    lines = text[:-1].split('\n')
    m = HEADER_RE.fullmatch(lines[0])
    if m is None:
        raise TraceError('bad header', 1)
    seed = int(m.group(1))
    if seed > U64_MAX:
        raise TraceError('seed exceeds 64 bits', 1)
    trace = TraceFile(seed, m.group(2))
    seg = None
    seg_line = None
    defined = set()     # defined, not yet melded
    used = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(' ')
        head = parts[0]
        if seg is not None:
            if head == 'ins' and len(parts) == 2:
                seg[1].append(_int(parts[1], lineno))
            elif line == 'end':
                trace.items.append(Segment(seg[0], tuple(seg[1])))
                seg = None
            else:
                raise TraceError(f'unexpected {line!r} inside segment', lineno)
            continue
        if head == 'ins' and len(parts) == 2:
            trace.items.append(Ins(_int(parts[1], lineno)))
        elif line == 'delmin':
            trace.items.append(DelMin())
        elif line == 'peek':
            trace.items.append(Peek())
        elif head == 'deckey' and len(parts) == 3:
            trace.items.append(DecKey(_int(parts[1], lineno, True), _int(parts[2], lineno)))
        elif head == 'meld' and len(parts) == 2:
            sid = _int(parts[1], lineno, True)
            if trace.variant == 'simple':
                raise TraceError('meld in a simple-variant trace', lineno)
            if sid not in defined:
                raise TraceError(f'meld of undefined or melded segment {sid}', lineno)
            defined.discard(sid)
            trace.items.append(Meld(sid))
        elif head == 'segment' and len(parts) == 2:
            sid = _int(parts[1], lineno, True)
            if sid in used:
                raise TraceError(f'segment {sid} defined twice', lineno)
            used.add(sid)
            defined.add(sid)
            seg = (sid, [])
            seg_line = lineno
        else:
            raise TraceError(f'unknown line {line!r}', lineno)
    if seg is not None:
        raise TraceError(f'segment {seg[0]} not closed', seg_line)
    return trace


def read(path):
    with open(path, newline='') as f:
        return parse(f.read())
