"""Reference heaps behind the same minimal interface as ``Heap``.

Both count key comparisons with the same instrumented ``less`` and expose
``comparisons`` and ``steps`` counters.
"""

from .core import EmptyHeap, KeyIncrease, Node, RankEntry, less


class _Record:
    '''Counter holder and rank anchor for baseline nodes.'''

    def __init__(self):
        self.comparisons = 0
        self.steps = 0
        self.size = 0
        self.rank_head = RankEntry(0, self)


class BinaryHeap(_Record):
    '''Array binary heap with position-tracking handles.'''

    def __init__(self):
        super().__init__()
        self._a = []

    def __len__(self):
        return len(self._a)

    def insert(self, value, item=None):
        x = Node(value, self.rank_head, item)
        x.rank = len(self._a)           # array position
        self._a.append(x)
        self.size += 1
        self._up(x.rank)
        return x

    def find_min(self):
        return self._a[0] if self._a else None

    def delete_min(self):
        a = self._a
        if not a:
            raise EmptyHeap('delete_min on an empty heap')
        top = a[0]
        last = a.pop()
        self.size -= 1
        if a:
            a[0] = last
            last.rank = 0
            self._down(0)
        top.alive = False
        return top.value, top.id

    def decrease_key(self, x, value):
        if value > x.value:
            raise KeyIncrease(f'{value!r} > {x.value!r}')
        x.value = value
        self._up(x.rank)

    def _up(self, i):
        a = self._a
        x = a[i]
        while i:
            p = (i - 1) >> 1
            y = a[p]
            if not less(self, x, y):
                break
            a[i] = y
            y.rank = i
            self.steps += 1
            i = p
        a[i] = x
        x.rank = i

    def _down(self, i):
        a = self._a
        n = len(a)
        x = a[i]
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            if c + 1 < n and less(self, a[c + 1], a[c]):
                c += 1
            if not less(self, a[c], x):
                break
            a[i] = a[c]
            a[i].rank = i
            self.steps += 1
            i = c
        a[i] = x
        x.rank = i


class PairingHeap(_Record):
    '''Two-pass pairing heap (child, sibling and parent-or-left links).'''

    def __init__(self):
        super().__init__()
        self._root = None

    def __len__(self):
        return self.size

    def _link(self, a, b):
        self.steps += 1
        if less(self, b, a):
            a, b = b, a
        # b becomes the leftmost child of a
        c = a.child
        b.right = c
        if c is not None:
            c.left = b
        b.left = a
        a.child = b
        return a

    def insert(self, value, item=None):
        x = Node(value, self.rank_head, item)
        self.size += 1
        self._root = x if self._root is None else self._link(self._root, x)
        return x

    def find_min(self):
        return self._root

    def delete_min(self):
        r = self._root
        if r is None:
            raise EmptyHeap('delete_min on an empty heap')
        self.size -= 1
        kids = []
        c = r.child
        while c is not None:
            nxt = c.right
            c.left = c.right = None
            kids.append(c)
            c = nxt
        pairs = [self._link(kids[i], kids[i + 1]) if i + 1 < len(kids) else kids[i]
                 for i in range(0, len(kids), 2)]
        root = None
        for t in reversed(pairs):
            root = t if root is None else self._link(t, root)
        self._root = root
        r.alive = False
        r.child = None
        return r.value, r.id

    def decrease_key(self, x, value):
        if value > x.value:
            raise KeyIncrease(f'{value!r} > {x.value!r}')
        x.value = value
        if x is self._root:
            return
        # cut x's subtree; x.left is its parent when x is the leftmost child
        p = x.left
        if p.child is x:
            p.child = x.right
        else:
            p.right = x.right
        if x.right is not None:
            x.right.left = p
        x.left = x.right = None
        self.steps += 1
        self._root = self._link(self._root, x)
