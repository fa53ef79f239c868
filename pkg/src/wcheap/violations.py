"""Violation lists A, G and L with per-rank anchors.

Entries of equal rank are kept contiguous and the anchor stored in the
rank entry points at the leftmost entry of its group.  Singleton groups
live towards the left end, groups of two or more form a suffix, so a
same-rank pair exists iff the two rightmost entries share a rank.

L additionally owns an unorganized segment (``ViolationList.unranked``)
for nodes with loss at least 2; it is logically the right end of L.
"""

VA = 0
VG = 1
VL = 2
VL2 = 3   # L entry in the unorganized (loss >= 2) segment

VTYPE_NAMES = {VA: 'A', VG: 'G', VL: 'L', VL2: 'L'}


class ViolationEntry:
    __slots__ = ('vtype', 'node', 'prev', 'next', 'owner')

    def __init__(self, vtype, node, owner):
        # prev/next are always set by the list splice that follows
        self.vtype = vtype
        self.node = node
        self.owner = owner

    def __repr__(self):
        return f'<V{VTYPE_NAMES[self.vtype]} {self.node!r}>'


class ViolationList:
    __slots__ = ('vtype', 'head', 'size', 'unranked')

    def __init__(self, vtype):
        self.vtype = vtype
        self.head = None
        self.size = 0
        self.unranked = ViolationList(VL2) if vtype == VL else None

    def __len__(self):
        if self.unranked is not None:
            return self.size + self.unranked.size
        return self.size

    def entries(self):
        '''Entries left to right (organized part, then the loss >= 2 part).'''
        v = self.head
        while v is not None:
            yield v
            v = v.next
        if self.unranked is not None:
            yield from self.unranked.entries()

    def nodes(self):
        return [v.node for v in self.entries()]


def _push_right(vl, v):
    h = vl.head
    if h is None:
        v.prev = v
        v.next = None
        vl.head = v
    else:
        t = h.prev
        t.next = v
        v.prev = t
        v.next = None
        h.prev = v


def _unlink(vl, v):
    h = vl.head
    n = v.next
    if v is h:
        if n is not None:
            n.prev = v.prev
        vl.head = n
    else:
        p = v.prev
        p.next = n
        if n is None:
            h.prev = p
        else:
            n.prev = p
    v.prev = v.next = None


def vl_insert(heap, vl, x):
    '''Insert solid node ``x`` into ``vl`` at the position of its rank.'''
    if x.ventry is not None:
        raise AssertionError(f'{x!r} already on a violation list')
    heap.steps += 1
    t = vl.vtype
    e = x.rank_entry
    v = ViolationEntry(t, x, vl)
    x.ventry = v
    vl.size += 1
    anchor = e.anchors[t]
    h = vl.head
    if anchor is None:
        # new group at the left end
        e.anchors[t] = v
        if h is None:
            v.prev = v
            v.next = None
        else:
            v.prev = h.prev
            v.next = h
            h.prev = v
        vl.head = v
        return
    n = anchor.next
    if n is None or n.node.rank_entry is not e:
        # singleton group becomes a pair: move the anchor to the right end
        if n is not None:
            if anchor is h:
                n.prev = anchor.prev
                vl.head = h = n
            else:
                anchor.prev.next = n
                n.prev = anchor.prev
            t_ = h.prev
            t_.next = anchor
            anchor.prev = t_
            anchor.next = None
            h.prev = anchor
        # anchor is now rightmost: append v
        v.prev = anchor
        v.next = None
        anchor.next = v
        h.prev = v
        return
    # v goes right after the anchor, inside the group
    v.prev = anchor
    v.next = n
    anchor.next = v
    n.prev = v


def vl_insert_loss2(heap, L, x):
    '''Append ``x`` (loss >= 2) to the unorganized segment of L.'''
    if x.ventry is not None:
        raise AssertionError(f'{x!r} already on a violation list')
    heap.steps += 1
    u = L.unranked
    v = ViolationEntry(VL2, x, u)
    x.ventry = v
    _push_right(u, v)
    u.size += 1


def vl_remove(heap, x):
    '''Remove ``x`` from the violation list it is on.'''
    v = x.ventry
    if v is None:
        raise AssertionError(f'{x!r} is not on a violation list')
    heap.steps += 1
    vl = v.owner
    x.ventry = None
    vl.size -= 1
    t = v.vtype
    e = x.rank_entry
    if t == VL2 or e.heap.size < 0:
        # unorganized segment, or a dead list: trivial removal suffices
        if t != VL2 and e.anchors[t] is v:
            e.anchors[t] = None
        _unlink(vl, v)
        return
    anchor = e.anchors[t]
    if anchor is v:
        n = v.next
        anchor = n if (n is not None and n.node.rank_entry is e) else None
        e.anchors[t] = anchor
    _unlink(vl, v)
    if anchor is not None:
        n = anchor.next
        if n is None or n.node.rank_entry is not e:
            # orphaned anchor goes back to the left end
            h = vl.head
            if anchor is not h:
                p = anchor.prev
                p.next = n
                if n is None:
                    h.prev = p
                else:
                    n.prev = p
                anchor.prev = h.prev
                anchor.next = h
                h.prev = anchor
                vl.head = anchor


def vl_take_same_rank_pair(vl):
    '''Return a same-rank pair from the right end of ``vl`` or None.'''
    h = vl.head
    if h is None:
        return None
    r = h.prev
    lf = r.prev
    if lf is r:
        return None
    if lf.node.rank_entry is r.node.rank_entry:
        return lf.node, r.node
    return None


def vl_take_loss2(L):
    v = L.unranked.head
    return None if v is None else v.node
