"""nopython kernels: Fenwick trees, label-keyed treaps, union-find, edge hash set.

Everything here works on plain numpy arrays so the same state can be driven
one step at a time from python (for tests and the public step API) or by the
fused run loop in harness.py.  Index 0 is a null sentinel throughout; vertex
labels are 1..n.

Treap nodes are identified by vertex label, and priorities are a stateless
hash of the label, so tree shape depends only on the key set, never on
insertion order.  All tree walks are iterative with an explicit stack
(STACK_CAP bounds the depth; expected depth is O(log n), and every push is
guarded).
"""

import numpy as np
from numba import njit

from .rand import hash64

STACK_CAP = 2048


# ---------------------------------------------------------------- Fenwick

@njit(cache=True, inline="always")
def fw_add(tree, i, delta):
    # tree is 1-indexed; tree[0] unused
    n = tree.shape[0] - 1
    while i <= n:
        tree[i] += delta
        i += i & (-i)


@njit(cache=True, inline="always")
def fw_prefix(tree, i):
    s = np.int64(0)
    while i > 0:
        s += tree[i]
        i -= i & (-i)
    return s


@njit(cache=True)
def fw_search(tree, target):
    """Smallest index i with prefix(i) >= target, for target >= 1."""
    n = tree.shape[0] - 1
    bit = np.int64(1)
    while (bit << 1) <= n:
        bit <<= 1
    pos = np.int64(0)
    rem = np.int64(target)
    while bit > 0:
        nxt = pos + bit
        if nxt <= n and tree[nxt] < rem:
            pos = nxt
            rem -= tree[nxt]
        bit >>= 1
    return pos + 1


@njit(cache=True)
def fw_inplace(tree):
    """Turn an array of per-index counts into a Fenwick tree, in place, O(n)."""
    n = tree.shape[0] - 1
    for i in range(1, n + 1):
        j = i + (i & (-i))
        if j <= n:
            tree[j] += tree[i]


# ------------------------------------------------------------------ treap

@njit(cache=True)
def treap_insert(tl, tr, tsz, stack, root, v):
    """Insert label v into the treap rooted at root; returns the new root."""
    tl[v] = 0
    tr[v] = 0
    tsz[v] = 1
    if root == 0:
        return v
    top = 0
    node = root
    while node != 0:
        stack[top] = node
        top += 1
        if top >= STACK_CAP:
            return -1
        if v < node:
            node = tl[node]
        else:
            node = tr[node]
    parent = stack[top - 1]
    if v < parent:
        tl[parent] = v
    else:
        tr[parent] = v
    for i in range(top):
        tsz[stack[i]] += 1
    pv = hash64(v)
    while top > 0:
        parent = stack[top - 1]
        if hash64(parent) >= pv:
            break
        # rotate v above parent
        if tl[parent] == v:
            tl[parent] = tr[v]
            tr[v] = parent
        else:
            tr[parent] = tl[v]
            tl[v] = parent
        tsz[v] = tsz[parent]
        tsz[parent] = 1 + tsz[tl[parent]] + tsz[tr[parent]]
        top -= 1
        if top > 0:
            gp = stack[top - 1]
            if tl[gp] == parent:
                tl[gp] = v
            else:
                tr[gp] = v
        else:
            return v
    return root


@njit(cache=True)
def treap_delete(tl, tr, tsz, stack, root, v):
    """Remove label v (must be present); returns the new root."""
    top = 0
    node = root
    while node != v:
        stack[top] = node
        top += 1
        if top >= STACK_CAP:
            return -1
        tsz[node] -= 1
        if v < node:
            node = tl[node]
        else:
            node = tr[node]
    top0 = top
    while tl[v] != 0 or tr[v] != 0:
        l = tl[v]
        r = tr[v]
        if r == 0 or (l != 0 and hash64(l) > hash64(r)):
            c = l
            tl[v] = tr[c]
            tr[c] = v
        else:
            c = r
            tr[v] = tl[c]
            tl[c] = v
        tsz[c] = tsz[v]
        tsz[v] = 1 + tsz[tl[v]] + tsz[tr[v]]
        if top > 0:
            p = stack[top - 1]
            if tl[p] == v:
                tl[p] = c
            else:
                tr[p] = c
        else:
            root = c
        stack[top] = c
        top += 1
        if top >= STACK_CAP:
            return -1
    if top > 0:
        p = stack[top - 1]
        if tl[p] == v:
            tl[p] = 0
        else:
            tr[p] = 0
    else:
        root = 0
    for i in range(top0, top):
        tsz[stack[i]] -= 1
    return root


@njit(cache=True, inline="always")
def treap_select(tl, tr, tsz, root, k):
    """k-th smallest label (0-based) in the treap; caller ensures k < size."""
    node = root
    while True:
        ls = tsz[tl[node]]
        if k < ls:
            node = tl[node]
        elif k == ls:
            return node
        else:
            k -= ls + 1
            node = tr[node]


@njit(cache=True, inline="always")
def treap_count_below(tl, tr, tsz, root, x):
    """Number of labels strictly below x."""
    node = root
    cnt = np.int64(0)
    while node != 0:
        if x <= node:
            node = tl[node]
        else:
            cnt += tsz[tl[node]] + 1
            node = tr[node]
    return cnt


@njit(cache=True)
def treap_build_full(tl, tr, tsz, stack, n):
    """Treap over labels 1..n in O(n): cartesian-tree build on the sorted keys,
    then one postorder pass for subtree sizes."""
    top = 0
    root = 0
    for v in range(1, n + 1):
        last = 0
        pv = hash64(v)
        while top > 0 and hash64(stack[top - 1]) < pv:
            last = stack[top - 1]
            top -= 1
        tl[v] = last
        tr[v] = 0
        if top > 0:
            tr[stack[top - 1]] = v
        else:
            root = v
        stack[top] = v
        top += 1
        if top >= STACK_CAP:
            return -1
    # postorder size accumulation
    top = 0
    node = root
    last = 0
    while node != 0 or top > 0:
        if node != 0:
            stack[top] = node
            top += 1
            if top >= STACK_CAP:
                return -1
            node = tl[node]
        else:
            peek = stack[top - 1]
            if tr[peek] != 0 and last != tr[peek]:
                node = tr[peek]
            else:
                tsz[peek] = 1 + tsz[tl[peek]] + tsz[tr[peek]]
                last = peek
                top -= 1
    return root


# ------------------------------------------------------------- union-find

@njit(cache=True, inline="always")
def dsu_find(parent, v):
    # path halving
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


@njit(cache=True, inline="always")
def dsu_pick_winner(ra, rb, sa, sb):
    """Surviving root: larger component, ties toward the smaller label."""
    if sa > sb or (sa == sb and ra < rb):
        return ra
    return rb


@njit(cache=True, inline="always")
def dsu_link(parent, csize, ring, ra, rb, win):
    """Attach the losing root under win and splice the member rings.

    ring holds a circular successor list per component, so members are
    enumerable without touching parent pointers.
    """
    lose = rb if win == ra else ra
    parent[lose] = win
    csize[win] = csize[ra] + csize[rb]
    tmp = ring[win]
    ring[win] = ring[lose]
    ring[lose] = tmp


# ---------------------------------------------------------- edge hash set

@njit(cache=True, inline="always")
def _edge_slot(table, key):
    """Probe for key (packed pair, >= 1); returns slot holding key or -1,
    encoded as (found, slot): slot of key if present else first empty slot."""
    mask = table.shape[0] - 1
    h = np.int64(hash64(np.uint64(key)) & np.uint64(mask))
    while True:
        cur = table[h]
        if cur == 0:
            return False, h
        if cur == key:
            return True, h
        h = (h + 1) & mask


@njit(cache=True, inline="always")
def edge_key(n, u, v):
    # unordered pair packed into one int64; 1-based labels keep key >= 1
    if u > v:
        u, v = v, u
    return np.int64(u) * np.int64(n + 1) + np.int64(v)


@njit(cache=True, inline="always")
def edge_contains(table, key):
    found, _ = _edge_slot(table, key)
    return found


@njit(cache=True, inline="always")
def edge_add(table, key):
    """Insert key; True if it was absent (fresh edge)."""
    found, slot = _edge_slot(table, key)
    if found:
        return False
    table[slot] = key
    return True


@njit(cache=True)
def edge_table_alloc_size(max_edges):
    # keep load factor under 1/2 so probe chains stay short
    cap = np.int64(64)
    while cap < 2 * (max_edges + 1):
        cap <<= 1
    return cap
