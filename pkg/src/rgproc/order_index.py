"""Dynamic vertex ordering by (component size, label) with rank-select.

The restricted set is the first floor(beta*n) positions of that ordering, so
drawing the restricted endpoint is select(uniform rank).  alpha is the
component size at the last restricted position.

Default mode "lex" realizes the ordering exactly.  Data layout:

  * a Fenwick tree over size classes (class s -> number of vertices living
    in components of size s) locates the class containing a rank;
  * per class, a treap keyed by vertex label answers rank-select inside the
    class.

Two mitigations keep merges cheap once a giant component exists:

  * classes above the current boundary class are lazy: their vertices are in
    no treap (vclass 0).  The boundary only moves up, and when it does the
    newly reachable classes are activated from per-class component lists.
  * one "special" component (the big one) keeps its members in a Fenwick
    bitmap over labels instead of a treap, so absorbing a small component
    costs O(small * log n) instead of re-inserting the big side anywhere.
    A class can contain both treap vertices and the special component; select
    then bisects on the label with both structures.

Mode "component-grouped" orders by (size, component min label, label)
instead: a coarser, cheaper ordering (whole components stay contiguous) that
deviates from the definition above; it needs no laziness because components,
not vertices, are the tree entries.

vclass[v] is v's current placement: s > 0 tracked in class s's treap, 0 lazy,
-1 member of the special component.  All members of one component always
share the same placement.
"""

from fractions import Fraction
from math import isqrt

import numpy as np
from numba import njit

from .dsu import Partition, MergeOutcome
from .engine import (
    fw_add,
    fw_prefix,
    fw_search,
    fw_inplace,
    treap_insert,
    treap_delete,
    treap_select,
    treap_count_below,
    treap_build_full,
    dsu_find,
    STACK_CAP,
)

I_RSIZE = 0
I_LIMIT = 1
I_SPECROOT = 2
I_SPECSIZE = 3
I_ALPHA = 4
I_SPECMIN = 5
I_ERR = 6

ERR_ALPHA_DECREASED = 1
ERR_TREE_DEPTH = 2


# ------------------------------------------------------- shared helpers

@njit(cache=True, inline="always")
def _list_push(chead, cnxt, cprv, s, r):
    h = chead[s]
    cnxt[r] = h
    cprv[r] = 0
    if h != 0:
        cprv[h] = r
    chead[s] = r


@njit(cache=True, inline="always")
def _list_remove(chead, cnxt, cprv, s, r):
    p = cprv[r]
    nx = cnxt[r]
    if p != 0:
        cnxt[p] = nx
    else:
        chead[s] = nx
    if nx != 0:
        cprv[nx] = p


@njit(cache=True)
def _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta, v, newclass):
    """Move v from its current placement to newclass (s>0 / 0 lazy / -1 special)."""
    oc = vclass[v]
    if oc == newclass:
        return
    if oc > 0:
        r = treap_delete(tl, tr, tsz, stack, troot[oc], v)
        if r < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return
        troot[oc] = r
    elif oc == -1:
        fw_add(sf, v, -1)
    if newclass > 0:
        r = treap_insert(tl, tr, tsz, stack, troot[newclass], v)
        if r < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return
        troot[newclass] = r
    elif newclass == -1:
        fw_add(sf, v, 1)
    vclass[v] = newclass


@njit(cache=True)
def _demote_special(csize, ring, tl, tr, tsz, troot, vclass, chead, cnxt, cprv,
                    sf, stack, imeta):
    """Strip special status from the current special component (if any)."""
    old = imeta[I_SPECROOT]
    if old == 0:
        return
    s = csize[old]
    target = s if s <= imeta[I_LIMIT] else 0
    v = old
    while True:
        _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta, v, np.int64(target))
        v = ring[v]
        if v == old:
            break
    _list_push(chead, cnxt, cprv, s, old)
    imeta[I_SPECROOT] = 0
    imeta[I_SPECSIZE] = 0


@njit(cache=True)
def _designate_special(csize, ring, tl, tr, tsz, troot, vclass, chead, cnxt, cprv,
                       sf, stack, imeta, r, listed_class):
    """Make component rooted at r the special one; it must currently be listed
    under listed_class (its size)."""
    _demote_special(csize, ring, tl, tr, tsz, troot, vclass, chead, cnxt, cprv,
                    sf, stack, imeta)
    v = r
    while True:
        _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta, v, np.int64(-1))
        v = ring[v]
        if v == r:
            break
    _list_remove(chead, cnxt, cprv, listed_class, r)
    imeta[I_SPECROOT] = r
    imeta[I_SPECSIZE] = csize[r]


@njit(cache=True)
def _refresh_boundary(csize, ring, cf, tl, tr, tsz, troot, vclass, chead, cnxt,
                      cprv, sf, stack, imeta):
    """Recompute the boundary class; activate any classes that became reachable."""
    s_star = fw_search(cf, imeta[I_RSIZE])
    if s_star < imeta[I_ALPHA]:
        imeta[I_ERR] = ERR_ALPHA_DECREASED
    imeta[I_ALPHA] = s_star
    if s_star <= imeta[I_LIMIT]:
        return
    for s in range(imeta[I_LIMIT] + 1, s_star + 1):
        r = chead[s]
        while r != 0:
            nxt = cnxt[r]
            if csize[r] >= imeta[I_SPECMIN] and (
                imeta[I_SPECROOT] == 0 or csize[r] > 2 * imeta[I_SPECSIZE]
            ):
                _designate_special(csize, ring, tl, tr, tsz, troot, vclass,
                                   chead, cnxt, cprv, sf, stack, imeta, r, s)
            else:
                v = r
                while True:
                    _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta,
                                 v, np.int64(s))
                    v = ring[v]
                    if v == r:
                        break
            r = nxt
        imeta[I_LIMIT] = s
    imeta[I_LIMIT] = s_star


@njit(cache=True)
def _apply_lex_common(csize, ring, cf, tl, tr, tsz, troot, vclass, chead, cnxt,
                      cprv, sf, stack, imeta, ra, rb, sa, sb, win):
    """Bookkeeping shared by the pre-link and post-link merge paths, minus the
    member moves themselves.  Returns the member target placement."""
    ns = sa + sb
    spec = imeta[I_SPECROOT]
    is_special = False
    demote_old = False
    if spec == ra or spec == rb:
        is_special = True
    elif ns >= imeta[I_SPECMIN]:
        if spec == 0:
            is_special = True
        elif ns > 2 * imeta[I_SPECSIZE]:
            is_special = True
            demote_old = True
    if demote_old:
        _demote_special(csize, ring, tl, tr, tsz, troot, vclass, chead, cnxt,
                        cprv, sf, stack, imeta)
    if is_special:
        return np.int64(-1)
    if ns <= imeta[I_LIMIT]:
        return np.int64(ns)
    return np.int64(0)


@njit(cache=True)
def merge_apply_lex(parent, csize, ring, pmeta, cf, tl, tr, tsz, troot, vclass,
                    chead, cnxt, cprv, sf, stack, imeta, ra, rb):
    """Merge the components rooted at ra != rb and keep the index current.

    Called with the partition still pre-merge: per-side member rings let the
    walk skip any side whose placement already equals the target (the giant
    absorbing a small component touches only the small side).
    """
    sa = np.int64(csize[ra])
    sb = np.int64(csize[rb])
    ns = sa + sb
    if sa > sb or (sa == sb and ra < rb):
        win = ra
    else:
        win = rb
    target = _apply_lex_common(csize, ring, cf, tl, tr, tsz, troot, vclass,
                               chead, cnxt, cprv, sf, stack, imeta,
                               ra, rb, sa, sb, win)
    state_a = vclass[ra]
    state_b = vclass[rb]
    if not (target <= 0 and state_a == target):
        v = ra
        while True:
            _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta, v, target)
            v = ring[v]
            if v == ra:
                break
    if not (target <= 0 and state_b == target):
        v = rb
        while True:
            _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta, v, target)
            v = ring[v]
            if v == rb:
                break
    if state_a != -1:
        _list_remove(chead, cnxt, cprv, sa, ra)
    if state_b != -1:
        _list_remove(chead, cnxt, cprv, sb, rb)
    if target == -1:
        imeta[I_SPECROOT] = win
        imeta[I_SPECSIZE] = ns
    else:
        _list_push(chead, cnxt, cprv, ns, win)
    fw_add(cf, sa, -sa)
    fw_add(cf, sb, -sb)
    fw_add(cf, ns, ns)
    # link (inlined dsu_link so pmeta stays consistent with the index)
    lose = rb if win == ra else ra
    parent[lose] = win
    csize[win] = ns
    tmp = ring[win]
    ring[win] = ring[lose]
    ring[lose] = tmp
    pmeta[0] -= 1
    pmeta[2] += 1
    if ns > pmeta[1]:
        pmeta[1] = ns
    _refresh_boundary(csize, ring, cf, tl, tr, tsz, troot, vclass, chead, cnxt,
                      cprv, sf, stack, imeta)
    return win


@njit(cache=True)
def apply_lex_post(parent, csize, ring, cf, tl, tr, tsz, troot, vclass, chead,
                   cnxt, cprv, sf, stack, imeta, ra, rb, sa, sb, win):
    """Index update when the partition has already merged (public apply_merge)."""
    sa = np.int64(sa)
    sb = np.int64(sb)
    ns = sa + sb
    target = _apply_lex_common(csize, ring, cf, tl, tr, tsz, troot, vclass,
                               chead, cnxt, cprv, sf, stack, imeta,
                               ra, rb, sa, sb, win)
    state_a = vclass[ra]
    state_b = vclass[rb]
    v = win
    while True:
        _move_vertex(tl, tr, tsz, troot, vclass, sf, stack, imeta, v, target)
        v = ring[v]
        if v == win:
            break
    if state_a != -1:
        _list_remove(chead, cnxt, cprv, sa, ra)
    if state_b != -1:
        _list_remove(chead, cnxt, cprv, sb, rb)
    if target == -1:
        imeta[I_SPECROOT] = win
        imeta[I_SPECSIZE] = ns
    else:
        _list_push(chead, cnxt, cprv, ns, win)
    fw_add(cf, sa, -sa)
    fw_add(cf, sb, -sb)
    fw_add(cf, ns, ns)
    _refresh_boundary(csize, ring, cf, tl, tr, tsz, troot, vclass, chead, cnxt,
                      cprv, sf, stack, imeta)


@njit(cache=True)
def select_lex(cf, tl, tr, tsz, troot, sf, imeta, r):
    k = r + 1
    s = fw_search(cf, k)
    kin = k - fw_prefix(cf, s - 1)  # 1-based rank within class s
    if imeta[I_SPECROOT] != 0 and s == imeta[I_SPECSIZE]:
        tn = troot[s]
        if tn == 0:
            return fw_search(sf, kin)
        # class holds treap vertices plus the special component: bisect on label
        lo = np.int64(1)
        hi = np.int64(sf.shape[0] - 1)
        while lo < hi:
            mid = (lo + hi) >> 1
            c = treap_count_below(tl, tr, tsz, tn, mid + 1) + fw_prefix(sf, mid)
            if c >= kin:
                hi = mid
            else:
                lo = mid + 1
        return lo
    return treap_select(tl, tr, tsz, troot[s], kin - 1)


@njit(cache=True)
def build_lex(parent, csize, ring, cf, tl, tr, tsz, troot, vclass, chead, cnxt,
              cprv, sf, stack, imeta, n, fresh):
    if fresh:
        rt = treap_build_full(tl, tr, tsz, stack, n)
        if rt < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return
        troot[1] = rt
        cf[1] = n
        fw_inplace(cf)
        for v in range(1, n + 1):
            vclass[v] = 1
            cnxt[v] = v + 1 if v < n else 0
            cprv[v] = v - 1
        chead[1] = 1
        imeta[I_LIMIT] = 1
        imeta[I_ALPHA] = 1
        return
    for v in range(1, n + 1):
        cf[csize[dsu_find(parent, v)]] += 1
    fw_inplace(cf)
    s_star = fw_search(cf, imeta[I_RSIZE])
    for v in range(1, n + 1):
        s = csize[dsu_find(parent, v)]
        if s <= s_star:
            rt = treap_insert(tl, tr, tsz, stack, troot[s], v)
            if rt < 0:
                imeta[I_ERR] = ERR_TREE_DEPTH
                return
            troot[s] = rt
            vclass[v] = s
    for v in range(1, n + 1):
        if parent[v] == v:
            _list_push(chead, cnxt, cprv, csize[v], v)
    imeta[I_LIMIT] = s_star
    imeta[I_ALPHA] = s_star


# -------------------------------------------------- component-grouped mode

@njit(cache=True)
def build_grouped(parent, csize, cf, tl, tr, tsz, mroot, hl, hr, hsz, htroot,
                  minlab, stack, imeta, n, fresh):
    if fresh:
        for v in range(1, n + 1):
            tsz[v] = 1
            mroot[v] = v
            minlab[v] = v
        rt = treap_build_full(hl, hr, hsz, stack, n)
        if rt < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return
        htroot[1] = rt
        cf[1] = n
        fw_inplace(cf)
        imeta[I_ALPHA] = 1
        return
    for v in range(1, n + 1):
        r = dsu_find(parent, v)
        cf[csize[r]] += 1
        if minlab[r] == 0 or v < minlab[r]:
            minlab[r] = v
        rt = treap_insert(tl, tr, tsz, stack, mroot[r], v)
        if rt < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return
        mroot[r] = rt
    fw_inplace(cf)
    for v in range(1, n + 1):
        if parent[v] == v:
            rt = treap_insert(hl, hr, hsz, stack, htroot[csize[v]], minlab[v])
            if rt < 0:
                imeta[I_ERR] = ERR_TREE_DEPTH
                return
            htroot[csize[v]] = rt
    imeta[I_ALPHA] = fw_search(cf, imeta[I_RSIZE])


@njit(cache=True)
def _grouped_handles(cf, hl, hr, hsz, htroot, minlab, stack, imeta,
                     ra, rb, sa, sb, win):
    ns = sa + sb
    ma = minlab[ra]
    mb = minlab[rb]
    rt = treap_delete(hl, hr, hsz, stack, htroot[sa], ma)
    if rt < 0:
        imeta[I_ERR] = ERR_TREE_DEPTH
        return
    htroot[sa] = rt
    rt = treap_delete(hl, hr, hsz, stack, htroot[sb], mb)
    if rt < 0:
        imeta[I_ERR] = ERR_TREE_DEPTH
        return
    htroot[sb] = rt
    nm = ma if ma < mb else mb
    rt = treap_insert(hl, hr, hsz, stack, htroot[ns], nm)
    if rt < 0:
        imeta[I_ERR] = ERR_TREE_DEPTH
        return
    htroot[ns] = rt
    minlab[win] = nm
    fw_add(cf, sa, -sa)
    fw_add(cf, sb, -sb)
    fw_add(cf, ns, ns)


@njit(cache=True)
def merge_apply_grouped(parent, csize, ring, pmeta, cf, tl, tr, tsz, mroot,
                        hl, hr, hsz, htroot, minlab, stack, imeta, ra, rb):
    """Pre-link variant: folds the smaller member treap into the larger."""
    sa = np.int64(csize[ra])
    sb = np.int64(csize[rb])
    ns = sa + sb
    if sa > sb or (sa == sb and ra < rb):
        win = ra
    else:
        win = rb
    _grouped_handles(cf, hl, hr, hsz, htroot, minlab, stack, imeta,
                     ra, rb, sa, sb, win)
    if sa >= sb:
        big, small = ra, rb
    else:
        big, small = rb, ra
    rt = mroot[big]
    v = small
    while True:
        rt = treap_insert(tl, tr, tsz, stack, rt, v)
        if rt < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return win
        nv = ring[v]
        v = nv
        if v == small:
            break
    lose = rb if win == ra else ra
    parent[lose] = win
    csize[win] = ns
    tmp = ring[win]
    ring[win] = ring[lose]
    ring[lose] = tmp
    pmeta[0] -= 1
    pmeta[2] += 1
    if ns > pmeta[1]:
        pmeta[1] = ns
    mroot[win] = rt
    s_star = fw_search(cf, imeta[I_RSIZE])
    if s_star < imeta[I_ALPHA]:
        imeta[I_ERR] = ERR_ALPHA_DECREASED
    imeta[I_ALPHA] = s_star
    return win


@njit(cache=True)
def apply_grouped_post(parent, csize, ring, cf, tl, tr, tsz, mroot, hl, hr, hsz,
                       htroot, minlab, stack, imeta, ra, rb, sa, sb, win):
    sa = np.int64(sa)
    sb = np.int64(sb)
    _grouped_handles(cf, hl, hr, hsz, htroot, minlab, stack, imeta,
                     ra, rb, sa, sb, win)
    # ring is already merged: rebuild the member treap from scratch
    rt = 0
    v = win
    while True:
        rt = treap_insert(tl, tr, tsz, stack, rt, v)
        if rt < 0:
            imeta[I_ERR] = ERR_TREE_DEPTH
            return
        v = ring[v]
        if v == win:
            break
    mroot[win] = rt
    s_star = fw_search(cf, imeta[I_RSIZE])
    if s_star < imeta[I_ALPHA]:
        imeta[I_ERR] = ERR_ALPHA_DECREASED
    imeta[I_ALPHA] = s_star


@njit(cache=True)
def select_grouped(parent, csize, cf, tl, tr, tsz, mroot, hl, hr, hsz, htroot,
                   imeta, r):
    k = r + 1
    s = fw_search(cf, k)
    kin = k - fw_prefix(cf, s - 1)
    ci = (kin - 1) // s  # components in one class all have size s
    off = (kin - 1) % s
    h = treap_select(hl, hr, hsz, htroot[s], ci)
    rt = dsu_find(parent, h)
    return treap_select(tl, tr, tsz, mroot[rt], off)


# ----------------------------------------------------------- public layer

def _normalize_beta(beta) -> Fraction:
    if isinstance(beta, float):
        b = Fraction(str(beta))
    else:
        b = Fraction(beta)
    if not 0 < b <= 1:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
    return b


class OrderIndex:
    """Rank-select over the (component size, label) vertex ordering of a
    Partition, restricted to the first floor(beta*n) positions."""

    def __init__(self, partition: Partition, beta, tie_break: str = "lex",
                 special_min: int | None = None):
        if tie_break not in ("lex", "component-grouped"):
            raise ValueError(f"unknown tie_break {tie_break!r}")
        self._p = partition
        self.beta = _normalize_beta(beta)
        self.tie_break = tie_break
        n = partition.n
        rsize = (self.beta.numerator * n) // self.beta.denominator
        if rsize < 1:
            raise ValueError(f"floor(beta*n) = 0 for beta={beta}, n={n}: "
                             "restricted set would be empty")
        self.restricted_size = int(rsize)
        if special_min is None:
            special_min = max(64, isqrt(n))
        self.imeta = np.zeros(8, dtype=np.int64)
        self.imeta[I_RSIZE] = rsize
        self.imeta[I_SPECMIN] = max(2, int(special_min))
        self.cf = np.zeros(n + 1, dtype=np.int64)
        self.tl = np.zeros(n + 1, dtype=np.int32)
        self.tr = np.zeros(n + 1, dtype=np.int32)
        self.tsz = np.zeros(n + 1, dtype=np.int32)
        self.stack = np.zeros(STACK_CAP, dtype=np.int32)
        fresh = partition.component_count() == n
        self._merges_applied = n - partition.component_count()
        if tie_break == "lex":
            self.troot = np.zeros(n + 1, dtype=np.int32)
            self.vclass = np.zeros(n + 1, dtype=np.int32)
            self.chead = np.zeros(n + 1, dtype=np.int32)
            self.cnxt = np.zeros(n + 1, dtype=np.int32)
            self.cprv = np.zeros(n + 1, dtype=np.int32)
            self.sf = np.zeros(n + 1, dtype=np.int64)
            build_lex(partition.parent, partition.csize, partition.ring,
                      self.cf, self.tl, self.tr, self.tsz, self.troot,
                      self.vclass, self.chead, self.cnxt, self.cprv, self.sf,
                      self.stack, self.imeta, n, fresh)
        else:
            self.mroot = np.zeros(n + 1, dtype=np.int32)
            self.hl = np.zeros(n + 1, dtype=np.int32)
            self.hr = np.zeros(n + 1, dtype=np.int32)
            self.hsz = np.zeros(n + 1, dtype=np.int32)
            self.htroot = np.zeros(n + 1, dtype=np.int32)
            self.minlab = np.zeros(n + 1, dtype=np.int32)
            build_grouped(partition.parent, partition.csize, self.cf, self.tl,
                          self.tr, self.tsz, self.mroot, self.hl, self.hr,
                          self.hsz, self.htroot, self.minlab, self.stack,
                          self.imeta, n, fresh)
        self._raise_if_err()

    @property
    def partition(self) -> Partition:
        return self._p

    def _raise_if_err(self) -> None:
        err = int(self.imeta[I_ERR])
        if err == ERR_ALPHA_DECREASED:
            raise AssertionError("boundary class decreased across a merge")
        if err == ERR_TREE_DEPTH:
            raise AssertionError("tree depth exceeded the stack bound")

    def select(self, r: int) -> int:
        if not 0 <= r < self.restricted_size:
            raise ValueError(f"rank {r} out of range [0, {self.restricted_size})")
        if self.tie_break == "lex":
            return int(select_lex(self.cf, self.tl, self.tr, self.tsz,
                                  self.troot, self.sf, self.imeta, r))
        return int(select_grouped(self._p.parent, self._p.csize, self.cf,
                                  self.tl, self.tr, self.tsz, self.mroot,
                                  self.hl, self.hr, self.hsz, self.htroot,
                                  self.imeta, r))

    def alpha(self) -> int:
        return int(self.imeta[I_ALPHA])

    def apply_merge(self, m: MergeOutcome) -> None:
        if not m.merged:
            raise ValueError("apply_merge requires a merged=True outcome")
        p = self._p
        merges_now = p.n - p.component_count()
        if merges_now != self._merges_applied + 1:
            raise ValueError("MergeOutcome is stale: partition has "
                             f"{merges_now} merges, index has applied "
                             f"{self._merges_applied}")
        if (p.find(m.new_root) != m.new_root
                or int(p.csize[m.new_root]) != m.new_size
                or m.new_size != m.size_a + m.size_b):
            raise ValueError("MergeOutcome inconsistent with the partition")
        if self.tie_break == "lex":
            apply_lex_post(p.parent, p.csize, p.ring, self.cf, self.tl, self.tr,
                           self.tsz, self.troot, self.vclass, self.chead,
                           self.cnxt, self.cprv, self.sf, self.stack,
                           self.imeta, m.root_a, m.root_b, m.size_a, m.size_b,
                           m.new_root)
        else:
            apply_grouped_post(p.parent, p.csize, p.ring, self.cf, self.tl,
                               self.tr, self.tsz, self.mroot, self.hl, self.hr,
                               self.hsz, self.htroot, self.minlab, self.stack,
                               self.imeta, m.root_a, m.root_b, m.size_a,
                               m.size_b, m.new_root)
        self._merges_applied = merges_now
        self._raise_if_err()


def build(p: Partition, beta, tie_break: str = "lex",
          special_min: int | None = None) -> OrderIndex:
    return OrderIndex(p, beta, tie_break=tie_break, special_min=special_min)


def _all_roots(p: Partition) -> np.ndarray:
    """Root of every vertex 1..n at once (repeated parent lookups, no writes)."""
    r = p.parent[1 : p.n + 1].astype(np.int64)
    while True:
        rr = p.parent[r]
        if np.array_equal(rr, r):
            return r
        r = rr


def reference_ordering(p: Partition, tie_break: str = "lex") -> np.ndarray:
    """All n vertices sorted by the restricted-order key; O(n log n) per call."""
    n = p.n
    labels = np.arange(1, n + 1, dtype=np.int64)
    roots = _all_roots(p)
    sizes = p.csize[roots].astype(np.int64)
    if tie_break == "lex":
        order = np.lexsort((labels, sizes))
    elif tie_break == "component-grouped":
        mins = np.full(n + 1, n + 1, dtype=np.int64)
        np.minimum.at(mins, roots, labels)
        order = np.lexsort((labels, mins[roots], sizes))
    else:
        raise ValueError(f"unknown tie_break {tie_break!r}")
    return labels[order]


def reference_select(p: Partition, beta, r: int, tie_break: str = "lex") -> int:
    """Test oracle: materialize the full ordering and pick position r."""
    b = _normalize_beta(beta)
    rsize = (b.numerator * p.n) // b.denominator
    if rsize < 1:
        raise ValueError("restricted set is empty")
    if not 0 <= r < rsize:
        raise ValueError(f"rank {r} out of range [0, {rsize})")
    return int(reference_ordering(p, tie_break)[r])
