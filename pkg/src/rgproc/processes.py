"""Step functions for the four graph processes, plus the fused run loop.

Each process consumes randomness from an explicit stream in a fixed order, so
a (seed, step count) pair fully determines a run.  The python step functions
and the compiled loop draw in exactly the same order from the same generator
kernels; replay tests hold them to that.

Process kinds (the same tokens the command line uses):
  er               one uniformly random fresh non-edge per step
  half-restricted  one endpoint uniform over [n], the other uniform over the
                   restricted set (smallest components first); present edges
                   and self-draws do nothing, the step still counts
  min-product      Achlioptas rule: two candidate pairs, insert the one with
                   the smaller component-size product (ties: the first)
  min-sum          same with the size sum

Candidate pairs for the min rules are NOT checked against existing edges
(each is just a uniform pair of distinct vertices, the two candidates
redrawn together if they coincide); at O(n) steps the overlap with present
edges is a vanishing fraction.  strict=True turns on full non-edge rejection
for desk-scale cross-checks.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .dsu import Partition, MergeOutcome
from .engine import (
    dsu_find,
    dsu_link,
    dsu_pick_winner,
    edge_add,
    edge_contains,
    edge_key,
    edge_table_alloc_size,
)
from .order_index import (
    OrderIndex,
    merge_apply_lex,
    merge_apply_grouped,
    select_lex,
    select_grouped,
    I_ALPHA,
    I_ERR,
)
from .rand import RandomStream, randbelow

FIRST = 0
SECOND = 1

KINDS = ("er", "half-restricted", "min-product", "min-sum")

PROC_HR = 0
PROC_ER = 1
PROC_ACH = 2

RULE_PRODUCT = 0
RULE_SUM = 1

# run_loop error bits
ERR_INDEX = 1          # order index internal check tripped
ERR_CHUNK_MERGE = 2    # two size>=C components merged while alpha < C
ERR_MIN_OVER_ALPHA = 4 # a merge's smaller side exceeded alpha
ERR_RECORD_OVERFLOW = 8

# ometa slots
O_REC = 0
O_FINAL_T = 1
O_T0 = 2
O_L1_TC = 3
O_L1_WIN = 4
O_TSQRT = 5
O_THALF = 6
O_ERR = 7
O_STOP = 8
O_FINAL_ALPHA = 9

STOP_MAX_STEPS = 0
STOP_L1 = 1
STOP_WINDOW = 2


@dataclass(frozen=True)
class StepRecord:
    """What one step did.  candidates/candidate_sizes/chosen are only set for
    the min rules; rank only for half-restricted."""

    step: int
    kind: str
    u: int
    v: int
    merged: bool
    outcome: Optional[MergeOutcome]
    rank: Optional[int] = None
    candidates: Optional[tuple] = None
    candidate_sizes: Optional[tuple] = None
    chosen: Optional[int] = None


class EdgeSet:
    """Set of inserted edges (unordered vertex pairs) for presence checks.

    Open addressing over packed pairs; capacity is fixed up front from the
    step budget so the load factor stays below one half.
    """

    def __init__(self, n: int, max_edges: int):
        self.n = int(n)
        self.max_edges = int(max_edges)
        self.table = np.zeros(int(edge_table_alloc_size(max_edges)), dtype=np.int64)
        self._count = 0

    def add(self, u: int, v: int) -> bool:
        """Insert {u, v}; True when the edge was not present before."""
        if u == v:
            raise ValueError("self-loops are not edges")
        if self._count >= self.max_edges:
            raise RuntimeError("edge set capacity exceeded")
        fresh = bool(edge_add(self.table, edge_key(self.n, u, v)))
        if fresh:
            self._count += 1
        return fresh

    def __contains__(self, uv) -> bool:
        u, v = uv
        if u == v:
            return False
        return bool(edge_contains(self.table, edge_key(self.n, u, v)))

    def __len__(self) -> int:
        return self._count


@njit(cache=True, inline="always")
def _k_rule_value(sa, sb, rule):
    if rule == RULE_PRODUCT:
        return np.int64(sa) * np.int64(sb)
    return np.int64(sa) + np.int64(sb)


def rule_choose(sizes1, sizes2, rule: str) -> int:
    """FIRST or SECOND candidate per the min rule; exact ties pick FIRST."""
    if rule == "min-product":
        code = RULE_PRODUCT
    elif rule == "min-sum":
        code = RULE_SUM
    else:
        raise ValueError(f"unknown rule {rule!r}")
    s, sp = sizes1
    t, tp = sizes2
    if min(s, sp, t, tp) < 1:
        raise ValueError("component sizes must be >= 1")
    x = int(_k_rule_value(s, sp, code))
    y = int(_k_rule_value(t, tp, code))
    return FIRST if x <= y else SECOND


def half_restricted_step(p: Partition, idx: OrderIndex, rng: RandomStream,
                         edges: Optional[EdgeSet] = None, t: int = 0) -> StepRecord:
    """One half-restricted step.  Without an edge set, presence of the drawn
    edge cannot be checked, but outcomes are unaffected: a present edge always
    joins vertices of one component, so the union is a no-op either way; only
    edge_count then undercounts (merges only)."""
    v1 = 1 + rng.randbelow(p.n)
    rank = rng.randbelow(idx.restricted_size)
    v2 = idx.select(rank)
    merged = False
    outcome = None
    if v1 != v2:
        fresh = edges.add(v1, v2) if edges is not None else True
        if fresh:
            out = p.union(v1, v2)
            if out.merged:
                idx.apply_merge(out)
                merged = True
                outcome = out
            elif edges is not None:
                p.bump_edge_count()
    return StepRecord(step=t, kind="half-restricted", u=v1, v=v2,
                      merged=merged, outcome=outcome, rank=rank)


def er_step(p: Partition, rng: RandomStream, edges: EdgeSet,
            t: int = 0) -> StepRecord:
    """Insert one uniformly random fresh non-edge (exact rejection sampling)."""
    if p.n < 2:
        raise ValueError("er process needs n >= 2")
    max_pairs = p.n * (p.n - 1) // 2
    if len(edges) >= max_pairs:
        raise RuntimeError("graph is complete, no non-edges left")
    while True:
        u = 1 + rng.randbelow(p.n)
        v = 1 + rng.randbelow(p.n)
        if u == v:
            continue
        if edges.add(u, v):
            break
    out = p.union(u, v)
    if not out.merged:
        p.bump_edge_count()
    return StepRecord(step=t, kind="er", u=u, v=v, merged=out.merged,
                      outcome=out if out.merged else None)


def _draw_pair(p: Partition, rng: RandomStream, edges: Optional[EdgeSet],
               strict: bool):
    while True:
        u = 1 + rng.randbelow(p.n)
        v = 1 + rng.randbelow(p.n)
        if u == v:
            continue
        if strict and (u, v) in edges:
            continue
        return u, v


def achlioptas_step(p: Partition, rng: RandomStream, rule: str,
                    edges: Optional[EdgeSet] = None, strict: bool = False,
                    random_ties: bool = False, t: int = 0) -> StepRecord:
    if p.n < 4:
        raise ValueError("achlioptas processes need n >= 4")
    if rule not in ("min-product", "min-sum"):
        raise ValueError(f"unknown rule {rule!r}")
    if strict and edges is None:
        raise ValueError("strict mode needs an edge set")
    while True:
        u1, w1 = _draw_pair(p, rng, edges, strict)
        u2, w2 = _draw_pair(p, rng, edges, strict)
        if (min(u1, w1), max(u1, w1)) != (min(u2, w2), max(u2, w2)):
            break
    s1 = (p.component_size(u1), p.component_size(w1))
    s2 = (p.component_size(u2), p.component_size(w2))
    choice = rule_choose(s1, s2, rule)
    code = RULE_PRODUCT if rule == "min-product" else RULE_SUM
    if random_ties and _k_rule_value(*s1, code) == _k_rule_value(*s2, code):
        choice = rng.randbelow(2)
    u, v = (u1, w1) if choice == FIRST else (u2, w2)
    fresh = edges.add(u, v) if edges is not None else True
    merged = False
    outcome = None
    if fresh:
        out = p.union(u, v)
        if out.merged:
            merged = True
            outcome = out
        elif edges is not None:
            p.bump_edge_count()
    return StepRecord(step=t, kind=rule, u=u, v=v, merged=merged,
                      outcome=outcome, candidates=((u1, w1), (u2, w2)),
                      candidate_sizes=(s1, s2), chosen=choice)


def run_step(kind: str, p: Partition, idx: Optional[OrderIndex],
             rng: RandomStream, edges: Optional[EdgeSet] = None,
             strict: bool = False, random_ties: bool = False,
             t: int = 0) -> StepRecord:
    """Dispatch one step of the named process."""
    if kind == "half-restricted":
        if idx is None:
            raise ValueError("half-restricted needs an order index")
        return half_restricted_step(p, idx, rng, edges=edges, t=t)
    if kind == "er":
        if edges is None:
            raise ValueError("er needs an edge set")
        return er_step(p, rng, edges, t=t)
    if kind in ("min-product", "min-sum"):
        return achlioptas_step(p, rng, kind, edges=edges, strict=strict,
                               random_ties=random_ties, t=t)
    raise ValueError(f"unknown process kind {kind!r}")


# ------------------------------------------------------------ fused loop

@njit(cache=True, inline="always")
def _k_plain_merge(parent, csize, ring, pmeta, ra, rb):
    sa = np.int64(csize[ra])
    sb = np.int64(csize[rb])
    win = dsu_pick_winner(ra, rb, sa, sb)
    dsu_link(parent, csize, ring, ra, rb, win)
    ns = sa + sb
    pmeta[0] -= 1
    pmeta[2] += 1
    if ns > pmeta[1]:
        pmeta[1] = ns


@njit(cache=True, inline="always")
def _k_draw_distinct(rstate, etable, n, strict):
    while True:
        u = 1 + randbelow(rstate, n)
        v = 1 + randbelow(rstate, n)
        if u == v:
            continue
        if strict == 1 and edge_contains(etable, edge_key(n, u, v)):
            continue
        return u, v


@njit(cache=True, nogil=True)
def run_loop(parent, csize, ring, pmeta,
             cf, tl, tr, tsz, troot, vclass, chead, cnxt, cprv, sf,
             mroot, hl, hr, hsz, htroot, minlab,
             stack, imeta, etable, rstate,
             proc, mode, rule, strict, tie_rand,
             n, rsize, max_t, record_every, l1_stop, rec_l1_changes,
             win_c, win_len, stop_after_window,
             thr_sqrt, thr_half,
             ks, tk_out,
             rec_step, rec_l1, rec_alpha, rec_ncomp, rec_nedges,
             ometa):
    cap = rec_step.shape[0]
    rec = 0
    alpha = imeta[I_ALPHA] if proc == PROC_HR else np.int64(0)
    # initial row (step 0)
    rec_step[rec] = 0
    rec_l1[rec] = pmeta[1]
    rec_alpha[rec] = alpha
    rec_ncomp[rec] = pmeta[0]
    rec_nedges[rec] = pmeta[2]
    rec += 1
    ki = 0
    t = np.int64(0)
    t0 = np.int64(0)
    win_end = np.int64(-1)
    stop_reason = STOP_MAX_STEPS
    while t < max_t:
        t += 1
        l1_before = pmeta[1]
        alpha_before = alpha
        if proc == PROC_HR:
            v1 = 1 + randbelow(rstate, n)
            rk = randbelow(rstate, rsize)
            if mode == 0:
                v2 = select_lex(cf, tl, tr, tsz, troot, sf, imeta, rk)
            else:
                v2 = select_grouped(parent, csize, cf, tl, tr, tsz, mroot,
                                    hl, hr, hsz, htroot, imeta, rk)
            if v1 != v2:
                if edge_add(etable, edge_key(n, v1, v2)):
                    ra = dsu_find(parent, v1)
                    rb = dsu_find(parent, v2)
                    if ra != rb:
                        sa = np.int64(csize[ra])
                        sb = np.int64(csize[rb])
                        mn = sa if sa < sb else sb
                        if mn > alpha:
                            ometa[O_ERR] |= ERR_MIN_OVER_ALPHA
                        if win_c > 0 and alpha < win_c and mn >= win_c:
                            ometa[O_ERR] |= ERR_CHUNK_MERGE
                        if mode == 0:
                            merge_apply_lex(parent, csize, ring, pmeta, cf, tl,
                                            tr, tsz, troot, vclass, chead,
                                            cnxt, cprv, sf, stack, imeta,
                                            ra, rb)
                        else:
                            merge_apply_grouped(parent, csize, ring, pmeta,
                                                cf, tl, tr, tsz, mroot, hl,
                                                hr, hsz, htroot, minlab,
                                                stack, imeta, ra, rb)
                        alpha = imeta[I_ALPHA]
                    else:
                        pmeta[2] += 1
        elif proc == PROC_ER:
            while True:
                u = 1 + randbelow(rstate, n)
                v = 1 + randbelow(rstate, n)
                if u == v:
                    continue
                if edge_add(etable, edge_key(n, u, v)):
                    break
            ra = dsu_find(parent, u)
            rb = dsu_find(parent, v)
            if ra != rb:
                _k_plain_merge(parent, csize, ring, pmeta, ra, rb)
            else:
                pmeta[2] += 1
        else:
            while True:
                u1, w1 = _k_draw_distinct(rstate, etable, n, strict)
                u2, w2 = _k_draw_distinct(rstate, etable, n, strict)
                a1 = u1 if u1 < w1 else w1
                b1 = w1 if u1 < w1 else u1
                a2 = u2 if u2 < w2 else w2
                b2 = w2 if u2 < w2 else u2
                if a1 != a2 or b1 != b2:
                    break
            s1a = np.int64(csize[dsu_find(parent, u1)])
            s1b = np.int64(csize[dsu_find(parent, w1)])
            s2a = np.int64(csize[dsu_find(parent, u2)])
            s2b = np.int64(csize[dsu_find(parent, w2)])
            x = _k_rule_value(s1a, s1b, rule)
            y = _k_rule_value(s2a, s2b, rule)
            choice = FIRST if x <= y else SECOND
            if tie_rand == 1 and x == y:
                choice = randbelow(rstate, 2)
            if choice == FIRST:
                u, v = u1, w1
            else:
                u, v = u2, w2
            fresh = edge_add(etable, edge_key(n, u, v))
            ra = dsu_find(parent, u)
            rb = dsu_find(parent, v)
            if ra != rb:
                _k_plain_merge(parent, csize, ring, pmeta, ra, rb)
            elif fresh:
                pmeta[2] += 1
        l1 = pmeta[1]
        if proc == PROC_HR:
            while ki < ks.shape[0] and alpha >= ks[ki]:
                tk_out[ki] = t - 1
                ki += 1
            if win_c > 0 and t0 == 0 and alpha >= win_c:
                t0 = t
                ometa[O_T0] = t
                ometa[O_L1_TC] = l1_before
                win_end = (t - 1) + win_len
        if thr_sqrt > 0 and ometa[O_TSQRT] == 0 and l1 >= thr_sqrt:
            ometa[O_TSQRT] = t
        if thr_half > 0 and ometa[O_THALF] == 0 and l1 >= thr_half:
            ometa[O_THALF] = t
        hit_window_end = win_end > 0 and t == win_end
        if hit_window_end:
            ometa[O_L1_WIN] = l1
        stop = False
        if l1_stop > 0 and l1 >= l1_stop:
            stop = True
            stop_reason = STOP_L1
        if hit_window_end and stop_after_window == 1:
            stop = True
            stop_reason = STOP_WINDOW
        do_rec = (t % record_every == 0) or t == max_t or stop or hit_window_end
        if proc == PROC_HR and alpha != alpha_before:
            do_rec = True
        if rec_l1_changes == 1 and l1 != l1_before:
            do_rec = True
        if do_rec:
            if rec < cap:
                rec_step[rec] = t
                rec_l1[rec] = l1
                rec_alpha[rec] = alpha
                rec_ncomp[rec] = pmeta[0]
                rec_nedges[rec] = pmeta[2]
                rec += 1
            else:
                ometa[O_ERR] |= ERR_RECORD_OVERFLOW
        if stop:
            break
    if imeta[I_ERR] != 0:
        ometa[O_ERR] |= ERR_INDEX
    ometa[O_REC] = rec
    ometa[O_FINAL_T] = t
    ometa[O_STOP] = stop_reason
    ometa[O_FINAL_ALPHA] = alpha
