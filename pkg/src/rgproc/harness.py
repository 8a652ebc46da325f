"""Run driver: configuration, full runs with recording, threshold detection,
explosive-window measurement, and seed ensembles.

A run is deterministic in (config, seed): the step loop is compiled, records
a row at step 0, every record_every steps, at every alpha change, at every L1
change (unless turned off), and at the final/stopping step.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .dsu import Partition
from .order_index import OrderIndex, _normalize_beta, I_ERR
from .processes import (
    KINDS,
    PROC_ACH,
    PROC_ER,
    PROC_HR,
    RULE_PRODUCT,
    RULE_SUM,
    ERR_CHUNK_MERGE,
    ERR_INDEX,
    ERR_MIN_OVER_ALPHA,
    ERR_RECORD_OVERFLOW,
    O_ERR,
    O_FINAL_ALPHA,
    O_FINAL_T,
    O_L1_TC,
    O_L1_WIN,
    O_REC,
    O_STOP,
    O_T0,
    O_THALF,
    O_TSQRT,
    STOP_L1,
    STOP_MAX_STEPS,
    STOP_WINDOW,
    run_loop,
)
from .engine import edge_table_alloc_size
from .rand import RandomStream
from .seriesio import TimeSeries

NOT_REACHED = None

_STOP_NAMES = {STOP_MAX_STEPS: "max-steps", STOP_L1: "l1-threshold",
               STOP_WINDOW: "window"}


@dataclass(frozen=True)
class WindowParams:
    """Explosive-window thresholds: watch for the first step where alpha
    reaches C, check L1 there against K, then check L1 again ceil(n/D) steps
    later against (1-eps)(1-beta)n."""

    K: float
    C: int
    D: int
    eps: float

    def __post_init__(self):
        if self.C < 2:
            raise ValueError(f"C must be >= 2, got {self.C}")
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must be in (0,1), got {self.eps}")
        if self.K <= 0:
            raise ValueError(f"K must be positive, got {self.K}")


def default_window_params(n: int) -> WindowParams:
    """K = ln(n)^2, C = ceil(lnlnln n) clamped to the C >= 2 floor, D = ceil(ln C),
    eps = 0.1.  At desk scale lnlnln n is below 2, so the clamp usually binds."""
    k = math.log(n) ** 2
    c = max(2, math.ceil(math.log(math.log(math.log(n)))))
    d = max(1, math.ceil(math.log(c)))
    return WindowParams(K=k, C=c, D=d, eps=0.1)


@dataclass(frozen=True)
class ProcessConfig:
    kind: str
    n: int
    max_steps: int
    beta: object = None                    # required for half-restricted
    seed: int = 0
    record_every: int = 1
    tracked_k: tuple = ()
    window_params: Optional[WindowParams] = None
    l1_stop_frac: Optional[float] = None
    record_l1_changes: bool = True
    strict_achlioptas: bool = False
    tie_break: str = "lex"
    random_ties: bool = False
    stop_after_window: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown process kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind == "er" and self.n < 2:
            raise ValueError("er needs n >= 2")
        if self.kind in ("min-product", "min-sum") and self.n < 4:
            raise ValueError(f"{self.kind} needs n >= 4")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.kind == "half-restricted":
            if self.beta is None:
                raise ValueError("half-restricted needs beta")
            b = _normalize_beta(self.beta)
            if (b.numerator * self.n) // b.denominator < 1:
                raise ValueError("floor(beta*n) must be >= 1")
            object.__setattr__(self, "beta", b)
        elif self.beta is not None:
            raise ValueError("beta is only meaningful for half-restricted")
        ks = tuple(int(k) for k in self.tracked_k)
        if any(k < 2 for k in ks):
            raise ValueError("tracked k values must be >= 2 (alpha >= 1 always)")
        if list(ks) != sorted(ks):
            raise ValueError("tracked_k must be ascending")
        object.__setattr__(self, "tracked_k", ks)
        if self.window_params is not None and self.kind != "half-restricted":
            raise ValueError("window_params only apply to half-restricted")
        if self.l1_stop_frac is not None and not 0 < self.l1_stop_frac <= 1:
            raise ValueError("l1_stop_frac must be in (0, 1]")
        if self.tie_break not in ("lex", "component-grouped"):
            raise ValueError(f"unknown tie_break {self.tie_break!r}")
        max_pairs = self.n * (self.n - 1) // 2
        if self.kind == "er" and self.max_steps > max_pairs:
            raise ValueError("er cannot run longer than n(n-1)/2 steps")


@dataclass(frozen=True)
class WindowReport:
    reached: bool
    t_c: Optional[int]
    l1_at_tc: Optional[int]
    window_len: int
    l1_after_window: Optional[int]
    bound_k_ok: Optional[bool]
    growth_ok: Optional[bool]
    params: WindowParams
    growth_target: float


@dataclass(frozen=True)
class RunSummary:
    t_k: dict
    final_l1: int
    final_step: int
    final_alpha: Optional[int]
    stop_reason: str
    window: Optional[WindowReport]
    t_sqrt: Optional[int]
    t_half: Optional[int]
    sqrt_to_half: Optional[int]


def _ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def run_process(config: ProcessConfig):
    """Execute one run; returns (TimeSeries, RunSummary)."""
    n = config.n
    p = Partition(n)
    dummy32 = np.zeros(1, dtype=np.int32)
    dummy64 = np.zeros(1, dtype=np.int64)
    if config.kind == "half-restricted":
        proc = PROC_HR
        idx = OrderIndex(p, config.beta, tie_break=config.tie_break)
        mode = 0 if config.tie_break == "lex" else 1
        rsize = idx.restricted_size
        imeta = idx.imeta
        stack = idx.stack
        cf, tl, tr, tsz = idx.cf, idx.tl, idx.tr, idx.tsz
        if mode == 0:
            troot, vclass = idx.troot, idx.vclass
            chead, cnxt, cprv, sf = idx.chead, idx.cnxt, idx.cprv, idx.sf
            mroot = hl = hr = hsz = htroot = minlab = dummy32
        else:
            troot = vclass = chead = cnxt = cprv = dummy32
            sf = dummy64
            mroot, hl, hr, hsz = idx.mroot, idx.hl, idx.hr, idx.hsz
            htroot, minlab = idx.htroot, idx.minlab
    else:
        proc = PROC_ER if config.kind == "er" else PROC_ACH
        idx = None
        mode = 0
        rsize = 1
        imeta = np.zeros(8, dtype=np.int64)
        stack = dummy32
        cf = sf = dummy64
        tl = tr = tsz = troot = vclass = chead = cnxt = cprv = dummy32
        mroot = hl = hr = hsz = htroot = minlab = dummy32
    rule = RULE_PRODUCT if config.kind == "min-product" else RULE_SUM
    etable = np.zeros(int(edge_table_alloc_size(config.max_steps + 8)),
                      dtype=np.int64)
    rng = RandomStream(config.seed)

    cap = min(config.max_steps, n) + config.max_steps // config.record_every + 16
    rec_step = np.zeros(cap, dtype=np.int64)
    rec_l1 = np.zeros(cap, dtype=np.int64)
    rec_alpha = np.zeros(cap, dtype=np.int64)
    rec_ncomp = np.zeros(cap, dtype=np.int64)
    rec_nedges = np.zeros(cap, dtype=np.int64)
    ometa = np.zeros(16, dtype=np.int64)

    ks = np.array(config.tracked_k, dtype=np.int64)
    tk_out = np.full(len(ks), -1, dtype=np.int64)
    wp = config.window_params
    win_c = wp.C if wp is not None else 0
    win_len = math.ceil(n / wp.D) if wp is not None else 0
    l1_stop = math.ceil(config.l1_stop_frac * n) if config.l1_stop_frac else 0

    run_loop(p.parent, p.csize, p.ring, p.meta,
             cf, tl, tr, tsz, troot, vclass, chead, cnxt, cprv, sf,
             mroot, hl, hr, hsz, htroot, minlab,
             stack, imeta, etable, rng.state,
             proc, mode, rule,
             1 if config.strict_achlioptas else 0,
             1 if config.random_ties else 0,
             n, rsize, config.max_steps, config.record_every, l1_stop,
             1 if config.record_l1_changes else 0,
             win_c, win_len, 1 if config.stop_after_window else 0,
             _ceil_sqrt(n), (n + 1) // 2,
             ks, tk_out,
             rec_step, rec_l1, rec_alpha, rec_ncomp, rec_nedges,
             ometa)

    err = int(ometa[O_ERR])
    if err & ERR_CHUNK_MERGE:
        raise AssertionError("two components of size >= C merged while alpha < C")
    if err & ERR_MIN_OVER_ALPHA:
        raise AssertionError("restricted merge with min side above alpha")
    if err & ERR_INDEX:
        raise AssertionError(
            f"order index internal check failed (code {int(imeta[I_ERR])})")
    if err & ERR_RECORD_OVERFLOW:
        raise AssertionError("record buffer overflow")

    m = int(ometa[O_REC])
    series = TimeSeries(
        n=n,
        step=rec_step[:m].copy(),
        l1=rec_l1[:m].copy(),
        alpha=rec_alpha[:m].copy(),
        n_components=rec_ncomp[:m].copy(),
        n_edges=rec_nedges[:m].copy(),
    )

    t_k = {int(k): (int(v) if v >= 0 else NOT_REACHED)
           for k, v in zip(ks, tk_out)}
    t_sqrt = int(ometa[O_TSQRT]) or NOT_REACHED
    t_half = int(ometa[O_THALF]) or NOT_REACHED
    window = None
    if wp is not None:
        t0 = int(ometa[O_T0])
        reached = t0 > 0
        l1_after = int(ometa[O_L1_WIN]) or None
        if reached:
            l1_at_tc = int(ometa[O_L1_TC])
            target = (1 - wp.eps) * float(1 - Fraction(config.beta)) * n
            window = WindowReport(
                reached=True,
                t_c=t0 - 1,
                l1_at_tc=l1_at_tc,
                window_len=win_len,
                l1_after_window=l1_after,
                bound_k_ok=l1_at_tc <= wp.K,
                growth_ok=(l1_after >= target) if l1_after is not None else None,
                params=wp,
                growth_target=target,
            )
        else:
            window = WindowReport(
                reached=False, t_c=None, l1_at_tc=None, window_len=win_len,
                l1_after_window=None, bound_k_ok=None, growth_ok=None,
                params=wp, growth_target=(1 - wp.eps) * float(1 - Fraction(config.beta)) * n,
            )
    summary = RunSummary(
        t_k=t_k,
        final_l1=int(series.l1[-1]) if m else 1,
        final_step=int(ometa[O_FINAL_T]),
        final_alpha=int(ometa[O_FINAL_ALPHA]) if proc == PROC_HR else None,
        stop_reason=_STOP_NAMES[int(ometa[O_STOP])],
        window=window,
        t_sqrt=t_sqrt,
        t_half=t_half,
        sqrt_to_half=(t_half - t_sqrt)
        if (t_sqrt is not NOT_REACHED and t_half is not NOT_REACHED)
        else NOT_REACHED,
    )
    return series, summary


def detect_T_k(series: TimeSeries, k: int):
    """Last step whose post-state has alpha < k, from a trace recorded at
    every alpha change.  Returns NOT_REACHED when alpha never reaches k."""
    if k == 1:
        raise ValueError("k=1: alpha >= 1 always, the defining set is empty")
    if k < 1:
        raise ValueError(f"k must be >= 2, got {k}")
    steps = series.step
    alphas = series.alpha
    hit = np.nonzero(alphas >= k)[0]
    if len(hit) == 0:
        return NOT_REACHED
    return int(steps[hit[0]]) - 1


def sqrt_to_half_window(series: TimeSeries, n: int):
    """(first step with L1 >= n/2) - (first step with L1 >= sqrt(n)); needs L1
    recorded at every change to be exact.  NOT_REACHED if either threshold is
    never crossed."""
    lo = _ceil_sqrt(n)
    hi = (n + 1) // 2
    l1 = series.l1
    a = np.nonzero(l1 >= lo)[0]
    b = np.nonzero(l1 >= hi)[0]
    if len(a) == 0 or len(b) == 0:
        return NOT_REACHED
    return int(series.step[b[0]]) - int(series.step[a[0]])


def explosive_window(config: ProcessConfig) -> WindowReport:
    """Run until the alpha-C threshold plus ceil(n/D) further steps and report
    both window checks (L1 <= K at T_C, L1 >= (1-eps)(1-beta)n after the
    window); requires window_params."""
    if config.kind != "half-restricted":
        raise ValueError("explosive_window needs a half-restricted config")
    if config.window_params is None:
        raise ValueError("explosive_window needs window_params")
    cfg = replace(config, stop_after_window=True)
    _, summary = run_process(cfg)
    return summary.window


def run_ensemble(config: ProcessConfig, seeds, jobs: Optional[int] = None,
                 on_run: Optional[Callable] = None):
    """Independent runs over the seed list; results aggregate in seed order no
    matter how the pool schedules them.  Per-seed failures are captured, not
    raised.  on_run(seed, series, summary) fires in seed order."""
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("need at least one seed")
    if jobs is None:
        jobs = min(4, len(seeds))
    jobs = max(1, jobs)

    def one(seed):
        return run_process(replace(config, seed=seed))

    results = [None] * len(seeds)
    errors = {}
    if jobs == 1:
        for i, s in enumerate(seeds):
            try:
                results[i] = one(s)
            except Exception as e:  # isolate per-seed failures
                errors[s] = f"{type(e).__name__}: {e}"
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(one, s) for s in seeds]
            for i, (s, f) in enumerate(zip(seeds, futs)):
                try:
                    results[i] = f.result()
                except Exception as e:
                    errors[s] = f"{type(e).__name__}: {e}"
    summaries = {}
    for s, res in zip(seeds, results):
        if res is None:
            continue
        series, summary = res
        summaries[s] = summary
        if on_run is not None:
            on_run(s, series, summary)
    return EnsembleSummary(seeds=tuple(seeds), summaries=summaries,
                           errors=errors)


def _stats(values):
    vals = sorted(v for v in values if v is not None)
    if not vals:
        return None
    mid = len(vals) // 2
    if len(vals) % 2:
        med = vals[mid]
    else:
        med = (vals[mid - 1] + vals[mid]) / 2
    return {"min": vals[0], "median": med, "max": vals[-1]}


@dataclass(frozen=True)
class EnsembleSummary:
    seeds: tuple
    summaries: dict            # seed -> RunSummary, successful runs only
    errors: dict               # seed -> message for failed runs

    def stat(self, getter) -> Optional[dict]:
        """min/median/max of getter(summary) over successful runs."""
        return _stats([getter(s) for s in self.summaries.values()])

    def window_rows(self):
        """Rows for the ensemble summary CSV, in seed order."""
        rows = []
        for s in self.seeds:
            summ = self.summaries.get(s)
            if summ is None:
                rows.append((s, None, None, None, None))
                continue
            w = summ.window
            rows.append((
                s,
                w.t_c if w is not None else None,
                w.l1_at_tc if w is not None else None,
                w.l1_after_window if w is not None else None,
                summ.sqrt_to_half,
            ))
        return rows
