"""Command line front end: runs, ensembles, window measurements, and the
Monte Carlo verification suites.

Exit codes: 0 success, 1 validation/usage error, 2 a verify-* check failed.
Data goes to files named by flags; progress and reports go to stderr.  Flags
whose values are naturally functions of n (--steps, --record-every, --K, --C,
--D) accept expressions like 2*n, ln(n)^2 or lnlnln(n); --D may also use C.
"""

import argparse
import math
import os
import shlex
import sys
from dataclasses import replace

from .exprs import ExprError, evaluate, evaluate_int
from .geomsum import (
    GeomSumSpec,
    expected_partial_collect,
    lemma1_bound,
    lemma1_tail_estimate,
    sample_many,
)
from .harness import (
    ProcessConfig,
    WindowParams,
    default_window_params,
    run_ensemble,
    run_process,
)
from .rand import RandomStream
from .seriesio import write_csv, write_ensemble_csv


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _note(*args):
    print(*args, file=sys.stderr)


def _parse_seeds(text: str):
    """Comma list of seeds; a..b expands to the inclusive range."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty seed range {part!r}")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("no seeds given")
    return seeds


def _parse_track_k(text: str):
    return tuple(sorted(int(x) for x in text.split(",") if x.strip()))


def _process_token(kind: str, beta) -> str:
    if kind == "half-restricted":
        return f"half-restricted-{float(beta):g}"
    return kind


def _series_path(out_dir, kind, beta, n, seed):
    return os.path.join(out_dir, f"{_process_token(kind, beta)}_{n}_{seed}.csv")


def _add_run_flags(sp, ensemble: bool):
    sp.add_argument("--process", required=True,
                    choices=["er", "min-product", "min-sum", "half-restricted"])
    sp.add_argument("--beta", type=float, default=None,
                    help="restricted fraction, half-restricted only")
    sp.add_argument("--n", required=True, type=int, help="vertex count")
    sp.add_argument("--steps", default=None,
                    help="step budget, expression in n (default 2*n)")
    sp.add_argument("--record-every", default="1", metavar="EXPR",
                    help="recording cadence, expression in n")
    sp.add_argument("--track-k", default="", metavar="K1,K2,...",
                    help="alpha thresholds whose last-step-below is reported")
    sp.add_argument("--stop-l1-frac", type=float, default=None,
                    help="stop once L1 >= this fraction of n")
    sp.add_argument("--strict-achlioptas", action="store_true",
                    help="candidate pairs drawn from non-edges only")
    sp.add_argument("--random-ties", action="store_true",
                    help="min rules break exact ties by coin flip")
    sp.add_argument("--tie-break", choices=["lex", "component-grouped"],
                    default="lex",
                    help="equal-size ordering: by label (default) or grouped "
                         "by component (coarser, faster, non-standard)")
    sp.add_argument("--no-l1-rows", action="store_true",
                    help="do not force a row at every L1 change")
    if ensemble:
        sp.add_argument("--seeds", required=True,
                        help="comma list, ranges as a..b")
        sp.add_argument("--jobs", type=int, default=None)
    else:
        sp.add_argument("--seed", type=int, default=0)


def _add_window_flags(sp, required: bool):
    sp.add_argument("--K", default=None, metavar="EXPR",
                    help="size bound checked at the threshold step "
                         "(default ln(n)^2)" if required else
                    "enable window tracking: size bound at the threshold step")
    sp.add_argument("--C", default=None, metavar="EXPR",
                    help="alpha threshold defining T_C (default "
                         "max(2, ceil(lnlnln n)))")
    sp.add_argument("--D", default=None, metavar="EXPR",
                    help="window length divisor: window is ceil(n/D) steps "
                         "(default ceil(ln C)); may use C")
    sp.add_argument("--eps", type=float, default=0.1,
                    help="growth check target (1-eps)(1-beta)n")


def _build_config(args, ensemble: bool) -> ProcessConfig:
    n = args.n
    if n < 1:
        raise ValueError("--n must be positive")
    steps_text = args.steps if args.steps is not None else "2*n"
    steps = evaluate_int(steps_text, n=n)
    record_every = evaluate_int(args.record_every, n=n)
    return ProcessConfig(
        kind=args.process,
        n=n,
        max_steps=steps,
        beta=args.beta,
        seed=0 if ensemble else args.seed,
        record_every=record_every,
        tracked_k=_parse_track_k(args.track_k),
        l1_stop_frac=args.stop_l1_frac,
        record_l1_changes=not args.no_l1_rows,
        strict_achlioptas=args.strict_achlioptas,
        tie_break=args.tie_break,
        random_ties=args.random_ties,
    )


def _window_params(args, n: int):
    given = [args.K, args.C, args.D]
    if not any(v is not None for v in given) and not getattr(args, "window", True):
        return None
    defaults = default_window_params(n)
    k = evaluate(args.K, n=n) if args.K is not None else defaults.K
    c = evaluate_int(args.C, n=n) if args.C is not None else defaults.C
    d = (evaluate_int(args.D, n=n, C=c, c=c) if args.D is not None
         else max(1, math.ceil(math.log(c))))
    return WindowParams(K=k, C=c, D=d, eps=args.eps)


def _cmd_run(args, argv):
    cfg = _build_config(args, ensemble=False)
    _note(f"run: {_process_token(cfg.kind, cfg.beta)} n={cfg.n} "
          f"steps={cfg.max_steps} seed={cfg.seed}")
    series, summary = run_process(cfg)
    series.comment = "rgproc " + shlex.join(argv)
    write_csv(series, args.out)
    _note(f"final: step={summary.final_step} L1={summary.final_l1} "
          f"stop={summary.stop_reason}")
    for k, t in summary.t_k.items():
        _note(f"T_{k} = {'not reached' if t is None else t}")
    _note(f"wrote {args.out}")
    return 0


def _cmd_ensemble(args, argv):
    cfg = _build_config(args, ensemble=True)
    seeds = _parse_seeds(args.seeds)
    wp = _window_params(args, cfg.n)
    if wp is not None:
        cfg = replace(cfg, window_params=wp)
    os.makedirs(args.out_dir, exist_ok=True)
    comment = "rgproc " + shlex.join(argv)
    token = _process_token(cfg.kind, cfg.beta)

    def on_run(seed, series, summary):
        series.comment = comment
        path = _series_path(args.out_dir, cfg.kind, cfg.beta, cfg.n, seed)
        write_csv(series, path)
        _note(f"seed {seed}: final L1={summary.final_l1} -> {path}")

    ens = run_ensemble(cfg, seeds, jobs=args.jobs, on_run=on_run)
    for seed, msg in ens.errors.items():
        _note(f"seed {seed} FAILED: {msg}")
    summary_path = os.path.join(args.out_dir, f"{token}_{cfg.n}_summary.csv")
    write_ensemble_csv(ens.window_rows(), summary_path)
    _note(f"wrote {summary_path}")
    st = ens.stat(lambda s: s.final_l1)
    if st:
        _note(f"final L1 over seeds: min={st['min']} median={st['median']} "
              f"max={st['max']}")
    return 0 if not ens.errors else 1


def _cmd_window(args, argv):
    if args.process != "half-restricted":
        raise ValueError("window measurement is defined for --process "
                         "half-restricted")
    if args.steps is None:
        args.steps = "6*n"  # safety margin over the 4n threshold bound
    cfg = _build_config(args, ensemble=True)
    wp = _window_params(args, cfg.n)
    cfg = replace(cfg, window_params=wp, stop_after_window=True)
    seeds = _parse_seeds(args.seeds)
    _note(f"window: n={cfg.n} beta={float(cfg.beta):g} K={wp.K:g} C={wp.C} "
          f"D={wp.D} eps={wp.eps:g} window_len={math.ceil(cfg.n / wp.D)}")
    comment = "rgproc " + shlex.join(argv)

    def on_run(seed, series, summary):
        if args.out_dir:
            series.comment = comment
            path = _series_path(args.out_dir, cfg.kind, cfg.beta, cfg.n, seed)
            write_csv(series, path)

    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
    ens = run_ensemble(cfg, seeds, jobs=args.jobs, on_run=on_run)
    for seed in seeds:
        if seed in ens.errors:
            _note(f"seed {seed} FAILED: {ens.errors[seed]}")
            continue
        w = ens.summaries[seed].window
        if not w.reached:
            _note(f"seed {seed}: threshold alpha>={wp.C} not reached")
            continue
        after = ("not reached" if w.l1_after_window is None
                 else w.l1_after_window)
        _note(f"seed {seed}: T_C={w.t_c} L1(T_C)={w.l1_at_tc} "
              f"(<= K: {w.bound_k_ok}) L1(+{w.window_len})={after} "
              f"(>= {w.growth_target:.0f}: {w.growth_ok})")
    if args.out_dir:
        summary_path = os.path.join(
            args.out_dir,
            f"{_process_token(cfg.kind, cfg.beta)}_{cfg.n}_summary.csv")
        write_ensemble_csv(ens.window_rows(), summary_path)
        _note(f"wrote {summary_path}")
    return 0 if not ens.errors else 1


def _cmd_verify_lemma1(args, argv):
    rng = RandomStream(args.seed)
    if args.k is not None or args.s is not None:
        if args.k is None:
            raise ValueError("--s needs --k")
        cells = [(args.n_coupons, args.k,
                  args.s if args.s is not None else "n*ln(k)/4")]
    else:
        # default grid: far enough into the asymptotic regime that the bound
        # has real slack at these sizes
        cells = [(10_000, 1_000, "n*ln(k)/8"),
                 (10_000, 1_000, "n*ln(k)/4"),
                 (30_000, 3_000, "n*ln(k)/8"),
                 (30_000, 3_000, "n*ln(k)/4"),
                 (30_000, 3_000, "n*ln(k)/2")]
    failures = 0
    for n_coupons, k, s_text in cells:
        s = int(evaluate(str(s_text), n=n_coupons, k=k))
        est = lemma1_tail_estimate(n_coupons, k, s, args.trials, rng)
        bound = lemma1_bound(k)
        ok = est.p_hat <= bound + est.ci_halfwidth
        if bound < 1e-12:
            ok = ok and est.p_hat == 0.0
        _note(f"N={n_coupons} k={k} s={s} trials={est.trials}: "
              f"p_hat={est.p_hat:g} +-{est.ci_halfwidth:g} "
              f"bound={bound:g} -> {'ok' if ok else 'VIOLATED'}")
        if not ok:
            failures += 1
    if failures:
        _note(f"{failures}/{len(cells)} cells violated the tail bound")
        return 2
    _note(f"all {len(cells)} cells consistent with the tail bound")
    return 0


def _cmd_verify_eq1(args, argv):
    rng = RandomStream(args.seed)
    failures = 0
    for i in range(args.specs):
        n_coupons = 10 + rng.randbelow(args.n_max - 9)
        span = 1 + rng.randbelow(min(n_coupons - 1, 500))
        a = rng.randbelow(n_coupons - span)
        spec = GeomSumSpec(N=n_coupons, a=a, b=a + span - 1)
        x = sample_many(spec, rng, args.trials)
        mean = float(x.mean())
        se = float(x.std(ddof=1)) / math.sqrt(args.trials)
        want = expected_partial_collect(spec)
        dev = abs(mean - want)
        ok = dev <= 3 * se or dev < 1e-9
        _note(f"spec N={spec.N} a={spec.a} b={spec.b}: mean={mean:.4f} "
              f"expected={want:.4f} |diff|={dev:.4f} 3se={3 * se:.4f} "
              f"-> {'ok' if ok else 'OFF'}")
        if not ok:
            failures += 1
    if failures:
        _note(f"{failures}/{args.specs} specs off by more than 3 standard errors")
        return 2
    _note(f"all {args.specs} spec means within 3 standard errors")
    return 0


def _cmd_emit_figure_data(args, argv):
    n = args.n
    if n < 4:
        raise ValueError("--n must be at least 4")
    seeds = _parse_seeds(args.seeds)
    record_every = (evaluate_int(args.record_every, n=n)
                    if args.record_every else max(1, n // 2000))
    os.makedirs(args.out_dir, exist_ok=True)
    comment = "rgproc " + shlex.join(argv)
    runs = [("er", None), ("min-product", None), ("min-sum", None),
            ("half-restricted", 0.25), ("half-restricted", 0.5),
            ("half-restricted", 0.9)]
    for seed in seeds:
        for kind, beta in runs:
            cfg = ProcessConfig(kind=kind, n=n, max_steps=n, beta=beta,
                                seed=seed, record_every=record_every,
                                record_l1_changes=False)
            series, _ = run_process(cfg)
            series.comment = comment
            path = _series_path(args.out_dir, kind, beta, n, seed)
            write_csv(series, path)
            _note(f"wrote {path}")
    return 0


def build_parser() -> _Parser:
    ap = _Parser(prog="rgproc",
                 description="Seedable random graph process simulator")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    sp = sub.add_parser("run", help="one run, one CSV")
    _add_run_flags(sp, ensemble=False)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("ensemble", help="independent runs over a seed list")
    _add_run_flags(sp, ensemble=True)
    _add_window_flags(sp, required=False)
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=_cmd_ensemble, window=False)

    sp = sub.add_parser("window",
                        help="measure the explosive window per seed")
    _add_run_flags(sp, ensemble=True)
    _add_window_flags(sp, required=True)
    sp.add_argument("--out-dir", default=None)
    sp.set_defaults(func=_cmd_window, window=True)

    sp = sub.add_parser("verify-lemma1",
                        help="Monte Carlo tail vs the e^(-k^0.99) bound")
    sp.add_argument("--n-coupons", type=int, default=10_000)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--s", default=None, metavar="EXPR",
                    help="tail cutoff, expression in n (=N) and k")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=_cmd_verify_lemma1)

    sp = sub.add_parser("verify-eq1",
                        help="simulated partial-collection means vs the "
                             "harmonic-sum formula")
    sp.add_argument("--specs", type=int, default=20)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--n-max", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=_cmd_verify_eq1)

    sp = sub.add_parser("emit-figure-data",
                        help="the six series of the overlay figure")
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--seeds", default="1")
    sp.add_argument("--record-every", default=None, metavar="EXPR")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=_cmd_emit_figure_data)

    return ap


def parse_and_dispatch(argv) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except _CliError as e:
        _note(f"error: {e}")
        _note(ap.format_usage().rstrip())
        return 1
    if getattr(args, "func", None) is None:
        _note(ap.format_usage().rstrip())
        return 1
    try:
        return args.func(args, argv)
    except (ValueError, ExprError, OSError, RuntimeError) as e:
        _note(f"error: {e}")
        return 1


def main(argv=None) -> int:
    return parse_and_dispatch(list(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
