"""Command-line interface.

Subcommands:
  simulate        generate a seeded synthetic benchmark (transactions + prices)
  diagram         persistence diagrams of one day's transaction graph
  summarize       one feature row from a diagram CSV
  distance        Wasserstein distance between two diagram CSVs
  check-stability randomized validation of the velocity stability bounds
  featurize       per-day feature matrix for a snapshot series
  evaluate        full AUC sweep over methods, horizons, and n_sub

Paths given as ``-`` write to stdout where that makes sense. Exit codes:
0 success, 1 runtime error (bad input data, missing file), 2 usage.
"""

from __future__ import annotations

import argparse
import sys

__all__ = ["main"]


def _parse_ints(text: str) -> tuple:
    """'1..7' or '1,2,3' to a tuple of ints."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(",") if x.strip())


def _out(path: str):
    return sys.stdout if path == "-" else path


def _grid_config(args, n_sub=None):
    from .pipeline import GridConfig

    return GridConfig(
        m=args.m,
        n_sub=args.nsub if n_sub is None else n_sub,
        alpha=getattr(args, "alpha", None),
        beta=getattr(args, "beta", None),
    )


def _cmd_simulate(args) -> int:
    from .data import save_prices, save_transactions
    from .synth import SynthConfig, synth_dynamic_graphs

    cfg = SynthConfig(
        days=args.days,
        n_nodes=args.nodes,
        n_anomalies=args.anomalies,
        anomaly_days=tuple(_parse_ints(args.anomaly_days)) if args.anomaly_days else None,
        shock=args.shock,
        horizon=args.horizon,
    )
    series, prices = synth_dynamic_graphs(cfg, args.seed)
    save_transactions(series, args.out_transactions)
    save_prices(prices, args.out_prices)
    n_tx = sum(len(t) for _, t in series.days)
    print(f"wrote {args.out_transactions} ({len(series)} days, {n_tx} transactions)")
    print(f"wrote {args.out_prices} ({len(prices)} days)")
    return 0


def _pick_day(series, date: str | None):
    if date is not None:
        for d, txs in series.days:
            if d == date:
                return txs
        raise ValueError(f"date {date} not in file; available: {', '.join(series.dates)}")
    if len(series) != 1:
        raise ValueError(
            f"file has {len(series)} dates; pick one with --date "
            f"({series.dates[0]} .. {series.dates[-1]})"
        )
    return series.days[0][1]


def _cmd_diagram(args) -> int:
    from .complex import lower_star_filtration
    from .data import ingest_snapshots
    from .persistence import compute_diagrams, save_diagrams
    from .pipeline import build_day_graph

    series = ingest_snapshots(args.transactions)
    txs = _pick_day(series, args.date)
    graph = build_day_graph(txs, args.top_rank)
    dims = _parse_ints(args.dims)
    fc = lower_star_filtration(graph, max(dims) + 1)
    diagrams = compute_diagrams(fc, max(dims))
    save_diagrams([diagrams[k] for k in dims], _out(args.output))
    if args.output != "-":
        counts = ", ".join(f"dim {k}: {len(diagrams[k])}" for k in dims)
        print(f"wrote {args.output} ({counts})")
    return 0


def _select_dim(diagrams, dim: int):
    from .persistence import PersistenceDiagram

    for d in diagrams:
        if d.dimension == dim:
            return d
    return PersistenceDiagram([], [], dim)


def _cmd_summarize(args) -> int:
    import csv

    from .persistence import load_diagrams
    from .pipeline import GridConfig, summary_row

    diagrams = load_diagrams(args.diagram)
    dims = _parse_ints(args.dims)
    grid = GridConfig(m=args.m, n_sub=args.nsub)
    columns = []
    values = []
    for k in dims:
        row = summary_row(
            _select_dim(diagrams, k), args.method, args.alpha, args.beta, grid, args.nsub
        )
        columns.extend(f"{args.method}_h{k}_{i:02d}" for i in range(row.size))
        values.extend(row.tolist())
    out = _out(args.output)
    handle = out if hasattr(out, "write") else open(out, "w", newline="")
    try:
        w = csv.writer(handle)
        w.writerow(columns)
        w.writerow([repr(v) for v in values])
    finally:
        if handle is not sys.stdout:
            handle.close()
    return 0


def _cmd_distance(args) -> int:
    from .distances import wasserstein
    from .persistence import finalize_diagram, load_diagrams

    d1 = _select_dim(load_diagrams(args.diagram_a), args.dim)
    d2 = _select_dim(load_diagrams(args.diagram_b), args.dim)
    if args.cap_beta is not None:
        d1 = finalize_diagram(d1, "cap", args.cap_beta, discard_zero_persistence=False)
        d2 = finalize_diagram(d2, "cap", args.cap_beta, discard_zero_persistence=False)
    result = wasserstein(d1, d2, p=args.p, q=args.q)
    print(f"{result.cost:.12g}")
    return 0


def _cmd_check_stability(args) -> int:
    from .stability import lemma_suite, theorem_suite

    lemmas = lemma_suite(args.trials, args.seed)
    theorem = theorem_suite(args.trials, args.seed, m=args.m, n_sub=args.nsub)
    for name, count in lemmas.violations.items():
        print(f"{name}: {count} violations in {lemmas.trials} trials")
    print(f"stability bound: {theorem.violations} violations in {theorem.trials} trials")
    print(f"max slack ratio: {theorem.max_slack_ratio:.6f}")
    print(
        "diagonal augmentation max deltas: "
        f"summary {theorem.aug_max_summary_delta:.3e}, "
        f"distance {theorem.aug_max_distance_delta:.3e}"
    )
    failed = lemmas.total_violations + theorem.violations
    return 1 if failed else 0


def _cmd_featurize(args) -> int:
    from .data import ingest_snapshots
    from .pipeline import featurize_series, save_features

    series = ingest_snapshots(args.transactions)
    fm = featurize_series(
        series,
        method=args.method,
        grid=_grid_config(args),
        dims=_parse_ints(args.dims),
        baseline=args.baseline,
        top_rank=args.top_rank,
    )
    save_features(fm, _out(args.output))
    if args.output != "-":
        print(f"wrote {args.output} ({len(fm.dates)} rows, {len(fm.columns)} columns)")
    return 0


def _cmd_evaluate(args) -> int:
    from .data import ingest_snapshots, load_prices
    from .forest import CvConfig, ForestConfig
    from .pipeline import evaluate_sweep, save_results

    series = ingest_snapshots(args.transactions)
    prices = load_prices(args.prices)
    rows = evaluate_sweep(
        series,
        prices,
        methods=tuple(args.methods.split(",")),
        horizons=_parse_ints(args.horizons),
        n_subs=_parse_ints(args.nsub),
        grid=_grid_config(args, n_sub=1),
        dims=_parse_ints(args.dims),
        top_rank=args.top_rank,
        forest=ForestConfig(args.trees, args.seed),
        cv=CvConfig(args.cv_folds, args.cv_repeats, args.seed),
        threshold=args.threshold,
    )
    save_results(rows, args.output)
    best = max(
        (r for r in rows if r["model"] != "M1"),
        key=lambda r: r["auc_gain_pct"],
        default=None,
    )
    print(f"wrote {args.output} ({len(rows)} rows)")
    if best is not None:
        print(
            f"best AUC gain: {best['auc_gain_pct']:.2f}% "
            f"({best['method']}, {best['model']}, horizon {best['horizon']}, "
            f"n_sub {best['n_sub']})"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topovelocity",
        description="Velocity-based persistence summaries for dynamic graph anomaly prediction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a seeded synthetic benchmark")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--days", type=int, default=120)
    p.add_argument("--nodes", type=int, default=60)
    p.add_argument("--anomalies", type=int, default=10)
    p.add_argument("--anomaly-days", default=None, help="explicit day indices, e.g. 10,30,50")
    p.add_argument("--shock", choices=("ring", "community"), default="ring")
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--out-transactions", default="transactions.csv")
    p.add_argument("--out-prices", default="prices.csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("diagram", help="persistence diagrams of one day's graph")
    p.add_argument("--transactions", required=True)
    p.add_argument("--date", default=None, help="day to use when the file has several")
    p.add_argument("--dims", default="0,1")
    p.add_argument("--top-rank", type=int, default=250)
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_diagram)

    p = sub.add_parser("summarize", help="one feature row from a diagram CSV")
    p.add_argument("--diagram", required=True)
    p.add_argument(
        "--method", required=True, choices=("hnav", "hwnav", "owhnpv", "vab", "pl", "pi")
    )
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--nsub", type=int, default=1)
    p.add_argument("--dims", default="0,1")
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("distance", help="Wasserstein distance between two diagram CSVs")
    p.add_argument("diagram_a")
    p.add_argument("diagram_b")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=0)
    p.add_argument(
        "--cap-beta",
        type=float,
        default=None,
        help="cap essential classes at this value before measuring",
    )
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("check-stability", help="randomized stability validation")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--nsub", type=int, default=None)
    p.set_defaults(func=_cmd_check_stability)

    p = sub.add_parser("featurize", help="per-day feature matrix for a series")
    p.add_argument("--transactions", required=True)
    p.add_argument(
        "--method", default="owhnpv", choices=("hnav", "hwnav", "owhnpv", "vab", "pl", "pi")
    )
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--nsub", type=int, default=1)
    p.add_argument("--dims", default="0,1")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--top-rank", type=int, default=250)
    p.add_argument("--no-baseline", dest="baseline", action="store_false")
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("evaluate", help="full AUC sweep to a results CSV")
    p.add_argument("--transactions", required=True)
    p.add_argument("--prices", required=True)
    p.add_argument("--output", default="results.csv")
    p.add_argument("--methods", default="hnav,hwnav,owhnpv,vab,pl,pi")
    p.add_argument("--horizons", default="1..7")
    p.add_argument("--nsub", default="1,2,3,5,10")
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--dims", default="0,1")
    p.add_argument("--trees", type=int, default=500)
    p.add_argument("--cv-folds", type=int, default=10)
    p.add_argument("--cv-repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-rank", type=int, default=250)
    p.add_argument("--threshold", type=float, default=0.05)
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return int(args.func(args) or 0)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
