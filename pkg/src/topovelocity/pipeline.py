"""End-to-end anomaly-prediction harness.

Per day: rank nodes by activity, keep the busiest, weight each node by
its mean incident transaction amount, connect nodes that transacted,
and summarize the persistence diagrams of the resulting lower-star
filtration. Feature rows combine baseline graph statistics with a
topological summary block per homological dimension; labels mark days
whose price moves more than a threshold h days later. Nested random
forest models isolate what each feature block adds:

  M1  baseline graph statistics only
  M2  M1 plus the dimension-0 summary block
  M3  M2 plus the dimension-1 summary block

Cross-validation folds depend only on the labels and the seed, so all
models and methods of one horizon share identical splits and AUC gains
isolate the feature sets. Features for day t use only that day's
transactions plus two series-wide constants (the shared summary range
[alpha, beta]); prices never enter featurization.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .complex import WeightedGraph, lower_star_filtration
from .data import (
    PriceSeries,
    SnapshotSeries,
    Transaction,
    date_add,
    ingest_snapshots,
    load_prices,
    save_prices,
    save_transactions,
)
from .persistence import PersistenceDiagram, compute_diagrams, finalize_diagram
from .summaries import (
    HierarchicalGrid,
    hnav,
    hwnav,
    landscape,
    ow_hnpv,
    persistence_image,
    vab,
)
from .synth import SynthConfig, synth_dynamic_graphs

__all__ = [
    "METHODS",
    "VELOCITY_METHODS",
    "BASELINE_COLUMNS",
    "GridConfig",
    "FeatureMatrix",
    "EvalResult",
    "SnapshotSeries",
    "PriceSeries",
    "Transaction",
    "SynthConfig",
    "ingest_snapshots",
    "load_prices",
    "save_prices",
    "save_transactions",
    "synth_dynamic_graphs",
    "build_day_graph",
    "summary_row",
    "featurize_series",
    "label_anomalies",
    "train_eval",
    "evaluate_sweep",
    "save_features",
    "load_features",
    "save_results",
    "RESULT_COLUMNS",
]

METHODS = ("hnav", "hwnav", "owhnpv", "vab", "pl", "pi")
VELOCITY_METHODS = ("hnav", "hwnav", "owhnpv")
BASELINE_COLUMNS = (
    "degree_mean",
    "closeness_mean",
    "betweenness_mean",
    "clustering_mean",
)
RESULT_COLUMNS = (
    "method",
    "model",
    "horizon",
    "n_sub",
    "mean_auc",
    "auc_gain_pct",
    "auc_gain_abs",
)

WORKERS_ENV = "TOPOVELOCITY_WORKERS"


def _pmap(fn, items):
    """Order-preserving map, parallel when the worker env var asks for it."""
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class GridConfig:
    """Shared summary configuration for a snapshot series.

    alpha/beta default to the global minimum/maximum node weight across
    the whole series, so every day is summarized on one common range.
    Landscapes use ``landscape_levels`` levels sampled so the block stays
    30-dimensional; images use ``image_shape`` pixels (also 30 by
    default) with sigma = ``sigma_frac`` * (beta - alpha).
    """

    m: int = 30
    n_sub: int = 1
    alpha: float | None = None
    beta: float | None = None
    landscape_levels: int = 5
    image_shape: tuple = (6, 5)
    sigma_frac: float = 0.1


@dataclass
class FeatureMatrix:
    """Per-day feature rows with named columns and nested model tiers."""

    dates: list
    columns: list
    X: np.ndarray
    tiers: dict

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.shape != (len(self.dates), len(self.columns)):
            raise ValueError("X shape must match dates x columns")
        if np.any(~np.isfinite(self.X)):
            raise ValueError("feature matrix contains non-finite values")
        known = set(self.columns)
        listed = [self.tiers[t] for t in sorted(self.tiers)]
        for cols in listed:
            missing = [c for c in cols if c not in known]
            if missing:
                raise ValueError(f"tier references unknown columns {missing}")
        for small, big in zip(listed, listed[1:]):
            if not set(small) <= set(big):
                raise ValueError("model tiers must be nested")

    def tier_matrix(self, tier: str) -> np.ndarray:
        idx = [self.columns.index(c) for c in self.tiers[tier]]
        return self.X[:, idx]


@dataclass
class EvalResult:
    """Cross-validated AUC for one (model, feature set) configuration."""

    model: str
    mean_auc: float
    fold_aucs: list
    skipped_folds: list = field(default_factory=list)
    auc_gain_pct: float | None = None
    auc_gain_abs: float | None = None


def build_day_graph(transactions, top_rank: int) -> WeightedGraph:
    """One day's transactions to a node-weighted undirected graph.

    Activity is the number of incident transactions; ties rank by total
    incident amount, then identifier. The mean-amount node weights are
    computed before the top_rank cut so they reflect the full day. Edges
    connect pairs that transacted, both endpoints surviving the cut.
    """
    if top_rank < 1:
        raise ValueError("top_rank must be >= 1")
    if not transactions:
        return WeightedGraph({}, ())
    count: dict = {}
    total: dict = {}
    for tx in transactions:
        for v in (tx.src, tx.dst):
            count[v] = count.get(v, 0) + 1
            total[v] = total.get(v, 0.0) + tx.amount
    ranked = sorted(count, key=lambda v: (-count[v], -total[v], v))
    kept = set(ranked[:top_rank])
    weights = {v: total[v] / count[v] for v in kept}
    edges = set()
    for tx in transactions:
        if tx.src in kept and tx.dst in kept:
            e = (tx.src, tx.dst) if tx.src < tx.dst else (tx.dst, tx.src)
            edges.add(e)
    return WeightedGraph(weights, edges)


def _baseline_row(graph: WeightedGraph) -> np.ndarray:
    """Mean degree, harmonic closeness, betweenness, clustering over nodes.

    Closeness is the harmonic variant normalized by n - 1, which stays
    well defined on the frequently disconnected daily graphs.
    """
    n = graph.n_nodes
    if n <= 1:
        return np.zeros(4)
    G = nx.Graph()
    G.add_nodes_from(graph.nodes)
    G.add_edges_from(sorted(graph.edges))
    deg = nx.degree_centrality(G)
    harm = nx.harmonic_centrality(G)
    betw = nx.betweenness_centrality(G, normalized=True)
    clust = nx.clustering(G)
    order = graph.nodes
    return np.array(
        [
            float(np.mean([deg[v] for v in order])),
            float(np.mean([harm[v] / (n - 1) for v in order])),
            float(np.mean([betw[v] for v in order])),
            float(np.mean([clust[v] for v in order])),
        ]
    )


@dataclass
class _SeriesPrep:
    """Everything about a series that no (method, n_sub) choice affects."""

    dates: list
    baselines: np.ndarray
    raw_diagrams: list
    alpha: float
    beta: float


def _prepare_series(
    series: SnapshotSeries, dims, top_rank: int, grid: GridConfig
) -> _SeriesPrep:
    dims = tuple(sorted(set(int(k) for k in dims)))
    if not dims or dims[0] < 0:
        raise ValueError("dims must be non-negative homological dimensions")
    max_hom = dims[-1]
    graphs = _pmap(lambda day: build_day_graph(day[1], top_rank), series.days)
    weights = [w for g in graphs for w in g.node_weight.values()]
    alpha = grid.alpha if grid.alpha is not None else (min(weights) if weights else 0.0)
    beta = grid.beta if grid.beta is not None else (max(weights) if weights else 1.0)
    if beta <= alpha:
        beta = alpha + 1.0

    def day_job(graph):
        fc = lower_star_filtration(graph, max_hom + 1)
        return _baseline_row(graph), compute_diagrams(fc, max_hom)

    rows = _pmap(day_job, graphs)
    return _SeriesPrep(
        dates=series.dates,
        baselines=np.array([r[0] for r in rows]),
        raw_diagrams=[r[1] for r in rows],
        alpha=float(alpha),
        beta=float(beta),
    )


def summary_row(
    diagram_raw: PersistenceDiagram,
    method: str,
    alpha: float,
    beta: float,
    grid: GridConfig,
    n_sub: int,
) -> np.ndarray:
    """Feature block for one raw diagram: cap essentials at beta, then summarize."""
    D = finalize_diagram(diagram_raw, "cap", beta)
    a, b = alpha, beta
    if method in VELOCITY_METHODS:
        g = HierarchicalGrid(a, b, grid.m, n_sub)
        fn = {"hnav": hnav, "hwnav": hwnav, "owhnpv": ow_hnpv}[method]
        return fn(D, g).values
    if method == "vab":
        return vab(D, np.linspace(a, b, grid.m + 1), "one").values
    if method == "pl":
        levels = grid.landscape_levels
        samples = max(2, 30 // levels)
        return landscape(D, levels, np.linspace(a, b, samples)).values
    if method == "pi":
        return persistence_image(
            D,
            grid.image_shape,
            grid.sigma_frac * (b - a),
            birth_range=(a, b),
            pers_range=(0.0, b - a),
        ).values
    raise ValueError(f"unknown method {method!r}")


def _empty_diagram(dim: int) -> PersistenceDiagram:
    return PersistenceDiagram(np.empty(0), np.empty(0), dim)


def _assemble_features(
    prep: _SeriesPrep,
    method: str,
    grid: GridConfig,
    dims,
    baseline: bool,
    n_sub: int,
) -> FeatureMatrix:
    dims = tuple(sorted(set(int(k) for k in dims)))
    blocks = []
    columns: list = []
    if baseline:
        blocks.append(prep.baselines)
        columns.extend(BASELINE_COLUMNS)
    dim_columns: dict = {}
    for k in dims:
        rows = []
        for diags in prep.raw_diagrams:
            raw = diags[k] if k < len(diags) else _empty_diagram(k)
            rows.append(summary_row(raw, method, prep.alpha, prep.beta, grid, n_sub))
        block = np.array(rows) if rows else np.zeros((0, 0))
        names = [f"{method}_h{k}_{i:02d}" for i in range(block.shape[1])]
        dim_columns[k] = names
        columns.extend(names)
        blocks.append(block)
    X = np.hstack(blocks) if blocks else np.zeros((len(prep.dates), 0))
    tiers = {}
    if baseline:
        tiers["M1"] = list(BASELINE_COLUMNS)
        if 0 in dim_columns:
            tiers["M2"] = tiers["M1"] + dim_columns[0]
            if 1 in dim_columns:
                tiers["M3"] = tiers["M2"] + dim_columns[1]
    return FeatureMatrix(list(prep.dates), columns, X, tiers)


def featurize_series(
    series: SnapshotSeries,
    method: str = "owhnpv",
    grid: GridConfig = GridConfig(),
    dims=(0, 1),
    baseline: bool = True,
    top_rank: int = 250,
) -> FeatureMatrix:
    """Per-day feature rows for one summary method.

    Deterministic: same series and configuration always give the same
    matrix. Empty days produce all-zero rows.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    prep = _prepare_series(series, dims, top_rank, grid)
    return _assemble_features(prep, method, grid, dims, baseline, grid.n_sub)


def label_anomalies(
    prices: PriceSeries, dates, horizon: int, threshold: float = 0.05
) -> dict:
    """1 for days whose price jumps beyond the threshold h days later.

    The move is the one-day return on the predicted day: label(t) = 1
    iff |price(t+h) / price(t+h-1) - 1| > threshold, strict.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    missing = []
    labels = {}
    for t in dates:
        prev_day = date_add(t, horizon - 1)
        move_day = date_add(t, horizon)
        if prev_day not in prices or move_day not in prices:
            missing.append(t)
            continue
        ret = prices[move_day] / prices[prev_day] - 1.0
        labels[t] = 1 if abs(ret) > threshold else 0
    if missing:
        raise ValueError(
            f"prices missing for horizon {horizon} at dates: {', '.join(missing)}"
        )
    return labels


def _labels_vector(features: FeatureMatrix, labels) -> np.ndarray:
    if isinstance(labels, dict):
        missing = [d for d in features.dates if d not in labels]
        if missing:
            raise ValueError(f"labels missing for dates: {', '.join(missing)}")
        y = np.array([labels[d] for d in features.dates], dtype=np.int64)
    else:
        y = np.asarray(labels, dtype=np.int64)
        if y.shape != (len(features.dates),):
            raise ValueError("label vector length must match feature rows")
    return y


def train_eval(
    features: FeatureMatrix,
    labels,
    tier: str = "M3",
    forest=None,
    cv=None,
    baseline_result: EvalResult | None = None,
) -> EvalResult:
    """Repeated stratified cross-validation of one model tier.

    Folds depend only on the labels and the CV seed, so calling this
    with different tiers or feature sets on the same labels evaluates
    them on identical splits. Folds where a class is absent from either
    side are skipped and reported. When ``baseline_result`` is given,
    AUC gains are computed against it (relative percent and absolute
    percentage points).
    """
    from .forest import CvConfig, ForestConfig, RandomForest, auc_score, repeated_stratified_folds

    forest = forest or ForestConfig()
    cv = cv or CvConfig()
    y = _labels_vector(features, labels)
    if len(np.unique(y)) < 2:
        raise ValueError("labels must contain both classes")
    X = features.tier_matrix(tier)
    fold_aucs = []
    skipped = []
    for rep, fold, train_idx, test_idx in repeated_stratified_folds(y, cv):
        if len(np.unique(y[train_idx])) < 2 or len(np.unique(y[test_idx])) < 2:
            skipped.append((rep, fold, "single-class fold"))
            continue
        model = RandomForest(
            forest.n_trees, seed=forest.seed * 81173 + rep * 1009 + fold * 17 + 7
        )
        model.fit(X[train_idx], y[train_idx])
        fold_aucs.append(auc_score(y[test_idx], model.predict_proba(X[test_idx])))
    if not fold_aucs:
        raise ValueError("every fold was single-class; cannot evaluate")
    mean_auc = float(np.mean(fold_aucs))
    gain_pct = gain_abs = None
    if baseline_result is not None:
        gain_pct = (mean_auc - baseline_result.mean_auc) / baseline_result.mean_auc * 100.0
        gain_abs = (mean_auc - baseline_result.mean_auc) * 100.0
    return EvalResult(tier, mean_auc, fold_aucs, skipped, gain_pct, gain_abs)


def evaluate_sweep(
    series: SnapshotSeries,
    prices: PriceSeries,
    methods=METHODS,
    horizons=(1, 2, 3, 4, 5, 6, 7),
    n_subs=(1, 2, 3, 5, 10),
    grid: GridConfig = GridConfig(m=30),
    dims=(0, 1),
    top_rank: int = 250,
    forest=None,
    cv=None,
    threshold: float = 0.05,
) -> list:
    """Long-format results over methods x horizons x n_sub for M1/M2/M3.

    One row per configuration plus one baseline (M1) row per horizon.
    VAB, landscapes, and images do not depend on n_sub; their results
    are computed once and replicated across the swept n_sub values so
    the output stays rectangular for plotting. Deterministic for fixed
    inputs, seeds, and configuration.
    """
    from .forest import CvConfig, ForestConfig

    forest = forest or ForestConfig()
    cv = cv or CvConfig()
    methods = tuple(methods)
    if not methods:
        raise ValueError("need at least one method")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods: {unknown}")

    prep = _prepare_series(series, dims, top_rank, grid)
    matrices: dict = {}

    def matrix_for(method: str, n_sub: int) -> FeatureMatrix:
        key = (method, n_sub if method in VELOCITY_METHODS else 0)
        if key not in matrices:
            matrices[key] = _assemble_features(
                prep, method, grid, dims, True, key[1] or 1
            )
        return matrices[key]

    rows = []
    for h in horizons:
        labels = label_anomalies(prices, prep.dates, h, threshold)
        first = matrix_for(methods[0], n_subs[0] if n_subs else 1)
        m1 = train_eval(first, labels, "M1", forest, cv)
        rows.append(
            {
                "method": "baseline",
                "model": "M1",
                "horizon": h,
                "n_sub": 0,
                "mean_auc": m1.mean_auc,
                "auc_gain_pct": 0.0,
                "auc_gain_abs": 0.0,
            }
        )
        cache: dict = {}
        for method in methods:
            for n_sub in n_subs:
                key = (method, n_sub if method in VELOCITY_METHODS else 0)
                if key not in cache:
                    fm = matrix_for(method, n_sub)
                    cache[key] = {
                        tier: train_eval(fm, labels, tier, forest, cv, baseline_result=m1)
                        for tier in ("M2", "M3")
                        if tier in fm.tiers
                    }
                for tier, res in cache[key].items():
                    rows.append(
                        {
                            "method": method,
                            "model": tier,
                            "horizon": h,
                            "n_sub": n_sub,
                            "mean_auc": res.mean_auc,
                            "auc_gain_pct": res.auc_gain_pct,
                            "auc_gain_abs": res.auc_gain_abs,
                        }
                    )
    return rows


def save_features(features: FeatureMatrix, path) -> None:
    out = path if hasattr(path, "write") else open(path, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["date"] + list(features.columns))
        for i, d in enumerate(features.dates):
            w.writerow([d] + [repr(float(x)) for x in features.X[i]])
    finally:
        if out is not path:
            out.close()


def load_features(path) -> FeatureMatrix:
    """Read a features CSV back; model tiers are reconstructed from column names."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[0] != "date":
            raise ValueError(f"{path}: expected header starting with date")
        columns = header[1:]
        dates = []
        data = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}: row {lineno}: wrong field count")
            dates.append(row[0])
            data.append([float(x) for x in row[1:]])
    X = np.array(data) if data else np.zeros((0, len(columns)))
    tiers = {}
    base = [c for c in BASELINE_COLUMNS if c in columns]
    if len(base) == len(BASELINE_COLUMNS):
        tiers["M1"] = base
        d0 = [c for c in columns if "_h0_" in c]
        if d0:
            tiers["M2"] = tiers["M1"] + d0
            d1 = [c for c in columns if "_h1_" in c]
            if d1:
                tiers["M3"] = tiers["M2"] + d1
    return FeatureMatrix(dates, columns, X, tiers)


def save_results(rows, path) -> None:
    out = path if hasattr(path, "write") else open(path, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            w.writerow(
                [
                    r["method"],
                    r["model"],
                    r["horizon"],
                    r["n_sub"],
                    f"{r['mean_auc']:.6f}",
                    f"{r['auc_gain_pct']:.4f}",
                    f"{r['auc_gain_abs']:.4f}",
                ]
            )
    finally:
        if out is not path:
            out.close()
