"""Velocity-based persistence summaries for time-varying weighted graphs.

Build filtered clique complexes from node-weighted graphs, compute
persistence diagrams, summarize them with hierarchical velocity vectors
(HNAV, HWNAV, OW-HNPV) alongside classic baselines (averaged Bettis,
landscapes, images), measure Wasserstein distances, validate the
stability bounds numerically, and run an end-to-end anomaly-prediction
pipeline on daily transaction snapshots.

Heavier submodules (the pipeline, the compiled random forest, the
synthetic generator) load lazily on first attribute access.
"""

from importlib import import_module

from .complex import (
    FilteredComplex,
    WeightedGraph,
    clique_expand,
    lower_star_filtration,
    sublevel_complex,
)
from .persistence import (
    PersistenceDiagram,
    betti_at,
    compute_diagrams,
    finalize_diagram,
    load_diagrams,
    save_diagrams,
)
from .distances import MatchingResult, total_persistence, wasserstein
from .summaries import (
    HierarchicalGrid,
    SummaryVector,
    hnav,
    hwnav,
    landscape,
    overlap_weight,
    ow_hnpv,
    persistence_image,
    vab,
)
from .stability import (
    LemmaSuiteReport,
    StabilityReport,
    TheoremSuiteReport,
    lemma_suite,
    perturb_diagram,
    random_diagram,
    stability_bound,
    theorem_suite,
)

_LAZY = {
    "Transaction": "data",
    "SnapshotSeries": "data",
    "PriceSeries": "data",
    "ingest_snapshots": "data",
    "save_transactions": "data",
    "load_prices": "data",
    "save_prices": "data",
    "SynthConfig": "synth",
    "synth_dynamic_graphs": "synth",
    "ForestConfig": "forest",
    "CvConfig": "forest",
    "RandomForest": "forest",
    "auc_score": "forest",
    "stratified_folds": "forest",
    "repeated_stratified_folds": "forest",
    "METHODS": "pipeline",
    "VELOCITY_METHODS": "pipeline",
    "GridConfig": "pipeline",
    "FeatureMatrix": "pipeline",
    "EvalResult": "pipeline",
    "build_day_graph": "pipeline",
    "summary_row": "pipeline",
    "featurize_series": "pipeline",
    "label_anomalies": "pipeline",
    "train_eval": "pipeline",
    "evaluate_sweep": "pipeline",
    "save_features": "pipeline",
    "load_features": "pipeline",
    "save_results": "pipeline",
}

__all__ = [
    "FilteredComplex",
    "WeightedGraph",
    "clique_expand",
    "lower_star_filtration",
    "sublevel_complex",
    "PersistenceDiagram",
    "betti_at",
    "compute_diagrams",
    "finalize_diagram",
    "load_diagrams",
    "save_diagrams",
    "MatchingResult",
    "total_persistence",
    "wasserstein",
    "HierarchicalGrid",
    "SummaryVector",
    "hnav",
    "hwnav",
    "landscape",
    "overlap_weight",
    "ow_hnpv",
    "persistence_image",
    "vab",
    "LemmaSuiteReport",
    "StabilityReport",
    "TheoremSuiteReport",
    "lemma_suite",
    "perturb_diagram",
    "random_diagram",
    "stability_bound",
    "theorem_suite",
    *sorted(_LAZY),
]

__version__ = "0.1.0"


def __getattr__(name: str):
    module = _LAZY.get(name)
    if module is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    return getattr(import_module(f".{module}", __name__), name)
