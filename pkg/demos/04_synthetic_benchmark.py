"""
Synthetic benchmark, end to end
===============================

Simulate a transaction network whose anomalous days hide a structural
signature (a closed transaction ring), locate those days purely from
the topology, then featurize the series and compare nested models:
price history alone, topology alone, and both together.
"""

import numpy as np

from topovelocity.complex import lower_star_filtration
from topovelocity.forest import CvConfig, ForestConfig
from topovelocity.persistence import compute_diagrams
from topovelocity.pipeline import (
    GridConfig,
    build_day_graph,
    evaluate_sweep,
    featurize_series,
    label_anomalies,
    train_eval,
)
from topovelocity.synth import SynthConfig, synth_dynamic_graphs

# Thirty days of hub-and-spoke transactions. On three randomly placed
# days a defector group closes its transaction chain into a ring; every
# other day the chain stays open. Prices jump `horizon` days after each
# shock, with enough extra price days to label every snapshot.
cfg = SynthConfig(days=30, n_nodes=40, n_anomalies=3, group_max=12)
series, prices = synth_dynamic_graphs(cfg, seed=6)
print(f"simulated {len(series.days)} days")


def persistent_loops(txs):
    g = build_day_graph(txs, top_rank=250)
    D = compute_diagrams(lower_star_filtration(g, max_dim=2), 1)[1]
    return int(np.sum(D.deaths > D.births))


# The ring is a chordless cycle, so it contributes exactly one loop
# that no triangle fills; background days have none. Counting loops
# recovers the shock days without looking at prices at all.
counts = [persistent_loops(txs) for _, txs in series.days]
loop_days = [day for day, c in enumerate(counts, start=1) if c > 0]
print("persistent loops per day:", counts)
print("days with a loop:", loop_days)
assert all(c in (0, 1) for c in counts)

# Labels look `horizon` days ahead for a one-day price move beyond the
# threshold. The labeled days are exactly the days the topology found.
labels = label_anomalies(prices, series.dates, horizon=cfg.horizon)
positives = [d for d in series.dates if labels[d]]
print("labeled anomalous dates:", positives)
assert positives == [series.dates[day - 1] for day in loop_days]

# Feature rows per day: classical graph statistics (tier M1), then one
# velocity block per homology dimension. M2 adds the component block
# (dimension 0); M3 adds the loop block (dimension 1), where the ring
# signature lives. Prices never enter the features, only the labels.
fm = featurize_series(series, method="owhnpv", grid=GridConfig(m=6))
print(f"\nfeature matrix: {fm.X.shape[0]} days x {fm.X.shape[1]} columns")
for tier in sorted(fm.tiers):
    print(f"  {tier}: {len(fm.tiers[tier])} columns")

# Three positives and k=3 stratified folds put one positive in each
# test fold. Same labels and seed mean every tier sees identical splits.
forest = ForestConfig(n_trees=20, seed=0)
cv = CvConfig(k=3, repeats=2, seed=0)
m1 = train_eval(fm, labels, "M1", forest, cv)
m2 = train_eval(fm, labels, "M2", forest, cv, baseline_result=m1)
m3 = train_eval(fm, labels, "M3", forest, cv, baseline_result=m1)
print(f"\nM1 graph statistics:     AUC {m1.mean_auc:.3f}")
print(
    f"M2 adds component block: AUC {m2.mean_auc:.3f}"
    f" ({m2.auc_gain_abs:+.1f} points vs M1)"
)
print(
    f"M3 adds loop block:      AUC {m3.mean_auc:.3f}"
    f" ({m3.auc_gain_abs:+.1f} points vs M1)"
)

# The sweep grid runs every (method, horizon, n_sub) cell; here a small
# corner of it. Full-scale runs use the defaults (six methods, horizons
# 1..7, five grid refinements, 10x10-fold CV) on 120-day series.
rows = evaluate_sweep(
    series,
    prices,
    methods=("owhnpv", "vab"),
    horizons=(cfg.horizon,),
    n_subs=(1,),
    grid=GridConfig(m=6),
    forest=forest,
    cv=cv,
)
print("\nmethod    model  horizon  mean AUC  gain (points)")
for r in rows:
    print(
        f"{r['method']:<9} {r['model']:<6} {r['horizon']:^7}"
        f"  {r['mean_auc']:.3f}     {r['auc_gain_abs']:+.1f}"
    )
