"""
Stability of the overlap-weighted velocity
==========================================

Moving a diagram a little moves its velocity summary a little: the sup
difference of the summaries is bounded by a constant times the 1-1
matching distance. This script evaluates the bound on a pair worked by
hand, certifies a perturbation with the identity matching, and runs the
randomized suites that sweep the bound and its supporting inequalities.
"""

import numpy as np

from topovelocity.distances import wasserstein
from topovelocity.persistence import PersistenceDiagram
from topovelocity.stability import (
    lemma_suite,
    perturb_diagram,
    random_diagram,
    stability_bound,
    theorem_suite,
)
from topovelocity.summaries import HierarchicalGrid

# One feature each, deaths 0.01 apart, so the matching distance is 0.01
# and the total persistences are 0.6 and 0.61.
D1 = PersistenceDiagram([0.2], [0.8], 0)
D2 = PersistenceDiagram([0.2], [0.81], 0)
grid = HierarchicalGrid(0.0, 1.0, m=2)

r = stability_bound(D1, D2, grid)
print(f"matching distance d11: {r.d11:g}")
print(f"total persistences:    {r.p1:g}, {r.p2:g}")
print(f"summary gap (lhs):     {r.lhs:.6f}")
print(f"bound (rhs):           {r.rhs:g}")
print(f"slack ratio lhs/rhs:   {r.slack_ratio:.4f}")
assert not r.violated

# The constant is 3 * m * n_sub / ((beta - alpha) * min(P1, P2)):
# here 3 * 2 / (1 * 0.6) = 10, times d11 = 0.01 gives 0.1.
assert np.isclose(r.rhs, 0.1, atol=1e-12)

# Nudging each of n points by at most eps in L1 moves the diagram by at
# most n * eps under the identity matching, so the bound scales the
# same way: small perturbation, small summary change.
D = random_diagram(seed=7, n=5)
for eps in (0.01, 0.05, 0.2):
    Dp = perturb_diagram(D, eps=eps, seed=3)
    d11 = wasserstein(D, Dp, 1.0, 1.0).cost
    rp = stability_bound(D, Dp, HierarchicalGrid(0.0, 1.0, m=4))
    print(
        f"eps={eps:4g}: d11={d11:.5f} <= n*eps={5 * eps:.2f},"
        f" lhs={rp.lhs:.5f} <= rhs={rp.rhs:.5f}"
    )
    assert d11 <= 5 * eps + 1e-9 and not rp.violated

# The lemma suite sweeps the four supporting inequalities on fresh
# random diagrams, grids, and intervals each trial.
lem = lemma_suite(trials=200, seed=0)
print(f"\nlemma suite, {lem.trials} trials:")
for name, count in lem.violations.items():
    print(f"  {name}: {count} violations")
assert lem.total_violations == 0

# The theorem suite sweeps the bound itself on pairs with unequal
# cardinalities and total-persistence ratios up to two orders of
# magnitude, and checks that appending zero-persistence diagonal points
# changes neither the summary nor the distance.
thm = theorem_suite(trials=200, seed=0)
print(f"\ntheorem suite, {thm.trials} trials:")
print(f"  violations:        {thm.violations}")
print(f"  max slack ratio:   {thm.max_slack_ratio:.4f}")
print(f"  diagonal-point effect on summary:  {thm.aug_max_summary_delta:.2e}")
print(f"  diagonal-point effect on distance: {thm.aug_max_distance_delta:.2e}")
assert thm.violations == 0 and thm.max_slack_ratio <= 1.0 + 1e-9
