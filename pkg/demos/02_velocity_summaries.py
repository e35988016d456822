"""
Velocity summaries of a persistence diagram
===========================================

One small diagram, three velocity-style summaries (event velocity,
weighted event velocity, overlap-weighted velocity), and the two
baseline vectorizations (landscapes and persistence images). All the
arithmetic is small enough to follow by hand.
"""

import numpy as np

from topovelocity.distances import total_persistence
from topovelocity.persistence import PersistenceDiagram
from topovelocity.summaries import (
    HierarchicalGrid,
    hnav,
    hwnav,
    landscape,
    ow_hnpv,
    persistence_image,
    vab,
)

np.set_printoptions(precision=4, suppress=True)

# Three features: persistences 0.3, 0.6, 0.1, so total persistence 1.
D = PersistenceDiagram(births=[0.1, 0.2, 0.65], deaths=[0.4, 0.8, 0.75], dimension=0)
P = total_persistence(D)
print("diagram:", [(float(b), float(d)) for b, d in D.points()])
print(f"total persistence: {P:g}")

# Two main cells on [0, 1], each of width 0.5.
grid = HierarchicalGrid(alpha=0.0, beta=1.0, m=2)
print(f"\ngrid: edges {grid.main_edges()}, cell width {grid.delta_t:g}")

# Event velocity: births and deaths are events; each cell counts its
# events, divides by twice the cell width, and averages per feature.
# Cell 1 holds events 0.1, 0.2, 0.4 -> 3 / (2 * 0.5) / 3 = 1.
print("hnav: ", hnav(D, grid).values)

# Weighted event velocity: each event carries its feature's persistence
# and the average is over total persistence instead of the count.
# Cell 1: (0.3 + 0.6 + 0.3) / (2 * 0.5) / 1 = 1.2.
print("hwnav:", hwnav(D, grid).values)

# Overlap-weighted velocity: each feature contributes the length of its
# lifespan inside the cell. Cell 1 overlaps are 0.3, 0.3, 0 -> 0.6,
# normalized by total persistence times cell width: 0.6 / 0.5 = 1.2.
print("owhnpv:", ow_hnpv(D, grid).values)

# The summaries are defined per subinterval, but averaging subinterval
# rates over each main cell collapses the refinement: the per-main
# vector is the same for every n_sub.
fine = HierarchicalGrid(alpha=0.0, beta=1.0, m=2, n_sub=5)
print("owhnpv, 5 subcells per main:", ow_hnpv(D, fine).values)
assert np.allclose(ow_hnpv(D, fine).values, ow_hnpv(D, grid).values, atol=1e-12)

# The overlap-weighted velocity times total persistence equals the
# averaged Betti curve over the same main cells.
va = vab(D, grid.main_edges())
print("\nvab (unit weight):        ", va.values)
print("owhnpv * total persistence:", ow_hnpv(D, fine).values * P)
assert np.allclose(ow_hnpv(D, fine).values * P, va.values, atol=1e-12)

# Weighting the Betti curve by persistence emphasizes long-lived
# features: the short (0.65, 0.75) bar barely registers.
print("vab (persistence weight): ", vab(D, grid.main_edges(), "persistence").values)

# Landscape levels are the k-th largest tent functions at each sample;
# level 2 is nonzero only where two lifespans overlap.
samples = np.linspace(0.0, 1.0, 5)
L = landscape(D, K=2, sample_grid=samples).values.reshape(2, -1)
print("\nlandscape samples at", samples)
for k, row in enumerate(L, start=1):
    print(f"  level {k}: {row}")

# Persistence images place a persistence-weighted Gaussian at each
# (birth, persistence) point; pixel values are exact Gaussian integrals,
# so the image mass is close to the total persistence.
img = persistence_image(
    D, resolution=(4, 3), sigma=0.05, birth_range=(0.0, 1.0), pers_range=(0.0, 0.75)
).values.reshape(4, 3)
print("\npersistence image (4 birth bins x 3 persistence bins):")
print(img)
print(f"image mass {img.sum():.4f} vs total persistence {P:g}")
