"""Numerical validation of the velocity-summary stability results.

OW-HNPV is Lipschitz with respect to the 1-Wasserstein distance between
diagrams: ||H1 - H2||_inf <= 3 * n_sub * m / ((beta - alpha) *
min{P(D1), P(D2)}) * d11(D1, D2). This module provides seeded diagram
generators, perturbation machinery, the bound itself, and randomized
sweeps for the bound and the four supporting inequalities:

  1. a feature's overlaps summed over the whole grid never exceed its
     persistence (equality when the lifespan lies inside the range);
  2. moving a feature by delta in L1 changes any single overlap by at
     most 2*delta;
  3. unnormalized interval velocities of two diagrams differ by at most
     2 * d11 / delta_t;
  4. total persistences differ by at most d11.

All checks use an absolute tolerance of 1e-9, which comfortably covers
double-precision accumulation at these sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .persistence import PersistenceDiagram
from .distances import total_persistence, wasserstein
from .summaries import HierarchicalGrid, _cell_overlap_sums, overlap_weight, ow_hnpv

__all__ = [
    "TOLERANCE",
    "StabilityReport",
    "LemmaSuiteReport",
    "TheoremSuiteReport",
    "stability_bound",
    "random_diagram",
    "perturb_diagram",
    "lemma_suite",
    "theorem_suite",
]

TOLERANCE = 1e-9


@dataclass
class StabilityReport:
    """Both sides of the stability bound for one diagram pair."""

    lhs: float
    rhs: float
    d11: float
    p1: float
    p2: float
    violated: bool
    slack_ratio: float


@dataclass
class LemmaSuiteReport:
    """Violation counts per inequality over a randomized sweep."""

    trials: int
    violations: dict = field(default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())


@dataclass
class TheoremSuiteReport:
    """Bound-violation count and observed tightness over a randomized sweep."""

    trials: int
    violations: int
    max_slack_ratio: float
    aug_max_summary_delta: float
    aug_max_distance_delta: float


def stability_bound(
    D1: PersistenceDiagram, D2: PersistenceDiagram, grid: HierarchicalGrid
) -> StabilityReport:
    """Evaluate both sides of the OW-HNPV stability bound exactly."""
    p1 = total_persistence(D1)
    p2 = total_persistence(D2)
    if p1 <= 0.0 or p2 <= 0.0:
        raise ValueError("stability bound requires positive total persistence")
    d11 = wasserstein(D1, D2, p=1.0, q=1.0).cost
    h1 = ow_hnpv(D1, grid).values
    h2 = ow_hnpv(D2, grid).values
    lhs = float(np.max(np.abs(h1 - h2))) if grid.m else 0.0
    rhs = 3.0 * grid.n_sub * grid.m / ((grid.beta - grid.alpha) * min(p1, p2)) * d11
    violated = lhs > rhs + TOLERANCE
    if rhs > 0.0:
        slack = lhs / rhs
    else:
        slack = 0.0 if lhs == 0.0 else np.inf
    return StabilityReport(lhs, rhs, d11, p1, p2, violated, slack)


def random_diagram(seed: int, n: int, bounds=(0.0, 1.0)) -> PersistenceDiagram:
    """n random finite features with alpha <= b < d <= beta, deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = float(bounds[0]), float(bounds[1])
    if lo >= hi:
        raise ValueError("bounds must be increasing")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo, hi, size=(n, 2))
    b = pts.min(axis=1)
    d = pts.max(axis=1)
    # equal draws have measure zero but seeds must never produce b == d
    for i in np.nonzero(b == d)[0]:
        while b[i] >= d[i]:
            b[i], d[i] = np.sort(rng.uniform(lo, hi, size=2))
    order = np.lexsort((d, b))
    return PersistenceDiagram(b[order], d[order], 0)


def perturb_diagram(
    D: PersistenceDiagram, eps: float, seed: int
) -> PersistenceDiagram:
    """Move each point by offsets bounded by eps in L1, keeping b < d.

    Offsets are resampled when they would flip a point past the diagonal
    (falling back to no movement after many rejections), so cardinality
    is preserved and the identity matching certifies d11 <= n * eps.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    rng = np.random.default_rng(seed)
    b = D.births.copy()
    d = D.deaths.copy()
    for i in range(b.size):
        for _ in range(1000):
            off = rng.uniform(-eps / 2.0, eps / 2.0, size=2)
            if b[i] + off[0] < d[i] + off[1]:
                b[i] += off[0]
                d[i] += off[1]
                break
    return PersistenceDiagram(b, d, D.dimension)


def _random_grid(rng: np.random.Generator) -> HierarchicalGrid:
    alpha = rng.uniform(-1.0, 1.0)
    width = rng.uniform(0.5, 2.0)
    return HierarchicalGrid(
        alpha, alpha + width, int(rng.integers(1, 7)), int(rng.integers(1, 5))
    )


def _interval_velocities(D: PersistenceDiagram, grid: HierarchicalGrid) -> np.ndarray:
    # unnormalized per-subinterval velocity (1/delta_t) * sum of overlaps
    return _cell_overlap_sums(D.births, D.deaths, grid.sub_edges()) / grid.delta_t


def lemma_suite(trials: int, seed: int) -> LemmaSuiteReport:
    """Randomized sweep of the four supporting inequalities.

    Each trial draws fresh diagrams, grids, features, and intervals from
    a counter-derived seed. The velocity inequality is exercised on
    equal-cardinality pairs (both perturbed copies and independent
    draws), matching its hypothesis; the total-persistence inequality is
    additionally exercised on unequal-cardinality pairs. Adversarial
    overlap cases place interval endpoints inside the feature's lifespan,
    the regime where the difference bound is tightest.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    violations = {
        "total_overlap": 0,
        "overlap_difference": 0,
        "velocity_difference": 0,
        "total_persistence": 0,
    }
    root = np.random.SeedSequence(seed)
    for trial, child in enumerate(root.spawn(trials)):
        rng = np.random.default_rng(child)
        grid = _random_grid(rng)
        edges = grid.sub_edges()

        # 1: per-feature total overlap vs persistence
        D = random_diagram(int(rng.integers(0, 2**31)), int(rng.integers(1, 9)),
                           (grid.alpha - 0.3, grid.beta + 0.3))
        for b, d in zip(D.births, D.deaths):
            total = sum(
                overlap_weight((b, d), (edges[c], edges[c + 1]))
                for c in range(grid.n_cells)
            )
            if total > d - b + TOLERANCE:
                violations["total_overlap"] += 1
            if b >= grid.alpha and d <= grid.beta and abs(total - (d - b)) > TOLERANCE:
                violations["total_overlap"] += 1

        # 2: overlap difference vs 2 * L1 feature distance
        b1, d1 = np.sort(rng.uniform(-1.0, 2.0, size=2))
        while b1 == d1:
            b1, d1 = np.sort(rng.uniform(-1.0, 2.0, size=2))
        shift = rng.uniform(-0.5, 0.5, size=2)
        b2, d2 = b1 + shift[0], d1 + shift[1]
        if b2 < d2:
            delta = abs(b1 - b2) + abs(d1 - d2)
            lo = rng.uniform(-1.0, 2.0)
            intervals = [(lo, lo + rng.uniform(0.1, 1.0))]
            if d1 - b1 > 0.2:
                # straddling cases: one endpoint strictly inside the lifespan
                inner = rng.uniform(b1 + 0.05, d1 - 0.05)
                intervals.append((inner, d1 + rng.uniform(0.05, 0.5)))
                intervals.append((b1 - rng.uniform(0.05, 0.5), inner))
            for interval in intervals:
                w1 = overlap_weight((b1, d1), interval)
                w2 = overlap_weight((b2, d2), interval)
                if abs(w1 - w2) > 2.0 * delta + TOLERANCE:
                    violations["overlap_difference"] += 1

        # 3: interval velocities vs 2 * d11 / delta_t on equal-cardinality pairs
        n = int(rng.integers(1, 7))
        A = random_diagram(int(rng.integers(0, 2**31)), n, (grid.alpha, grid.beta))
        if trial % 2 == 0:
            B = perturb_diagram(A, float(rng.uniform(0.01, 0.3)), int(rng.integers(0, 2**31)))
        else:
            B = random_diagram(int(rng.integers(0, 2**31)), n, (grid.alpha, grid.beta))
        d11 = wasserstein(A, B, 1.0, 1.0).cost
        gap = np.abs(_interval_velocities(A, grid) - _interval_velocities(B, grid))
        if np.any(gap > 2.0 * d11 / grid.delta_t + TOLERANCE):
            violations["velocity_difference"] += 1

        # 4: total persistences vs d11, unequal cardinality included
        C = random_diagram(int(rng.integers(0, 2**31)), int(rng.integers(1, 9)),
                           (grid.alpha, grid.beta))
        for other in (B, C):
            d11 = wasserstein(A, other, 1.0, 1.0).cost
            if abs(total_persistence(A) - total_persistence(other)) > d11 + TOLERANCE:
                violations["total_persistence"] += 1

    return LemmaSuiteReport(trials, violations)


def _append_diagonal_points(
    D: PersistenceDiagram, rng: np.random.Generator, k: int, bounds
) -> PersistenceDiagram:
    t = rng.uniform(bounds[0], bounds[1], size=k)
    return PersistenceDiagram(
        np.concatenate([D.births, t]),
        np.concatenate([D.deaths, t]),
        D.dimension,
    )


def theorem_suite(
    trials: int, seed: int, m: int | None = None, n_sub: int | None = None
) -> TheoremSuiteReport:
    """Randomized sweep of the stability bound itself.

    Pairs deliberately mix unequal cardinalities and total-persistence
    ratios up to two orders of magnitude (one diagram's lifespans are
    shrunk toward their births by a log-uniform factor). Every tenth
    trial also appends zero-persistence diagonal points to one diagram
    and records how much the summary vector and the distance move; both
    must stay at numerical zero.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    violations = 0
    max_slack = 0.0
    aug_h = 0.0
    aug_d = 0.0
    root = np.random.SeedSequence(seed ^ 0x5D0F)
    for trial, child in enumerate(root.spawn(trials)):
        rng = np.random.default_rng(child)
        grid = _random_grid(rng)
        if m is not None or n_sub is not None:
            grid = HierarchicalGrid(
                grid.alpha, grid.beta, m or grid.m, n_sub or grid.n_sub
            )
        bounds = (grid.alpha, grid.beta)
        n1 = int(rng.integers(1, 9))
        n2 = int(rng.integers(1, 9))
        D1 = random_diagram(int(rng.integers(0, 2**31)), n1, bounds)
        D2 = random_diagram(int(rng.integers(0, 2**31)), n2, bounds)
        # shrink lifespans to push the total-persistence ratio up to ~100x
        scale = float(10.0 ** rng.uniform(-2.0, 0.0))
        D2 = PersistenceDiagram(
            D2.births, D2.births + (D2.deaths - D2.births) * scale, D2.dimension
        )
        if trial % 3 == 2:
            D2 = perturb_diagram(D2, float(rng.uniform(0.01, 0.2)), int(rng.integers(0, 2**31)))
        report = stability_bound(D1, D2, grid)
        if report.violated:
            violations += 1
        if np.isfinite(report.slack_ratio):
            max_slack = max(max_slack, report.slack_ratio)

        if trial % 10 == 0:
            aug = _append_diagonal_points(D1, rng, int(rng.integers(1, 4)), bounds)
            h_delta = float(
                np.max(np.abs(ow_hnpv(D1, grid).values - ow_hnpv(aug, grid).values))
            )
            d_delta = abs(
                wasserstein(D1, D2, 1.0, 1.0).cost - wasserstein(aug, D2, 1.0, 1.0).cost
            )
            aug_h = max(aug_h, h_delta)
            aug_d = max(aug_d, d_delta)

    return TheoremSuiteReport(trials, violations, max_slack, aug_h, aug_d)
