"""Vector summaries of persistence diagrams.

The three velocity summaries (HNAV, HWNAV, OW-HNPV) measure how fast
topological activity happens across the filtration range: a hierarchical
grid splits [alpha, beta] into m main intervals of n_sub subintervals
each, events or overlap mass are rated per unit filtration scale inside
each subinterval, averaged per main interval, and normalized (by feature
count for HNAV, by total persistence for HWNAV and OW-HNPV).

Baselines for comparison: Vector of Averaged Bettis (exact cell averages
of the weighted Betti function), persistence landscapes, and persistence
images.

Conventions shared by everything here: lifespans are half-open [b, d),
cells are half-open [lo, hi) with the rightmost cell closed at beta, and
features partially or fully outside [alpha, beta] simply contribute
nothing for the out-of-range part.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .persistence import PersistenceDiagram
from .distances import total_persistence

__all__ = [
    "HierarchicalGrid",
    "SummaryVector",
    "overlap_weight",
    "hnav",
    "hwnav",
    "ow_hnpv",
    "vab",
    "landscape",
    "persistence_image",
]

# features per chunk when broadcasting against grid cells, to bound memory
_CHUNK = 8192


@dataclass(frozen=True)
class HierarchicalGrid:
    """Partition of [alpha, beta] into m main intervals times n_sub subintervals."""

    alpha: float
    beta: float
    m: int
    n_sub: int = 1

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        if self.alpha >= self.beta:
            raise ValueError("alpha must be < beta")
        if self.m < 1 or self.n_sub < 1:
            raise ValueError("m and n_sub must be >= 1")

    @property
    def n_cells(self) -> int:
        return self.m * self.n_sub

    @property
    def delta_t(self) -> float:
        return (self.beta - self.alpha) / self.n_cells

    def sub_edges(self) -> np.ndarray:
        """Edges of the m*n_sub subintervals, endpoints exact."""
        return np.linspace(self.alpha, self.beta, self.n_cells + 1)

    def main_edges(self) -> np.ndarray:
        return np.linspace(self.alpha, self.beta, self.m + 1)


@dataclass
class SummaryVector:
    """Feature vector produced by one summary method on one diagram."""

    values: np.ndarray
    method: str
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size and (np.any(~np.isfinite(v)) or np.any(v < 0)):
            raise ValueError("summary values must be finite and >= 0")
        self.values = v

    def __len__(self) -> int:
        return self.values.size


def overlap_weight(feature, interval) -> float:
    """Length of [birth, death) intersected with [t_lo, t_hi)."""
    b, d = feature
    lo, hi = interval
    return max(0.0, min(d, hi) - max(b, lo))


def _cell_overlap_sums(
    births: np.ndarray, deaths: np.ndarray, edges: np.ndarray, weights=None
) -> np.ndarray:
    """Total (optionally weighted) overlap mass per cell defined by edges."""
    lo = edges[:-1]
    hi = edges[1:]
    out = np.zeros(lo.size)
    for s in range(0, births.size, _CHUNK):
        b = births[s : s + _CHUNK, None]
        d = deaths[s : s + _CHUNK, None]
        ov = np.minimum(d, hi[None, :]) - np.maximum(b, lo[None, :])
        np.clip(ov, 0.0, None, out=ov)
        if weights is not None:
            ov *= weights[s : s + _CHUNK, None]
        out += ov.sum(axis=0)
    return out


def _event_cell_index(events: np.ndarray, grid: HierarchicalGrid) -> np.ndarray:
    """Subinterval index per event; -1 for events outside [alpha, beta].

    Events on a cell's left edge belong to that cell; an event exactly at
    beta goes to the last cell so it is counted once.
    """
    edges = grid.sub_edges()
    idx = np.searchsorted(edges, events, side="right") - 1
    idx[events == grid.beta] = grid.n_cells - 1
    idx[(events < grid.alpha) | (events > grid.beta)] = -1
    return idx


def _event_velocity(
    grid: HierarchicalGrid, events: np.ndarray, weights=None
) -> np.ndarray:
    """Per-main-interval event velocity: rate per subinterval, averaged."""
    idx = _event_cell_index(events, grid)
    keep = idx >= 0
    counts = np.bincount(
        idx[keep], weights=None if weights is None else weights[keep],
        minlength=grid.n_cells,
    )
    v_sub = counts / (2.0 * grid.delta_t)
    return v_sub.reshape(grid.m, grid.n_sub).mean(axis=1)


def hnav(D: PersistenceDiagram, grid: HierarchicalGrid) -> SummaryVector:
    """Count-based velocity: births plus deaths per unit scale, per main interval.

    Each subinterval's (births + deaths) / (2 * delta_t) is averaged over
    the main interval's subintervals, then divided by the number of
    diagram points. Empty diagram gives the zero vector.
    """
    cfg = {"grid": grid}
    n = len(D)
    if n == 0:
        return SummaryVector(np.zeros(grid.m), "HNAV", cfg)
    events = np.concatenate([D.births, D.deaths])
    return SummaryVector(_event_velocity(grid, events) / n, "HNAV", cfg)


def hwnav(D: PersistenceDiagram, grid: HierarchicalGrid) -> SummaryVector:
    """Persistence-weighted event velocity, normalized by total persistence.

    Each birth and death event carries its feature's lifespan as mass;
    zero total persistence gives the zero vector.
    """
    cfg = {"grid": grid}
    if len(D) == 0:
        return SummaryVector(np.zeros(grid.m), "HWNAV", cfg)
    P = total_persistence(D)
    if P == 0.0:
        return SummaryVector(np.zeros(grid.m), "HWNAV", cfg)
    pers = D.deaths - D.births
    events = np.concatenate([D.births, D.deaths])
    weights = np.concatenate([pers, pers])
    return SummaryVector(_event_velocity(grid, events, weights) / P, "HWNAV", cfg)


def ow_hnpv(D: PersistenceDiagram, grid: HierarchicalGrid) -> SummaryVector:
    """Overlap-weighted persistence velocity.

    Main interval j gets (1/P) * (1/n_sub) * sum over its subintervals of
    (1/delta_t) * total overlap of all lifespans with that subinterval.
    Empty diagrams and zero total persistence give the zero vector.
    """
    cfg = {"grid": grid}
    if len(D) == 0:
        return SummaryVector(np.zeros(grid.m), "OW-HNPV", cfg)
    P = total_persistence(D)
    if P == 0.0:
        return SummaryVector(np.zeros(grid.m), "OW-HNPV", cfg)
    sums = _cell_overlap_sums(D.births, D.deaths, grid.sub_edges())
    per_main = sums.reshape(grid.m, grid.n_sub).sum(axis=1)
    return SummaryVector(
        per_main / (P * grid.n_sub * grid.delta_t), "OW-HNPV", cfg
    )


def vab(
    D: PersistenceDiagram, breakpoints, weight_fn: str = "one"
) -> SummaryVector:
    """Vector of Averaged Bettis: exact cell averages of the weighted Betti function.

    The weighted Betti function at scale t sums each alive feature's
    weight (1, or its persistence); its integral over a cell is the
    weighted overlap mass, so each entry is that mass divided by the cell
    width, with no quadrature error.
    """
    edges = np.asarray(breakpoints, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("breakpoints must be strictly increasing, length >= 2")
    cfg = {"breakpoints": edges, "weight_fn": weight_fn}
    if weight_fn == "one":
        weights = None
    elif weight_fn == "persistence":
        weights = D.deaths - D.births
    else:
        raise ValueError(f"unknown weight_fn {weight_fn!r}")
    if len(D) == 0:
        return SummaryVector(np.zeros(edges.size - 1), "VAB", cfg)
    sums = _cell_overlap_sums(D.births, D.deaths, edges, weights)
    return SummaryVector(sums / np.diff(edges), "VAB", cfg)


def landscape(D: PersistenceDiagram, K: int, sample_grid) -> SummaryVector:
    """Persistence landscapes sampled on a grid, flattened level-major.

    Level k at scale t is the k-th largest of the triangle functions
    min(t - b, d - t) clipped at zero; levels beyond the diagram size are
    zero. Output length is K * len(sample_grid).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    t = np.asarray(sample_grid, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("sample_grid must be 1-d with at least 2 points")
    cfg = {"K": K, "sample_grid": t}
    out = np.zeros((K, t.size))
    if len(D) > 0:
        tri = np.minimum(t[None, :] - D.births[:, None], D.deaths[:, None] - t[None, :])
        np.clip(tri, 0.0, None, out=tri)
        tri = -np.sort(-tri, axis=0)
        k = min(K, tri.shape[0])
        out[:k] = tri[:k]
    return SummaryVector(out.reshape(-1), "PL", cfg)


def persistence_image(
    D: PersistenceDiagram,
    resolution=(6, 5),
    sigma: float = 0.1,
    birth_range=None,
    pers_range=None,
) -> SummaryVector:
    """Persistence image in birth-persistence coordinates, flattened birth-major.

    Each feature contributes a Gaussian at (b, d - b) weighted linearly
    by its persistence; pixel values are the exact Gaussian integral over
    the pixel (normal CDF differences), so the image sums to roughly the
    total weight when the window covers the features.
    """
    rb, rp = int(resolution[0]), int(resolution[1])
    if rb < 1 or rp < 1:
        raise ValueError("resolution entries must be >= 1")
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    if birth_range is None or pers_range is None:
        raise ValueError("birth_range and pers_range are required")
    b0, b1 = float(birth_range[0]), float(birth_range[1])
    p0, p1 = float(pers_range[0]), float(pers_range[1])
    if b0 >= b1 or p0 >= p1:
        raise ValueError("ranges must be increasing")
    cfg = {
        "resolution": (rb, rp),
        "sigma": sigma,
        "birth_range": (b0, b1),
        "pers_range": (p0, p1),
    }
    img = np.zeros((rb, rp))
    if len(D) > 0:
        bx = np.linspace(b0, b1, rb + 1)
        py = np.linspace(p0, p1, rp + 1)
        pers = D.deaths - D.births
        for b, p, w in zip(D.births, pers, pers):
            cb = np.diff(ndtr((bx - b) / sigma))
            cp = np.diff(ndtr((py - p) / sigma))
            img += w * np.outer(cb, cp)
    return SummaryVector(img.reshape(-1), "PI", cfg)
