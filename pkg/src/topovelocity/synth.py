"""Seeded synthetic benchmark: dynamic transaction graphs with injected shocks.

Background days are hub-and-spoke with a defector group: hub nodes send
transactions to random peripheral nodes with lognormal amounts, while a
randomly sized, randomly chosen group of peripheral nodes transacts
along a random chain of its own instead of with the hubs. A random
matching of chord transactions among the day's hub targets closes a
varying number of triangles through the hubs, so cycle counts, degree,
clustering, and betweenness statistics all fluctuate day to day; the
triangles are born and filled at the same filtration value, so they
never contribute persistent 1-dimensional classes. On anomaly days a
structural shock is injected:

  ring       one extra transaction closes the day's defector chain into
             a cycle. The cycle is chordless and hub-free, so the day
             gains a 1-dimensional hole without gaining any triangle,
             and the single added edge stays far below the background
             noise in degree, closeness, and betweenness statistics.
  community  a dense block of random transactions among a node subset,
             adding loops and triangles at once.

The price series makes a >5% move exactly ``horizon`` days after each
shock; background returns stay within a configurable band well below the
5% threshold. Everything is drawn from one seeded generator in a fixed
order, so a given (config, seed) always produces byte-identical CSVs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import PriceSeries, SnapshotSeries, Transaction, date_add

__all__ = ["SynthConfig", "synth_dynamic_graphs"]


@dataclass(frozen=True)
class SynthConfig:
    days: int = 120
    n_nodes: int = 60
    base_model: str = "hub"
    n_hubs: int = 1
    tx_per_day: int = 150
    tx_jitter: int = 50
    anomaly_days: tuple | None = None
    n_anomalies: int = 10
    shock: str = "ring"
    group_min: int = 8
    group_max: int = 16
    chord_max: int = 6
    community_size: int = 8
    community_tx: int = 24
    horizon: int = 4
    background_return: float = 0.02
    shock_return: tuple = (0.06, 0.10)
    start_price: float = 100.0
    extra_price_days: int = 7
    start_date: str = "2024-01-01"


def _validate(cfg: SynthConfig) -> None:
    if cfg.base_model != "hub":
        raise ValueError(f"unknown base model {cfg.base_model!r}")
    if cfg.shock not in ("ring", "community"):
        raise ValueError(f"unknown shock type {cfg.shock!r}")
    if cfg.days < 1 or cfg.horizon < 1:
        raise ValueError("days and horizon must be >= 1")
    if cfg.n_hubs < 1 or cfg.n_nodes <= cfg.n_hubs:
        raise ValueError("need at least one hub and one peripheral node")
    if not 4 <= cfg.group_min <= cfg.group_max:
        raise ValueError("need 4 <= group_min <= group_max")
    if cfg.chord_max < 0:
        raise ValueError("chord_max must be >= 0")
    if cfg.n_nodes - cfg.n_hubs < cfg.group_max:
        raise ValueError("not enough peripheral nodes for the defector group")
    if cfg.shock == "community" and cfg.n_nodes - cfg.n_hubs < cfg.community_size:
        raise ValueError("not enough peripheral nodes for the community shock")
    if not (0 < cfg.background_return < 0.05 < cfg.shock_return[0] <= cfg.shock_return[1]):
        raise ValueError("return bands must straddle the 5% threshold")
    if cfg.anomaly_days is not None:
        bad = [s for s in cfg.anomaly_days if not 1 <= s <= cfg.days]
        if bad:
            raise ValueError(f"anomaly days outside [1, {cfg.days}]: {bad}")
        if len(set(cfg.anomaly_days)) != len(cfg.anomaly_days):
            raise ValueError("anomaly days must be unique")


def _pick_anomaly_days(cfg: SynthConfig, rng: np.random.Generator) -> tuple:
    if cfg.anomaly_days is not None:
        return tuple(sorted(cfg.anomaly_days))
    if cfg.n_anomalies == 0:
        return ()
    # leave margin on both ends so every horizon in 1..7 sees the shocks
    lo, hi = 8, cfg.days - 7
    if hi - lo + 1 < cfg.n_anomalies:
        raise ValueError(
            f"cannot place {cfg.n_anomalies} anomaly days in [{lo}, {hi}]"
        )
    days = rng.choice(np.arange(lo, hi + 1), size=cfg.n_anomalies, replace=False)
    return tuple(sorted(int(d) for d in days))


def _amount(rng: np.random.Generator, sigma: float) -> float:
    return max(0.01, round(float(rng.lognormal(3.0, sigma)), 2))


def synth_dynamic_graphs(cfg: SynthConfig, seed: int):
    """Generate (SnapshotSeries, PriceSeries) for the configured benchmark.

    Prices extend ``extra_price_days`` past the last snapshot so that
    labels exist for every feature day at horizons up to that margin.
    """
    _validate(cfg)
    rng = np.random.default_rng(seed)
    anomaly_days = _pick_anomaly_days(cfg, rng)
    nodes = [f"n{i:03d}" for i in range(cfg.n_nodes)]
    periph = np.arange(cfg.n_hubs, cfg.n_nodes)
    hub_names = set(nodes[: cfg.n_hubs])

    days = []
    for day in range(1, cfg.days + 1):
        n_tx = max(1, cfg.tx_per_day + int(rng.integers(-cfg.tx_jitter, cfg.tx_jitter + 1)))
        txs = []
        for _ in range(n_tx):
            hub = int(rng.integers(0, cfg.n_hubs))
            dst = int(rng.choice(periph))
            txs.append(Transaction(nodes[hub], nodes[dst], _amount(rng, 0.6)))
        # defector group: drop its hub traffic, transact along a random chain
        size = int(rng.integers(cfg.group_min, cfg.group_max + 1))
        group = rng.choice(periph, size=size, replace=False)
        chain = group[rng.permutation(size)]
        group_names = {nodes[int(v)] for v in group}
        txs = [t for t in txs if t.src not in group_names and t.dst not in group_names]
        for i in range(size - 1):
            u = nodes[int(chain[i])]
            v = nodes[int(chain[i + 1])]
            txs.append(Transaction(u, v, _amount(rng, 0.3)))
        # chord noise: a disjoint matching among hub targets closes triangles
        # through the hubs, so cycle counts vary without persistent loops
        targets = sorted({t.dst for t in txs if t.src in hub_names})
        n_chords = min(int(rng.integers(0, cfg.chord_max + 1)), len(targets) // 2)
        if n_chords > 0:
            pick = rng.choice(len(targets), size=2 * n_chords, replace=False)
            for k in range(n_chords):
                u = targets[int(pick[2 * k])]
                v = targets[int(pick[2 * k + 1])]
                txs.append(Transaction(u, v, _amount(rng, 0.4)))
        if day in anomaly_days:
            if cfg.shock == "ring":
                # one closing transaction turns the chain into a chordless cycle
                txs.append(
                    Transaction(nodes[int(chain[-1])], nodes[int(chain[0])], _amount(rng, 0.3))
                )
            else:
                comm = rng.choice(periph, size=cfg.community_size, replace=False)
                for _ in range(cfg.community_tx):
                    i, j = rng.choice(cfg.community_size, size=2, replace=False)
                    txs.append(
                        Transaction(nodes[int(comm[i])], nodes[int(comm[j])], _amount(rng, 0.4))
                    )
        days.append((date_add(cfg.start_date, day - 1), txs))

    move_days = {s + cfg.horizon for s in anomaly_days}
    prices = {}
    level = cfg.start_price
    for day in range(1, cfg.days + cfg.extra_price_days + 1):
        if day > 1:
            if day in move_days:
                r = float(rng.uniform(*cfg.shock_return)) * float(rng.choice((-1.0, 1.0)))
            else:
                r = float(rng.uniform(-cfg.background_return, cfg.background_return))
            level *= 1.0 + r
        prices[date_add(cfg.start_date, day - 1)] = round(level, 4)

    return SnapshotSeries(days), PriceSeries(prices)
