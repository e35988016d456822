"""Tests for the synthetic transaction-graph benchmark generator.

The structural test at the bottom checks the central design property:
ring-shock days carry persistent 1-dimensional homology and background
days never do, even though background cycle counts fluctuate.
"""
import io

import numpy as np
import pytest

from topovelocity.complex import lower_star_filtration
from topovelocity.data import save_prices, save_transactions
from topovelocity.persistence import compute_diagrams
from topovelocity.pipeline import build_day_graph, label_anomalies
from topovelocity.synth import SynthConfig, synth_dynamic_graphs


def _csv_bytes(series, prices):
    a, b = io.StringIO(), io.StringIO()
    save_transactions(series, a)
    save_prices(prices, b)
    return a.getvalue(), b.getvalue()


class TestDeterminism:
    def test_same_seed_gives_identical_csvs(self):
        cfg = SynthConfig(days=25, n_nodes=30, n_anomalies=2, group_max=12)
        first = _csv_bytes(*synth_dynamic_graphs(cfg, seed=42))
        second = _csv_bytes(*synth_dynamic_graphs(cfg, seed=42))
        assert first == second

    def test_different_seeds_differ(self):
        cfg = SynthConfig(days=25, n_nodes=30, n_anomalies=2, group_max=12)
        first = _csv_bytes(*synth_dynamic_graphs(cfg, seed=1))
        second = _csv_bytes(*synth_dynamic_graphs(cfg, seed=2))
        assert first != second


class TestPriceSeries:
    def _returns(self, prices):
        dates = sorted(prices.prices)
        return {
            dates[i]: prices[dates[i]] / prices[dates[i - 1]] - 1.0
            for i in range(1, len(dates))
        }

    def test_no_anomalies_means_no_large_moves(self):
        cfg = SynthConfig(days=40, n_nodes=30, n_anomalies=0, group_max=12)
        _, prices = synth_dynamic_graphs(cfg, seed=0)
        assert all(abs(r) < 0.05 for r in self._returns(prices).values())

    def test_large_moves_exactly_at_shock_plus_horizon(self):
        cfg = SynthConfig(
            days=30, n_nodes=30, anomaly_days=(10, 20), horizon=3, group_max=12
        )
        series, prices = synth_dynamic_graphs(cfg, seed=3)
        rets = self._returns(prices)
        big = {d for d, r in rets.items() if abs(r) > 0.05}
        assert big == {series.dates[12], series.dates[22]}

    def test_prices_extend_past_snapshots(self):
        cfg = SynthConfig(days=10, n_nodes=30, n_anomalies=0, extra_price_days=7,
                          group_max=12)
        series, prices = synth_dynamic_graphs(cfg, seed=0)
        assert len(prices) == 17
        assert len(series) == 10

    def test_labels_recover_shock_days(self):
        cfg = SynthConfig(
            days=30, n_nodes=30, anomaly_days=(9, 17, 25), horizon=4, group_max=12
        )
        series, prices = synth_dynamic_graphs(cfg, seed=5)
        labels = label_anomalies(prices, series.dates, horizon=4)
        positives = {d for d, v in labels.items() if v == 1}
        assert positives == {series.dates[8], series.dates[16], series.dates[24]}


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"base_model": "ba"},
            {"shock": "clique"},
            {"days": 0},
            {"horizon": 0},
            {"n_hubs": 0},
            {"n_nodes": 1},
            {"group_min": 3},
            {"group_min": 10, "group_max": 9},
            {"n_nodes": 12, "group_max": 16},
            {"chord_max": -1},
            {"background_return": 0.06},
            {"shock_return": (0.03, 0.04)},
            {"anomaly_days": (0, 5)},
            {"anomaly_days": (5, 5)},
            {"shock": "community", "n_nodes": 8, "group_max": 5, "group_min": 4,
             "community_size": 10},
        ],
    )
    def test_bad_configs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            synth_dynamic_graphs(SynthConfig(**kwargs), seed=0)

    def test_too_many_anomalies_for_margin(self):
        with pytest.raises(ValueError, match="cannot place"):
            synth_dynamic_graphs(
                SynthConfig(days=20, n_nodes=30, n_anomalies=10, group_max=12), seed=0
            )

    def test_auto_placed_days_leave_margins(self):
        cfg = SynthConfig(days=40, n_nodes=30, n_anomalies=5, horizon=7, group_max=12)
        series, prices = synth_dynamic_graphs(cfg, seed=7)
        rets_days = {
            d for d, v in label_anomalies(prices, series.dates, 7).items() if v
        }
        idx = sorted(series.dates.index(d) + 1 for d in rets_days)
        assert all(8 <= i <= 33 for i in idx)
        assert len(idx) == 5


class TestTransactionTexture:
    def test_amounts_positive_and_rounded(self):
        cfg = SynthConfig(days=5, n_nodes=30, n_anomalies=0, group_max=12)
        series, _ = synth_dynamic_graphs(cfg, seed=0)
        for _, txs in series.days:
            for tx in txs:
                assert tx.amount >= 0.01
                assert tx.amount == round(tx.amount, 2)

    def test_defector_group_leaves_hub_traffic(self):
        cfg = SynthConfig(days=8, n_nodes=30, n_anomalies=0, group_max=12)
        series, _ = synth_dynamic_graphs(cfg, seed=1)
        for _, txs in series.days:
            chain_nodes = set()
            for t in txs:
                if t.src != "n000" and t.dst != "n000":
                    chain_nodes.update((t.src, t.dst))
            hub_partners = {t.dst for t in txs if t.src == "n000"}
            # chord transactions live among hub partners; chain nodes that
            # are not hub partners must have dropped all hub traffic
            assert len(chain_nodes - hub_partners) >= cfg.group_min


def _persistent_h1_count(txs):
    g = build_day_graph(txs, top_rank=250)
    diagrams = compute_diagrams(lower_star_filtration(g, 2), 1)
    D = diagrams[1]
    return int(np.sum(D.deaths > D.births))


class TestHomologySignal:
    def test_ring_days_and_only_ring_days_have_persistent_loops(self):
        shocks = (10, 16, 22)
        cfg = SynthConfig(days=30, n_nodes=40, anomaly_days=shocks, group_max=12)
        series, _ = synth_dynamic_graphs(cfg, seed=11)
        for day, (_, txs) in enumerate(series.days, start=1):
            count = _persistent_h1_count(txs)
            if day in shocks:
                assert count == 1
            else:
                assert count == 0

    def test_community_shock_adds_loops(self):
        cfg = SynthConfig(
            days=12, n_nodes=40, anomaly_days=(6,), shock="community",
            community_size=8, community_tx=24, group_max=12,
        )
        series, prices = synth_dynamic_graphs(cfg, seed=2)
        assert _persistent_h1_count(series.days[5][1]) >= 1
        rets = {
            d: v for d, v in label_anomalies(prices, series.dates, 4).items()
        }
        assert rets[series.dates[5]] == 1
