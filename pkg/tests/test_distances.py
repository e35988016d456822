"""Tests for the exact Wasserstein distance between persistence diagrams.

The oracle enumerates every partial matching (including diagonal
assignments) directly with itertools, so it shares no code with the
assignment-solver path under test.
"""
from itertools import combinations, permutations

import numpy as np
import pytest

from topovelocity.distances import total_persistence, wasserstein
from topovelocity.persistence import PersistenceDiagram
from topovelocity.stability import random_diagram


def _point_cost(u, v, p):
    db = abs(u[0] - v[0])
    dd = abs(u[1] - v[1])
    if np.isinf(p):
        return max(db, dd)
    return (db**p + dd**p) ** (1.0 / p)


def _diagonal_cost(u, p):
    gap = (u[1] - u[0]) / 2.0
    if np.isinf(p):
        return gap
    return gap * 2.0 ** (1.0 / p)


def _enumerate_min_cost(D1, D2, p, q):
    """Minimum matching cost over all injective partial matchings."""
    pts1 = D1.points()
    pts2 = D2.points()
    n1, n2 = len(pts1), len(pts2)
    best = np.inf
    for k in range(min(n1, n2) + 1):
        for left in combinations(range(n1), k):
            for right in permutations(range(n2), k):
                total = sum(
                    _point_cost(pts1[i], pts2[j], p) ** q
                    for i, j in zip(left, right)
                )
                total += sum(
                    _diagonal_cost(pts1[i], p) ** q
                    for i in range(n1)
                    if i not in left
                )
                total += sum(
                    _diagonal_cost(pts2[j], p) ** q
                    for j in range(n2)
                    if j not in right
                )
                best = min(best, total ** (1.0 / q))
    return best


def _small_diagram(seed, max_points):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, max_points + 1))
    if n == 0:
        return PersistenceDiagram([], [], 0)
    pts = np.sort(rng.uniform(0.0, 2.0, size=(n, 2)), axis=1)
    pts[:, 1] += 1e-3
    return PersistenceDiagram(pts[:, 0], pts[:, 1], 0)


class TestAgainstEnumerationOracle:
    def test_unit_cost_matches_enumeration(self):
        for seed in range(60):
            D1 = _small_diagram(2 * seed, 5)
            D2 = _small_diagram(2 * seed + 1, 5)
            got = wasserstein(D1, D2, 1.0, 1.0).cost
            assert got == pytest.approx(_enumerate_min_cost(D1, D2, 1.0, 1.0), abs=1e-9)

    @pytest.mark.parametrize("p,q", [(2.0, 2.0), (np.inf, 1.0), (1.0, 2.0), (2.0, 1.0)])
    def test_general_norms_match_enumeration(self, p, q):
        for seed in range(15):
            D1 = _small_diagram(3 * seed + 100, 4)
            D2 = _small_diagram(3 * seed + 101, 4)
            got = wasserstein(D1, D2, p, q).cost
            assert got == pytest.approx(_enumerate_min_cost(D1, D2, p, q), abs=1e-9)


class TestMetricProperties:
    def test_identity(self):
        for seed in range(10):
            D = random_diagram(seed, 4)
            assert wasserstein(D, D, 1.0, 1.0).cost == pytest.approx(0.0, abs=1e-12)

    def test_symmetry(self):
        for seed in range(25):
            D1 = random_diagram(2 * seed, 4)
            D2 = random_diagram(2 * seed + 1, 6)
            ab = wasserstein(D1, D2, 1.0, 1.0).cost
            ba = wasserstein(D2, D1, 1.0, 1.0).cost
            assert ab == pytest.approx(ba, abs=1e-9)

    def test_triangle_inequality(self):
        for seed in range(50):
            A = random_diagram(3 * seed, 3)
            B = random_diagram(3 * seed + 1, 5)
            C = random_diagram(3 * seed + 2, 4)
            ac = wasserstein(A, C, 1.0, 1.0).cost
            ab = wasserstein(A, B, 1.0, 1.0).cost
            bc = wasserstein(B, C, 1.0, 1.0).cost
            assert ac <= ab + bc + 1e-9


class TestKnownValues:
    def test_single_point_to_empty_costs_its_persistence(self):
        D1 = PersistenceDiagram([0.0], [1.0], 0)
        D2 = PersistenceDiagram([], [], 0)
        assert wasserstein(D1, D2, 1.0, 1.0).cost == pytest.approx(1.0, abs=1e-12)
        # nearest diagonal point under L1: min over t of |b-t| + |d-t| = d - b
        b, d = 0.0, 1.0
        ts = np.linspace(-1.0, 2.0, 3001)
        assert np.min(np.abs(b - ts) + np.abs(d - ts)) == pytest.approx(d - b, abs=1e-3)

    def test_empty_vs_empty(self):
        E = PersistenceDiagram([], [], 0)
        assert wasserstein(E, E, 1.0, 1.0).cost == 0.0

    def test_translated_single_point(self):
        D1 = PersistenceDiagram([0.0], [10.0], 0)
        D2 = PersistenceDiagram([1.0], [10.0], 0)
        assert wasserstein(D1, D2, 1.0, 1.0).cost == pytest.approx(1.0, abs=1e-12)

    def test_max_norm_ground_distance(self):
        D1 = PersistenceDiagram([0.0], [3.0], 0)
        D2 = PersistenceDiagram([1.0], [5.0], 0)
        # matching the points costs max(1, 2) = 2; diagonals cost 1.5 + 2
        assert wasserstein(D1, D2, np.inf, 1.0).cost == pytest.approx(2.0, abs=1e-12)


class TestAssignment:
    def test_assignment_covers_all_points_once(self):
        for seed in range(10):
            D1 = _small_diagram(seed + 300, 5)
            D2 = _small_diagram(seed + 400, 5)
            res = wasserstein(D1, D2, 1.0, 1.0)
            left = [i for i, _ in res.assignment if i is not None]
            right = [j for _, j in res.assignment if j is not None]
            assert sorted(left) == list(range(len(D1)))
            assert sorted(right) == list(range(len(D2)))

    def test_assignment_cost_reproduces_reported_cost(self):
        for seed in range(10):
            D1 = _small_diagram(seed + 500, 5)
            D2 = _small_diagram(seed + 600, 5)
            res = wasserstein(D1, D2, 2.0, 2.0)
            pts1, pts2 = D1.points(), D2.points()
            total = 0.0
            for i, j in res.assignment:
                if i is not None and j is not None:
                    total += _point_cost(pts1[i], pts2[j], 2.0) ** 2.0
                elif i is not None:
                    total += _diagonal_cost(pts1[i], 2.0) ** 2.0
                elif j is not None:
                    total += _diagonal_cost(pts2[j], 2.0) ** 2.0
            assert total ** 0.5 == pytest.approx(res.cost, abs=1e-9)


class TestErrors:
    def test_dimension_mismatch_rejected(self):
        D1 = PersistenceDiagram([0.0], [1.0], 0)
        D2 = PersistenceDiagram([0.0], [1.0], 1)
        with pytest.raises(ValueError, match="dimension mismatch"):
            wasserstein(D1, D2)

    def test_essential_classes_rejected(self):
        D1 = PersistenceDiagram([0.0], [np.inf], 0)
        D2 = PersistenceDiagram([0.0], [1.0], 0)
        with pytest.raises(ValueError, match="finite"):
            wasserstein(D1, D2)

    def test_norm_parameters_below_one_rejected(self):
        D = PersistenceDiagram([0.0], [1.0], 0)
        with pytest.raises(ValueError):
            wasserstein(D, D, p=0.5)
        with pytest.raises(ValueError):
            wasserstein(D, D, q=0.5)


class TestTotalPersistence:
    def test_worked_diagram(self):
        D = PersistenceDiagram([0.1, 0.2, 0.65], [0.4, 0.8, 0.75], 0)
        assert total_persistence(D) == pytest.approx(1.0, abs=1e-12)

    def test_empty_diagram(self):
        assert total_persistence(PersistenceDiagram([], [], 0)) == 0.0

    def test_zero_persistence_point(self):
        assert total_persistence(PersistenceDiagram([2.0], [2.0], 0)) == 0.0

    def test_essential_class_rejected(self):
        D = PersistenceDiagram([1.0], [np.inf], 0)
        with pytest.raises(ValueError):
            total_persistence(D)
