"""Random forest classifier and evaluation utilities.

A compact bagged-decision-tree ensemble tuned for the evaluation sweeps
in this package: many small fits (about a hundred samples, about a
hundred columns) where per-fit overhead dominates, so the tree builder
is compiled with numba and every tree of a forest is grown in one call.

Trees use Gini impurity, per-split feature subsampling of size
ceil(sqrt(n_features)), and bootstrap resampling; the ensemble
probability is the fraction of trees voting positive. Everything is
seeded and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.stats import rankdata

__all__ = [
    "ForestConfig",
    "CvConfig",
    "RandomForest",
    "auc_score",
    "stratified_folds",
    "repeated_stratified_folds",
]


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 500
    seed: int = 0


@dataclass(frozen=True)
class CvConfig:
    k: int = 10
    repeats: int = 10
    seed: int = 0


@njit(cache=True)
def _fit_forest(X, y, n_trees, seed):
    n, f = X.shape
    k_feat = int(np.ceil(np.sqrt(f)))
    max_nodes = 2 * n + 1
    feat = np.full((n_trees, max_nodes), -1, np.int64)
    thr = np.zeros((n_trees, max_nodes), np.float64)
    left = np.full((n_trees, max_nodes), -1, np.int64)
    right = np.full((n_trees, max_nodes), -1, np.int64)
    vote = np.zeros((n_trees, max_nodes), np.int8)

    order = np.empty(n, np.int64)
    stack_node = np.empty(max_nodes, np.int64)
    stack_lo = np.empty(max_nodes, np.int64)
    stack_hi = np.empty(max_nodes, np.int64)
    perm = np.empty(f, np.int64)
    buf = np.empty(n, np.int64)

    for t in range(n_trees):
        np.random.seed((seed * 1000003 + 104729 * t + 12345) % 2147483647)
        for i in range(n):
            order[i] = np.random.randint(0, n)
        n_nodes = 1
        top = 1
        stack_node[0] = 0
        stack_lo[0] = 0
        stack_hi[0] = n
        while top > 0:
            top -= 1
            node = stack_node[top]
            lo = stack_lo[top]
            hi = stack_hi[top]
            total = hi - lo
            pos = 0
            for i in range(lo, hi):
                pos += y[order[i]]
            if pos == 0 or pos == total or total < 2:
                vote[t, node] = 1 if 2 * pos > total else 0
                continue

            for j in range(f):
                perm[j] = j
            for j in range(k_feat):
                r = j + np.random.randint(0, f - j)
                tmp = perm[j]
                perm[j] = perm[r]
                perm[r] = tmp

            best_imp = 1e18
            best_feat = -1
            best_thr = 0.0
            vals = np.empty(total, np.float64)
            labs = np.empty(total, np.int64)
            for jj in range(k_feat):
                fe = perm[jj]
                for i in range(total):
                    vals[i] = X[order[lo + i], fe]
                    labs[i] = y[order[lo + i]]
                srt = np.argsort(vals, kind="mergesort")
                pos_left = 0
                for i in range(total - 1):
                    pos_left += labs[srt[i]]
                    a = vals[srt[i]]
                    b = vals[srt[i + 1]]
                    if a == b:
                        continue
                    nl = i + 1
                    nr = total - nl
                    pl = float(pos_left)
                    pr = float(pos - pos_left)
                    gini_l = 1.0 - (pl / nl) ** 2 - ((nl - pl) / nl) ** 2
                    gini_r = 1.0 - (pr / nr) ** 2 - ((nr - pr) / nr) ** 2
                    imp = nl * gini_l + nr * gini_r
                    if imp < best_imp - 1e-12:
                        cand = 0.5 * (a + b)
                        if cand >= b:
                            # midpoint rounded up to b; fall back so the
                            # left branch stays non-empty
                            cand = a
                        best_imp = imp
                        best_feat = fe
                        best_thr = cand

            if best_feat < 0:
                vote[t, node] = 1 if 2 * pos > total else 0
                continue

            c = 0
            for i in range(lo, hi):
                if X[order[i], best_feat] <= best_thr:
                    buf[c] = order[i]
                    c += 1
            mid = lo + c
            for i in range(lo, hi):
                if X[order[i], best_feat] > best_thr:
                    buf[c] = order[i]
                    c += 1
            for i in range(total):
                order[lo + i] = buf[i]

            lchild = n_nodes
            rchild = n_nodes + 1
            n_nodes += 2
            feat[t, node] = best_feat
            thr[t, node] = best_thr
            left[t, node] = lchild
            right[t, node] = rchild
            stack_node[top] = lchild
            stack_lo[top] = lo
            stack_hi[top] = mid
            top += 1
            stack_node[top] = rchild
            stack_lo[top] = mid
            stack_hi[top] = hi
            top += 1

    return feat, thr, left, right, vote


@njit(cache=True)
def _predict_votes(X, feat, thr, left, right, vote):
    nq = X.shape[0]
    n_trees = feat.shape[0]
    out = np.zeros(nq, np.float64)
    for t in range(n_trees):
        for i in range(nq):
            node = 0
            while feat[t, node] >= 0:
                if X[i, feat[t, node]] <= thr[t, node]:
                    node = left[t, node]
                else:
                    node = right[t, node]
            out[i] += vote[t, node]
    return out / n_trees


class RandomForest:
    """Bagged Gini trees with sqrt-feature subsampling and vote-fraction output."""

    def __init__(self, n_trees: int = 500, seed: int = 0):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = int(n_trees)
        self.seed = int(seed)
        self._trees = None

    def fit(self, X, y) -> "RandomForest":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError("X must be (n, f) and y (n,)")
        if X.shape[0] < 1:
            raise ValueError("need at least one sample")
        if np.any((y != 0) & (y != 1)):
            raise ValueError("labels must be 0/1")
        self._trees = _fit_forest(X, y, self.n_trees, self.seed)
        return self

    def predict_proba(self, X) -> np.ndarray:
        """Fraction of trees voting positive for each row."""
        if self._trees is None:
            raise ValueError("fit before predict")
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _predict_votes(X, *self._trees)


def auc_score(y_true, scores) -> float:
    """Area under the ROC curve via the Mann-Whitney rank statistic.

    Ties get midranks, so tied scores contribute one half, matching the
    probabilistic definition P(score_pos > score_neg) + 0.5 * P(equal).
    """
    y = np.asarray(y_true)
    s = np.asarray(scores, dtype=float)
    n_pos = int(np.count_nonzero(y == 1))
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(s, method="average")
    return float(
        (ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    )


def stratified_folds(y, k: int, seed: int) -> list:
    """Test-index arrays for k stratified folds.

    Each class is shuffled independently and dealt round-robin, so fold
    class balance is as even as the counts allow. Depends only on the
    labels and the seed, which is what lets nested models share folds.
    """
    y = np.asarray(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds: list = [[] for _ in range(k)]
    for cls in (0, 1):
        idx = np.nonzero(y == cls)[0]
        idx = idx[rng.permutation(idx.size)]
        for pos, sample in enumerate(idx):
            folds[pos % k].append(int(sample))
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


def repeated_stratified_folds(y, cv: CvConfig) -> list:
    """(repeat, fold, train_idx, test_idx) tuples for repeated stratified CV."""
    y = np.asarray(y)
    everything = np.arange(y.size)
    out = []
    for rep in range(cv.repeats):
        for fold, test_idx in enumerate(stratified_folds(y, cv.k, cv.seed * 7919 + rep)):
            train_idx = np.setdiff1d(everything, test_idx, assume_unique=True)
            out.append((rep, fold, train_idx, test_idx))
    return out
