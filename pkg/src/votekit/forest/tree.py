"""Greedy CART construction shared by regression and classification trees.

Split selection contract (relied on by the brute-force equivalence
tests): candidate thresholds are midpoints between consecutive sorted
distinct values of each candidate feature; the chosen split minimizes

    regression:      (Q_l - S_l^2/n_l) + (Q_r - S_r^2/n_r)      (total SSE)
    classification:  (n_l - T_l/n_l)   + (n_r - T_r/n_r)

where Q/S are the sum of squared / plain targets of a child and T is the
sum of squared per-class counts (size-weighted Gini).  Each child term
performs exactly one division, so with integer-valued targets the
arithmetic is reproducible bit for bit.  Ties go to the lowest feature
index, then the lowest threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyRows
from ..rng import SplitMix64
from .data import Task


@dataclass
class TreeNode:
    """Internal node (feature/threshold/left/right) or leaf (value).

    Routing: feature value <= threshold goes left, else right.  Leaf
    value is the training-target mean for regression or a class
    probability vector (global label order) for classification.
    """

    n_samples: int
    value: float | np.ndarray | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class _GrowContext:
    task: Task
    n_classes: int
    mtry: int
    max_depth: int
    min_samples_leaf: int
    rng: SplitMix64
    importances: np.ndarray = field(default=None)


def apply_tree(node: TreeNode, x: np.ndarray):
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.value


def _node_metric_regression(y: np.ndarray) -> float:
    s = float(np.sum(y))
    q = float(np.dot(y, y))
    return q - s * s / len(y)


def _node_metric_classification(y_enc: np.ndarray, n_classes: int) -> float:
    counts = np.bincount(y_enc, minlength=n_classes)
    t = float(np.dot(counts, counts))
    return len(y_enc) - t / len(y_enc)


def _best_split_regression(X, y, features, min_leaf):
    """Lowest-metric (metric, feature, threshold) among candidates, or None."""
    n = len(y)
    best = None
    for f in features:
        xs_order = np.argsort(X[:, f], kind="stable")
        xs = X[xs_order, f]
        ys = y[xs_order]
        boundaries = np.nonzero(xs[1:] != xs[:-1])[0] + 1  # candidate left sizes
        k = boundaries[(boundaries >= min_leaf) & (n - boundaries >= min_leaf)]
        if k.size == 0:
            continue
        s = np.cumsum(ys)
        q = np.cumsum(ys * ys)
        s_tot, q_tot = float(s[-1]), float(q[-1])
        s_left, q_left = s[k - 1], q[k - 1]
        metric = (q_left - s_left * s_left / k) + (
            (q_tot - q_left) - (s_tot - s_left) * (s_tot - s_left) / (n - k)
        )
        j = int(np.argmin(metric))  # first minimum == lowest threshold
        if best is None or float(metric[j]) < best[0]:
            threshold = float((xs[k[j] - 1] + xs[k[j]]) / 2.0)
            best = (float(metric[j]), f, threshold)
    return best


def _best_split_classification(X, y_enc, n_classes, features, min_leaf):
    n = len(y_enc)
    one_hot = np.zeros((n, n_classes))
    best = None
    for f in features:
        xs_order = np.argsort(X[:, f], kind="stable")
        xs = X[xs_order, f]
        one_hot[:] = 0.0
        one_hot[np.arange(n), y_enc[xs_order]] = 1.0
        boundaries = np.nonzero(xs[1:] != xs[:-1])[0] + 1
        k = boundaries[(boundaries >= min_leaf) & (n - boundaries >= min_leaf)]
        if k.size == 0:
            continue
        counts = np.cumsum(one_hot, axis=0)
        count_left = counts[k - 1]
        count_right = counts[-1] - count_left
        t_left = np.sum(count_left * count_left, axis=1)
        t_right = np.sum(count_right * count_right, axis=1)
        metric = (k - t_left / k) + ((n - k) - t_right / (n - k))
        j = int(np.argmin(metric))
        if best is None or float(metric[j]) < best[0]:
            threshold = float((xs[k[j] - 1] + xs[k[j]]) / 2.0)
            best = (float(metric[j]), f, threshold)
    return best


def _leaf(y, ctx: _GrowContext) -> TreeNode:
    if ctx.task is Task.REGRESSION:
        # fsum makes the leaf value independent of row order
        return TreeNode(n_samples=len(y), value=math.fsum(y.tolist()) / len(y))
    counts = np.bincount(y, minlength=ctx.n_classes)
    return TreeNode(n_samples=len(y), value=counts / len(y))


def _is_pure(y) -> bool:
    return bool(np.all(y == y[0]))


def _grow(X: np.ndarray, y: np.ndarray, depth: int, ctx: _GrowContext) -> TreeNode:
    n = len(y)
    if depth >= ctx.max_depth or n < 2 * ctx.min_samples_leaf or _is_pure(y):
        return _leaf(y, ctx)

    features = sorted(ctx.rng.sample_indices(X.shape[1], ctx.mtry))
    if ctx.task is Task.REGRESSION:
        best = _best_split_regression(X, y, features, ctx.min_samples_leaf)
        node_metric = _node_metric_regression(y)
    else:
        best = _best_split_classification(X, y, ctx.n_classes, features, ctx.min_samples_leaf)
        node_metric = _node_metric_classification(y, ctx.n_classes)
    if best is None:
        return _leaf(y, ctx)

    metric, feature, threshold = best
    ctx.importances[feature] += max(node_metric - metric, 0.0)
    mask = X[:, feature] <= threshold
    left = _grow(X[mask], y[mask], depth + 1, ctx)
    right = _grow(X[~mask], y[~mask], depth + 1, ctx)
    return TreeNode(
        n_samples=n, feature=feature, threshold=threshold, left=left, right=right
    )


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    task: Task,
    n_classes: int,
    mtry: int,
    max_depth: int,
    min_samples_leaf: int,
    rng: SplitMix64,
) -> tuple[TreeNode, np.ndarray]:
    """Grow one tree; returns (root, per-feature impurity decreases)."""
    if len(y) == 0:
        raise EmptyRows("cannot grow a tree from zero rows")
    ctx = _GrowContext(
        task=task,
        n_classes=n_classes,
        mtry=mtry,
        max_depth=max_depth,
        min_samples_leaf=min_samples_leaf,
        rng=rng,
        importances=np.zeros(X.shape[1]),
    )
    root = _grow(np.asarray(X, dtype=np.float64), y, 0, ctx)
    return root, ctx.importances
