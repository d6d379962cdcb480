"""Random forest training and inference on top of the CART grower.

Training is deterministic: tree i draws its own SplitMix64 stream seeded
with mix_seed(params.seed, i), uses it for the bootstrap sample and then
for the per-node feature draws.  Parallel training would be allowed but
must reproduce exactly this result, so we keep it sequential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import (
    DimensionMismatch,
    EmptyDataset,
    EmptyTestSet,
    NonFiniteInput,
    TaskMismatch,
)
from ..rng import SplitMix64, mix_seed
from .data import Dataset, Task
from .tree import TreeNode, apply_tree, grow_tree


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    mtry: int | None = None  # default: round(p/3) regression, floor(sqrt(p)) classification
    max_depth: int = 12
    min_samples_leaf: int = 2
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1 or self.min_samples_leaf < 1:
            raise ValueError("n_trees, max_depth and min_samples_leaf must be positive")
        if self.mtry is not None and self.mtry < 1:
            raise ValueError("mtry must be positive")

    def resolve_mtry(self, p: int, task: Task) -> int:
        if self.mtry is not None:
            if self.mtry > p:
                raise ValueError(f"mtry={self.mtry} exceeds feature count {p}")
            return self.mtry
        if task is Task.REGRESSION:
            # rounding (not flooring) p/3 matters for small p: flooring to 1
            # degenerates into fully random split features
            return max(1, round(p / 3))
        return max(1, int(math.isqrt(p)))


@dataclass
class Forest:
    task: Task
    trees: list[TreeNode]
    params: ForestParams
    feature_names: list[str]
    training_seed: int
    labels: list | None = None  # classification only, sorted
    importance_totals: np.ndarray | None = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return len(self.feature_names)


@dataclass(frozen=True)
class ClassPrediction:
    label: object
    probabilities: dict


def train_forest(data: Dataset, params: ForestParams) -> Forest:
    if data.n == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    mtry = params.resolve_mtry(data.p, data.task)

    if data.task is Task.CLASSIFICATION:
        labels = data.labels()
        label_to_code = {label: code for code, label in enumerate(labels)}
        y = np.array([label_to_code[v] for v in data.y.tolist()], dtype=np.int64)
        n_classes = len(labels)
    else:
        labels = None
        y = data.y
        n_classes = 0

    trees: list[TreeNode] = []
    importance_totals = np.zeros(data.p)
    for i in range(params.n_trees):
        rng = SplitMix64(mix_seed(params.seed, i))
        if params.bootstrap:
            idx = np.array([rng.randbelow(data.n) for _ in range(data.n)], dtype=np.intp)
            sample_X, sample_y = data.X[idx], y[idx]
        else:
            sample_X, sample_y = data.X, y
        root, importances = grow_tree(
            sample_X,
            sample_y,
            data.task,
            n_classes,
            mtry,
            params.max_depth,
            params.min_samples_leaf,
            rng,
        )
        trees.append(root)
        importance_totals += importances
    return Forest(
        task=data.task,
        trees=trees,
        params=replace(params, mtry=mtry),
        feature_names=list(data.feature_names),
        training_seed=params.seed,
        labels=labels,
        importance_totals=importance_totals,
    )


def train_tree(data: Dataset, params: ForestParams, seed: int) -> TreeNode:
    """Grow a single CART tree on the given rows (no bootstrap).

    ``seed`` feeds the stream used for per-node feature draws; with
    mtry == p the draw is exhaustive and the tree is the plain greedy
    CART solution.
    """
    if data.n == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    mtry = params.resolve_mtry(data.p, data.task)
    if data.task is Task.CLASSIFICATION:
        labels = data.labels()
        label_to_code = {label: code for code, label in enumerate(labels)}
        y = np.array([label_to_code[v] for v in data.y.tolist()], dtype=np.int64)
        n_classes = len(labels)
    else:
        y = data.y
        n_classes = 0
    root, _ = grow_tree(
        data.X,
        y,
        data.task,
        n_classes,
        mtry,
        params.max_depth,
        params.min_samples_leaf,
        SplitMix64(seed),
    )
    return root


def _check_features(forest: Forest, features) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != forest.p:
        raise DimensionMismatch(f"expected {forest.p} features, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("feature values must be finite")
    return x


def predict(forest: Forest, features) -> float | ClassPrediction:
    """Regression: mean of tree outputs.  Classification: averaged class
    probability vectors, label = argmax with ties going to label order."""
    x = _check_features(forest, features)
    if forest.task is Task.REGRESSION:
        outputs = [apply_tree(tree, x) for tree in forest.trees]
        return math.fsum(outputs) / len(outputs)
    total = np.zeros(len(forest.labels))
    for tree in forest.trees:
        total += apply_tree(tree, x)
    probabilities = total / len(forest.trees)
    label = forest.labels[int(np.argmax(probabilities))]
    return ClassPrediction(
        label=label,
        probabilities={lab: float(p) for lab, p in zip(forest.labels, probabilities)},
    )


def predict_batch(forest: Forest, X) -> list:
    return [predict(forest, row) for row in np.asarray(X, dtype=np.float64)]


def evaluate(forest: Forest, test: Dataset) -> dict:
    """Standard metrics on a held-out set.

    Regression: mae, rmse, r2 (1 - SSE/SST about the test mean; if
    SST == 0, r2 is 1.0 for a perfect fit else 0.0).  Classification:
    accuracy plus per-class precision/recall (0.0 when undefined).
    """
    if test.n == 0:
        raise EmptyTestSet("test set is empty")
    if test.task is not forest.task:
        raise TaskMismatch(f"forest is {forest.task.value}, test set is {test.task.value}")

    if forest.task is Task.REGRESSION:
        preds = np.array([predict(forest, row) for row in test.X])
        errors = preds - test.y
        sse = float(np.sum(errors**2))
        sst = float(np.sum((test.y - test.y.mean()) ** 2))
        if sst == 0.0:
            r2 = 1.0 if sse == 0.0 else 0.0
        else:
            r2 = 1.0 - sse / sst
        return {
            "mae": float(np.mean(np.abs(errors))),
            "rmse": float(np.sqrt(np.mean(errors**2))),
            "r2": r2,
        }

    predictions = [predict(forest, row).label for row in test.X]
    actual = test.y.tolist()
    correct = sum(1 for pred, act in zip(predictions, actual) if pred == act)
    per_class = {}
    for label in forest.labels:
        tp = sum(1 for p, a in zip(predictions, actual) if p == label and a == label)
        fp = sum(1 for p, a in zip(predictions, actual) if p == label and a != label)
        fn = sum(1 for p, a in zip(predictions, actual) if p != label and a == label)
        per_class[label] = {
            "precision": tp / (tp + fp) if tp + fp else 0.0,
            "recall": tp / (tp + fn) if tp + fn else 0.0,
        }
    return {"accuracy": correct / test.n, "per_class": per_class}


def feature_importance(forest: Forest) -> dict[str, float]:
    """Impurity-decrease importance, normalized to sum to 1.

    Every split contributes its size-weighted impurity decrease to the
    split feature; forests whose trees never split report all zeros.
    """
    totals = forest.importance_totals
    if totals is None:
        totals = np.zeros(forest.p)
    grand_total = float(np.sum(totals))
    if grand_total <= 0.0:
        return {name: 0.0 for name in forest.feature_names}
    return {
        name: float(value) / grand_total
        for name, value in zip(forest.feature_names, totals)
    }
