"""Datasets and the train/test/holdout split.

Split sizes follow a floor-plus-remainder rule: each split gets
floor(fraction * n) rows and leftover rows go to train, then test, then
holdout.  The shuffle is seeded, so a (dataset, spec) pair always yields
the same partition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import floor
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import StratifyOnRegression, TooFewRows
from ..rng import SplitMix64

MIN_SPLIT_ROWS = 10


class Task(str, enum.Enum):
    REGRESSION = "regression"
    CLASSIFICATION = "classification"


@dataclass
class Dataset:
    """Feature matrix plus targets for one learning task.

    ``X`` is an (n, p) float array; ``y`` holds float targets for
    regression or arbitrary (sortable, hashable) labels for
    classification.
    """

    feature_names: list[str]
    X: np.ndarray
    y: np.ndarray
    task: Task

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        if len(self.feature_names) != self.X.shape[1]:
            raise ValueError("feature_names length must match feature count")
        if self.X.shape[1] < 1:
            raise ValueError("need at least one feature")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("features must be finite")
        if self.task is Task.REGRESSION:
            self.y = np.asarray(self.y, dtype=np.float64)
            if not np.all(np.isfinite(self.y)):
                raise ValueError("regression targets must be finite")
        else:
            self.y = np.asarray(self.y)
        if self.y.shape[0] != self.X.shape[0]:
            raise ValueError("X and y must have the same number of rows")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def labels(self) -> list:
        """Sorted distinct class labels (classification only)."""
        if self.task is not Task.CLASSIFICATION:
            raise ValueError("labels() is only defined for classification data")
        return sorted(set(self.y.tolist()))

    def subset(self, indices: Sequence[int]) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(self.feature_names, self.X[idx], self.y[idx], self.task)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float
    test_fraction: float
    holdout_fraction: float
    stratified: bool = False
    seed: int = 0

    def __post_init__(self):
        fractions = (self.train_fraction, self.test_fraction, self.holdout_fraction)
        if not all(0.0 < f < 1.0 for f in fractions):
            raise ValueError("all fractions must lie strictly between 0 and 1")
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ValueError(f"fractions must sum to 1, got {sum(fractions)}")


class DatasetSplits(NamedTuple):
    train: Dataset
    test: Dataset
    holdout: Dataset


def _partition_sizes(n: int, spec: SplitSpec) -> tuple[int, int, int]:
    sizes = [
        floor(spec.train_fraction * n),
        floor(spec.test_fraction * n),
        floor(spec.holdout_fraction * n),
    ]
    for i in range(n - sum(sizes)):  # leftovers: train, then test, then holdout
        sizes[i] += 1
    return tuple(sizes)


def _split_indices(indices: list[int], spec: SplitSpec, rng: SplitMix64) -> tuple[list, list, list]:
    shuffled = list(indices)
    rng.shuffle(shuffled)
    n_train, n_test, _ = _partition_sizes(len(shuffled), spec)
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_test],
        shuffled[n_train + n_test :],
    )


def split_dataset(data: Dataset, spec: SplitSpec) -> DatasetSplits:
    """Partition rows into disjoint train/test/holdout sets.

    Stratified mode applies the same size rule within every class, which
    keeps per-class proportions within one row per class per split.
    """
    if data.n < MIN_SPLIT_ROWS:
        raise TooFewRows(f"need at least {MIN_SPLIT_ROWS} rows, got {data.n}")
    if spec.stratified and data.task is not Task.CLASSIFICATION:
        raise StratifyOnRegression("stratified splitting requires a classification task")

    rng = SplitMix64(spec.seed)
    if not spec.stratified:
        train_idx, test_idx, holdout_idx = _split_indices(list(range(data.n)), spec, rng)
    else:
        train_idx, test_idx, holdout_idx = [], [], []
        y_list = data.y.tolist()
        for label in data.labels():
            class_indices = [i for i, value in enumerate(y_list) if value == label]
            tr, te, ho = _split_indices(class_indices, spec, rng)
            train_idx += tr
            test_idx += te
            holdout_idx += ho
    return DatasetSplits(
        train=data.subset(train_idx),
        test=data.subset(test_idx),
        holdout=data.subset(holdout_idx),
    )
