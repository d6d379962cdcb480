"""The forest learner itself: splits, training, metrics, importance, I/O.

Fits a seeded regression forest to a noisy step surface, shows that the
train/test/holdout split and training are reproducible, and round-trips
the model through its JSON file format.
"""

import tempfile
from pathlib import Path

import numpy as np

from votekit.forest import (
    Dataset,
    ForestParams,
    SplitSpec,
    Task,
    evaluate,
    feature_importance,
    load_model,
    predict,
    save_model,
    split_dataset,
    train_forest,
)

rng = np.random.default_rng(42)
n = 400
X = rng.uniform(0.0, 10.0, size=(n, 3))
# only the first two features matter; the third is a decoy
y = np.where(X[:, 0] > 5.0, 20.0, 0.0) + 3.0 * X[:, 1] + rng.normal(0.0, 1.0, size=n)

data = Dataset(["step_feature", "linear_feature", "decoy"], X, y, Task.REGRESSION)
splits = split_dataset(data, SplitSpec(0.7, 0.15, 0.15, seed=42))
print(f"split sizes: train {splits.train.n}, test {splits.test.n}, holdout {splits.holdout.n}")

params = ForestParams(n_trees=60, max_depth=10, seed=42)
forest = train_forest(splits.train, params)

print("\nholdout metrics:", {k: round(v, 3) for k, v in evaluate(forest, splits.holdout).items()})
print("feature importance:")
for name, weight in feature_importance(forest).items():
    print(f"  {name:15s} {weight:.3f}")

probe = [7.0, 4.0, 1.0]
print(f"\nprediction at {probe}: {predict(forest, probe):.2f} "
      f"(truth {20.0 + 3.0 * probe[1]:.2f} before noise)")

# training is seeded: same data + params -> bit-identical forests
again = train_forest(splits.train, params)
assert predict(again, probe) == predict(forest, probe)
print("retraining with the same seed reproduces the prediction exactly")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "model.json"
    save_model(forest, path)
    loaded = load_model(path)
    assert predict(loaded, probe) == predict(forest, probe)
    print(f"saved {path.stat().st_size // 1024} KiB model; reloaded prediction identical")
