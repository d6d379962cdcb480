import json

import numpy as np
import pytest

from conftest import toy_classification_rows, toy_regression_rows
from votekit.errors import BadModelFile
from votekit.forest import (
    Dataset,
    ForestParams,
    Task,
    feature_importance,
    forest_to_doc,
    load_model,
    model_id,
    predict,
    save_model,
    train_forest,
)


def trained_regression(seed=0):
    X, y = toy_regression_rows(seed, 50, 3)
    return train_forest(
        Dataset(["a", "b", "c"], X, y, Task.REGRESSION), ForestParams(n_trees=8, seed=seed)
    )


def trained_classification(seed=0):
    X, y = toy_classification_rows(seed, 50, 2, n_classes=3)
    return train_forest(
        Dataset(["a", "b"], X, y, Task.CLASSIFICATION), ForestParams(n_trees=8, seed=seed)
    )


def test_regression_round_trip_identical_predictions(tmp_path):
    forest = trained_regression()
    path = tmp_path / "model.json"
    save_model(forest, path)
    loaded = load_model(path)
    probes = np.random.default_rng(1).uniform(0, 20, size=(50, 3))
    for probe in probes:
        assert predict(loaded, probe) == predict(forest, probe)


def test_classification_round_trip_identical(tmp_path):
    forest = trained_classification()
    path = tmp_path / "model.json"
    save_model(forest, path)
    loaded = load_model(path)
    probes = np.random.default_rng(2).uniform(0, 20, size=(50, 2))
    for probe in probes:
        a, b = predict(forest, probe), predict(loaded, probe)
        assert a.label == b.label and a.probabilities == b.probabilities


def test_importance_survives_round_trip(tmp_path):
    forest = trained_regression()
    path = tmp_path / "model.json"
    save_model(forest, path)
    assert feature_importance(load_model(path)) == pytest.approx(feature_importance(forest))


def test_document_keys(tmp_path):
    doc = forest_to_doc(trained_regression())
    assert doc["format_version"] == 1
    assert doc["task"] == "regression"
    assert set(doc["params"]) == {"n_trees", "mtry", "max_depth", "min_samples_leaf", "bootstrap", "seed"}
    assert doc["feature_names"] == ["a", "b", "c"]
    assert len(doc["trees"]) == 8

    def check_node(node):
        if "leaf" in node:
            assert isinstance(node["leaf"], float)
            return
        assert set(node) == {"f", "t", "l", "r"}
        check_node(node["l"])
        check_node(node["r"])

    for tree in doc["trees"]:
        check_node(tree)


def test_canonical_serialization_is_stable(tmp_path):
    forest = trained_regression()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_model(forest, a)
    save_model(forest, b)
    assert a.read_bytes() == b.read_bytes()
    assert model_id(forest).startswith("rf-")


def test_unsupported_version_rejected(tmp_path):
    forest = trained_regression()
    path = tmp_path / "model.json"
    save_model(forest, path)
    doc = json.loads(path.read_text())
    doc["format_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(BadModelFile):
        load_model(path)


def test_malformed_file_rejected(tmp_path):
    path = tmp_path / "model.json"
    path.write_text("{not json")
    with pytest.raises(BadModelFile):
        load_model(path)
    path.write_text(json.dumps({"format_version": 1, "task": "regression"}))
    with pytest.raises(BadModelFile):
        load_model(path)


def test_missing_file_rejected(tmp_path):
    with pytest.raises(BadModelFile):
        load_model(tmp_path / "nope.json")
