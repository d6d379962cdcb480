"""Versioned on-disk model format.

Canonical JSON document with nested tree nodes:

    {"format_version": 1, "task": ..., "params": {...},
     "feature_names": [...], "training_seed": ...,
     "labels": [...] | null, "feature_importance": {...},
     "trees": [{"f": i, "t": x, "l": ..., "r": ...} | {"leaf": v}, ...]}

Loading a saved forest reproduces its predictions exactly (floats are
emitted with full round-trip precision).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..canon import canonical_json
from ..errors import BadModelFile
from .data import Task
from .forest import Forest, ForestParams
from .tree import TreeNode

FORMAT_VERSION = 1


def _node_to_doc(node: TreeNode) -> dict:
    if node.is_leaf:
        value = node.value
        if isinstance(value, np.ndarray):
            value = [float(v) for v in value]
        else:
            value = float(value)
        return {"leaf": value}
    return {
        "f": int(node.feature),
        "t": float(node.threshold),
        "l": _node_to_doc(node.left),
        "r": _node_to_doc(node.right),
    }


def _node_from_doc(doc: dict) -> TreeNode:
    if "leaf" in doc:
        value = doc["leaf"]
        if isinstance(value, list):
            value = np.asarray(value, dtype=np.float64)
        return TreeNode(n_samples=0, value=value)
    return TreeNode(
        n_samples=0,
        feature=int(doc["f"]),
        threshold=float(doc["t"]),
        left=_node_from_doc(doc["l"]),
        right=_node_from_doc(doc["r"]),
    )


def forest_to_doc(forest: Forest) -> dict:
    params = forest.params
    importance = None
    if forest.importance_totals is not None:
        importance = {
            name: float(total)
            for name, total in zip(forest.feature_names, forest.importance_totals)
        }
    return {
        "format_version": FORMAT_VERSION,
        "task": forest.task.value,
        "params": {
            "n_trees": params.n_trees,
            "mtry": params.mtry,
            "max_depth": params.max_depth,
            "min_samples_leaf": params.min_samples_leaf,
            "bootstrap": params.bootstrap,
            "seed": params.seed,
        },
        "feature_names": list(forest.feature_names),
        "training_seed": forest.training_seed,
        "labels": forest.labels,
        "feature_importance": importance,
        "trees": [_node_to_doc(tree) for tree in forest.trees],
    }


def forest_from_doc(doc: dict) -> Forest:
    try:
        if doc["format_version"] != FORMAT_VERSION:
            raise BadModelFile(f"unsupported format_version {doc['format_version']}")
        params = ForestParams(**doc["params"])
        feature_names = list(doc["feature_names"])
        importance = doc.get("feature_importance")
        totals = None
        if importance is not None:
            totals = np.array([importance.get(name, 0.0) for name in feature_names])
        return Forest(
            task=Task(doc["task"]),
            trees=[_node_from_doc(t) for t in doc["trees"]],
            params=params,
            feature_names=feature_names,
            training_seed=doc["training_seed"],
            labels=doc.get("labels"),
            importance_totals=totals,
        )
    except BadModelFile:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise BadModelFile(f"malformed model document: {exc}") from exc


def save_model(forest: Forest, path) -> None:
    Path(path).write_text(canonical_json(forest_to_doc(forest)), encoding="utf-8")


def load_model(path) -> Forest:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise BadModelFile(f"cannot read model file {path}: {exc}") from exc
    return forest_from_doc(doc)


def model_id(forest: Forest) -> str:
    """Short stable identifier derived from the serialized model."""
    import hashlib

    digest = hashlib.sha256(canonical_json(forest_to_doc(forest)).encode()).hexdigest()
    return f"rf-{digest[:12]}"
