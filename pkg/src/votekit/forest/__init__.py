"""From-scratch random forest: datasets, splits, CART trees, ensembles."""

from .data import Dataset, DatasetSplits, SplitSpec, Task, split_dataset
from .forest import (
    ClassPrediction,
    Forest,
    ForestParams,
    evaluate,
    feature_importance,
    predict,
    predict_batch,
    train_forest,
    train_tree,
)
from .io import forest_from_doc, forest_to_doc, load_model, model_id, save_model
from .tree import TreeNode, apply_tree

__all__ = [
    "ClassPrediction",
    "Dataset",
    "DatasetSplits",
    "Forest",
    "ForestParams",
    "SplitSpec",
    "Task",
    "TreeNode",
    "apply_tree",
    "evaluate",
    "feature_importance",
    "forest_from_doc",
    "forest_to_doc",
    "load_model",
    "model_id",
    "predict",
    "predict_batch",
    "save_model",
    "split_dataset",
    "train_forest",
    "train_tree",
]
