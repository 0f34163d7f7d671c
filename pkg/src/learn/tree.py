# src/learn/tree.py
# Entropy-gain threshold tree (the splitting core of C5.0, without rulesets or boosting)

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import TREE_MAX_DEPTH, TREE_MIN_SAMPLES
from src.errors import ConfigError, EmptyTrainingSet, ModelSchemaError
from src.learn.dataset import column_medians, impute

logger = logging.getLogger(__name__)

GAIN_EPS = 1e-12


@dataclass(frozen=True)
class TreeConfig:
    min_samples: int = TREE_MIN_SAMPLES
    max_depth: int = TREE_MAX_DEPTH

    def __post_init__(self):
        if self.min_samples < 1 or self.max_depth < 0:
            raise ConfigError(f"bad tree limits: min_samples={self.min_samples}, max_depth={self.max_depth}")


@dataclass
class Node:
    prediction: str
    n_samples: int
    feature: Optional[int] = None
    threshold: Optional[float] = None
    gain: Optional[float] = None
    left: Optional["Node"] = None
    right: Optional["Node"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> Dict[str, Any]:
        out = {"prediction": self.prediction, "n_samples": self.n_samples}
        if not self.is_leaf:
            out.update(
                feature=self.feature,
                threshold=self.threshold,
                gain=self.gain,
                left=self.left.to_dict(),
                right=self.right.to_dict(),
            )
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Node":
        try:
            node = cls(data["prediction"], int(data["n_samples"]))
            if "feature" in data:
                node.feature = int(data["feature"])
                node.threshold = float(data["threshold"])
                node.gain = float(data["gain"])
                node.left = cls.from_dict(data["left"])
                node.right = cls.from_dict(data["right"])
        except (KeyError, TypeError, ValueError) as e:
            raise ModelSchemaError(f"bad tree node: {e}") from e
        return node


@dataclass
class TreeModel:
    root: Node
    medians: np.ndarray
    classes: Tuple[str, ...]


def entropy(labels: Sequence) -> float:
    """Shannon entropy in bits."""
    n = len(labels)
    if n == 0:
        return 0.0
    p = np.array(list(Counter(labels).values()), dtype=np.float64) / n
    return float(-(p * np.log2(p)).sum())


def information_gain(labels: Sequence, left_mask: np.ndarray) -> float:
    labels = np.asarray(labels, dtype=object)
    left, right = labels[left_mask], labels[~left_mask]
    n = len(labels)
    return entropy(labels) - (len(left) / n) * entropy(left) - (len(right) / n) * entropy(right)


def majority(labels: Sequence) -> str:
    """Most frequent label; ties go to the lexicographically smallest."""
    counts = Counter(labels)
    return min(counts, key=lambda c: (-counts[c], c))


def candidate_thresholds(values: np.ndarray) -> np.ndarray:
    uniq = np.unique(values)
    return (uniq[:-1] + uniq[1:]) / 2.0


def best_split(X: np.ndarray, y: np.ndarray) -> Optional[Tuple[int, float, float]]:
    """
    (feature, threshold, gain) with the highest gain; ties keep the lowest
    feature index, then the lowest threshold. Zero-gain splits are allowed so
    that interactions such as XOR can still be separated one level deeper.
    """
    best = None
    for j in range(X.shape[1]):
        for t in candidate_thresholds(X[:, j]):
            gain = information_gain(y, X[:, j] <= t)
            if best is None or gain > best[2] + GAIN_EPS:
                best = (j, float(t), gain)
    return best


def _grow(X: np.ndarray, y: np.ndarray, depth: int, config: TreeConfig) -> Node:
    node = Node(majority(y.tolist()), len(y))
    if len(set(y.tolist())) == 1 or len(y) < config.min_samples or depth >= config.max_depth:
        return node
    split = best_split(X, y)
    if split is None:
        return node
    j, t, gain = split
    left = X[:, j] <= t
    logger.debug(f"Split depth={depth} feature={j} threshold={t:.6g} gain={gain:.6f} n={len(y)}")
    node.feature, node.threshold, node.gain = j, t, gain
    node.left = _grow(X[left], y[left], depth + 1, config)
    node.right = _grow(X[~left], y[~left], depth + 1, config)
    return node


def tree_train(X: np.ndarray, y: Sequence, config: TreeConfig = TreeConfig()) -> TreeModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(list(y), dtype=object)
    if len(y) == 0 or X.shape[0] == 0:
        raise EmptyTrainingSet("tree_train needs at least one sample")
    medians = column_medians(X)
    root = _grow(impute(X, medians), y, 0, config)
    logger.debug(f"Tree trained: depth {root.depth()} on {len(y)} samples")
    return TreeModel(root, medians, tuple(sorted(set(y.tolist()))))


def tree_predict(model: TreeModel, x: np.ndarray) -> str:
    x = impute(np.asarray(x, dtype=np.float64).reshape(1, -1), model.medians)[0]
    node = model.root
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.prediction


def accepted_splits(node: Node) -> List[Node]:
    if node.is_leaf:
        return []
    return [node] + accepted_splits(node.left) + accepted_splits(node.right)
