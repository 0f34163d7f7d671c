# src/learn/knn.py

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from src.config import KNN_K
from src.errors import ConfigError, EmptyTrainingSet


@dataclass(frozen=True)
class KnnConfig:
    k: int = KNN_K
    standardize: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")


def neighbour_order(train_X: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Training indices by increasing Euclidean distance; equal distances keep index order."""
    d = cdist(np.asarray(x, dtype=np.float64).reshape(1, -1), np.asarray(train_X, dtype=np.float64))[0]
    return np.argsort(d, kind="stable")


def knn_classify(train_X: np.ndarray, train_y: Sequence, x: np.ndarray, k: int = KNN_K):
    """
    Majority vote among the k nearest. A tie between classes goes to the
    class of the nearest neighbour among the tied ones.
    """
    train_y = list(train_y)
    if len(train_y) == 0:
        raise EmptyTrainingSet("knn needs at least one training sample")
    if not 1 <= k <= len(train_y):
        raise ConfigError(f"k={k} outside 1..{len(train_y)}")

    nearest = neighbour_order(train_X, x)[:k]
    votes = Counter(train_y[i] for i in nearest)
    top = max(votes.values())
    tied = {label for label, count in votes.items() if count == top}
    for i in nearest:
        if train_y[i] in tied:
            return train_y[i]


@dataclass(frozen=True, eq=False)
class KnnIndex:
    """Memorized (standardized) training rows."""

    X: np.ndarray
    y: tuple
    k: int


def knn_fit(X: np.ndarray, y: Sequence, k: int = KNN_K) -> KnnIndex:
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        raise EmptyTrainingSet("knn needs at least one training sample")
    if not 1 <= k <= X.shape[0]:
        raise ConfigError(f"k={k} outside 1..{X.shape[0]}")
    return KnnIndex(X.copy(), tuple(y), k)


def knn_predict(index: KnnIndex, x: np.ndarray):
    return knn_classify(index.X, index.y, x, index.k)
