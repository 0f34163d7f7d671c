# src/learn/dataset.py
# Labeled feature matrices loaded from the feature CSV schema, plus the
# preprocessing shared by the trainers (median imputation, z-scores)

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DatasetSchemaError, EmptyTrainingSet
from src.features.radiomics import CSV_HEADER, FEATURE_NAMES

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Rows of real features (NaN marks a missing cell) with optional class labels."""

    ids: Tuple[str, ...]
    X: np.ndarray
    labels: Tuple[Optional[str], ...]
    feature_names: Tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise DatasetSchemaError(f"feature matrix must be 2-D, got shape {X.shape}")
        if X.shape[0] != len(self.ids) or X.shape[0] != len(self.labels):
            raise DatasetSchemaError(
                f"{X.shape[0]} rows but {len(self.ids)} ids and {len(self.labels)} labels"
            )
        if X.shape[1] != len(self.feature_names):
            raise DatasetSchemaError(f"{X.shape[1]} columns but {len(self.feature_names)} feature names")
        if np.any(np.isinf(X)):
            raise DatasetSchemaError("features must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def y(self) -> np.ndarray:
        return np.array(self.labels, dtype=object)

    @property
    def labeled(self) -> bool:
        return all(label is not None for label in self.labels)

    @property
    def classes(self) -> List[str]:
        return sorted({label for label in self.labels if label is not None})

    def subset(self, index: Sequence[int]) -> "Dataset":
        index = np.asarray(index, dtype=np.int64)
        return Dataset(
            tuple(self.ids[i] for i in index),
            self.X[index],
            tuple(self.labels[i] for i in index),
            self.feature_names,
        )

    def require_labels(self) -> np.ndarray:
        if not self.labeled:
            missing = [cid for cid, label in zip(self.ids, self.labels) if label is None]
            raise DatasetSchemaError(f"{len(missing)} rows have no label (first: {missing[0]})")
        return self.y


def parse_dataset(text: str) -> Dataset:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DatasetSchemaError("dataset CSV is empty")
    header = tuple(h.strip() for h in lines[0].split(","))
    if header[0] != "id" or header[-1] != "label" or len(header) < 3:
        raise DatasetSchemaError(f"dataset header must be 'id,<features...>,label', got {lines[0]!r}")
    if header != CSV_HEADER:
        logger.warning(f"Dataset columns {header[1:-1]} differ from the mass feature schema")

    ids, rows, labels = [], [], []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise DatasetSchemaError(f"line {line_no}: expected {len(header)} columns, got {len(cells)}")
        try:
            rows.append([float(c) if c else np.nan for c in cells[1:-1]])
        except ValueError as e:
            raise DatasetSchemaError(f"line {line_no}: {e}") from e
        ids.append(cells[0])
        labels.append(cells[-1] or None)

    X = np.array(rows, dtype=np.float64).reshape(len(rows), len(header) - 2)
    return Dataset(tuple(ids), X, tuple(labels), header[1:-1])


def load_dataset(path: Path) -> Dataset:
    with open(path, "r", encoding="utf-8") as f:
        dataset = parse_dataset(f.read())
    logger.info(f"Loaded {len(dataset)} rows x {len(dataset.feature_names)} features from {path}")
    return dataset


def column_medians(X: np.ndarray) -> np.ndarray:
    """Per-column median ignoring NaN; an all-missing column imputes 0."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        raise EmptyTrainingSet("no training rows")
    med = np.zeros(X.shape[1])
    for j in range(X.shape[1]):
        col = X[:, j]
        col = col[~np.isnan(col)]
        if col.size:
            med[j] = np.median(col)
    return med


def impute(X: np.ndarray, medians: np.ndarray) -> np.ndarray:
    X = np.array(X, dtype=np.float64, copy=True)
    rows, cols = np.nonzero(np.isnan(X))
    X[rows, cols] = medians[cols]
    return X


@dataclass(frozen=True, eq=False)
class Standardizer:
    """Z-score per column; a constant column keeps unit scale."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        std = X.std(axis=0)
        return cls(X.mean(axis=0), np.where(std > 0, std, 1.0))

    @classmethod
    def identity(cls, n_features: int) -> "Standardizer":
        return cls(np.zeros(n_features), np.ones(n_features))

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Standardizer":
        return cls(np.array(data["mean"], dtype=np.float64), np.array(data["scale"], dtype=np.float64))
