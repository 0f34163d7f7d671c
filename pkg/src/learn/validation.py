# src/learn/validation.py

from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional

import numpy as np

from src.config import CV_FOLDS, POSITIVE_LABEL, RANDOM_SEED
from src.errors import ConfigError
from src.evaluation.screening import confusion, screening_metrics
from src.learn.dataset import Dataset
from src.learn.models import predict, train

logger = logging.getLogger(__name__)


def fold_indices(n: int, folds: int, seed: int = RANDOM_SEED) -> List[np.ndarray]:
    """Seeded permutation of 0..n-1 cut into `folds` near-equal test folds."""
    if not 2 <= folds <= n:
        raise ConfigError(f"folds={folds} outside 2..{n}")
    order = np.random.default_rng(seed).permutation(n)
    return [np.sort(part) for part in np.array_split(order, folds)]


def cross_validate(
    algorithm: str,
    dataset: Dataset,
    folds: int = CV_FOLDS,
    config=None,
    seed: int = RANDOM_SEED,
    positive: str = POSITIVE_LABEL,
) -> Dict[str, Any]:
    """
    k-fold cross-validation of one algorithm. Each fold trains on the other
    rows; the held-out predictions are pooled and scored as screening outcomes
    with `positive` as the positive class.
    """
    y = dataset.require_labels()
    predictions: List[Optional[str]] = [None] * len(dataset)
    all_rows = np.arange(len(dataset))

    for i, test in enumerate(fold_indices(len(dataset), folds, seed)):
        train_rows = np.setdiff1d(all_rows, test)
        model = train(algorithm, dataset.subset(train_rows), config)
        for row, label in zip(test, predict(model, dataset.X[test])):
            predictions[int(row)] = label
        logger.debug(f"{algorithm} fold {i + 1}/{folds}: {len(train_rows)} train, {len(test)} test")

    cm = confusion(predictions, y.tolist(), positive=positive)
    metrics = screening_metrics(cm)
    logger.info(f"{algorithm}: {folds}-fold accuracy {metrics['accuracy']:.3f} on {len(dataset)} rows")
    return {
        "algorithm": algorithm,
        "folds": folds,
        "seed": seed,
        "n": len(dataset),
        "predictions": dict(zip(dataset.ids, predictions)),
        "confusion": cm.to_dict(),
        "metrics": metrics,
    }
