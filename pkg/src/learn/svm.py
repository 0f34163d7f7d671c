# src/learn/svm.py
# Linear SVM trained by Pegasos-style primal subgradient steps on the hinge loss

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.config import RANDOM_SEED, SVM_EPOCHS, SVM_LAMBDA
from src.errors import ConfigError, EmptyTrainingSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SvmConfig:
    lam: float = SVM_LAMBDA
    epochs: int = SVM_EPOCHS
    rng_seed: int = RANDOM_SEED
    standardize: bool = True

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigError(f"lambda must be > 0, got {self.lam}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")


@dataclass(frozen=True, eq=False)
class LinearSvm:
    w: np.ndarray
    b: float

    def decision(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=np.float64)) @ self.w + self.b


def svm_train(
    X: np.ndarray,
    y: Sequence[int],
    lam: float = SVM_LAMBDA,
    epochs: int = SVM_EPOCHS,
    rng_seed: int = RANDOM_SEED,
) -> LinearSvm:
    """
    One shuffled pass per epoch with step 1/(lam*t). The bias is an extra
    constant feature; the returned weights average the second half of the
    iterates.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] == 0:
        raise EmptyTrainingSet("svm needs training samples")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ConfigError("svm labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise EmptyTrainingSet(f"svm needs both classes, got only {int(y[0]):+d}")
    if lam <= 0:
        raise ConfigError(f"lambda must be > 0, got {lam}")

    Xa = np.hstack([X, np.ones((X.shape[0], 1))])
    n = Xa.shape[0]
    rng = np.random.default_rng(rng_seed)

    total = epochs * n
    average_from = total // 2
    w = np.zeros(Xa.shape[1])
    w_sum = np.zeros_like(w)
    t = 0
    for epoch in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = y[i] * (w @ Xa[i])
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * y[i] * Xa[i]
            if t > average_from:
                w_sum += w

    w_avg = w_sum / (total - average_from)
    logger.debug(f"svm trained: {epochs} epochs, {total} steps, |w|={np.linalg.norm(w_avg):.4f}")
    return LinearSvm(w_avg[:-1].copy(), float(w_avg[-1]))


def svm_predict(model: LinearSvm, x: np.ndarray) -> int:
    """+1 on or above the hyperplane, -1 below."""
    return 1 if float(model.decision(x)[0]) >= 0 else -1
