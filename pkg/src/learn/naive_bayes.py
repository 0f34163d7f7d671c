# src/learn/naive_bayes.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from src.config import NB_VAR_FLOOR
from src.errors import EmptyTrainingSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NbConfig:
    var_floor: float = NB_VAR_FLOOR


@dataclass(frozen=True, eq=False)
class GaussianNB:
    classes: Tuple[str, ...]
    priors: np.ndarray     # (c,)
    means: np.ndarray      # (c, d)
    variances: np.ndarray  # (c, d), population variance plus floor


def nb_train(
    X: np.ndarray, y: Sequence, classes: Optional[Sequence[str]] = None, var_floor: float = NB_VAR_FLOOR
) -> GaussianNB:
    """Per-class, per-feature Gaussians; priors are class frequencies."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(list(y), dtype=object)
    classes = tuple(sorted(set(y.tolist()))) if classes is None else tuple(classes)
    if len(classes) < 2:
        raise EmptyTrainingSet(f"naive Bayes needs at least two classes, got {list(classes)}")

    priors, means, variances = [], [], []
    for c in classes:
        rows = X[y == c]
        if rows.shape[0] == 0:
            raise EmptyTrainingSet(f"class {c!r} has no training samples")
        priors.append(rows.shape[0] / X.shape[0])
        means.append(rows.mean(axis=0))
        variances.append(np.maximum(rows.var(axis=0), var_floor))
    return GaussianNB(classes, np.array(priors), np.array(means), np.array(variances))


def log_joint(model: GaussianNB, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    ll = -0.5 * (np.log(2.0 * np.pi * model.variances) + (x - model.means) ** 2 / model.variances)
    return np.log(model.priors) + ll.sum(axis=1)


def nb_posterior(model: GaussianNB, x: np.ndarray) -> Dict[str, float]:
    lj = log_joint(model, x)
    post = np.exp(lj - logsumexp(lj))
    return dict(zip(model.classes, post.tolist()))


def nb_predict(model: GaussianNB, x: np.ndarray) -> Tuple[str, Dict[str, float]]:
    """(most probable class, posterior per class); ties go to the first class in sorted order."""
    posterior = nb_posterior(model, x)
    best = model.classes[int(np.argmax([posterior[c] for c in model.classes]))]
    return best, posterior
