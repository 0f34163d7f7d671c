# src/learn/models.py
# Registry over the seven algorithms: train / predict / versioned JSON models

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import POSITIVE_LABEL, SCHEMA_VERSION, from_dict, to_dict
from src.errors import ConfigError, EmptyTrainingSet, ModelSchemaError
from src.learn.clustering import (
    FcmCentroids,
    FcmConfig,
    KMeansCentroids,
    KMeansConfig,
    PamConfig,
    PamMedoids,
    fcm,
    fcm_memberships,
    kmeans,
    nearest,
    pam,
)
from src.learn.dataset import Dataset, Standardizer, column_medians, impute
from src.learn.knn import KnnConfig, KnnIndex, knn_fit, knn_predict
from src.learn.naive_bayes import GaussianNB, NbConfig, nb_predict, nb_train
from src.learn.svm import LinearSvm, SvmConfig, svm_predict, svm_train
from src.learn.tree import Node, TreeConfig, TreeModel, tree_predict, tree_train
from src.utils import read_json, write_json

logger = logging.getLogger(__name__)

# algorithm -> (model variant, config type)
ALGORITHMS = {
    "tree": ("Tree", TreeConfig),
    "knn": ("KnnIndex", KnnConfig),
    "nb": ("GaussianNB", NbConfig),
    "kmeans": ("KMeansCentroids", KMeansConfig),
    "fcm": ("FcmCentroids", FcmConfig),
    "pam": ("PamMedoids", PamConfig),
    "svm": ("LinearSvm", SvmConfig),
}
# unsupervised; scored through cluster_labels
CLUSTERING = ("kmeans", "fcm", "pam")


@dataclass(eq=False)
class Model:
    algorithm: str
    feature_names: Tuple[str, ...]
    config: Any
    medians: np.ndarray
    standardizer: Standardizer
    classes: Tuple[str, ...]
    core: Any
    # majority training label per cluster, for the clustering algorithms
    cluster_labels: Optional[Tuple[str, ...]] = None

    @property
    def variant(self) -> str:
        return ALGORITHMS[self.algorithm][0]


def config_for(algorithm: str, data: Optional[Dict[str, Any]] = None):
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}, expected one of {sorted(ALGORITHMS)}")
    return from_dict(ALGORITHMS[algorithm][1], data)


def _majority(labels: Sequence[str]) -> str:
    counts = Counter(labels)
    return min(counts, key=lambda c: (-counts[c], c))


def _cluster_labels(assign: np.ndarray, y: np.ndarray, k: int) -> Tuple[str, ...]:
    fallback = _majority(y.tolist())
    return tuple(
        _majority(y[assign == j].tolist()) if np.any(assign == j) else fallback for j in range(k)
    )


def _svm_classes(classes: List[str]) -> Tuple[str, str]:
    """(negative, positive); the screening positive label wins when present."""
    if len(classes) != 2:
        raise EmptyTrainingSet(f"svm needs exactly two classes, got {classes}")
    if POSITIVE_LABEL in classes:
        other = [c for c in classes if c != POSITIVE_LABEL][0]
        return other, POSITIVE_LABEL
    return classes[0], classes[1]


def train(algorithm: str, dataset: Dataset, config=None) -> Model:
    """Fit one algorithm on a labeled dataset (labels also name the clusters)."""
    config = config if config is not None else config_for(algorithm)
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}, expected one of {sorted(ALGORITHMS)}")
    if not isinstance(config, ALGORITHMS[algorithm][1]):
        raise ConfigError(f"{algorithm}: config must be {ALGORITHMS[algorithm][1].__name__}")
    if len(dataset) == 0:
        raise EmptyTrainingSet(f"{algorithm}: empty training set")
    y = dataset.require_labels()

    medians = column_medians(dataset.X)
    X = impute(dataset.X, medians)
    standardize = getattr(config, "standardize", False)
    scaler = Standardizer.fit(X) if standardize else Standardizer.identity(X.shape[1])
    Z = scaler.transform(X)
    classes = tuple(dataset.classes)
    cluster_labels = None

    if algorithm == "tree":
        core = tree_train(X, y, config)
    elif algorithm == "knn":
        core = knn_fit(Z, y.tolist(), config.k)
    elif algorithm == "nb":
        core = nb_train(X, y, var_floor=config.var_floor)
    elif algorithm == "kmeans":
        core = kmeans(Z, config.k, config)
        cluster_labels = _cluster_labels(core.assignments, y, config.k)
    elif algorithm == "fcm":
        core = fcm(Z, config.c, config.m, config)
        cluster_labels = _cluster_labels(np.argmax(core.memberships, axis=1), y, config.c)
    elif algorithm == "pam":
        core = pam(Z, config.k, config)
        cluster_labels = _cluster_labels(nearest(Z, core.medoids), y, config.k)
    else:
        classes = _svm_classes(list(classes))
        signs = np.where(y == classes[1], 1, -1)
        core = svm_train(Z, signs, config.lam, config.epochs, config.rng_seed)

    logger.info(f"Trained {algorithm} on {len(dataset)} samples, classes {list(classes)}")
    return Model(algorithm, dataset.feature_names, config, medians, scaler, classes, core, cluster_labels)


def predict_row(model: Model, x: np.ndarray) -> str:
    x = impute(np.asarray(x, dtype=np.float64).reshape(1, -1), model.medians)[0]
    z = model.standardizer.transform(x)
    core = model.core
    if model.algorithm == "tree":
        return tree_predict(core, x)
    if model.algorithm == "knn":
        return knn_predict(core, z)
    if model.algorithm == "nb":
        return nb_predict(core, x)[0]
    if model.algorithm == "kmeans":
        return model.cluster_labels[int(nearest(z[None, :], core.centroids)[0])]
    if model.algorithm == "fcm":
        return model.cluster_labels[int(np.argmax(fcm_memberships(core, z[None, :])[0]))]
    if model.algorithm == "pam":
        return model.cluster_labels[int(nearest(z[None, :], core.medoids)[0])]
    return model.classes[1] if svm_predict(core, z) > 0 else model.classes[0]


def predict(model: Model, X) -> List[str]:
    """Predicted label per row; a Dataset must carry the model's feature columns."""
    if isinstance(X, Dataset):
        if X.feature_names != model.feature_names:
            raise ModelSchemaError(
                f"model expects features {list(model.feature_names)}, dataset has {list(X.feature_names)}"
            )
        X = X.X
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != len(model.feature_names):
        raise ModelSchemaError(f"model expects {len(model.feature_names)} features, got {X.shape[1]}")
    return [predict_row(model, row) for row in X]


# -------- serialization --------

def _arr(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


def _core_to_dict(algorithm: str, core) -> Dict[str, Any]:
    if algorithm == "tree":
        return {"root": core.root.to_dict(), "medians": _arr(core.medians), "classes": list(core.classes)}
    if algorithm == "knn":
        return {"X": _arr(core.X), "y": list(core.y), "k": core.k}
    if algorithm == "nb":
        return {
            "classes": list(core.classes),
            "priors": _arr(core.priors),
            "means": _arr(core.means),
            "variances": _arr(core.variances),
        }
    if algorithm == "kmeans":
        return {
            "centroids": _arr(core.centroids),
            "assignments": core.assignments.tolist(),
            "inertia_history": list(core.inertia_history),
        }
    if algorithm == "fcm":
        return {
            "centroids": _arr(core.centroids),
            "memberships": _arr(core.memberships),
            "m": core.m,
            "n_iter": core.n_iter,
        }
    if algorithm == "pam":
        return {
            "medoid_indices": core.medoid_indices.tolist(),
            "medoids": _arr(core.medoids),
            "cost": core.cost,
            "cost_history": list(core.cost_history),
        }
    return {"w": _arr(core.w), "b": core.b}


def _core_from_dict(algorithm: str, p: Dict[str, Any]):
    f = lambda key: np.array(p[key], dtype=np.float64)  # noqa: E731
    if algorithm == "tree":
        return TreeModel(Node.from_dict(p["root"]), f("medians"), tuple(p["classes"]))
    if algorithm == "knn":
        return KnnIndex(f("X"), tuple(p["y"]), int(p["k"]))
    if algorithm == "nb":
        return GaussianNB(tuple(p["classes"]), f("priors"), f("means"), f("variances"))
    if algorithm == "kmeans":
        return KMeansCentroids(f("centroids"), np.array(p["assignments"], dtype=np.int64), list(p["inertia_history"]))
    if algorithm == "fcm":
        return FcmCentroids(f("centroids"), f("memberships"), float(p["m"]), int(p["n_iter"]))
    if algorithm == "pam":
        return PamMedoids(
            np.array(p["medoid_indices"], dtype=np.int64), f("medoids"), float(p["cost"]), list(p["cost_history"])
        )
    return LinearSvm(f("w"), float(p["b"]))


def model_to_dict(model: Model) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "algorithm": model.algorithm,
        "variant": model.variant,
        "feature_names": list(model.feature_names),
        "config": to_dict(model.config),
        "medians": _arr(model.medians),
        "standardizer": model.standardizer.to_dict(),
        "classes": list(model.classes),
        "cluster_labels": list(model.cluster_labels) if model.cluster_labels is not None else None,
        "params": _core_to_dict(model.algorithm, model.core),
    }


def model_from_dict(data: Dict[str, Any]) -> Model:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ModelSchemaError(f"model schema_version {data.get('schema_version')!r}, expected {SCHEMA_VERSION}")
    algorithm = data.get("algorithm")
    if algorithm not in ALGORITHMS:
        raise ModelSchemaError(f"unknown model algorithm {algorithm!r}")
    if data.get("variant") != ALGORITHMS[algorithm][0]:
        raise ModelSchemaError(f"variant {data.get('variant')!r} does not match algorithm {algorithm!r}")
    try:
        config = from_dict(ALGORITHMS[algorithm][1], data["config"])
        cluster_labels = data.get("cluster_labels")
        return Model(
            algorithm=algorithm,
            feature_names=tuple(data["feature_names"]),
            config=config,
            medians=np.array(data["medians"], dtype=np.float64),
            standardizer=Standardizer.from_dict(data["standardizer"]),
            classes=tuple(data["classes"]),
            core=_core_from_dict(algorithm, data["params"]),
            cluster_labels=tuple(cluster_labels) if cluster_labels is not None else None,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ModelSchemaError(f"malformed {algorithm} model: {e}") from e


def save_model(path: Path, model: Model) -> None:
    write_json(path, model_to_dict(model))
    logger.info(f"Wrote: {path}")


def load_model(path: Path) -> Model:
    try:
        data = read_json(path)
    except ValueError as e:
        raise ModelSchemaError(f"{path}: not a JSON model ({e})") from e
    if not isinstance(data, dict):
        raise ModelSchemaError(f"{path}: model file must hold a JSON object")
    return model_from_dict(data)
