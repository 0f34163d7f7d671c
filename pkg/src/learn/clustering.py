# src/learn/clustering.py
# K-means (Lloyd, k-means++ seeding), fuzzy c-means, and k-medoids (PAM BUILD + SWAP)

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from src.config import (
    FCM_FUZZIFIER, FCM_MAX_ITERS, FCM_TOL, KMEANS_MAX_ITERS, PAM_RESTARTS, RANDOM_SEED,
)
from src.errors import ConfigError, EmptyTrainingSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KMeansConfig:
    k: int = 2
    max_iters: int = KMEANS_MAX_ITERS
    rng_seed: int = RANDOM_SEED
    standardize: bool = True


@dataclass(frozen=True)
class FcmConfig:
    c: int = 2
    m: float = FCM_FUZZIFIER
    tol: float = FCM_TOL
    max_iters: int = FCM_MAX_ITERS
    rng_seed: int = RANDOM_SEED
    standardize: bool = True

    def __post_init__(self):
        if self.c < 2:
            raise ConfigError(f"fuzzy c-means needs c >= 2, got {self.c}")
        if self.m <= 1.0:
            raise ConfigError(f"fuzzifier m must be > 1, got {self.m}")


@dataclass(frozen=True)
class PamConfig:
    k: int = 2
    restarts: Optional[int] = PAM_RESTARTS
    standardize: bool = True

    def __post_init__(self):
        if self.restarts is not None and self.restarts < 0:
            raise ConfigError(f"restarts must be >= 0 or null, got {self.restarts}")


@dataclass(eq=False)
class KMeansCentroids:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia_history: List[float] = field(default_factory=list)

    @property
    def inertia(self) -> float:
        return self.inertia_history[-1]


@dataclass(eq=False)
class FcmCentroids:
    centroids: np.ndarray
    memberships: np.ndarray
    m: float
    n_iter: int = 0


@dataclass(eq=False)
class PamMedoids:
    medoid_indices: np.ndarray
    medoids: np.ndarray
    cost: float
    cost_history: List[float] = field(default_factory=list)


def _check_samples(X: np.ndarray, k: int, name: str) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyTrainingSet(f"{name} needs a non-empty (n, d) sample matrix")
    if not 1 <= k <= X.shape[0]:
        raise ConfigError(f"{name}: k={k} outside 1..{X.shape[0]}")
    return X


def sq_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return cdist(X, centers, metric="sqeuclidean")


def nearest(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return np.argmin(sq_distances(X, centers), axis=1)


# -------- k-means --------

def kmeans_plus_plus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    for _ in range(1, k):
        d2 = sq_distances(X, np.array(centers)).min(axis=1)
        total = d2.sum()
        idx = rng.integers(n) if total <= 0 else rng.choice(n, p=d2 / total)
        centers.append(X[idx])
    return np.array(centers, dtype=np.float64)


def kmeans(X: np.ndarray, k: int, config: KMeansConfig = KMeansConfig()) -> KMeansCentroids:
    """
    Lloyd iterations until the assignment stops changing. Inertia is recorded
    after every assignment step, so the history is non-increasing.
    """
    X = _check_samples(X, k, "kmeans")
    rng = np.random.default_rng(config.rng_seed)
    centroids = kmeans_plus_plus(X, k, rng)
    assign = None
    history = []

    for it in range(config.max_iters):
        d2 = sq_distances(X, centroids)
        new_assign = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(len(X)), new_assign].sum()))
        logger.debug(f"kmeans iteration {it}: inertia {history[-1]:.6f}")
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign

        for j in range(k):
            members = assign == j
            if members.any():
                centroids[j] = X[members].mean(axis=0)
            else:
                own = d2[np.arange(len(X)), assign]
                far = int(np.argmax(own))
                logger.debug(f"kmeans: cluster {j} empty, reseeded at sample {far}")
                centroids[j] = X[far]

    final = nearest(X, centroids)
    return KMeansCentroids(centroids, final, history)


# -------- fuzzy c-means --------

def memberships_from_distances(D: np.ndarray, m: float) -> np.ndarray:
    """
    u_ij = 1 / sum_k (d_ij / d_ik)^(2/(m-1)), evaluated as normalized
    (d_min / d_ij)^p weights. A zero distance gets a hard membership.
    """
    D = np.atleast_2d(np.asarray(D, dtype=np.float64))
    p = 2.0 / (m - 1.0)
    U = np.zeros_like(D)
    for i, row in enumerate(D):
        zero = np.flatnonzero(row == 0)
        if zero.size:
            U[i, zero[0]] = 1.0
            continue
        w = (row.min() / row) ** p
        U[i] = w / w.sum()
    return U


def fcm(X: np.ndarray, c: int, m: float = FCM_FUZZIFIER, config: FcmConfig = FcmConfig()) -> FcmCentroids:
    """Alternate centroid and membership updates until max |dU| < tol."""
    X = _check_samples(X, c, "fcm")
    if c < 2:
        raise ConfigError(f"fuzzy c-means needs c >= 2, got {c}")
    if m <= 1.0:
        raise ConfigError(f"fuzzifier m must be > 1, got {m}")
    rng = np.random.default_rng(config.rng_seed)
    U = rng.random((X.shape[0], c))
    U /= U.sum(axis=1, keepdims=True)

    centroids = np.zeros((c, X.shape[1]))
    it = 0
    for it in range(1, config.max_iters + 1):
        W = U ** m
        centroids = (W.T @ X) / W.sum(axis=0)[:, None]
        new_U = memberships_from_distances(cdist(X, centroids), m)
        delta = float(np.abs(new_U - U).max())
        U = new_U
        if delta < config.tol:
            break
    logger.debug(f"fcm converged after {it} iterations")
    return FcmCentroids(centroids, U, m, it)


def fcm_memberships(model: FcmCentroids, X: np.ndarray) -> np.ndarray:
    return memberships_from_distances(cdist(np.atleast_2d(X), model.centroids), model.m)


# -------- k-medoids (PAM) --------

def total_cost(D: np.ndarray, medoids) -> float:
    return float(D[:, list(medoids)].min(axis=1).sum())


def _build(D: np.ndarray, k: int, first: int | None = None) -> List[int]:
    medoids = [int(np.argmin(D.sum(axis=1))) if first is None else int(first)]
    closest = D[:, medoids[0]].copy()
    while len(medoids) < k:
        # cost after adding each candidate; existing medoids excluded
        costs = np.minimum(closest[:, None], D).sum(axis=0)
        costs[medoids] = np.inf
        pick = int(np.argmin(costs))
        medoids.append(pick)
        closest = np.minimum(closest, D[:, pick])
    return medoids


def _swap(D: np.ndarray, medoids: List[int]) -> Tuple[List[int], List[float]]:
    n, k = D.shape[0], len(medoids)
    medoids = list(medoids)
    cost = total_cost(D, medoids)
    history = [cost]
    while True:
        best = (cost, None, None)
        non_medoids = [h for h in range(n) if h not in medoids]
        for slot in range(k):
            others = medoids[:slot] + medoids[slot + 1:]
            base = D[:, others].min(axis=1) if others else np.full(n, np.inf)
            for h in non_medoids:
                c = float(np.minimum(base, D[:, h]).sum())
                if c < best[0] - 1e-12:
                    best = (c, slot, h)
        if best[1] is None:
            return medoids, history
        cost, slot, h = best
        logger.debug(f"PAM swap: medoid {medoids[slot]} -> {h}, cost {cost:.6f}")
        medoids[slot] = h
        history.append(cost)


def _first_medoids(D: np.ndarray, restarts: int | None) -> List[int]:
    # classic BUILD start first, then the remaining rows by total distance
    order = [int(i) for i in np.argsort(D.sum(axis=1), kind="stable")]
    return order if restarts is None else order[: restarts + 1]


def pam(X: np.ndarray, k: int, config: PamConfig = PamConfig()) -> PamMedoids:
    """
    BUILD a greedy initial medoid set, then apply the best cost-reducing
    (medoid, non-medoid) swap until none is left. Medoids are dataset rows.

    BUILD is restarted with each dataset row as the forced first medoid
    (``config.restarts`` limits how many) and the cheapest SWAP result is
    kept. With every row tried and k = 2 this reaches the exhaustive optimum:
    the best second medoid for the optimal first one is optimal.
    """
    X = _check_samples(X, k, "pam")
    D = cdist(X, X)

    best_medoids, best_history = None, None
    for first in _first_medoids(D, config.restarts):
        medoids, history = _swap(D, _build(D, k, first))
        if best_history is None or history[-1] < best_history[-1] - 1e-12:
            best_medoids, best_history = medoids, history

    cost = best_history[-1]
    idx = np.array(best_medoids, dtype=np.int64)
    return PamMedoids(idx, X[idx].copy(), cost, best_history)
