"""Distance-based internal validity indices (Euclidean).

WGSS and Davies-Bouldin are minimised; Calinski-Harabasz and silhouette are
maximised. Degenerate geometry yields ``inf`` rather than an error so that
rankings over real model pools stay defined.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .partitions import InvalidInputError, Partition


class UndefinedIndexError(ValueError):
    """Raised when an index is undefined for the number of clusters given."""


def _prepare(x, p) -> tuple[np.ndarray, np.ndarray, int]:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    labels = p.labels if isinstance(p, Partition) else np.asarray(p)
    if x.ndim != 2 or x.shape[0] != labels.size:
        raise InvalidInputError(f"data has {x.shape[0]} rows but partition has {labels.size} labels")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("data must be finite")
    _, inv = np.unique(labels, return_inverse=True)
    inv = inv.ravel()
    return x, inv, int(inv.max()) + 1


def _centroids(x: np.ndarray, inv: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    sizes = np.bincount(inv, minlength=k)
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, inv, x)
    return sums / sizes[:, None], sizes


def wgss(x, p) -> float:
    """Within-group sum of squared distances to cluster centroids."""
    x, inv, k = _prepare(x, p)
    centroids, _ = _centroids(x, inv, k)
    return float(np.square(x - centroids[inv]).sum())


def chi(x, p) -> float:
    """Calinski-Harabasz variance ratio; ``inf`` when clusters have no spread."""
    x, inv, k = _prepare(x, p)
    n = x.shape[0]
    if not 2 <= k <= n - 1:
        raise UndefinedIndexError(f"Calinski-Harabasz needs 2 <= k <= n-1, got k={k}, n={n}")
    centroids, sizes = _centroids(x, inv, k)
    within = float(np.square(x - centroids[inv]).sum())
    between = float((sizes * np.square(centroids - x.mean(axis=0)).sum(axis=1)).sum())
    if within == 0.0:
        return np.inf
    return between * (n - k) / (within * (k - 1))


def silhouette_samples(x, p) -> np.ndarray:
    x, inv, k = _prepare(x, p)
    n = x.shape[0]
    if not 2 <= k <= n - 1:
        raise UndefinedIndexError(f"silhouette needs 2 <= k <= n-1, got k={k}, n={n}")
    dist = cdist(x, x)
    onehot = np.zeros((n, k))
    onehot[np.arange(n), inv] = 1.0
    sizes = onehot.sum(axis=0)
    per_cluster = dist @ onehot
    own = sizes[inv]
    a = np.where(own > 1, per_cluster[np.arange(n), inv] / np.maximum(own - 1, 1), 0.0)
    mean_other = per_cluster / sizes
    mean_other[np.arange(n), inv] = np.inf
    b = mean_other.min(axis=1)
    denom = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s[own == 1] = 0.0
    return s


def silhouette(x, p) -> float:
    """Mean silhouette width; singleton members count as 0."""
    return float(silhouette_samples(x, p).mean())


def dbi(x, p) -> float:
    """Davies-Bouldin index; coincident centroids give ``inf``."""
    x, inv, k = _prepare(x, p)
    n = x.shape[0]
    if not 2 <= k <= n:
        raise UndefinedIndexError(f"Davies-Bouldin needs 2 <= k <= n, got k={k}, n={n}")
    centroids, sizes = _centroids(x, inv, k)
    spread = np.bincount(inv, weights=np.linalg.norm(x - centroids[inv], axis=1), minlength=k) / sizes
    sep = cdist(centroids, centroids)
    num = spread[:, None] + spread[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sep > 0, num / sep, np.inf)
    np.fill_diagonal(ratio, -np.inf)
    return float(ratio.max(axis=1).mean())
