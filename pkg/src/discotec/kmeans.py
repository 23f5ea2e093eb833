"""A small seeded Lloyd's KMeans used to build model pools from raw data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.spatial.distance import cdist

from .partitions import Ensemble, InvalidInputError, Partition, canonicalise, is_degenerate


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iterations: int = 300
    tolerance: float = 1e-6
    seed: Optional[int] = 0
    init: str = "kmeans++"

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise InvalidInputError("tolerance must be >= 0")
        if self.init not in ("random-points", "kmeans++"):
            raise InvalidInputError(f"unknown init {self.init!r}")


def _init_centroids(x: np.ndarray, k: int, init: str, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    if init == "random-points":
        return x[rng.choice(n, size=k, replace=False)].copy()
    centroids = [x[rng.integers(n)]]
    closest = np.square(x - centroids[0]).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=closest / total)
        centroids.append(x[idx])
        closest = np.minimum(closest, np.square(x - x[idx]).sum(axis=1))
    return np.array(centroids, dtype=float)


def lloyd(x, cfg: KMeansConfig) -> tuple[np.ndarray, np.ndarray, list]:
    """Run Lloyd iterations; returns raw labels, centroids and the WGSS history."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if cfg.k > n:
        raise InvalidInputError(f"k={cfg.k} exceeds the number of observations n={n}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("data must be finite")
    rng = np.random.default_rng(cfg.seed)
    centroids = _init_centroids(x, cfg.k, cfg.init, rng)
    history = []
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(cfg.max_iterations):
        d = cdist(x, centroids, "sqeuclidean")
        labels = d.argmin(axis=1)
        history.append(float(d[np.arange(n), labels].sum()))
        new = np.empty_like(centroids)
        sizes = np.bincount(labels, minlength=cfg.k)
        for j in range(cfg.k):
            if sizes[j]:
                new[j] = x[labels == j].mean(axis=0)
        empty = np.flatnonzero(sizes == 0)
        if empty.size:
            # reseed empty clusters on the points farthest from their centroid
            far = np.argsort(-d[np.arange(n), labels], kind="stable")
            for j, i in zip(empty, far):
                new[j] = x[i]
                labels[i] = j
        shift = np.sqrt(np.square(new - centroids).sum(axis=1)).max()
        centroids = new
        if shift <= cfg.tolerance:
            break
    d = cdist(x, centroids, "sqeuclidean")
    labels = d.argmin(axis=1)
    return labels, centroids, history


def kmeans(x, cfg: KMeansConfig) -> Partition:
    """Canonical partition found by Lloyd's algorithm."""
    labels, _, _ = lloyd(x, cfg)
    return canonicalise(labels)


def generate_pool(x, k_range: Iterable[int], repeats: int = 1, seed: int = 0,
                  discard_degenerate: bool = True) -> Ensemble:
    """One KMeans run per (k, repeat), each on its own spawned seed."""
    ks = list(k_range)
    if not ks or repeats < 1:
        raise InvalidInputError("empty k range or repeats < 1")
    seeds = np.random.SeedSequence(seed).spawn(len(ks) * repeats)
    models = []
    for idx, (k, r) in enumerate((k, r) for k in ks for r in range(repeats)):
        ss = seeds[idx]
        cfg = KMeansConfig(k=k, seed=int(ss.generate_state(1)[0]))
        p = kmeans(x, cfg)
        if discard_degenerate and is_degenerate(p):
            continue
        models.append(p)
    if not models:
        raise InvalidInputError("every generated partition was degenerate")
    return Ensemble(models)
