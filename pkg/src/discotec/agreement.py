"""Agreement between partitions: ARI, NMI and their ensemble averages."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .partitions import Ensemble, InvalidInputError, Partition


def _labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray

    @classmethod
    def from_partitions(cls, p, q) -> "ContingencyTable":
        a, b = _labels(p), _labels(q)
        if a.shape != b.shape:
            raise InvalidInputError(f"length mismatch: {a.size} vs {b.size}")
        _, ai = np.unique(a, return_inverse=True)
        _, bi = np.unique(b, return_inverse=True)
        ka, kb = ai.max() + 1, bi.max() + 1
        counts = np.bincount(ai.ravel() * kb + bi.ravel(), minlength=ka * kb).reshape(ka, kb)
        return cls(counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def rows(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def cols(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _pairs(x) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int((x * (x - 1) // 2).sum())


def ari(p, q) -> float:
    """Hubert-Arabie adjusted Rand index.

    Evaluated in exact integer arithmetic as
    ``(N * s_ij - s_a * s_b) / (N * (s_a + s_b) / 2 - s_a * s_b)`` with ``N``
    the number of observation pairs and ``s`` the within-cell pair counts.
    """
    table = ContingencyTable.from_partitions(p, q)
    n = table.n
    sum_ij = _pairs(table.counts)
    sum_a = _pairs(table.rows)
    sum_b = _pairs(table.cols)
    total = n * (n - 1) // 2
    num = 2 * (total * sum_ij - sum_a * sum_b)
    den = total * (sum_a + sum_b) - 2 * sum_a * sum_b
    if den == 0:
        # both all-singletons or both one cluster
        nz = table.counts > 0
        same = bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))
        return 1.0 if same else 0.0
    return num / den


def _entropy(counts: np.ndarray, n: int) -> float:
    pr = counts[counts > 0] / n
    # fsum makes the result independent of label order
    return -math.fsum(pr * np.log(pr))


def nmi(p, q) -> float:
    """Mutual information normalised by the geometric mean of the entropies."""
    table = ContingencyTable.from_partitions(p, q)
    n = table.n
    h_p = _entropy(table.rows, n)
    h_q = _entropy(table.cols, n)
    if h_p == 0.0 or h_q == 0.0:
        return 1.0 if h_p == h_q else 0.0
    nz = table.counts > 0
    pij = table.counts[nz] / n
    outer = np.outer(table.rows, table.cols)[nz] / (n * n)
    mi = math.fsum(pij * (np.log(pij) - np.log(outer)))
    return float(np.clip(mi / np.sqrt(h_p * h_q), 0.0, 1.0))


def pairwise_matrix(e: Ensemble, metric: Callable = ari) -> np.ndarray:
    """Symmetric T x T matrix of ``metric`` over unordered pairs of models.

    The metric is called exactly T(T-1)/2 times; the diagonal is left at 1.
    """
    t = len(e)
    out = np.ones((t, t))
    for i in range(t):
        for j in range(i + 1, t):
            out[i, j] = out[j, i] = metric(e[i], e[j])
    return out


def _average_row(m: np.ndarray) -> np.ndarray:
    t = m.shape[0]
    return (m.sum(axis=1) - np.diag(m)) / (t - 1)


def average_agreement(e: Ensemble, metric: Callable = ari) -> np.ndarray:
    """Average agreement of every model with all the others."""
    if len(e) < 2:
        raise InvalidInputError("average agreement needs at least two models")
    return _average_row(pairwise_matrix(e, metric))


def aari(e: Ensemble, t: int) -> float:
    """Average ARI of model ``t`` against every other model (higher is better)."""
    if len(e) < 2:
        raise InvalidInputError("AARI needs at least two models")
    others = [ari(e[t], e[s]) for s in range(len(e)) if s != t]
    return float(np.mean(others))


def anmi(e: Ensemble, t: int) -> float:
    """Average NMI of model ``t`` against every other model (higher is better)."""
    if len(e) < 2:
        raise InvalidInputError("ANMI needs at least two models")
    others = [nmi(e[t], e[s]) for s in range(len(e)) if s != t]
    return float(np.mean(others))


def aari_all(e: Ensemble) -> np.ndarray:
    return average_agreement(e, ari)


def anmi_all(e: Ensemble) -> np.ndarray:
    return average_agreement(e, nmi)
