"""Hard partitions, ensembles of partitions and their connectivity matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an input violates a documented precondition."""


def _as_label_array(labels) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise InvalidInputError(f"labels must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError("labels must be non-empty")
    if arr.dtype.kind not in "iub":
        if arr.dtype.kind == "f" and np.all(np.isfinite(arr)) and np.all(arr == np.round(arr)):
            arr = arr.astype(np.int64)
        else:
            raise InvalidInputError("labels must be integers")
    arr = arr.astype(np.int64, copy=True)
    if arr.min() < 0:
        raise InvalidInputError("labels must be non-negative")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Partition:
    """A hard assignment of ``n`` observations to clusters.

    Labels are stored as given (non-negative integers); use :func:`canonicalise`
    to relabel them ``0..k-1`` by order of first appearance.
    """

    labels: np.ndarray

    def __init__(self, labels):
        object.__setattr__(self, "labels", _as_label_array(labels))

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def k(self) -> int:
        return int(np.unique(self.labels).size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, k={self.k})"


def canonicalise(p) -> Partition:
    """Relabel clusters as ``0..k-1`` in order of first appearance.

    >>> canonicalise([5, 5, 9, 2]).labels.tolist()
    [0, 0, 1, 2]
    """
    labels = p.labels if isinstance(p, Partition) else np.asarray(p)
    if labels.size == 0:
        raise InvalidInputError("labels must be non-empty")
    if labels.ndim != 1:
        raise InvalidInputError("labels must be one-dimensional")
    # negative ids (e.g. noise labels from external tools) are accepted here
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return Partition(rank[inverse.ravel()])


def is_degenerate(p: Partition) -> bool:
    """True for a single-cluster or an all-singleton partition."""
    k = p.k
    return k == 1 or k == p.n


def dense_connectivity(labels: np.ndarray) -> np.ndarray:
    """Boolean ``n x n`` co-membership matrix of a label vector."""
    return labels[:, None] == labels[None, :]


@dataclass(frozen=True, eq=False)
class ConnectivityMatrix:
    """Symmetric binary co-membership matrix stored as packed bit rows."""

    n: int
    bits: np.ndarray

    @classmethod
    def from_dense(cls, dense) -> "ConnectivityMatrix":
        dense = np.asarray(dense, dtype=bool)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise InvalidInputError("connectivity must be a square matrix")
        bits = np.packbits(dense, axis=1)
        bits.setflags(write=False)
        return cls(n=dense.shape[0], bits=bits)

    def to_dense(self) -> np.ndarray:
        return np.unpackbits(self.bits, axis=1, count=self.n).astype(bool)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return int((self.bits[i, j >> 3] >> (7 - (j & 7))) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConnectivityMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))


def connectivity(p: Partition) -> ConnectivityMatrix:
    """Connectivity matrix of ``p``: entry (i, j) is 1 iff i and j share a cluster."""
    return ConnectivityMatrix.from_dense(dense_connectivity(p.labels))


@dataclass(frozen=True)
class Ensemble:
    """An ordered pool of partitions over the same observations."""

    partitions: tuple

    def __init__(self, partitions: Iterable):
        parts = tuple(p if isinstance(p, Partition) else Partition(p) for p in partitions)
        if not parts:
            raise InvalidInputError("an ensemble needs at least one partition")
        sizes = {p.n for p in parts}
        if len(sizes) != 1:
            raise InvalidInputError(f"partitions disagree on the number of observations: {sorted(sizes)}")
        object.__setattr__(self, "partitions", parts)

    @property
    def n(self) -> int:
        return self.partitions[0].n

    @property
    def t(self) -> int:
        return len(self.partitions)

    def __len__(self) -> int:
        return len(self.partitions)

    def __iter__(self):
        return iter(self.partitions)

    def __getitem__(self, i) -> Partition:
        return self.partitions[i]

    def label_matrix(self) -> np.ndarray:
        """Labels as an ``n x T`` integer array, one column per model."""
        return np.stack([p.labels for p in self.partitions], axis=1)

    def select(self, indices: Sequence[int]) -> "Ensemble":
        return Ensemble([self.partitions[i] for i in indices])

    def without_degenerate(self) -> tuple["Ensemble", list[int]]:
        """Drop degenerate members, returning the reduced ensemble and kept indices."""
        kept = [i for i, p in enumerate(self.partitions) if not is_degenerate(p)]
        if not kept:
            raise InvalidInputError("every partition in the ensemble is degenerate")
        return self.select(kept), kept
