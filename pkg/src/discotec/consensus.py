"""Consensus (co-association) matrices and their mean-threshold binarisation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .partitions import ConnectivityMatrix, Ensemble, InvalidInputError


@dataclass(frozen=True, eq=False)
class ConsensusMatrix:
    """Average of ``t`` connectivity matrices, kept exactly as integer counts.

    ``counts[i, j]`` is the number of partitions putting i and j together; the
    consensus value is ``counts / t``.
    """

    counts: np.ndarray
    t: int

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise InvalidInputError("consensus counts must be a square matrix")
        if self.t < 1:
            raise InvalidInputError("consensus needs t >= 1")
        counts = counts.astype(np.int32 if self.t < 2**31 else np.int64, copy=True)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def values(self) -> np.ndarray:
        return self.counts / self.t

    def exact(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.counts[i, j]), self.t)

    @classmethod
    def from_binary(cls, bits) -> "ConsensusMatrix":
        """Treat a 0/1 matrix as the consensus of a single partition."""
        if isinstance(bits, (ConnectivityMatrix, BinarisedConsensus)):
            bits = bits.to_dense()
        return cls(np.asarray(bits, dtype=np.int32), 1)


@dataclass(frozen=True, eq=False)
class BinarisedConsensus:
    """Consensus thresholded at its own mean; ties map to 1."""

    bits: np.ndarray
    threshold: float

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.bits

    def __eq__(self, other) -> bool:
        if isinstance(other, BinarisedConsensus):
            return np.array_equal(self.bits, other.bits)
        if isinstance(other, ConnectivityMatrix):
            return self.n == other.n and np.array_equal(self.bits, other.to_dense())
        return NotImplemented

    __hash__ = None


def build_consensus(e: Ensemble) -> ConsensusMatrix:
    """Count, for every pair of observations, how many partitions co-cluster them."""
    if not isinstance(e, Ensemble):
        e = Ensemble(e)
    n = e.n
    counts = np.zeros((n, n), dtype=np.int32)
    for p in e:
        lab = p.labels
        counts += lab[:, None] == lab[None, :]
    return ConsensusMatrix(counts, e.t)


def mean_threshold(c: ConsensusMatrix) -> float:
    """Mean over all n^2 entries, diagonal included."""
    # integer sum first so the threshold is the correctly rounded rational
    return float(Fraction(int(c.counts.sum(dtype=np.int64)), c.t * c.n * c.n))


def binarise(c: ConsensusMatrix) -> BinarisedConsensus:
    """Threshold the consensus at its mean value.

    The comparison ``counts / t >= total / (t n^2)`` is carried out in integers
    as ``counts * n^2 >= total`` so that ties are resolved exactly.
    """
    total = int(c.counts.sum(dtype=np.int64))
    n2 = c.n * c.n
    bits = c.counts.astype(np.int64) * n2 >= total
    bits.setflags(write=False)
    return BinarisedConsensus(bits=bits, threshold=mean_threshold(c))
