"""DISCOTEC scores: distance between each model's connectivity and the consensus.

Four variants are provided. ``KL``, ``TV`` and ``H2`` compare the binary
connectivity of a model with the real-valued consensus entry by entry, using
the Bernoulli form of the corresponding divergence. ``BINARY`` thresholds the
consensus at its mean and counts mismatching entries. All variants are
normalised by ``n**2`` so they combine with the constraint regularisation,
which is a violation rate in [0, 1]. Lower totals are better.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .consensus import BinarisedConsensus, ConsensusMatrix, binarise, build_consensus
from .partitions import ConnectivityMatrix, Ensemble, InvalidInputError, Partition


class ContractViolationError(ValueError):
    """Raised for inputs that cannot occur for a consistent connectivity/consensus pair."""


class DistanceKind(str, enum.Enum):
    KL = "kl"
    TV = "tv"
    H2 = "h2"
    BINARY = "binary"

    @classmethod
    def parse(cls, kind) -> "DistanceKind":
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).lower())
        except ValueError:
            raise InvalidInputError(f"unknown distance kind {kind!r}") from None


def _terms(kind: DistanceKind, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-entry distance when the connectivity is 0 and when it is 1."""
    c = np.asarray(c, dtype=float)
    with np.errstate(divide="ignore"):
        if kind is DistanceKind.KL:
            return -np.log1p(-c), -np.log(c)
        if kind is DistanceKind.TV:
            return c.copy(), 1.0 - c
        if kind is DistanceKind.H2:
            return 1.0 - np.sqrt(1.0 - c), 1.0 - np.sqrt(c)
    raise InvalidInputError(f"{kind} has no per-entry distance")


def pair_distance(kind, a: int, c: float) -> float:
    """Distance between Bernoulli(a) and Bernoulli(c) for a binary ``a``."""
    kind = DistanceKind.parse(kind)
    if kind is DistanceKind.BINARY:
        raise InvalidInputError("BINARY is not an entrywise divergence")
    if a not in (0, 1, True, False):
        raise InvalidInputError(f"connectivity entry must be 0 or 1, got {a!r}")
    if not 0.0 <= c <= 1.0:
        raise InvalidInputError(f"consensus entry must lie in [0, 1], got {c!r}")
    if (a == 0 and c == 1.0) or (a == 1 and c == 0.0):
        raise ContractViolationError(f"infeasible pair (a={int(a)}, c={c})")
    if c == a:
        return 0.0
    d0, d1 = _terms(kind, np.array(c))
    return float(d1 if a else d0)


def _dense(m) -> np.ndarray:
    if isinstance(m, Partition):
        return m.labels[:, None] == m.labels[None, :]
    if isinstance(m, (ConnectivityMatrix, BinarisedConsensus)):
        return m.to_dense()
    return np.asarray(m, dtype=bool)


def discotec_score(a, c: ConsensusMatrix, kind) -> float:
    """Normalised divergence between one connectivity matrix and the consensus."""
    kind = DistanceKind.parse(kind)
    if kind is DistanceKind.BINARY:
        raise InvalidInputError("use binary_discotec_score for the binarised variant")
    a = _dense(a)
    if a.shape != (c.n, c.n):
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs consensus n={c.n}")
    if np.any(a & (c.counts == 0)) or np.any(~a & (c.counts == c.t)):
        raise ContractViolationError("connectivity contradicts a unanimous consensus entry")
    d0, d1 = _terms(kind, c.values)
    return float(np.where(a, d1, d0).sum() / (c.n * c.n))


def binary_discotec_score(a, q: BinarisedConsensus) -> float:
    """Fraction of the n^2 ordered pairs where connectivity and ``q`` disagree."""
    a = _dense(a)
    qb = _dense(q)
    if a.shape != qb.shape:
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs {qb.shape}")
    n = a.shape[0]
    return int(np.count_nonzero(a != qb)) / (n * n)


def _pair(i, j) -> tuple[int, int]:
    i, j = int(i), int(j)
    return (i, j) if i <= j else (j, i)


@dataclass(frozen=True)
class ConstraintSet:
    """Must-link and cannot-link pairs over 0-based observation indices."""

    must_link: frozenset = field(default_factory=frozenset)
    cannot_link: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ml = frozenset(_pair(*p) for p in self.must_link)
        cl = frozenset(_pair(*p) for p in self.cannot_link)
        for i, j in ml | cl:
            if i < 0:
                raise InvalidInputError(f"negative index in constraint ({i}, {j})")
            if i == j:
                raise InvalidInputError(f"self-pair constraint ({i}, {j})")
        both = ml & cl
        if both:
            raise InvalidInputError(f"pairs both must-link and cannot-link: {sorted(both)[:5]}")
        object.__setattr__(self, "must_link", ml)
        object.__setattr__(self, "cannot_link", cl)

    @classmethod
    def from_pairs(cls, must_link: Iterable = (), cannot_link: Iterable = ()) -> "ConstraintSet":
        return cls(frozenset(map(tuple, must_link)), frozenset(map(tuple, cannot_link)))

    @classmethod
    def from_targets(cls, targets, observations) -> "ConstraintSet":
        """All pairwise constraints implied by ``targets`` on the given observations."""
        labels = targets.labels if isinstance(targets, Partition) else np.asarray(targets)
        obs = sorted(int(o) for o in observations)
        ml, cl = set(), set()
        for x, i in enumerate(obs):
            for j in obs[x + 1:]:
                (ml if labels[i] == labels[j] else cl).add((i, j))
        return cls(frozenset(ml), frozenset(cl))

    @property
    def n_ml(self) -> int:
        return len(self.must_link)

    @property
    def n_cl(self) -> int:
        return len(self.cannot_link)

    def __len__(self) -> int:
        return self.n_ml + self.n_cl

    def max_index(self) -> int:
        return max((j for _, j in self.must_link | self.cannot_link), default=-1)

    def check(self, n: int) -> None:
        if self.max_index() >= n:
            raise InvalidInputError(f"constraint index {self.max_index()} out of range for n={n}")

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ml = np.array(sorted(self.must_link), dtype=np.int64).reshape(-1, 2)
        cl = np.array(sorted(self.cannot_link), dtype=np.int64).reshape(-1, 2)
        return ml, cl


def informativeness(a, cs: ConstraintSet) -> float:
    """Fraction of constraints violated by a connectivity matrix (or partition)."""
    if len(cs) == 0:
        raise InvalidInputError("empty constraint set; pass no constraints instead")
    if isinstance(a, Partition):
        return float(constraint_violations(Ensemble([a]), cs)[0])
    n = a.n if isinstance(a, ConnectivityMatrix) else np.asarray(a).shape[0]
    cs.check(n)
    get = a.__getitem__ if isinstance(a, ConnectivityMatrix) else (lambda ij: int(np.asarray(a)[ij]))
    violated = sum(1 - get(p) for p in cs.must_link) + sum(get(p) for p in cs.cannot_link)
    return violated / len(cs)


def constraint_violations(e: Ensemble, cs: ConstraintSet) -> np.ndarray:
    """Violation rate of every model in ``e``; vectorised over models."""
    if len(cs) == 0:
        raise InvalidInputError("empty constraint set; pass no constraints instead")
    cs.check(e.n)
    labels = e.label_matrix()
    ml, cl = cs.arrays()
    violated = np.zeros(e.t, dtype=np.int64)
    if len(ml):
        violated += np.count_nonzero(labels[ml[:, 0]] != labels[ml[:, 1]], axis=0)
    if len(cl):
        violated += np.count_nonzero(labels[cl[:, 0]] == labels[cl[:, 1]], axis=0)
    return violated / len(cs)


@dataclass(frozen=True, eq=False)
class ScoreReport:
    """Scores of every model under one method, and the ranking they induce.

    ``totals`` is ``scores + regularisation`` for lower-is-better methods and
    ``scores - regularisation`` when ``higher_is_better`` is set. The ranking
    lists model indices from best to worst; ties go to the smaller index.
    """

    method: str
    scores: np.ndarray
    regularisation: np.ndarray
    totals: np.ndarray
    ranking: np.ndarray
    higher_is_better: bool = False

    @classmethod
    def build(cls, method: str, scores, regularisation=None, higher_is_better: bool = False) -> "ScoreReport":
        scores = np.asarray(scores, dtype=float)
        reg = np.zeros_like(scores) if regularisation is None else np.asarray(regularisation, dtype=float)
        totals = scores - reg if higher_is_better else scores + reg
        ranking = rank_order(totals, higher_is_better)
        return cls(method, scores, reg, totals, ranking, higher_is_better)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "higher_is_better": self.higher_is_better,
            "scores": [float(x) for x in self.scores],
            "regularisation": [float(x) for x in self.regularisation],
            "totals": [float(x) for x in self.totals],
            "ranking": [int(x) for x in self.ranking],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreReport":
        return cls(
            method=d["method"],
            scores=np.asarray(d["scores"], dtype=float),
            regularisation=np.asarray(d["regularisation"], dtype=float),
            totals=np.asarray(d["totals"], dtype=float),
            ranking=np.asarray(d["ranking"], dtype=np.int64),
            higher_is_better=bool(d.get("higher_is_better", False)),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScoreReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def rank_order(values, higher_is_better: bool = False) -> np.ndarray:
    """Indices from best to worst; stable so ties keep index order."""
    values = np.asarray(values, dtype=float)
    key = -values if higher_is_better else values
    return np.argsort(key, kind="stable")


def discotec_scores(e: Ensemble, kind, consensus: Optional[ConsensusMatrix] = None) -> np.ndarray:
    """Unregularised score of every member of ``e`` against the ensemble's consensus."""
    kind = DistanceKind.parse(kind)
    c = build_consensus(e) if consensus is None else consensus
    n2 = e.n * e.n
    out = np.empty(e.t)
    if kind is DistanceKind.BINARY:
        q = binarise(c).bits
        q_total = int(np.count_nonzero(q))
        for t, p in enumerate(e):
            lab = p.labels
            a = lab[:, None] == lab[None, :]
            both = int(np.count_nonzero(a & q))
            # |Q - A| summed = |Q| + |A| - 2|Q & A|
            a_total = int(np.square(np.bincount(lab)).sum())
            out[t] = (q_total + a_total - 2 * both) / n2
        return out
    d0, d1 = _terms(kind, c.values)
    # unanimous entries are never hit by the infeasible branch for a member
    d0[c.counts == c.t] = 0.0
    d1[c.counts == 0] = 0.0
    base = d0.sum()
    delta = d1 - d0
    for t, p in enumerate(e):
        lab = p.labels
        a = lab[:, None] == lab[None, :]
        out[t] = (base + delta[a].sum()) / n2
    return out


def rank_ensemble(e, kind, constraints: Optional[ConstraintSet] = None) -> ScoreReport:
    """Score every model of ``e`` and rank them, best (lowest total) first."""
    if not isinstance(e, Ensemble):
        e = Ensemble(e)
    kind = DistanceKind.parse(kind)
    if e.t < 3:
        warnings.warn(f"consensus of only {e.t} models is not meaningful (need T >= 3)", stacklevel=2)
    scores = discotec_scores(e, kind)
    reg = None
    if constraints is not None and len(constraints):
        reg = constraint_violations(e, constraints)
    return ScoreReport.build(kind.value, scores, reg)
