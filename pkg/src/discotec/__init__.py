"""Rank clustering models by their distance to the ensemble consensus."""

__version__ = "0.1.0"

from .partitions import (  # noqa: E402
    ConnectivityMatrix,
    Ensemble,
    InvalidInputError,
    Partition,
    canonicalise,
    connectivity,
    is_degenerate,
)
from .consensus import BinarisedConsensus, ConsensusMatrix, binarise, build_consensus, mean_threshold  # noqa: E402
from .scoring import (  # noqa: E402
    ConstraintSet,
    ContractViolationError,
    DistanceKind,
    ScoreReport,
    binary_discotec_score,
    discotec_score,
    informativeness,
    pair_distance,
    rank_ensemble,
)
from .agreement import aari, anmi, ari, nmi  # noqa: E402

__all__ = [
    "BinarisedConsensus", "ConnectivityMatrix", "ConsensusMatrix", "ConstraintSet",
    "ContractViolationError", "DistanceKind", "Ensemble", "InvalidInputError", "Partition",
    "ScoreReport", "aari", "anmi", "ari", "binarise", "binary_discotec_score", "build_consensus",
    "canonicalise", "connectivity", "discotec_score", "informativeness", "is_degenerate",
    "mean_threshold", "nmi", "pair_distance", "rank_ensemble",
]
