"""Label-space synthetic ensembles with controlled accuracy.

Randomness follows one rule: the root ``numpy.random.SeedSequence(seed)`` is
spawned into ``t + 1`` children. Child 0 drives scenario-level draws (ground
truth, per-model rates, hubs) and child ``1 + m`` drives the perturbation of
model ``m``, so models can be generated independently and in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .partitions import Ensemble, InvalidInputError, Partition

ACCURACY_FLOOR = 0.1
HUB_LOW, HUB_HIGH = 0.2, 0.9


def perturb(gt, rho: float, rng: np.random.Generator, k: Optional[int] = None) -> Partition:
    """Keep each label with probability ``rho``, otherwise move it to another cluster.

    Moved labels are uniform over the ``k - 1`` other clusters. ``k`` defaults
    to ``max(label) + 1``.
    """
    labels = gt.labels if isinstance(gt, Partition) else np.asarray(gt, dtype=np.int64)
    k = int(labels.max()) + 1 if k is None else int(k)
    if k < 2:
        raise InvalidInputError("perturbation needs at least two clusters")
    if not 0.0 <= rho <= 1.0:
        raise InvalidInputError(f"rho must lie in [0, 1], got {rho}")
    n = labels.size
    keep = rng.random(n) < rho
    shift = rng.integers(1, k, size=n)
    return Partition(np.where(keep, labels, (labels + shift) % k))


def balanced_truth(n: int, k: int) -> Partition:
    """Round-robin labels, so cluster sizes differ by at most one."""
    return Partition(np.arange(n) % k)


@dataclass(frozen=True)
class UniformScenarioConfig:
    n: int = 200
    k: int = 10
    t: int = 50
    rho_max: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if not self.n >= self.k >= 2:
            raise InvalidInputError(f"need n >= k >= 2, got n={self.n}, k={self.k}")
        if self.t < 1:
            raise InvalidInputError("need t >= 1")
        if not ACCURACY_FLOOR < self.rho_max <= 1.0:
            raise InvalidInputError(f"rho_max must lie in (0.1, 1], got {self.rho_max}")


@dataclass(frozen=True)
class HubScenarioConfig:
    n: int = 200
    k: int = 10
    t: int = 50
    alpha: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not self.n >= self.k >= 2:
            raise InvalidInputError(f"need n >= k >= 2, got n={self.n}, k={self.k}")
        if self.t < 2:
            raise InvalidInputError("need t >= 2")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidInputError(f"alpha must lie in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class ScenarioOutput:
    ground_truth: Partition
    ensemble: Ensemble
    rates: np.ndarray
    hubs: Optional[tuple] = None
    # "A" / "B" per model for the hub scenario
    hub_of_model: Optional[tuple] = None
    config: dict = field(default_factory=dict)


def _streams(seed: int, t: int) -> tuple[np.random.Generator, list]:
    children = np.random.SeedSequence(seed).spawn(t + 1)
    return np.random.default_rng(children[0]), [np.random.default_rng(c) for c in children[1:]]


def scenario_uniform(cfg: UniformScenarioConfig) -> ScenarioOutput:
    """Models perturbed from a balanced ground truth at rates ~ U[0.1, rho_max]."""
    main, model_rngs = _streams(cfg.seed, cfg.t)
    gt = balanced_truth(cfg.n, cfg.k)
    rates = main.uniform(ACCURACY_FLOOR, cfg.rho_max, size=cfg.t)
    models = [perturb(gt, r, rng, cfg.k) for r, rng in zip(rates, model_rngs)]
    return ScenarioOutput(
        ground_truth=gt,
        ensemble=Ensemble(models),
        rates=rates,
        config={"scenario": "uniform", **cfg.__dict__},
    )


def scenario_hub(cfg: HubScenarioConfig) -> ScenarioOutput:
    """Models clustered around a poor hub (fraction alpha) and an accurate hub."""
    main, model_rngs = _streams(cfg.seed, cfg.t)
    gt = balanced_truth(cfg.n, cfg.k)
    hub_a = perturb(gt, HUB_LOW, main, cfg.k)
    hub_b = perturb(gt, HUB_HIGH, main, cfg.k)
    rates = main.uniform(HUB_LOW, HUB_HIGH, size=cfg.t)
    n_a = int(np.floor(cfg.alpha * cfg.t + 1e-9))
    which = tuple("A" if m < n_a else "B" for m in range(cfg.t))
    models = [
        perturb(hub_a if h == "A" else hub_b, r, rng, cfg.k)
        for h, r, rng in zip(which, rates, model_rngs)
    ]
    return ScenarioOutput(
        ground_truth=gt,
        ensemble=Ensemble(models),
        rates=rates,
        hubs=(hub_a, hub_b),
        hub_of_model=which,
        config={"scenario": "hub", **cfg.__dict__},
    )
