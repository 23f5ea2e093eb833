"""Ranking-quality evaluation: correlations with external ARI, regrets, protocol runs.

A method's scores are oriented so that larger is better (minimised scores are
negated) and then correlated with the ARI of every model against the targets.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from . import agreement, indices
from .consensus import build_consensus
from .partitions import Ensemble, InvalidInputError, Partition
from .scoring import ConstraintSet, DistanceKind, constraint_violations, discotec_scores, rank_order


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation is undefined (constant input)."""


DISCOTEC_METHODS = ("kl", "tv", "h2", "binary")
ENSEMBLE_METHODS = ("aari", "anmi")
DATA_METHODS = ("wgss", "chi", "silhouette", "dbi")
ALL_METHODS = DISCOTEC_METHODS + ENSEMBLE_METHODS + DATA_METHODS

# True when larger raw scores are better
MAXIMISED = {
    "kl": False, "tv": False, "h2": False, "binary": False,
    "aari": True, "anmi": True,
    "wgss": False, "chi": True, "silhouette": True, "dbi": False,
}


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidInputError(f"vectors must be 1-D of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise InvalidInputError("correlation needs at least two entries")
    return x, y


def kendall_tau_b(x, y) -> float:
    """Kendall's tau-b (tie-corrected)."""
    x, y = _check_pair(x, y)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("all entries of one vector are tied")
    return float(stats.kendalltau(x, y, variant="b").statistic)


def pearson(x, y) -> float:
    x, y = _check_pair(x, y)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise UndefinedCorrelationError("non-finite entries")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("zero variance")
    return float(np.clip(stats.pearsonr(x, y).statistic, -1.0, 1.0))


def regret_matrix(values, maximise: bool = True) -> np.ndarray:
    """Per-dataset gap to the best method; NaN cells are treated as missing."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.size == 0:
        raise InvalidInputError("regret needs a non-empty methods x datasets matrix")
    oriented = v if maximise else -v
    with np.errstate(all="ignore"):
        best = np.nanmax(np.where(np.isnan(oriented), -np.inf, oriented), axis=0)
    return best[None, :] - oriented


def regret(values, maximise: bool = True) -> np.ndarray:
    """Average over datasets of (best value among methods - value of the method)."""
    r = regret_matrix(values, maximise)
    with np.errstate(all="ignore"):
        return np.array([np.nanmean(row) if np.any(~np.isnan(row)) else np.nan for row in r])


@dataclass
class Dataset:
    ensemble: Ensemble
    targets: Partition
    data: Optional[np.ndarray] = None
    constraints: Optional[ConstraintSet] = None
    name: str = ""
    group: str = "all"


@dataclass
class MethodScores:
    method: str
    scores: np.ndarray
    maximise: bool

    def oriented(self) -> np.ndarray:
        return self.scores if self.maximise else -self.scores


def method_scores(method: str, e: Ensemble, data=None, constraints: Optional[ConstraintSet] = None,
                  cache: Optional[dict] = None) -> MethodScores:
    """Raw per-model scores for a named method, regularised when constraints are given.

    Constraints apply to the DISCOTEC variants and AARI/ANMI only; they are
    added to minimised scores and subtracted from maximised ones.
    """
    method = method.lower()
    if method not in MAXIMISED:
        raise InvalidInputError(f"unknown method {method!r}")
    cache = {} if cache is None else cache
    maximise = MAXIMISED[method]
    if method in DISCOTEC_METHODS:
        if "consensus" not in cache:
            cache["consensus"] = build_consensus(e)
        s = discotec_scores(e, DistanceKind.parse(method), cache["consensus"])
    elif method in ENSEMBLE_METHODS:
        metric = agreement.ari if method == "aari" else agreement.nmi
        key = "pairwise_" + method
        if key not in cache:
            cache[key] = agreement.pairwise_matrix(e, metric)
        m = cache[key]
        s = (m.sum(axis=1) - np.diag(m)) / (len(e) - 1)
    else:
        if data is None:
            raise InvalidInputError(f"method {method!r} needs a data matrix")
        fn = {"wgss": indices.wgss, "chi": indices.chi, "silhouette": indices.silhouette, "dbi": indices.dbi}[method]
        vals = []
        for p in e:
            try:
                vals.append(fn(data, p))
            except indices.UndefinedIndexError:
                vals.append(-np.inf if maximise else np.inf)
        s = np.array(vals, dtype=float)
    if constraints is not None and len(constraints) and method not in DATA_METHODS:
        reg = constraint_violations(e, constraints)
        s = s - reg if maximise else s + reg
    return MethodScores(method, np.asarray(s, dtype=float), maximise)


def _safe(fn: Callable, x, y) -> float:
    try:
        return fn(x, y)
    except UndefinedCorrelationError:
        return np.nan


@dataclass
class DatasetResult:
    name: str
    group: str
    n_models: int
    kendall: dict
    pearson: dict
    selected_ari: dict
    best_ari: float


def evaluate_dataset(ds: Dataset, methods: Sequence[str], discard_degenerate: bool = True) -> DatasetResult:
    e = ds.ensemble
    if ds.targets.n != e.n:
        raise InvalidInputError(f"targets have {ds.targets.n} labels but ensemble has n={e.n}")
    if discard_degenerate:
        e, _ = e.without_degenerate()
    if len(e) < 3:
        raise InvalidInputError(f"dataset {ds.name!r} has {len(e)} models after filtering; need >= 3")
    external = np.array([agreement.ari(p, ds.targets) for p in e])
    cache: dict = {}
    kendall, pear, selected = {}, {}, {}
    for m in methods:
        ms = method_scores(m, e, ds.data, ds.constraints, cache)
        o = ms.oriented()
        kendall[m] = _safe(kendall_tau_b, o, external)
        pear[m] = _safe(pearson, o, external)
        selected[m] = float(external[rank_order(o, higher_is_better=True)[0]])
    return DatasetResult(ds.name, ds.group, len(e), kendall, pear, selected, float(external.max()))


def _summary(values: np.ndarray) -> dict:
    ok = values[~np.isnan(values)]
    return {
        "mean": float(ok.mean()) if ok.size else None,
        "std": float(ok.std()) if ok.size else None,
        "count": int(ok.size),
        "missing": int(values.size - ok.size),
    }


@dataclass
class ProtocolResult:
    methods: list
    datasets: list
    failures: list = field(default_factory=list)

    def _matrix(self, attr: str, group: Optional[str] = None) -> np.ndarray:
        rows = [d for d in self.datasets if group is None or d.group == group]
        return np.array([[getattr(d, attr)[m] for d in rows] for m in self.methods], dtype=float).reshape(
            len(self.methods), len(rows))

    def groups(self) -> list:
        seen = []
        for d in self.datasets:
            if d.group not in seen:
                seen.append(d.group)
        return seen

    def summary(self, group: Optional[str] = None) -> dict:
        """Per-method mean/std of correlations and regrets over datasets."""
        out = {}
        if not any(group is None or d.group == group for d in self.datasets):
            return out
        kt = self._matrix("kendall", group)
        pr = self._matrix("pearson", group)
        sel = self._matrix("selected_ari", group)
        r_kt = regret_matrix(kt)
        r_pr = regret_matrix(pr)
        r_sel = regret_matrix(sel)
        for i, m in enumerate(self.methods):
            out[m] = {
                "kendall": _summary(kt[i]),
                "pearson": _summary(pr[i]),
                "selected_ari": _summary(sel[i]),
                "regret_kendall": _summary(r_kt[i]),
                "regret_pearson": _summary(r_pr[i]),
                "regret_ari": _summary(r_sel[i]),
            }
        return out

    def table(self, statistic: str = "kendall") -> list:
        """Rows of ``[method, "mean±std" per group]`` for one statistic."""
        groups = self.groups()
        summaries = {g: self.summary(g) for g in groups}
        rows = [["method", *groups]]
        for m in self.methods:
            row = [m]
            for g in groups:
                s = summaries[g][m][statistic]
                row.append("" if s["mean"] is None else f"{s['mean']:.2f}±{s['std']:.2f}")
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {
            "methods": list(self.methods),
            "datasets": [d.__dict__ for d in self.datasets],
            "failures": list(self.failures),
            "summary": self.summary(),
            "groups": {g: self.summary(g) for g in self.groups()},
        }


def default_threads() -> int:
    env = os.environ.get("DISCOTEC_THREADS")
    return max(1, int(env)) if env else 1


def _map(fn: Callable, items: Sequence, threads: Optional[int]):
    threads = default_threads() if threads is None else max(1, threads)
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_protocol(datasets: Sequence[Dataset], methods: Sequence[str], discard_degenerate: bool = True,
                 threads: Optional[int] = None) -> ProtocolResult:
    """Correlate each method's ranking with the ARI to targets across datasets.

    A dataset that cannot be evaluated is recorded in ``failures``; undefined
    correlations become missing cells excluded from the averages.
    """
    methods = [m.lower() for m in methods]
    if not methods:
        raise InvalidInputError("no methods given")
    for m in methods:
        if m not in MAXIMISED:
            raise InvalidInputError(f"unknown method {m!r}")

    def one(ds):
        try:
            return evaluate_dataset(ds, methods, discard_degenerate)
        except (InvalidInputError, ValueError) as exc:
            return exc

    results, failures = [], []
    for ds, res in zip(datasets, _map(one, list(datasets), threads)):
        if isinstance(res, Exception):
            failures.append({"name": ds.name, "error": str(res)})
        else:
            results.append(res)
    return ProtocolResult(methods, results, failures)


def sample_constraints(targets: Partition, m: int, rng: np.random.Generator) -> ConstraintSet:
    """All pairwise constraints among ``m`` observations drawn without replacement."""
    if m > targets.n:
        raise InvalidInputError(f"cannot sample {m} observations out of {targets.n}")
    obs = rng.choice(targets.n, size=m, replace=False) if m else []
    return ConstraintSet.from_targets(targets, obs)


@dataclass
class ConstraintCurve:
    observations: list
    methods: list
    # kendall[m_index][method] -> array over (dataset, repeat)
    kendall: list

    def summary(self) -> list:
        rows = []
        for m_obs, per_method in zip(self.observations, self.kendall):
            for method in self.methods:
                v = np.asarray(per_method[method], dtype=float)
                rows.append({"observations": m_obs, "method": method, **_summary(v)})
        return rows


def constraint_experiment(datasets: Sequence[Dataset], methods: Sequence[str], observation_counts: Sequence[int],
                          repeats: int = 50, seed: int = 0, discard_degenerate: bool = True,
                          threads: Optional[int] = None) -> ConstraintCurve:
    """Kendall tau of regularised rankings as constraints from more observations are added.

    For every dataset and repeat, ``m`` observations are sampled and all the
    must-link/cannot-link pairs they imply under the targets are used.
    Unconstrained scores are computed once per dataset and reused.
    """
    methods = [m.lower() for m in methods]
    for m in methods:
        if m in DATA_METHODS:
            raise InvalidInputError(f"constraints are not applied to distance-based index {m!r}")
        if m not in MAXIMISED:
            raise InvalidInputError(f"unknown method {m!r}")
    seeds = np.random.SeedSequence(seed).spawn(len(datasets))

    def one(args):
        ds, ss = args
        e = ds.ensemble
        if discard_degenerate:
            e, _ = e.without_degenerate()
        external = np.array([agreement.ari(p, ds.targets) for p in e])
        cache: dict = {}
        base = {m: method_scores(m, e, None, None, cache) for m in methods}
        rngs = [np.random.default_rng(s) for s in ss.spawn(len(observation_counts))]
        out = []
        for m_obs, rng in zip(observation_counts, rngs):
            vals = {m: [] for m in methods}
            for _ in range(repeats if m_obs > 0 else 1):
                cs = sample_constraints(ds.targets, m_obs, rng)
                reg = constraint_violations(e, cs) if len(cs) else np.zeros(len(e))
                for m in methods:
                    b = base[m]
                    s = b.scores - reg if b.maximise else b.scores + reg
                    o = s if b.maximise else -s
                    vals[m].append(_safe(kendall_tau_b, o, external))
            out.append(vals)
        return out

    per_dataset = _map(one, list(zip(datasets, seeds)), threads)
    kendall = []
    for i in range(len(observation_counts)):
        kendall.append({m: np.concatenate([np.asarray(d[i][m]) for d in per_dataset]) for m in methods})
    return ConstraintCurve(list(observation_counts), methods, kendall)
