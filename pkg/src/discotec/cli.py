"""Command line interface: ``discotec {rank,synth,bench,consensus}``.

Exit status is 0 on success and 2 for unusable input (malformed files,
dimension mismatches, invalid options). ``bench`` exits 1 when every dataset
failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import io as dio
from .consensus import binarise, build_consensus, mean_threshold
from .evaluation import (
    ALL_METHODS,
    Dataset,
    constraint_experiment,
    default_threads,
    method_scores,
    run_protocol,
)
from .partitions import Ensemble, InvalidInputError
from .scoring import ScoreReport, constraint_violations
from .synthetic import HubScenarioConfig, UniformScenarioConfig, scenario_hub, scenario_uniform

RANK_METHODS = ("kl", "tv", "h2", "binary", "aari", "anmi")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _method_list(text: str) -> list:
    return [m.strip().lower() for m in text.split(",") if m.strip()]


def score_partitions(e: Ensemble, method: str, constraints=None) -> ScoreReport:
    base = method_scores(method, e)
    reg = None
    if constraints is not None and len(constraints):
        reg = constraint_violations(e, constraints)
    return ScoreReport.build(method, base.scores, reg, higher_is_better=base.maximise)


def cmd_rank(args) -> int:
    e = dio.read_partitions(args.partitions)
    cs = dio.read_constraints(args.constraints, n=e.n) if args.constraints else None
    report = score_partitions(e, args.method, cs)
    if args.out:
        dio.write_report(args.out, report.to_dict(), config={
            "command": "rank", "partitions": str(args.partitions), "method": args.method,
            "constraints": str(args.constraints) if args.constraints else None,
            "n": e.n, "models": e.t,
        })
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["rank", "model", "score"])
    for r, m in enumerate(report.ranking, start=1):
        out.writerow([r, int(m), repr(float(report.totals[m]))])
    return 0


def cmd_synth(args) -> int:
    if args.scenario == "uniform":
        cfg = UniformScenarioConfig(n=args.n, k=args.k, t=args.t, rho_max=args.rho_max, seed=args.seed)
        out = scenario_uniform(cfg)
    else:
        cfg = HubScenarioConfig(n=args.n, k=args.k, t=args.t, alpha=args.alpha, seed=args.seed)
        out = scenario_hub(cfg)
    dio.write_partitions(args.out, out.ensemble)
    if args.truth_out:
        dio.write_targets(args.truth_out, out.ground_truth)
    meta = {
        "rates": out.rates,
        "hub_of_model": list(out.hub_of_model) if out.hub_of_model else None,
    }
    meta_path = args.meta_out or f"{args.out}.meta.json"
    dio.write_report(meta_path, meta, seed=args.seed, config=out.config)
    return 0


def _load_manifest(path) -> list:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"{path}: cannot read manifest ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    entries = doc.get("datasets") if isinstance(doc, dict) else doc
    if not isinstance(entries, list) or not entries:
        raise UsageError(f"{path}: manifest must list at least one dataset")
    base = Path(path).parent
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "partitions" not in entry or "targets" not in entry:
            raise UsageError(f"{path}: dataset #{i} needs 'partitions' and 'targets'")
    return [(base, i, entry) for i, entry in enumerate(entries)]


def _load_dataset(base: Path, i: int, entry: dict) -> Dataset:
    def p(key):
        return base / entry[key] if entry.get(key) else None

    e = dio.read_partitions(p("partitions"))
    targets = dio.read_targets(p("targets"))
    data = dio.read_data(p("data")) if p("data") else None
    cs = dio.read_constraints(p("constraints"), n=e.n) if p("constraints") else None
    if targets.n != e.n:
        raise InvalidInputError(f"targets have {targets.n} rows, partitions have {e.n}")
    if data is not None and data.shape[0] != e.n:
        raise InvalidInputError(f"data has {data.shape[0]} rows, partitions have {e.n}")
    return Dataset(e, targets, data, cs, name=entry.get("name", f"dataset_{i}"), group=entry.get("group", "all"))


def _write_table(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def cmd_bench(args) -> int:
    methods = args.methods
    if not methods:
        raise UsageError("--methods is empty")
    unknown = [m for m in methods if m not in ALL_METHODS]
    if unknown:
        raise UsageError(f"unknown methods: {', '.join(unknown)}")
    entries = _load_manifest(args.datasets)
    datasets, failures = [], []
    for base, i, entry in entries:
        try:
            datasets.append(_load_dataset(base, i, entry))
        except InvalidInputError as exc:
            failures.append({"name": entry.get("name", f"dataset_{i}"), "error": str(exc)})
    threads = args.threads if args.threads is not None else default_threads()
    keep = args.keep_degenerate
    config = {
        "command": "bench", "manifest": str(args.datasets), "methods": methods,
        "repeats": args.repeats, "constrained_observations": args.constrained_observations,
        "discard_degenerate": not keep,
    }
    out_stem = str(args.out)[:-5] if str(args.out).endswith(".json") else str(args.out)

    if args.constrained_observations is not None:
        if not datasets:
            print("all datasets failed to load", file=sys.stderr)
            return 1
        curve = constraint_experiment(datasets, methods, args.constrained_observations, repeats=args.repeats,
                                      seed=args.seed, discard_degenerate=not keep, threads=threads)
        rows = curve.summary()
        dio.write_report(args.out, {"constraint_curve": rows, "failures": failures}, seed=args.seed, config=config)
        table = [["observations", "method", "mean", "std", "count"]]
        table += [[r["observations"], r["method"], r["mean"], r["std"], r["count"]] for r in rows]
        _write_table(f"{out_stem}.constraints.csv", table)
        for r in table:
            print(",".join(str(c) for c in r))
        return 0

    result = run_protocol(datasets, methods, discard_degenerate=not keep, threads=threads)
    result.failures = failures + result.failures
    doc = result.to_dict()
    dio.write_report(args.out, doc, seed=args.seed, config=config)
    for stat in ("kendall", "pearson", "regret_kendall", "regret_pearson", "regret_ari", "selected_ari"):
        _write_table(f"{out_stem}.{stat}.csv", result.table(stat) if result.datasets else [["method"]])
    for f in result.failures:
        print(f"warning: {f['name']}: {f['error']}", file=sys.stderr)
    if not result.datasets:
        print("all datasets failed", file=sys.stderr)
        return 1
    for row in result.table("kendall"):
        print(",".join(row))
    return 0


def cmd_consensus(args) -> int:
    e = dio.read_partitions(args.partitions)
    c = build_consensus(e)
    mu = mean_threshold(c)
    matrix = binarise(c).bits.astype(np.int64) if args.binarised else c.values
    dio.write_matrix(args.out_matrix, matrix)
    meta = {"n": e.n, "models": e.t, "mean": mu, "binarised": bool(args.binarised)}
    Path(f"{args.out_matrix}.meta.json").write_text(json.dumps(meta) + "\n", encoding="utf-8")
    print(f"mean,{mu!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discotec", description="Rank clustering models by ensemble consensus.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="score and rank the models in a partitions CSV")
    p.add_argument("partitions", type=Path)
    p.add_argument("--method", choices=RANK_METHODS, default="binary")
    p.add_argument("--constraints", type=Path, help="file of 'ML i j' / 'CL i j' lines (0-based)")
    p.add_argument("--out", type=Path, help="JSON report path")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("synth", help="generate a synthetic ensemble")
    p.add_argument("--scenario", choices=("uniform", "hub"), required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--t", type=int, default=50)
    p.add_argument("--rho-max", type=float, default=0.9)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="partitions CSV to write")
    p.add_argument("--truth-out", type=Path, help="ground-truth CSV to write")
    p.add_argument("--meta-out", type=Path, help="metadata JSON (default: <out>.meta.json)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="evaluate ranking methods against targets")
    p.add_argument("--datasets", type=Path, required=True, help="JSON manifest of datasets")
    p.add_argument("--methods", type=_method_list, required=True, help=f"comma list from {','.join(ALL_METHODS)}")
    p.add_argument("--repeats", type=int, default=50, help="constraint samples per observation count")
    p.add_argument("--constrained-observations", type=_int_list, help="e.g. 0,5,10,25,50")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help="worker threads (overrides DISCOTEC_THREADS)")
    p.add_argument("--keep-degenerate", action="store_true", help="do not drop single-cluster/all-singleton models")
    p.add_argument("--out", type=Path, required=True, help="JSON report path; CSV tables are written alongside")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("consensus", help="export the consensus matrix as CSV")
    p.add_argument("--partitions", type=Path, required=True)
    p.add_argument("--out-matrix", type=Path, required=True)
    p.add_argument("--binarised", action="store_true", help="write the mean-thresholded 0/1 matrix")
    p.set_defaults(func=cmd_consensus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
