"""Reading and writing partitions, constraints, targets, data and JSON reports.

All observation indices are 0-based.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .partitions import Ensemble, InvalidInputError, Partition, canonicalise
from .scoring import ConstraintSet


class FormatError(InvalidInputError):
    """Malformed input file; the message carries ``path:line:column``."""

    def __init__(self, path, line: int, column: Optional[int], message: str):
        where = f"{path}:{line}" + (f":{column}" if column is not None else "")
        super().__init__(f"{where}: {message}")
        self.path, self.line, self.column = str(path), line, column


def _read_rows(path) -> list:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [(i + 1, row) for i, row in enumerate(csv.reader(fh)) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise FormatError(path, 0, None, f"cannot read file ({exc.strerror})") from None
    except (UnicodeDecodeError, csv.Error) as exc:
        raise FormatError(path, 0, None, f"not a UTF-8 CSV file ({exc})") from None


def _is_int(cell: str) -> bool:
    try:
        int(cell.strip())
        return True
    except ValueError:
        return False


def _int_table(path) -> tuple[Optional[list], np.ndarray]:
    rows = _read_rows(path)
    if not rows:
        raise FormatError(path, 1, None, "file is empty")
    header = None
    if not all(_is_int(c) for c in rows[0][1]):
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
        if not rows:
            raise FormatError(path, 2, None, "no data rows after header")
    width = len(header) if header is not None else len(rows[0][1])
    out = np.empty((len(rows), width), dtype=np.int64)
    for r, (line, row) in enumerate(rows):
        if len(row) != width:
            raise FormatError(path, line, None, f"expected {width} columns, found {len(row)}")
        for c, cell in enumerate(row):
            try:
                out[r, c] = int(cell.strip())
            except ValueError:
                raise FormatError(path, line, c + 1, f"not an integer label: {cell!r}") from None
            except OverflowError:
                raise FormatError(path, line, c + 1, f"label out of range: {cell!r}") from None
    return header, out


def read_partitions(path) -> Ensemble:
    """Read a CSV where row r, column c is the label of observation r under model c.

    Labels are canonicalised, so any integer ids (including negatives) work.
    """
    _, table = _int_table(path)
    return Ensemble([canonicalise(table[:, c]) for c in range(table.shape[1])])


def write_partitions(path, e: Ensemble, header: bool = True) -> None:
    labels = e.label_matrix()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow([f"model_{i}" for i in range(e.t)])
        w.writerows(labels.tolist())


def read_targets(path) -> Partition:
    """Single-column label file (header optional)."""
    _, table = _int_table(path)
    if table.shape[1] != 1:
        raise FormatError(path, 1, None, f"targets need exactly one column, found {table.shape[1]}")
    return canonicalise(table[:, 0])


def write_targets(path, p: Partition, header: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header:
            fh.write("target\n")
        fh.write("".join(f"{int(v)}\n" for v in p.labels))


def read_data(path) -> np.ndarray:
    """Numeric CSV matrix, one observation per row (header optional)."""
    rows = _read_rows(path)
    if not rows:
        raise FormatError(path, 1, None, "file is empty")

    def floats(row):
        try:
            return [float(c) for c in row]
        except ValueError:
            return None

    if floats(rows[0][1]) is None:
        rows = rows[1:]
    if not rows:
        raise FormatError(path, 2, None, "no data rows")
    width = len(rows[0][1])
    out = np.empty((len(rows), width))
    for r, (line, row) in enumerate(rows):
        if len(row) != width:
            raise FormatError(path, line, None, f"expected {width} columns, found {len(row)}")
        for c, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise FormatError(path, line, c + 1, f"not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise FormatError(path, line, c + 1, f"non-finite value: {cell!r}")
            out[r, c] = v
    return out


def read_constraints(path, n: Optional[int] = None) -> ConstraintSet:
    """Parse ``ML i j`` / ``CL i j`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(path, 0, None, f"cannot read file ({exc.strerror})") from None
    except UnicodeDecodeError as exc:
        raise FormatError(path, 0, None, f"not UTF-8 ({exc})") from None
    ml, cl = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(path, lineno, None, f"expected 'ML i j' or 'CL i j', got {raw.strip()!r}")
        kind = parts[0].upper()
        if kind not in ("ML", "CL"):
            raise FormatError(path, lineno, 1, f"constraint type must be ML or CL, got {parts[0]!r}")
        idx = []
        for col, tok in ((2, parts[1]), (3, parts[2])):
            if not _is_int(tok) or not 0 <= int(tok) < 2**62:
                raise FormatError(path, lineno, col, f"index must be a non-negative integer, got {tok!r}")
            if n is not None and int(tok) >= n:
                raise FormatError(path, lineno, col, f"index {tok} out of range for n={n}")
            idx.append(int(tok))
        i, j = idx
        if i == j:
            raise FormatError(path, lineno, None, f"self-pair constraint ({i}, {j})")
        pair = (min(i, j), max(i, j))
        own, other = (ml, cl) if kind == "ML" else (cl, ml)
        if pair in other:
            raise FormatError(path, lineno, None,
                              f"pair {pair} is both ML and CL (first at line {other[pair]})")
        own.setdefault(pair, lineno)
    return ConstraintSet(frozenset(ml), frozenset(cl))


def write_constraints(path, cs: ConstraintSet) -> None:
    ml, cl = cs.arrays()
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in ml:
            fh.write(f"ML {i} {j}\n")
        for i, j in cl:
            fh.write(f"CL {i} {j}\n")


def write_matrix(path, m: np.ndarray) -> None:
    """Dense CSV; floats are written with ``repr`` so they round-trip exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(m).tolist():
            w.writerow([repr(v) if isinstance(v, float) else int(v) for v in row])


def read_matrix(path) -> np.ndarray:
    rows = _read_rows(path)
    return np.array([[float(c) for c in row] for _, row in rows])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        # JSON has no inf/nan; keep them recoverable
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_report(path, report: dict, seed=None, config: Optional[dict] = None) -> dict:
    """Write ``{"metadata": ..., "report": ...}``; Python floats serialise with full precision."""
    doc = {
        "metadata": {"tool": "discotec", "version": __version__, "seed": seed, "config": config or {}},
        "report": report,
    }
    doc = _jsonable(doc)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False, allow_nan=False)
        fh.write("\n")
    return doc


def read_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
