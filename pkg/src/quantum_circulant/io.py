"""File formats: graph spec JSON, CSV tables, JSON reports, and atomic writes."""
from __future__ import annotations

import contextlib
import csv
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FileNotFound, GraphError, SchemaError
from .graph import MetricGraph, validate_spec
from .solver import KIND_NAMES, Spectrum

SPECTRUM_COLUMNS = ("k", "multiplicity", "provenance", "rep_index", "edge_class", "harmonic_m")
NNSD_COLUMNS = ("bin_center", "density")
R2_COLUMNS = ("x", "R2")
CDF_COLUMNS = ("s", "empirical_cdf", "wigner_cdf")
METRIC_KINDS = ("symmetric", "generic", "random_uniform", "random_symmetric")


def fmt(x) -> str:
    """Lossless text form of a float (17 significant digits)."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# graph spec files
# ---------------------------------------------------------------------------

def _random_params(body, kind: str) -> tuple[float, float, int]:
    if not isinstance(body, dict):
        raise SchemaError(f"metric.{kind} must be an object with lo, hi, seed")
    unknown = set(body) - {"lo", "hi", "seed"}
    if unknown:
        raise SchemaError(f"metric.{kind}: unknown keys {sorted(unknown)}")
    try:
        lo, hi, seed = float(body["lo"]), float(body["hi"]), int(body["seed"])
    except KeyError as exc:
        raise SchemaError(f"metric.{kind} lacks {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"metric.{kind}: {exc}") from None
    if not 0 < lo <= hi or not math.isfinite(hi):
        raise SchemaError(f"metric.{kind}: need 0 < lo <= hi, got ({lo}, {hi})")
    return lo, hi, seed


def _float_list(body, key: str) -> list[float]:
    if not isinstance(body, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                             for x in body):
        raise SchemaError(f"metric.{key} must be a list of numbers")
    return [float(x) for x in body]


def graph_from_dict(doc) -> MetricGraph:
    """Build a graph from the decoded spec document.

    ``metric`` holds exactly one of ``symmetric`` (class lengths), ``generic``
    (edge lengths in canonical order), ``random_uniform`` (edge lengths drawn
    from U(lo, hi)) or ``random_symmetric`` (class lengths drawn likewise).
    Graph validation failures are reported as :class:`SchemaError`.
    """
    if not isinstance(doc, dict):
        raise SchemaError("graph spec must be a JSON object")
    missing = {"n", "a", "metric"} - set(doc)
    if missing:
        raise SchemaError(f"graph spec lacks {sorted(missing)}")
    n, a, metric = doc["n"], doc["a"], doc["metric"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise SchemaError("n must be an integer")
    if not isinstance(a, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in a):
        raise SchemaError("a must be a list of integers")
    if not isinstance(metric, dict) or len(metric) != 1:
        raise SchemaError(f"metric must be an object with exactly one of {METRIC_KINDS}")
    (kind, body), = metric.items()
    try:
        spec = validate_spec(n, a)
        if kind == "symmetric":
            return MetricGraph.symmetric(spec, _float_list(body, kind))
        if kind == "generic":
            return MetricGraph.generic(spec, _float_list(body, kind))
        if kind == "random_uniform":
            lo, hi, seed = _random_params(body, kind)
            return MetricGraph.random_generic(spec, lo, hi, seed=seed)
        if kind == "random_symmetric":
            lo, hi, seed = _random_params(body, kind)
            return MetricGraph.random_symmetric(spec, lo, hi, seed=seed)
    except GraphError as exc:
        raise SchemaError(f"{type(exc).__name__}: {exc}") from exc
    raise SchemaError(f"unknown metric kind {kind!r}; expected one of {METRIC_KINDS}")


def graph_to_dict(g: MetricGraph) -> dict:
    if g.class_lengths is not None:
        metric = {"symmetric": [float(x) for x in g.class_lengths]}
    else:
        metric = {"generic": [float(x) for x in g.lengths]}
    return {"n": g.n, "a": list(g.spec.a), "metric": metric}


def load_graph(path) -> MetricGraph:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FileNotFound(f"graph spec file not found: {path}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    return graph_from_dict(doc)


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------

@contextlib.contextmanager
def atomic_output(path):
    """Yield a temporary path that replaces ``path`` only if the block succeeds."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    os.close(fd)
    try:
        yield Path(tmp)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with atomic_output(path) as tmp, open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _opt(x: int) -> str:
    return "" if x < 0 else str(int(x))


def write_spectrum_csv(path, s: Spectrum) -> None:
    rows = ((fmt(k), int(m), KIND_NAMES[int(kd)], _opt(r), _opt(e), _opt(h))
            for k, m, kd, r, e, h in zip(s.k, s.multiplicity, s.kind, s.rep_index,
                                          s.edge_class, s.harmonic_m))
    _write_rows(path, SPECTRUM_COLUMNS, rows)


def write_columns_csv(path, header: Sequence[str], *columns) -> None:
    _write_rows(path, header, ([fmt(v) for v in row] for row in zip(*columns)))


def write_json(path, payload: dict) -> None:
    with atomic_output(path) as tmp:
        tmp.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# reading
# ---------------------------------------------------------------------------

def _read_table(path, header: Sequence[str]) -> list[list[str]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFound(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != tuple(header):
        raise SchemaError(f"{path}: expected header {','.join(header)}")
    return rows[1:]


def read_spectrum_csv(path, graph: MetricGraph | None = None) -> Spectrum:
    rows = _read_table(path, SPECTRUM_COLUMNS)
    codes = {name: code for code, name in KIND_NAMES.items()}
    try:
        cols = list(zip(*rows)) if rows else [()] * 6
        k = np.array(cols[0], dtype=float)
        mult = np.array(cols[1], dtype=np.int64)
        kind = np.array([codes[x] for x in cols[2]], dtype=np.int64)
        rest = [np.array([int(x) if x else -1 for x in c], dtype=np.int64) for c in cols[3:]]
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed row ({exc})") from None
    return Spectrum(graph, k, mult, kind, *rest)


def read_columns_csv(path, header: Sequence[str]) -> tuple[np.ndarray, ...]:
    rows = _read_table(path, header)
    try:
        data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    except ValueError as exc:
        raise SchemaError(f"{path}: malformed row ({exc})") from None
    return tuple(data.T)


def read_levels(path) -> np.ndarray:
    """k values of a spectrum CSV expanded by multiplicity."""
    return read_spectrum_csv(path).levels()
