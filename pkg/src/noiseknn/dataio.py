"""JSON-Lines datasets and query files.

A dataset file holds one record per line, ``{"x": <point>, "y": <label>}`` or
``{"x": <point>, "z": <response in [0, 1]>}``,
optionally preceded by a header line ``{"meta": {...}}`` recording the point
kind and, for bitstrings, their length.  Points are written as

* real vectors: JSON arrays of numbers, e.g. ``[0.25]``;
* symbols: the label string (or an integer id when there are no labels);
* bitstrings: strings of ``0``/``1``; the one-character strings ``"0"`` and
  ``"1"`` are the two anchor points of the hypercube space.

Query files use the same point syntax with records ``{"x": <point>}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DatasetError, MetricError
from .metric import BITS, REAL, SYMBOL, Dataset, DiscreteTable, Metric, encode_bits, is_bitstring


def point_kind(x) -> str | None:
    if isinstance(x, list):
        return REAL
    if isinstance(x, str):
        return BITS if is_bitstring(x) else SYMBOL
    if isinstance(x, int) and not isinstance(x, bool):
        return SYMBOL
    return None


def _lines(source) -> Iterable[tuple[int, str]]:
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise DatasetError(f"cannot read {source}: {exc}") from exc
        lines = text.splitlines()
    else:
        lines = list(source)
    for no, line in enumerate(lines, start=1):
        if line.strip():
            yield no, line


def _records(source, need_y: bool):
    meta = None
    for no, line in _lines(source):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"invalid JSON: {exc.msg}", line=no) from None
        if not isinstance(rec, dict):
            raise DatasetError("each line must be a JSON object", line=no)
        if "meta" in rec:
            if meta is not None or not isinstance(rec["meta"], dict):
                raise DatasetError("misplaced or malformed meta record", line=no)
            meta = rec["meta"]
            continue
        if "x" not in rec or (need_y and ("y" in rec) == ("z" in rec)):
            raise DatasetError(
                "record needs key 'x'" + (" and exactly one of 'y', 'z'" if need_y else ""), line=no
            )
        yield no, rec, meta


def _encode_points(items, kind, metric: Metric | None, nbits):
    """items: (line, raw point) pairs of one kind."""
    if kind == REAL:
        dims = {len(x) for _, x in items}
        if len(dims) != 1:
            no = next(n for n, x in items if len(x) != len(items[0][1]))
            raise DatasetError("real points of differing dimension", line=no)
        out = []
        for no, x in items:
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
                raise DatasetError(f"real point must hold numbers, got {x!r}", line=no)
            out.append([float(v) for v in x])
        return np.array(out, dtype=np.float64), None, None
    if kind == SYMBOL:
        if not isinstance(metric, DiscreteTable):
            if any(isinstance(x, str) for _, x in items):
                raise DatasetError("symbol labels need a table metric (pass --spec)")
            return np.array([x for _, x in items], dtype=np.int64), None, None
        ids = []
        for no, x in items:
            try:
                ids.append(metric.symbol_id(x))
            except MetricError as exc:
                raise DatasetError(str(exc), line=no) from None
        return np.array(ids, dtype=np.int64), metric.labels, None
    lengths = {len(x) for _, x in items if len(x) > 1}
    if nbits is None:
        if len(lengths) != 1:
            raise DatasetError("cannot infer a single bitstring length; add a meta record")
        nbits = lengths.pop()
    for no, x in items:
        if len(x) > 1 and len(x) != nbits:
            raise DatasetError(f"bitstring {x!r} does not have length {nbits}", line=no)
    return np.array([encode_bits(x) for _, x in items], dtype=np.int64), None, nbits


def _kind_of(items, meta) -> str:
    kind = meta.get("kind") if meta else None
    for no, x in items:
        k = point_kind(x)
        if k is None:
            raise DatasetError(f"unrecognised point {x!r}", line=no)
        if kind is None:
            kind = k
        elif k != kind:
            raise DatasetError(f"mixed point kinds: {k} after {kind}", line=no)
    if kind is None:
        raise DatasetError("no records found")
    return kind


def read_dataset(source, metric: Metric | None = None) -> Dataset:
    items, ys, meta = [], [], None
    for no, rec, meta in _records(source, need_y=True):
        y = rec["y"] if "y" in rec else rec["z"]
        if isinstance(y, bool) or not isinstance(y, (int, float)) or not 0 <= y <= 1:
            raise DatasetError(f"response must be a number in [0, 1], got {y!r}", line=no)
        items.append((no, rec["x"]))
        ys.append(float(y))
    kind = _kind_of(items, meta)
    nbits = meta.get("nbits") if meta else None
    pts, labels, nbits = _encode_points(items, kind, metric, nbits)
    return Dataset(pts, ys, kind, nbits, labels)


def read_queries(source, ds: Dataset, metric: Metric | None = None) -> tuple[list, np.ndarray]:
    """Raw query points and their encodings in ``ds``'s representation."""
    raw, enc = [], []
    for no, rec, _ in _records(source, need_y=False):
        x = rec["x"]
        if point_kind(x) != ds.kind:
            raise DatasetError(f"query {x!r} does not match the {ds.kind} data", line=no)
        try:
            enc.append(ds.encode(x, metric))
        except MetricError as exc:
            raise DatasetError(str(exc), line=no) from None
        raw.append(x)
    if not raw:
        raise DatasetError("no query records found")
    if ds.kind == REAL:
        return raw, np.array(enc, dtype=np.float64).reshape(len(raw), -1)
    return raw, np.array(enc, dtype=np.int64)


def dataset_lines(ds: Dataset) -> list[str]:
    meta = {"kind": ds.kind}
    if ds.nbits is not None:
        meta["nbits"] = ds.nbits
    out = [json.dumps({"meta": meta})]
    for i in range(ds.n):
        out.append(json.dumps({"x": ds.decode(i), "y": float(ds.responses[i])}))
    return out


def write_dataset(ds: Dataset, path) -> None:
    try:
        Path(path).write_text("\n".join(dataset_lines(ds)) + "\n")
    except OSError as exc:
        raise DatasetError(f"cannot write {path}: {exc}") from exc
