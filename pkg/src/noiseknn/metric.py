"""Points, metrics, datasets and exact neighbour orderings.

Three point kinds are supported:

* ``"real"``   -- real vectors, stored as an ``(n, D)`` float64 array;
* ``"symbol"`` -- atoms of a finite space, stored as int64 ids indexing a
  :class:`DiscreteTable`;
* ``"bits"``   -- bitstrings of a fixed length ``l`` plus the two anchor
  atoms of the hypercube space.  Bitstrings are stored as int64 codes (most
  significant bit first); the anchors ``"0"`` and ``"1"`` are stored as the
  negative codes :data:`ANCHOR_ZERO` and :data:`ANCHOR_ONE`.

Indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DatasetError, MetricError, NeighborRangeError

REAL = "real"
SYMBOL = "symbol"
BITS = "bits"
KINDS = (REAL, SYMBOL, BITS)

ANCHOR_ZERO = -1
ANCHOR_ONE = -2
MAX_BITS = 52  # codes must stay exact in float64 for the prefix computation

Point = Union[np.ndarray, Sequence[float], int, str]


def encode_bits(s: str) -> int:
    if s == "0":
        return ANCHOR_ZERO
    if s == "1":
        return ANCHOR_ONE
    if not s or any(c not in "01" for c in s):
        raise MetricError(f"not a bitstring: {s!r}")
    return int(s, 2)


def decode_bits(code: int, nbits: int) -> str:
    if code == ANCHOR_ZERO:
        return "0"
    if code == ANCHOR_ONE:
        return "1"
    return format(int(code), f"0{nbits}b")


def is_bitstring(s: str) -> bool:
    return bool(s) and all(c in "01" for c in s)


# --------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class Euclidean:
    kind = REAL

    def distances(self, points: np.ndarray, x: np.ndarray, nbits=None) -> np.ndarray:
        if points.ndim != 2 or x.shape != (points.shape[1],):
            raise MetricError(
                f"dimension mismatch: points have shape {points.shape}, query {x.shape}"
            )
        if points.shape[1] == 1:
            # identical to sqrt(diff**2) but avoids relying on that identity
            return np.abs(points[:, 0] - x[0])
        diff = points - x
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))


@dataclass(frozen=True, eq=False)
class DiscreteTable:
    """Finite metric space given by an explicit distance matrix."""

    matrix: np.ndarray
    labels: tuple[str, ...] | None = None
    kind = SYMBOL

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
            raise MetricError("distance table must be a nonempty square matrix")
        if not np.all(np.isfinite(mat)):
            raise MetricError("distance table has non-finite entries")
        if not np.array_equal(mat, mat.T):
            raise MetricError("distance table is not symmetric")
        if np.any(np.diag(mat) != 0.0):
            raise MetricError("distance table has nonzero diagonal")
        off = mat[~np.eye(len(mat), dtype=bool)]
        if np.any(off <= 0.0):
            raise MetricError("distinct atoms must have positive distance")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(mat) or len(set(labels)) != len(labels):
                raise MetricError("labels must be unique, one per atom")
            if any(is_bitstring(s) for s in labels):
                raise MetricError("symbol labels may not be 0/1 strings")
            object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return len(self.matrix)

    def symbol_id(self, x) -> int:
        if isinstance(x, (str,)):
            if self.labels is None or x not in self.labels:
                raise MetricError(f"unknown symbol {x!r}")
            return self.labels.index(x)
        if isinstance(x, (bool, float)) or not isinstance(x, (int, np.integer)):
            raise MetricError(f"symbol ids are integers, got {x!r}")
        if not 0 <= int(x) < self.size:
            raise MetricError(f"symbol id {x} outside table of size {self.size}")
        return int(x)

    def symbol_name(self, i: int):
        return self.labels[i] if self.labels is not None else int(i)

    def distances(self, points: np.ndarray, x, nbits=None) -> np.ndarray:
        x = int(x)
        if not 0 <= x < self.size:
            raise MetricError(f"symbol id {x} outside table of size {self.size}")
        return self.matrix[x][points]


@dataclass(frozen=True)
class HypercubeUltrametric:
    """Ultrametric on bitstrings of length l plus two anchor atoms.

    Distinct bitstrings sharing a longest common prefix of length p are at
    distance ``2**(-p/d)``; any distinct pair involving an anchor is at
    distance 1.
    """

    d: float = 1.0
    kind = BITS

    def __post_init__(self):
        if not (self.d > 0 and math.isfinite(self.d)):
            raise MetricError(f"hypercube exponent d must be positive, got {self.d}")

    def distances(self, points: np.ndarray, x, nbits=None) -> np.ndarray:
        if nbits is None:
            raise MetricError("hypercube distances need the bitstring length")
        x = int(x)
        pts = np.asarray(points, dtype=np.int64)
        out = np.ones(len(pts), dtype=np.float64)
        same = pts == x
        out[same] = 0.0
        if x >= 0:
            both = (pts >= 0) & ~same
            xor = np.bitwise_xor(pts[both], x).astype(np.float64)
            # frexp exponent == bit_length for positive integers below 2**53
            lcp = nbits - np.frexp(xor)[1]
            out[both] = np.exp2(-lcp / self.d)
        return out


Metric = Union[Euclidean, DiscreteTable, HypercubeUltrametric]


def _encode_for(metric: Metric, x, nbits=None):
    if metric.kind == REAL:
        arr = np.asarray(x, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise MetricError(f"real point must be a finite 1-d vector, got {x!r}")
        return arr
    if metric.kind == SYMBOL:
        return metric.symbol_id(x)
    if not isinstance(x, str):
        raise MetricError(f"hypercube points are bitstrings, got {x!r}")
    code = encode_bits(x)
    if code >= 0 and nbits is not None and len(x) != nbits:
        raise MetricError(f"bitstring {x!r} does not have length {nbits}")
    return code


def distance(m: Metric, a: Point, b: Point) -> float:
    """Distance between two raw points under ``m``."""
    if m.kind == BITS:
        lens = {len(s) for s in (a, b) if isinstance(s, str) and len(s) > 1}
        if len(lens) > 1:
            raise MetricError(f"bitstrings of different lengths: {a!r}, {b!r}")
        nbits = lens.pop() if lens else 2
        ea, eb = _encode_for(m, a, nbits), _encode_for(m, b, nbits)
        return float(m.distances(np.array([eb], dtype=np.int64), ea, nbits)[0])
    ea, eb = _encode_for(m, a), _encode_for(m, b)
    if m.kind == REAL:
        return float(m.distances(eb.reshape(1, -1), ea)[0])
    return float(m.distances(np.array([eb], dtype=np.int64), ea)[0])


def check_metric_axioms(m: Metric, points: Sequence[Point], tol: float = 1e-12) -> list[str]:
    """Exhaustively check the metric axioms on ``points``; returns violations."""
    pts = list(points)
    n = len(pts)
    dist = np.array([[distance(m, a, b) for b in pts] for a in pts])
    problems = []
    for i in range(n):
        for j in range(n):
            if dist[i, j] < 0:
                problems.append(f"negative d({i},{j})")
            if dist[i, j] != dist[j, i]:
                problems.append(f"asymmetric d({i},{j})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if dist[i, k] > dist[i, j] + dist[j, k] + tol:
                    problems.append(f"triangle fails at ({i},{j},{k})")
    return problems


# --------------------------------------------------------------------------
# datasets


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable sample of (point, response) pairs with responses in [0, 1]."""

    points: np.ndarray
    responses: np.ndarray
    kind: str
    nbits: int | None = None
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DatasetError(f"unknown point kind {self.kind!r}")
        z = np.array(self.responses, dtype=np.float64).reshape(-1)
        if self.kind == REAL:
            pts = np.array(self.points, dtype=np.float64)
            if pts.ndim == 1:
                pts = pts.reshape(-1, 1)
            if pts.ndim != 2:
                raise DatasetError("real points must form an (n, D) array")
            if not np.all(np.isfinite(pts)):
                raise DatasetError("real points must be finite")
        else:
            pts = np.array(self.points, dtype=np.int64).reshape(-1)
        if len(pts) != len(z) or len(z) == 0:
            raise DatasetError(
                f"need n >= 1 points with matching responses, got {len(pts)} and {len(z)}"
            )
        if not np.all((z >= 0.0) & (z <= 1.0)):
            raise DatasetError("responses must lie in [0, 1]")
        if self.kind == BITS:
            if self.nbits is None or not 2 <= self.nbits <= MAX_BITS:
                raise DatasetError(f"bitstring length must be in [2, {MAX_BITS}]")
            ok = (pts == ANCHOR_ZERO) | (pts == ANCHOR_ONE) | ((pts >= 0) & (pts < (1 << self.nbits)))
            if not np.all(ok):
                raise DatasetError("bitstring code out of range")
        pts.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "responses", z)

    @property
    def n(self) -> int:
        return len(self.responses)

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.responses == 0.0) | (self.responses == 1.0)))

    def encode(self, x: Point, metric: Metric | None = None):
        """Encode a raw point into this dataset's storage representation."""
        if self.kind == REAL:
            arr = _encode_for(Euclidean(), x)
            if arr.shape != (self.points.shape[1],):
                raise MetricError(
                    f"query has dimension {arr.shape[0]}, data has {self.points.shape[1]}"
                )
            return arr
        if self.kind == SYMBOL:
            if isinstance(x, str):
                if metric is not None and isinstance(metric, DiscreteTable):
                    return metric.symbol_id(x)
                if self.labels is None or x not in self.labels:
                    raise MetricError(f"unknown symbol {x!r}")
                return self.labels.index(x)
            if isinstance(x, (bool, float)) or not isinstance(x, (int, np.integer)):
                raise MetricError(f"symbol ids are integers, got {x!r}")
            return int(x)
        if isinstance(x, (int, np.integer)):
            return int(x)
        return _encode_for(HypercubeUltrametric(), x, self.nbits)

    def decode(self, i: int):
        p = self.points[i]
        if self.kind == REAL:
            return [float(v) for v in p]
        if self.kind == SYMBOL:
            return self.labels[int(p)] if self.labels is not None else int(p)
        return decode_bits(int(p), self.nbits)

    def with_responses(self, responses) -> "Dataset":
        return Dataset(self.points, responses, self.kind, self.nbits, self.labels)

    def flipped(self) -> "Dataset":
        return self.with_responses(1.0 - self.responses)

    def subset(self, idx) -> "Dataset":
        return Dataset(self.points[idx], self.responses[idx], self.kind, self.nbits, self.labels)

    def distinct_representatives(self) -> np.ndarray:
        """Lowest index of each distinct point, in ascending order."""
        if self.kind == REAL:
            _, first = np.unique(self.points, axis=0, return_index=True)
        else:
            _, first = np.unique(self.points, return_index=True)
        return np.sort(first)


def check_compatible(ds: Dataset, m: Metric) -> None:
    if ds.kind != m.kind:
        raise MetricError(f"{type(m).__name__} cannot measure {ds.kind} points")
    if ds.kind == SYMBOL:
        if ds.points.size and (ds.points.min() < 0 or ds.points.max() >= m.size):
            raise MetricError("symbol ids outside the distance table")


def distances_from(ds: Dataset, m: Metric, x_enc) -> np.ndarray:
    """Distances from an encoded query to every sample point."""
    return m.distances(ds.points, x_enc, ds.nbits)


# --------------------------------------------------------------------------
# neighbour orderings


@dataclass(frozen=True, eq=False)
class NeighborOrder:
    """Sample indices sorted by distance to ``query``.

    ``prefix_means[k-1]`` is the mean response over the k nearest points.
    """

    query: object
    order: np.ndarray
    distances: np.ndarray
    prefix_means: np.ndarray

    @property
    def n(self) -> int:
        return len(self.order)


def prefix_means(z_ordered: np.ndarray) -> np.ndarray:
    # running sum in neighbour order; the numba kernels reproduce it exactly
    return np.cumsum(z_ordered) / np.arange(1, len(z_ordered) + 1, dtype=np.float64)


def order_encoded(ds: Dataset, m: Metric, x_enc) -> tuple[np.ndarray, np.ndarray]:
    dist = distances_from(ds, m, x_enc)
    # stable sort: ties keep ascending sample index
    order = np.argsort(dist, kind="stable")
    return order, dist[order]


def neighbor_order(ds: Dataset, m: Metric, x: Point) -> NeighborOrder:
    check_compatible(ds, m)
    x_enc = ds.encode(x, m)
    order, dist = order_encoded(ds, m, x_enc)
    pm = prefix_means(ds.responses[order])
    for a in (order, dist, pm):
        a.setflags(write=False)
    return NeighborOrder(query=x, order=order, distances=dist, prefix_means=pm)


def knn_estimate(no: NeighborOrder, k: int) -> float:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= no.n:
        raise NeighborRangeError(f"k must be an integer in [1, {no.n}], got {k!r}")
    return float(no.prefix_means[k - 1])
