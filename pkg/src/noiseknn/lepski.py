"""Pointwise adaptive k-NN regression with Lepski's rule.

For a query x the k-NN means are wrapped in Hoeffding intervals of
half-width ``sqrt(2 ln(4n/delta) / k)``.  Starting at
``k_min = ceil(8 ln(2n/delta))`` the running intersection of the intervals is
tracked while k grows; the selected k is the last one (at most
``k_max = floor(n/2)``) for which the intersection is still nonempty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ParameterError
from .metric import (
    REAL,
    Dataset,
    Metric,
    NeighborOrder,
    check_compatible,
    neighbor_order,
    order_encoded,
)


def check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return delta


def lepski_log_term(n: int, delta: float) -> float:
    return math.log(4.0 * n / delta)


def halfwidth_table(n: int, delta: float) -> np.ndarray:
    """Half-widths for k = 1..n (entry k-1), equal to :func:`ci_halfwidth`."""
    log_term = lepski_log_term(n, delta)
    return np.sqrt(2.0 * log_term / np.arange(1, n + 1, dtype=np.float64))


def ci_halfwidth(n: int, k: int, delta: float) -> float:
    """Half-width of the Lepski confidence interval at k neighbours."""
    delta = check_delta(delta)
    if n < 1 or not 1 <= k <= n:
        raise ParameterError(f"need n >= 1 and 1 <= k <= n, got n={n}, k={k}")
    return math.sqrt(2.0 * lepski_log_term(n, delta) / k)


@dataclass(frozen=True)
class LepskiConfig:
    delta: float

    def __post_init__(self):
        check_delta(self.delta)

    def k_min(self, n: int) -> int:
        return math.ceil(8.0 * math.log(2.0 * n / self.delta))

    def k_max(self, n: int) -> int:
        return n // 2


@dataclass(frozen=True)
class LepskiEstimate:
    value: float
    k_selected: int
    intervals_checked: int
    fallback_used: bool


def _from_kernel(out) -> LepskiEstimate:
    value, k, checked, fallback = out
    return LepskiEstimate(float(value), int(k), int(checked), bool(fallback))


def lepski_select(no: NeighborOrder, cfg: LepskiConfig) -> LepskiEstimate:
    """Run the Lepski sweep on a precomputed neighbour order.

    Falls back to the global mean (k = n) when the admissible k-range
    ``[k_min, k_max]`` is empty.
    """
    n = no.n
    pm = no.prefix_means
    kmin, kmax = cfg.k_min(n), cfg.k_max(n)
    if kmin > kmax:
        return LepskiEstimate(float(pm[n - 1]), n, 0, True)
    log_term = lepski_log_term(n, cfg.delta)
    ks = np.arange(kmin, kmax + 1, dtype=np.float64)
    means = pm[kmin - 1:kmax]
    half = np.sqrt(2.0 * log_term / ks)
    lo = np.maximum.accumulate(means - half)
    hi = np.minimum.accumulate(means + half)
    empty = np.flatnonzero(lo > hi)
    if len(empty):
        last = int(empty[0]) - 1  # the first k is never empty
        checked = int(empty[0]) + 1
    else:
        last = len(means) - 1
        checked = len(means)
    return LepskiEstimate(float(means[last]), kmin + last, checked, False)


def lepski_estimate_at(ds: Dataset, m: Metric, x, delta: float) -> LepskiEstimate:
    return lepski_select(neighbor_order(ds, m, x), LepskiConfig(delta))


class LepskiRegressor:
    """Batch evaluator of the Lepski estimate over one fixed sample.

    Results are identical to :func:`lepski_estimate_at` query by query; 1-d
    real data uses the compiled merge scan, everything else a stable sort
    per query.
    """

    def __init__(self, ds: Dataset, m: Metric, delta: float):
        check_compatible(ds, m)
        self.ds = ds
        self.metric = m
        self.cfg = LepskiConfig(delta)
        n = ds.n
        self.kmin = self.cfg.k_min(n)
        self.kmax = self.cfg.k_max(n)
        self.half = halfwidth_table(n, self.cfg.delta)
        self._line = None
        if ds.kind == REAL and ds.points.shape[1] == 1:
            self._line = _kernels.SortedLine(ds.points[:, 0], ds.responses)

    def estimate_encoded(self, x_enc) -> LepskiEstimate:
        order, _ = order_encoded(self.ds, self.metric, x_enc)
        z = np.ascontiguousarray(self.ds.responses[order])
        return _from_kernel(
            _kernels.lepski_sweep_ordered(z, self.kmin, self.kmax, self.half)
        )

    def estimate(self, x) -> LepskiEstimate:
        return self.estimate_encoded(self.ds.encode(x, self.metric))

    def values_encoded(self, queries) -> np.ndarray:
        """Lepski values at an array of encoded queries."""
        return self.evaluate_encoded(queries)[0]

    def evaluate_encoded(self, queries):
        """Return ``(values, k_selected, intervals_checked, fallback)`` arrays."""
        q = np.asarray(queries)
        count = len(q)
        values = np.empty(count, dtype=np.float64)
        ks = np.empty(count, dtype=np.int64)
        checked = np.empty(count, dtype=np.int64)
        fallback = np.empty(count, dtype=np.bool_)
        if self._line is not None:
            flat = np.ascontiguousarray(q, dtype=np.float64).reshape(count)
            _kernels.lepski_1d_batch(
                *self._line.arrays(), flat, self.kmin, self.kmax, self.half,
                values, ks, checked, fallback,
            )
            return values, ks, checked, fallback
        # identical queries share one evaluation
        if q.ndim == 2:
            uniq, inverse = np.unique(q, axis=0, return_inverse=True)
        else:
            uniq, inverse = np.unique(q, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        for u, x_enc in enumerate(uniq):
            est = self.estimate_encoded(x_enc)
            sel = inverse == u
            values[sel] = est.value
            ks[sel] = est.k_selected
            checked[sel] = est.intervals_checked
            fallback[sel] = est.fallback_used
        return values, ks, checked, fallback
