"""Lower-confidence-bound estimation of sup f and recovery of noise rates.

The supremum estimate is

    max over sample points X_i and k in 1..n of  f_hat_k(X_i) - sqrt(ln(4n/delta)/k)

which is biased low (k-NN averaging can only pull a maximum down), so it
under-estimates sup f with high probability.  The penalty is *not* the
Lepski half-width: it lacks the factor 2 under the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DatasetError
from .lepski import check_delta
from .metric import REAL, Dataset, Metric, check_compatible, order_encoded

CLIP_EPS = 1e-6


@dataclass(frozen=True)
class SupEstimate:
    value: float
    argmax_index: int
    k_at_max: int


@dataclass(frozen=True)
class NoiseRates:
    pi0: float
    pi1: float
    clipped: bool
    sum_ok: bool
    raw_pi0: float = math.nan
    raw_pi1: float = math.nan


def sup_penalty(n: int, delta: float) -> np.ndarray:
    c = math.log(4.0 * n / delta)
    return np.sqrt(c / np.arange(1, n + 1, dtype=np.float64))


def extrema(ds: Dataset, m: Metric, delta: float) -> tuple[SupEstimate, SupEstimate]:
    """Return ``(sup_estimate(ds), inf_estimate(ds))`` from a single sweep."""
    delta = check_delta(delta)
    check_compatible(ds, m)
    n = ds.n
    penalty = sup_penalty(n, delta)
    reps = ds.distinct_representatives()
    if ds.kind == REAL and ds.points.shape[1] == 1:
        line = _kernels.SortedLine(ds.points[:, 0], ds.responses)
        b1, i1, k1, b0, i0, k0 = _kernels.extrema_1d(
            *line.arrays(), reps.astype(np.int64), penalty
        )
        return (SupEstimate(float(b1), int(i1), int(k1)),
                SupEstimate(float(b0), int(i0), int(k0)))

    best = [(-np.inf, -1, -1), (-np.inf, -1, -1)]
    flipped = 1.0 - ds.responses
    for i in reps:
        order, _ = order_encoded(ds, m, ds.points[i])
        for side, z in enumerate((ds.responses, flipped)):
            vals = np.cumsum(z[order]) / np.arange(1, n + 1, dtype=np.float64) - penalty
            k = int(np.argmax(vals))  # first maximiser -> lowest k
            if vals[k] > best[side][0]:
                best[side] = (float(vals[k]), int(i), k + 1)
    return SupEstimate(*best[0]), SupEstimate(*best[1])


def sup_estimate(ds: Dataset, m: Metric, delta: float) -> SupEstimate:
    return extrema(ds, m, delta)[0]


def inf_estimate(ds: Dataset, m: Metric, delta: float) -> SupEstimate:
    """Supremum estimate of ``1 - f``; ``1 - value`` bounds inf f from above."""
    return extrema(ds, m, delta)[1]


def project_rates(raw_pi0: float, raw_pi1: float, eps: float = CLIP_EPS) -> NoiseRates:
    upper = 0.5 - eps
    pi0 = min(max(raw_pi0, 0.0), upper)
    pi1 = min(max(raw_pi1, 0.0), upper)
    clipped = pi0 != raw_pi0 or pi1 != raw_pi1
    total = pi0 + pi1
    if total >= 1.0 - eps:
        scale = (1.0 - eps) / total
        pi0, pi1 = pi0 * scale, pi1 * scale
        clipped = True
    return NoiseRates(pi0, pi1, clipped, pi0 + pi1 < 1.0, raw_pi0, raw_pi1)


def estimate_noise_rates(ds: Dataset, m: Metric, delta: float) -> NoiseRates:
    """Estimate (pi0, pi1) from a sample with corrupted binary labels.

    ``pi1_hat = 1 - Mhat(eta_tilde)`` and ``pi0_hat = 1 - Mhat(1 - eta_tilde)``,
    each at confidence ``delta``, then projected onto
    ``[0, 1/2 - eps]`` with ``pi0 + pi1 < 1``.
    """
    if not ds.is_binary:
        raise DatasetError("noise-rate estimation needs binary labels")
    sup, inf = extrema(ds, m, delta)
    return project_rates(1.0 - inf.value, 1.0 - sup.value)
