"""Plug-in classifier for class-conditional label noise.

The confidence budget ``delta`` is split three ways: ``delta/3`` for each of
the two extremum estimates that give the noise rates, and ``delta**2/3`` for
the per-query Lepski regression of the corrupted labels.  A query is
labelled 1 when the regression estimate reaches the shifted threshold
``(1 + pi0_hat - pi1_hat) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DatasetError, RateValidityError
from .lepski import LepskiRegressor, check_delta
from .metric import Dataset, Metric
from .supremum import NoiseRates, estimate_noise_rates


class CorrectedRegression(NamedTuple):
    value: float  # clamped to [0, 1]
    raw: float


def threshold_for(rates: NoiseRates) -> float:
    # same value as (1 + pi0 - pi1) / 2, but exactly 1/2 when the rates agree
    return 0.5 + 0.5 * (rates.pi0 - rates.pi1)


def corrected_value(eta_tilde_hat, rates: NoiseRates):
    """Unclamped ratio correction ``(eta_tilde_hat - pi0) / (1 - pi0 - pi1)``.

    Written as ``1/2 + (eta_tilde_hat - t) / b`` with ``t`` the threshold and
    ``b = 1 - pi0 - pi1``; the two forms agree algebraically since
    ``t - pi0 = b/2``, and this one keeps ``value >= 1/2`` exactly equivalent
    to ``eta_tilde_hat >= t`` under rounding.
    """
    b = 1.0 - rates.pi0 - rates.pi1
    return 0.5 + (np.asarray(eta_tilde_hat, dtype=np.float64) - threshold_for(rates)) / b


@dataclass(frozen=True, eq=False)
class PluginClassifier:
    sample: Dataset
    metric: Metric
    delta: float
    rates: NoiseRates

    def __post_init__(self):
        object.__setattr__(
            self, "_regressor", LepskiRegressor(self.sample, self.metric, self.regression_delta)
        )

    @property
    def threshold(self) -> float:
        return threshold_for(self.rates)

    @property
    def regression_delta(self) -> float:
        return self.delta ** 2 / 3.0

    def regression(self, x) -> float:
        return self._regressor.estimate(x).value

    def regression_encoded(self, points) -> np.ndarray:
        return self._regressor.values_encoded(points)

    def predict(self, x) -> int:
        return int(self.regression(x) >= self.threshold)

    def predict_encoded(self, points) -> np.ndarray:
        """Labels for an array of points in the sample's storage encoding."""
        return (self.regression_encoded(points) >= self.threshold).astype(np.int64)

    __call__ = predict_encoded

    def corrected_regression(self, x) -> CorrectedRegression:
        if not self.rates.sum_ok:
            raise RateValidityError("noise-rate estimates violate pi0 + pi1 < 1")
        raw = float(corrected_value(self.regression(x), self.rates))
        return CorrectedRegression(min(max(raw, 0.0), 1.0), raw)


def fit(sample: Dataset, m: Metric, delta: float) -> PluginClassifier:
    delta = check_delta(delta)
    if not sample.is_binary:
        raise DatasetError("the plug-in classifier needs binary (corrupted) labels")
    rates = estimate_noise_rates(sample, m, delta / 3.0)
    return PluginClassifier(sample, m, delta, rates)
