"""Adaptive k-NN classification under unknown class-conditional label noise."""

from .classifier import CorrectedRegression, PluginClassifier, corrected_value, fit, threshold_for
from .distributions import (
    DistributionSpec,
    ExcessRisk,
    FourPointFamily,
    GammaParams,
    HypercubeFamily,
    LaplaceLogisticFamily,
    NoiseSpec,
    RateExponent,
    TableFamily,
    corrupt,
    excess_risk,
    lb_parameters_hypercube,
    lb_parameters_unknown_noise,
    rate_exponent,
)
from .errors import (
    DatasetError,
    MetricError,
    NeighborRangeError,
    NoiseKNNError,
    ParameterError,
    RateValidityError,
)
from .harness import ExperimentConfig, RateFit, TrialReport, emit_report, fit_rate, run_sweep, run_trial
from .lepski import (
    LepskiConfig,
    LepskiEstimate,
    LepskiRegressor,
    ci_halfwidth,
    lepski_estimate_at,
    lepski_select,
)
from .metric import (
    Dataset,
    DiscreteTable,
    Euclidean,
    HypercubeUltrametric,
    NeighborOrder,
    distance,
    knn_estimate,
    neighbor_order,
)
from .supremum import NoiseRates, SupEstimate, estimate_noise_rates, inf_estimate, sup_estimate

__all__ = [
    "CorrectedRegression", "Dataset", "DatasetError", "DiscreteTable", "DistributionSpec",
    "Euclidean", "ExcessRisk", "ExperimentConfig", "FourPointFamily", "GammaParams",
    "HypercubeFamily", "HypercubeUltrametric", "LaplaceLogisticFamily", "LepskiConfig",
    "LepskiEstimate", "LepskiRegressor", "MetricError", "NeighborOrder", "NeighborRangeError",
    "NoiseKNNError", "NoiseRates", "NoiseSpec", "ParameterError", "PluginClassifier", "RateExponent",
    "RateFit", "RateValidityError", "SupEstimate", "TableFamily", "TrialReport", "ci_halfwidth",
    "corrected_value", "corrupt", "distance", "emit_report", "estimate_noise_rates", "excess_risk",
    "fit", "fit_rate", "inf_estimate", "knn_estimate", "lb_parameters_hypercube",
    "lb_parameters_unknown_noise", "lepski_estimate_at", "lepski_select", "neighbor_order",
    "rate_exponent", "run_sweep", "run_trial", "sup_estimate", "threshold_for",
]
