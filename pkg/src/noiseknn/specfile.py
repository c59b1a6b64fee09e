"""JSON spec files for distribution families, metrics and sweeps.

See ``docs/spec_files.md`` for the schemas and ``specs/`` for one file
per family.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .distributions import (
    DistributionSpec,
    FourPointFamily,
    GammaParams,
    HypercubeFamily,
    LaplaceLogisticFamily,
    NoiseSpec,
    TableFamily,
    lb_parameters_hypercube,
    lb_parameters_unknown_noise,
)
from .errors import DatasetError, ParameterError
from .harness import ExperimentConfig, parse_risk_mode
from .metric import DiscreteTable, Euclidean, HypercubeUltrametric, Metric


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise DatasetError(f"{path}: top level must be a JSON object", line=1)
    return doc


def _take(doc: dict, allowed: set, required: set, what: str) -> dict:
    extra = set(doc) - allowed
    if extra:
        raise ParameterError(f"{what}: unknown keys {sorted(extra)}")
    missing = required - set(doc)
    if missing:
        raise ParameterError(f"{what}: missing keys {sorted(missing)}")
    return doc


def gamma_from(doc: dict | None) -> GammaParams:
    return GammaParams.from_dict(doc or {})


def spec_from_dict(doc: dict) -> DistributionSpec:
    fam = doc.get("family")
    g = gamma_from(doc.get("gamma"))
    if fam == "four_point":
        keys = {"iota", "Delta", "r", "u", "v", "w", "nu_max"}
        _take(doc, keys | {"family", "gamma"}, keys, fam)
        return FourPointFamily(gamma=g, **{k: doc[k] for k in keys})
    if fam == "four_point_lb":
        _take(doc, {"family", "gamma", "n", "iota"}, {"n", "iota"}, fam)
        if doc["iota"] not in (0, 1):
            raise ParameterError("iota must be 0 or 1")
        return lb_parameters_unknown_noise(int(doc["n"]), g)[doc["iota"]]
    if fam == "hypercube":
        keys = {"l", "w", "Delta", "m", "d", "signs"}
        _take(doc, keys | {"family", "gamma"}, keys, fam)
        return HypercubeFamily(gamma=g, **{k: doc[k] for k in keys})
    if fam == "hypercube_lb":
        _take(doc, {"family", "gamma", "n", "seed"}, {"n"}, fam)
        return lb_parameters_hypercube(int(doc["n"]), g, int(doc.get("seed", 0)))
    if fam == "laplace_logistic":
        _take(doc, {"family", "gamma", "tau", "pi0", "pi1"}, {"tau"}, fam)
        noise = NoiseSpec(doc.get("pi0", 0.0), doc.get("pi1", 0.0))
        return LaplaceLogisticFamily(doc["tau"], noise, g)
    if fam == "table":
        keys = {"labels", "distances", "masses", "eta", "omega"}
        _take(doc, keys | {"family", "gamma", "pi0", "pi1"}, keys, fam)
        return TableFamily(
            symbols=tuple(doc["labels"]), distances=np.asarray(doc["distances"], dtype=float),
            masses_=doc["masses"], eta_=doc["eta"], omega_=doc["omega"],
            noise=NoiseSpec(doc.get("pi0", 0.0), doc.get("pi1", 0.0)), gamma=g,
        )
    raise ParameterError(f"unknown family {fam!r}")


def metric_from_dict(doc: dict) -> Metric:
    """A metric from either a family spec or ``{"metric": ...}``."""
    if "family" in doc:
        return spec_from_dict(doc).metric
    kind = doc.get("metric")
    if kind == "euclidean":
        _take(doc, {"metric"}, set(), kind)
        return Euclidean()
    if kind == "hypercube":
        _take(doc, {"metric", "d"}, set(), kind)
        return HypercubeUltrametric(float(doc.get("d", 1.0)))
    if kind == "table":
        _take(doc, {"metric", "labels", "distances"}, {"distances"}, kind)
        labels = doc.get("labels")
        return DiscreteTable(np.asarray(doc["distances"], dtype=float),
                             tuple(labels) if labels is not None else None)
    raise ParameterError(f"spec names neither a family nor a known metric: {kind!r}")


def config_from_dict(doc: dict, base_dir=None) -> ExperimentConfig:
    """Sweep configuration; ``spec`` may be inline or a path relative to the file."""
    _take(doc, {"spec", "n_grid", "trials_per_n", "delta", "risk_mode", "base_seed"},
          {"spec", "n_grid", "trials_per_n", "delta"}, "sweep config")
    spec_doc = doc["spec"]
    if isinstance(spec_doc, str):
        path = Path(spec_doc)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        spec_doc = load_json(path)
    return ExperimentConfig(
        spec=spec_from_dict(spec_doc),
        n_grid=tuple(doc["n_grid"]),
        trials_per_n=int(doc["trials_per_n"]),
        delta=float(doc["delta"]),
        mc_n=parse_risk_mode(doc.get("risk_mode", "exact")),
        base_seed=int(doc.get("base_seed", 0)),
    )
