"""Seeded sample-size sweeps and log-log rate fits."""

from __future__ import annotations

import csv
import json
import math
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classifier import fit
from .distributions import DistributionSpec, excess_risk, rate_exponent
from .errors import NoiseKNNError, ParameterError
from .lepski import check_delta
from .rng import derive_seed

CSV_COLUMNS = ("n", "trial", "seed", "pi0_hat", "pi1_hat", "threshold",
               "excess_risk", "stderr", "wall_ms")


def parse_risk_mode(text: str) -> int | None:
    """``"exact"`` -> None, ``"mc:<count>"`` -> count."""
    if text == "exact":
        return None
    if text.startswith("mc:"):
        try:
            count = int(text[3:])
        except ValueError:
            count = 0
        if count >= 2:
            return count
    raise ParameterError(f"risk mode must be 'exact' or 'mc:<count >= 2>', got {text!r}")


def format_risk_mode(mc_n: int | None) -> str:
    return "exact" if mc_n is None else f"mc:{mc_n}"


@dataclass(frozen=True)
class ExperimentConfig:
    spec: DistributionSpec
    n_grid: tuple
    trials_per_n: int
    delta: float
    mc_n: int | None = None  # None: exact risk over atoms
    base_seed: int = 0

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or any(n < 1 for n in grid):
            raise ParameterError("n_grid must be a nonempty list of positive counts")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("n_grid must be strictly increasing")
        if self.trials_per_n < 1:
            raise ParameterError("trials_per_n must be >= 1")
        check_delta(self.delta)
        if self.mc_n is None and not self.spec.is_atomic:
            raise ParameterError("exact risk needs an atomic family; use mc:<count>")
        object.__setattr__(self, "n_grid", grid)


@dataclass(frozen=True)
class TrialReport:
    n: int
    trial_index: int
    seed: int
    pi0_hat: float
    pi1_hat: float
    threshold: float
    excess_risk: float
    excess_risk_stderr: float
    wall_time: float  # seconds

    def key(self) -> tuple:
        return (self.n, self.trial_index)


@dataclass(frozen=True)
class RateFit:
    slope: float | None
    intercept: float | None
    r_squared: float | None
    theoretical: float
    branch: str
    censored: tuple = ()  # n-cells with zero median
    cells_used: int = 0

    @property
    def available(self) -> bool:
        return self.slope is not None

    def as_dict(self) -> dict:
        return {
            "available": self.available, "slope": self.slope, "intercept": self.intercept,
            "r_squared": self.r_squared, "theoretical": self.theoretical, "branch": self.branch,
            "censored": list(self.censored), "cells_used": self.cells_used,
        }


def trial_seed(base_seed: int, n: int, trial_index: int) -> int:
    return derive_seed(base_seed, n, trial_index)


def run_trial(cfg: ExperimentConfig, n: int, trial_index: int) -> TrialReport:
    start = time.perf_counter()
    seed = trial_seed(cfg.base_seed, n, trial_index)
    sample = cfg.spec.sample_corrupted(n, seed)
    clf = fit(sample, cfg.spec.metric, cfg.delta)
    risk = excess_risk(cfg.spec, clf.predict_encoded, cfg.mc_n, seed)
    return TrialReport(
        n=n, trial_index=trial_index, seed=seed,
        pi0_hat=clf.rates.pi0, pi1_hat=clf.rates.pi1, threshold=clf.threshold,
        excess_risk=risk.value, excess_risk_stderr=risk.stderr,
        wall_time=time.perf_counter() - start,
    )


def _run_cell(args):
    cfg, n, t = args
    return run_trial(cfg, n, t)


def medians_by_n(reports) -> dict:
    cells: dict[int, list] = {}
    for r in sorted(reports, key=TrialReport.key):
        cells.setdefault(r.n, []).append(r.excess_risk)
    return {n: float(np.median(v)) for n, v in sorted(cells.items())}


def fit_rate(reports, spec: DistributionSpec) -> RateFit:
    """OLS of ln(median excess risk) on ln n; zero medians are censored."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        theo = rate_exponent(spec.gamma)
    med = medians_by_n(reports)
    censored = tuple(n for n, v in med.items() if v <= 0)
    pts = [(math.log(n), math.log(v)) for n, v in med.items() if v > 0]
    if len(pts) < 3:
        return RateFit(None, None, None, theo.exponent, theo.branch, censored, len(pts))
    x, y = np.array(pts).T
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0 else min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    return RateFit(slope, intercept, r2, theo.exponent, theo.branch, censored, len(pts))


def run_sweep(cfg: ExperimentConfig, jobs: int | None = None) -> tuple[list, RateFit]:
    """Run every (n, trial) cell and fit the rate.

    Reports come back sorted by (n, trial) whatever the scheduling.
    """
    cells = [(cfg, n, t) for n in cfg.n_grid for t in range(cfg.trials_per_n)]
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1:
        reports = [_run_cell(c) for c in cells]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_cell, cells))
    reports.sort(key=TrialReport.key)
    return reports, fit_rate(reports, cfg.spec)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def report_rows(reports, timing: bool = True):
    for r in sorted(reports, key=TrialReport.key):
        wall = r.wall_time * 1000.0 if timing else 0.0
        yield [_fmt(r.n), _fmt(r.trial_index), _fmt(r.seed), _fmt(r.pi0_hat), _fmt(r.pi1_hat),
               _fmt(r.threshold), _fmt(r.excess_risk), _fmt(r.excess_risk_stderr), _fmt(wall)]


def summary(reports, fit_: RateFit | None) -> dict:
    out = {
        "cells": len(reports),
        "medians": {str(n): v for n, v in medians_by_n(reports).items()},
        "fit": fit_.as_dict() if fit_ is not None else None,
    }
    if fit_ is not None:
        out["theoretical_exponent"] = fit_.theoretical
        out["branch"] = fit_.branch
    return out


def emit_report(reports, fit_: RateFit | None, out_dir, timing: bool = True) -> tuple[Path, Path]:
    """Write ``trials.csv`` and ``summary.json`` into ``out_dir``.

    ``timing=False`` writes 0 in the wall_ms column so the CSV is
    byte-reproducible.
    """
    out = Path(out_dir)
    csv_path, json_path = out / "trials.csv", out / "summary.json"
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            writer.writerows(report_rows(reports, timing))
        with open(json_path, "w") as fh:
            json.dump(summary(reports, fit_), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise NoiseKNNError(f"cannot write report to {out}: {exc}") from exc
    return csv_path, json_path
