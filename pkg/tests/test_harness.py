import csv
import json
import random

import numpy as np
import pytest

from noiseknn.classifier import fit
from noiseknn.distributions import HypercubeFamily, LaplaceLogisticFamily, NoiseSpec
from noiseknn.errors import NoiseKNNError, ParameterError
from noiseknn.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    TrialReport,
    emit_report,
    fit_rate,
    medians_by_n,
    parse_risk_mode,
    run_sweep,
    run_trial,
    trial_seed,
)
from noiseknn.metric import ANCHOR_ONE, ANCHOR_ZERO

SPEC = LaplaceLogisticFamily(1.0, NoiseSpec(0.05, 0.1))


def _report(n, t, risk):
    return TrialReport(n, t, trial_seed(0, n, t), 0.1, 0.2, 0.45, risk, 0.0, 0.01)


def test_exact_power_law_fit():
    reports = [_report(n, t, 3.0 * n ** -0.4) for n in (100, 200, 400, 800, 1600) for t in range(3)]
    fit = fit_rate(reports, SPEC)
    assert fit.slope == pytest.approx(-0.4, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.intercept == pytest.approx(np.log(3.0), abs=1e-9)
    shuffled = reports[:]
    random.Random(1).shuffle(shuffled)
    assert fit_rate(shuffled, SPEC) == fit


def test_censoring_and_unavailable_fit():
    reports = [_report(n, 0, r) for n, r in ((100, 0.1), (200, 0.0), (400, 0.05), (800, 0.0))]
    fit = fit_rate(reports, SPEC)
    assert not fit.available and fit.censored == (200, 800) and fit.cells_used == 2
    assert fit.as_dict()["slope"] is None


def test_risk_mode_parsing():
    assert parse_risk_mode("exact") is None
    assert parse_risk_mode("mc:1000") == 1000
    for bad in ("mc:1", "mc:x", "monte", ""):
        with pytest.raises(ParameterError):
            parse_risk_mode(bad)


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(SPEC, (100, 100), 1, 0.1, 1000)
    with pytest.raises(ParameterError):
        ExperimentConfig(SPEC, (100,), 0, 0.1, 1000)
    with pytest.raises(ParameterError):
        ExperimentConfig(SPEC, (100,), 1, 0.1, None)  # exact risk on a continuous family


def test_empty_report(tmp_path):
    csv_path, json_path = emit_report([], None, tmp_path)
    assert csv_path.read_text() == ",".join(CSV_COLUMNS) + "\n"
    assert json.loads(json_path.read_text())["cells"] == 0


def test_single_trial_round_trip(tmp_path):
    cfg = ExperimentConfig(SPEC, (300,), 1, 0.1, 2000, base_seed=5)
    reports, fit = run_sweep(cfg, jobs=1)
    csv_path, json_path = emit_report(reports, fit, tmp_path)
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 2
    row = next(csv.DictReader(lines))
    assert float(row["excess_risk"]) == reports[0].excess_risk
    assert float(row["pi1_hat"]) == reports[0].pi1_hat
    summ = json.loads(json_path.read_text())
    assert summ["medians"]["300"] == pytest.approx(reports[0].excess_risk, abs=1e-12)
    assert summ["fit"]["available"] is False
    assert summ["branch"] == "tie" and summ["theoretical_exponent"] == 0.5


def test_report_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(NoiseKNNError, match="file"):
        emit_report([], None, blocker / "sub")


def test_trial_determinism_and_seed_derivation():
    cfg = ExperimentConfig(SPEC, (400,), 2, 0.1, 5000, base_seed=9)
    a, b = run_trial(cfg, 400, 1), run_trial(cfg, 400, 1)
    strip = lambda r: r.__dict__ | {"wall_time": 0}
    assert strip(a) == strip(b)
    assert a.seed == trial_seed(9, 400, 1) != trial_seed(9, 400, 0)
    assert a.excess_risk >= -3 * a.excess_risk_stderr


def test_sweep_order_independent_of_jobs(tmp_path):
    cfg = ExperimentConfig(SPEC, (200, 400, 800), 2, 0.1, 3000, base_seed=2)
    one, fit1 = run_sweep(cfg, jobs=1)
    two, fit2 = run_sweep(cfg, jobs=2)
    strip = lambda rs: [r.__dict__ | {"wall_time": 0} for r in rs]
    assert strip(one) == strip(two) and fit1 == fit2
    emit_report(one, fit1, tmp_path / "a", timing=False)
    emit_report(two, fit2, tmp_path / "b", timing=False)
    for name in ("trials.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_separated_hypercube_exact_risk():
    # oracle run: excess 0 in 50/50 trials
    cube = HypercubeFamily(l=2, w=1 / 3, Delta=1.0, m=2, d=1.0, signs=(1, -1))
    cfg = ExperimentConfig(cube, (4096,), 1, 0.1, None, 0)
    zeros = sum(run_trial(cfg, 4096, t).excess_risk == 0 for t in range(20))
    assert zeros / 20 >= 0.8


def test_flat_hypercube_risk_only_from_anchors():
    cube = HypercubeFamily(l=3, w=1 / 3, Delta=0.0, m=2, d=1.0, signs=(1, -1))
    cfg = ExperimentConfig(cube, (2000,), 1, 0.1, None, 0)
    for t in range(5):
        r = run_trial(cfg, 2000, t)
        clf = fit(cube.sample_corrupted(2000, r.seed), cube.metric, 0.1)
        anchors = np.array([ANCHOR_ZERO, ANCHOR_ONE])
        wrong = clf.predict_encoded(anchors) != cube.bayes_encoded(anchors)
        assert r.excess_risk == pytest.approx(wrong.sum() / 3, abs=1e-15)


def test_medians_by_n():
    reports = [_report(100, t, r) for t, r in enumerate([0.3, 0.1, 0.2])] + [_report(50, 0, 1.0)]
    assert medians_by_n(reports) == {50: 1.0, 100: 0.2}
