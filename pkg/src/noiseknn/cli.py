"""Command-line interface.

Every subcommand prints exactly one JSON document on stdout (or writes it to
``--out``); diagnostics go to stderr.  Exit status: 0 success, 1 runtime
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from . import dataio, specfile
from .classifier import corrected_value, fit
from .distributions import GammaParams, rate_exponent
from .errors import NoiseKNNError
from .harness import emit_report, parse_risk_mode, run_sweep, summary
from .lepski import LepskiRegressor
from .metric import REAL, Euclidean
from .supremum import estimate_noise_rates, extrema


class UsageError(Exception):
    pass


def _delta(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < val < 1.0:
        raise argparse.ArgumentTypeError(f"delta must lie in (0, 1), got {val}")
    return val


def _positive(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {val}")
    return val


def _risk_mode(text: str):
    try:
        return parse_risk_mode(text)
    except NoiseKNNError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("NOISEKNN_SEED")
    if env is None:
        raise UsageError("no seed: pass --seed or set NOISEKNN_SEED")
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"NOISEKNN_SEED is not an integer: {env!r}") from None


def _existing(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _writable(path) -> Path:
    p = Path(path)
    parent = p.parent if str(p.parent) else Path(".")
    if not parent.is_dir():
        raise UsageError(f"output directory does not exist: {parent}")
    return p


def _load_data(args):
    data = _existing(args.data)
    metric = None
    if args.spec is not None:
        metric = specfile.metric_from_dict(specfile.load_json(_existing(args.spec)))
    ds = dataio.read_dataset(data, metric)
    if metric is None:
        if ds.kind != REAL:
            raise UsageError(f"{ds.kind} data needs --spec to define the metric")
        metric = Euclidean()
    return ds, metric


def cmd_gen(args):
    spec_path = _existing(args.spec)
    out = _writable(args.out)
    seed = _seed(args)
    spec = specfile.spec_from_dict(specfile.load_json(spec_path))
    ds = spec.sample_corrupted(args.n, seed)
    dataio.write_dataset(ds, out)
    return {"out": str(out), "n": ds.n, "seed": seed, "family": spec.describe()["family"]}


def cmd_regress(args):
    queries = _existing(args.queries)
    ds, metric = _load_data(args)
    raw, enc = dataio.read_queries(queries, ds, metric)
    values, ks, checked, fallback = LepskiRegressor(ds, metric, args.delta).evaluate_encoded(enc)
    return {"delta": args.delta, "results": [
        {"x": x, "value": float(v), "k": int(k), "intervals_checked": int(c),
         "fallback_used": bool(f)}
        for x, v, k, c, f in zip(raw, values, ks, checked, fallback)
    ]}


def cmd_supest(args):
    ds, metric = _load_data(args)
    sup, inf = extrema(ds, metric, args.delta)
    return {
        "delta": args.delta,
        "sup": {"value": sup.value, "argmax_index": sup.argmax_index,
                "argmax_point": ds.decode(sup.argmax_index), "k": sup.k_at_max},
        "sup_of_complement": {"value": inf.value, "argmax_index": inf.argmax_index,
                              "argmax_point": ds.decode(inf.argmax_index), "k": inf.k_at_max},
    }


def _rates_json(rates):
    return {"pi0_hat": rates.pi0, "pi1_hat": rates.pi1, "clipped": rates.clipped,
            "sum_ok": rates.sum_ok, "raw_pi0": rates.raw_pi0, "raw_pi1": rates.raw_pi1}


def cmd_noise_est(args):
    ds, metric = _load_data(args)
    out = _rates_json(estimate_noise_rates(ds, metric, args.delta))
    out["delta"] = args.delta
    return out


def cmd_classify(args):
    queries = _existing(args.queries)
    ds, metric = _load_data(args)
    clf = fit(ds, metric, args.delta)
    raw, enc = dataio.read_queries(queries, ds, metric)
    reg = clf.regression_encoded(enc)
    labels = clf.predict_encoded(enc)
    corrected = corrected_value(reg, clf.rates)
    out = _rates_json(clf.rates)
    out.update({"delta": args.delta, "threshold": clf.threshold, "results": [
        {"x": x, "label": int(lab), "regression": float(r), "corrected": float(c)}
        for x, lab, r, c in zip(raw, labels, reg, corrected)
    ]})
    return out


def cmd_sweep(args):
    cfg_path = _existing(args.config)
    out_dir = Path(args.out_dir)
    if out_dir.exists() and not out_dir.is_dir():
        raise UsageError(f"not a directory: {out_dir}")
    cfg = specfile.config_from_dict(specfile.load_json(cfg_path), cfg_path.parent)
    if args.risk_mode is not None:
        cfg = type(cfg)(cfg.spec, cfg.n_grid, cfg.trials_per_n, cfg.delta,
                        args.risk_mode[0], cfg.base_seed)
    if args.seed is not None:
        cfg = type(cfg)(cfg.spec, cfg.n_grid, cfg.trials_per_n, cfg.delta,
                        cfg.mc_n, args.seed)
    reports, rate = run_sweep(cfg, jobs=args.jobs)
    emit_report(reports, rate, out_dir, timing=not args.no_timing)
    return summary(reports, rate)


def cmd_exponent(args):
    if args.gamma_file is not None:
        g = specfile.gamma_from(specfile.load_json(_existing(args.gamma_file)))
    else:
        g = GammaParams(alpha=args.alpha, beta=args.beta, d=args.d, gamma=args.gamma, tau=args.tau)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = rate_exponent(g)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return {"exponent": res.exponent, "branch": res.branch}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="noiseknn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, data=True, delta=True):
        if data:
            sp.add_argument("--data", required=True, help="JSON-Lines dataset")
            sp.add_argument("--spec", help="family or metric spec (needed for non-real points)")
        if delta:
            sp.add_argument("--delta", type=_delta, required=True)
        sp.add_argument("--out", help="write the JSON result here instead of stdout")

    g = sub.add_parser("gen", help="sample a corrupted dataset from a family spec")
    g.add_argument("--spec", required=True)
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True, help="dataset output path (JSON Lines)")
    g.set_defaults(func=cmd_gen, result_to_stdout=True)

    r = sub.add_parser("regress", help="Lepski k-NN regression at query points")
    common(r)
    r.add_argument("--queries", required=True)
    r.set_defaults(func=cmd_regress)

    s = sub.add_parser("supest", help="lower-confidence-bound sup and inf estimates")
    common(s)
    s.set_defaults(func=cmd_supest)

    ne = sub.add_parser("noise-est", help="estimate the two label-noise rates")
    common(ne)
    ne.set_defaults(func=cmd_noise_est)

    c = sub.add_parser("classify", help="fit the plug-in classifier and label queries")
    common(c)
    c.add_argument("--queries", required=True)
    c.set_defaults(func=cmd_classify)

    sw = sub.add_parser("sweep", help="run a sample-size sweep and fit the rate")
    sw.add_argument("--config", required=True)
    sw.add_argument("--out-dir", required=True)
    sw.add_argument("--jobs", type=_positive)
    sw.add_argument("--risk-mode", type=lambda t: (_risk_mode(t),))
    sw.add_argument("--seed", type=int, help="override the config's base seed")
    sw.add_argument("--no-timing", action="store_true", help="write wall_ms as 0")
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    e = sub.add_parser("exponent", help="minimax excess-risk exponent")
    e.add_argument("--gamma-file", help="JSON object of Gamma parameters")
    for name in ("alpha", "beta", "d", "gamma", "tau"):
        e.add_argument(f"--{name}", type=float, default=1.0)
    e.add_argument("--out")
    e.set_defaults(func=cmd_exponent)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out_path = None
        if getattr(args, "out", None) and not getattr(args, "result_to_stdout", False):
            out_path = _writable(args.out)
        result = args.func(args)
    except UsageError as exc:
        print(f"noiseknn: error: {exc}", file=sys.stderr)
        return 2
    except (NoiseKNNError, OSError, ValueError) as exc:
        print(f"noiseknn: error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(result, sort_keys=True)
    if out_path is not None:
        try:
            out_path.write_text(text + "\n")
        except OSError as exc:
            print(f"noiseknn: error: cannot write {out_path}: {exc}", file=sys.stderr)
            return 1
        print(json.dumps({"out": str(out_path)}))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
