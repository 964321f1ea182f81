"""Command-line entry point: ``ifvar {ingest,analyze,simulate,irf,tcr}``.

Options can also come from a JSON file (``--config``) whose keys are the
long option names with dashes replaced by underscores; explicit flags win.
Exit codes: 0 success, 2 invalid input, 3 data problem, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, datasets
from .analysis import FORCING_FIRST, TEMP_FIRST, analyze_pair
from .bayes import DEFAULT_LAMBDA_GRID, fit_bayes, optimize_hyperparameters, posterior_irf_bands
from .errors import IfvarError, ValidationError
from .report import write_csv, write_json, write_records
from .series import CsvSchema, load_csv
from .sim import DGPS, DgpSpec, default_rho_grid, sweep
from .tcr import PER_DRAW, MEDIAN_IRF, tcr_at
from .var import DEFAULT_P_MAX, VarSpec, select_lags_bic

# options that change where or how fast outputs are produced, not what they contain
NOT_RECORDED = {"func", "config", "threads", "out", "svg", "command"}
ORDERINGS = {"forcing-first": FORCING_FIRST, "gmta-first": TEMP_FIRST}


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _common(p: argparse.ArgumentParser, seed: bool = True):
    p.add_argument("--config", help="JSON file with option values")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ifvar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ifvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="convert a delimited file to the canonical year,value CSV")
    _common(p, seed=False)
    p.add_argument("--input", required=True)
    p.add_argument("--year-column", default="year")
    p.add_argument("--value-column", default="value")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--name", help="series name (defaults to the value column)")
    p.add_argument("--unit", default="")
    p.add_argument("--ppm-to-rf", action="store_true", help="convert CO2 ppm to forcing")
    p.add_argument("--base-year", type=int, default=1850)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="flows, BIC lags, residual correlation and FEVD per pair")
    _common(p)
    p.add_argument("--period", default="1850-2005", choices=sorted(datasets.PERIODS))
    p.add_argument("--pair", action="append", choices=sorted(datasets.PAIRS))
    p.add_argument("--data-dir")
    p.add_argument("--h", type=int, default=15, help="FEVD horizon")
    p.add_argument("--p-max", type=int, default=DEFAULT_P_MAX)
    p.add_argument("--lags", type=int, help="fixed lag order instead of BIC")
    p.add_argument("--trend", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="correlation sweeps over the reference processes")
    _common(p)
    p.add_argument("--dgp", type=int, action="append", choices=sorted(DGPS))
    p.add_argument("--a", type=_floats, help="custom process: a11,a12,a21,a22")
    p.add_argument("--c", type=_floats, default=[0.0, 0.0], help="custom intercepts c1,c2")
    p.add_argument("--h", type=int, default=10, help="FEVD horizon")
    p.add_argument("--rho-step", type=float, default=0.01)
    p.add_argument("--mode", choices=("analytic", "monte_carlo"), default="analytic")
    p.add_argument("--n", type=int, default=100_000, help="path length in monte_carlo mode")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("irf", help="posterior impulse-response bands for one pair")
    _common(p)
    p.add_argument("--period", default="1850-2005", choices=sorted(datasets.PERIODS))
    p.add_argument("--pair", default="co2_emissions", choices=sorted(datasets.PAIRS))
    p.add_argument("--data-dir")
    p.add_argument("--ordering", choices=sorted(ORDERINGS), default="forcing-first")
    p.add_argument("--lags", type=int, help="lag order (default: BIC choice)")
    p.add_argument("--p-max", type=int, default=DEFAULT_P_MAX)
    p.add_argument("--horizon", type=int, default=30)
    p.add_argument("--trend", action="store_true")
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--band", type=float, default=0.68)
    p.add_argument("--lambda-grid", type=_floats, default=list(DEFAULT_LAMBDA_GRID))
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_irf)

    p = sub.add_parser("tcr", help="transient climate response under both orderings")
    _common(p)
    p.add_argument("--period", default="1850-2005", choices=sorted(datasets.PERIODS))
    p.add_argument("--data-dir")
    p.add_argument("--lags", type=int, default=4)
    p.add_argument("--horizons", type=_ints, default=[20, 70])
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--mode", choices=(PER_DRAW, MEDIAN_IRF), default=PER_DRAW)
    p.add_argument("--lambda-grid", type=_floats, default=list(DEFAULT_LAMBDA_GRID))
    p.set_defaults(func=cmd_tcr)
    return parser


def _apply_config(parser, argv, args):
    """Re-parse with values from ``--config`` as defaults of the chosen subcommand."""
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValidationError("config file must hold a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    cfg.pop("command", None)
    known = set(vars(args)) - {"func", "config", "command"}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise ValidationError(f"unknown config keys for {args.command}: {unknown}")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    for action in sub._actions:
        if action.dest in cfg and action.type is not None and isinstance(cfg[action.dest], str):
            cfg[action.dest] = action.type(cfg[action.dest])
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def resolved_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in NOT_RECORDED}
    return {"command": args.command, "version": __version__, **cfg}


def _check(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def _pmap(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def cmd_ingest(args) -> list[Path]:
    name = args.name or args.value_column
    series = load_csv(
        args.input,
        CsvSchema(args.year_column, args.value_column, args.delimiter, name, args.unit),
    )
    if args.ppm_to_rf:
        from .series import ppm_to_rf

        series = ppm_to_rf(series, args.base_year).replace(name=name)
    rows = ([int(y), float(v)] for y, v in zip(series.years, series.values))
    out = Path(args.out)
    if args.format == "json":
        payload = {"name": name, "unit": series.unit, "years": series.years.tolist(),
                   "values": series.values.tolist()}
        return [write_json(out / f"{name}.json", payload, resolved_config(args))]
    return [write_csv(out / f"{name}.csv", ["year", "value"], rows, resolved_config(args))]


def cmd_analyze(args) -> list[Path]:
    _check(args.h >= 1, "--h must be at least 1")
    _check(args.p_max >= 1, "--p-max must be at least 1")
    _check(args.lags is None or args.lags >= 1, "--lags must be at least 1")
    keys = args.pair or list(datasets.PAIRS)

    def one(key):
        try:
            pair = datasets.load_pair(key, args.period, args.data_dir)
            return analyze_pair(pair, args.h, args.p_max, args.lags, args.trend).records()
        except IfvarError as exc:
            return [{"pair": key, "error": f"{type(exc).__name__}: {exc}"}]

    records = [rec for recs in _pmap(one, keys, args.threads) for rec in recs]
    for rec in records:
        rec["label"] = datasets.PAIRS[rec["pair"]].label
    stem = Path(args.out) / f"analyze_{args.period}"
    extra = {"matches_reference_vintage": datasets.get_period(args.period).matches_reference_vintage}
    return [write_records(stem, records, resolved_config(args), args.format, extra=extra)]


def cmd_simulate(args) -> list[Path]:
    _check(args.h >= 1, "--h must be at least 1")
    _check(0 < args.rho_step < 1, "--rho-step must lie in (0, 1)")
    grid = default_rho_grid(args.rho_step)
    jobs = []
    if args.a is not None:
        _check(len(args.a) == 4 and len(args.c) == 2, "--a needs 4 numbers and --c 2")
        jobs.append(("custom", DgpSpec(np.reshape(args.a, (2, 2)), args.c)))
    dgps = args.dgp or ([] if jobs else sorted(DGPS))
    jobs.extend((f"dgp{n}", DgpSpec.reference(n)) for n in dgps)

    def one(job):
        label, spec = job
        return sweep(spec, grid, args.h, label=label, mode=args.mode, n=args.n, seed=args.seed)

    results = _pmap(one, jobs, args.threads)
    cfg = resolved_config(args)
    out = Path(args.out)
    paths = []
    for res in results:
        stem = out / f"sweep_{res.label}_h{args.h}"
        recs = [dict(zip(res.COLUMNS, row)) for row in res.rows()]
        paths.append(write_records(stem, recs, cfg, args.format))
        if args.svg:
            from .plots import sweep_svg

            sweep_svg(res, stem.with_suffix(".svg"))
            paths.append(stem.with_suffix(".svg"))
    summary = {"regions": [res.summary() for res in results]}
    paths.append(write_json(out / f"regions_h{args.h}.json", summary, cfg))
    return paths


def _fit_posterior(pair, p, trend, draws, seed, grid):
    spec = VarSpec(p=p, trend=trend)
    prior = optimize_hyperparameters(pair, spec, grid)
    return fit_bayes(pair, spec, prior, draws, seed)


def cmd_irf(args) -> list[Path]:
    _check(args.horizon >= 0, "--horizon must be non-negative")
    _check(args.draws >= 1, "--draws must be at least 1")
    _check(args.lambda_grid, "--lambda-grid must not be empty")
    pair = datasets.load_pair(args.pair, args.period, args.data_dir)
    p = args.lags or select_lags_bic(pair, args.p_max, args.trend)
    post = _fit_posterior(pair, p, args.trend, args.draws, args.seed, args.lambda_grid)
    bands = posterior_irf_bands(post, ORDERINGS[args.ordering], args.horizon, args.band)
    names = (args.pair, "gmta")
    records = []
    for target in range(2):
        for shock in range(2):
            for h in range(args.horizon + 1):
                records.append({
                    "target": names[target], "shock": names[shock], "horizon": h,
                    "q16": float(bands.lower[h, target, shock]),
                    "q50": float(bands.median[h, target, shock]),
                    "q84": float(bands.upper[h, target, shock]),
                })
    cfg = resolved_config(args)
    cfg.update(resolved_lags=p, lambda_overall=post.prior.lambda_overall)
    suffix = "_trend" if args.trend else ""
    stem = Path(args.out) / f"irf_{args.pair}_{args.period}_{args.ordering}{suffix}"
    paths = [write_records(stem, records, cfg, args.format)]
    if args.svg:
        from .plots import irf_svg

        irf_svg(bands, names, stem.with_suffix(".svg"))
        paths.append(stem.with_suffix(".svg"))
    return paths


def cmd_tcr(args) -> list[Path]:
    _check(args.lags >= 1, "--lags must be at least 1")
    _check(args.draws >= 1, "--draws must be at least 1")
    _check(args.horizons and min(args.horizons) >= 0, "--horizons must be non-negative")
    _check(args.lambda_grid, "--lambda-grid must not be empty")
    pair = datasets.load_pair("co2_rf", args.period, args.data_dir)

    def one(trend):
        return _fit_posterior(pair, args.lags, trend, args.draws, args.seed, args.lambda_grid)

    posts = dict(zip((False, True), _pmap(one, (False, True), args.threads)))
    records = []
    for name, ordering in ORDERINGS.items():
        rec = {"ordering": "co2, gmta" if name == "forcing-first" else "gmta, co2"}
        for trend, post in posts.items():
            tag = "trend" if trend else "no_trend"
            rec[f"lambda_{tag}"] = post.prior.lambda_overall
            for h in args.horizons:
                est = tcr_at(post, ordering, h, mode=args.mode)
                rec[f"tcr{h}_{tag}"] = est.median
                rec[f"tcr{h}_{tag}_q16"] = est.lower
                rec[f"tcr{h}_{tag}_q84"] = est.upper
                rec[f"tcr{h}_{tag}_discarded"] = est.discarded
                rec[f"tcr{h}_{tag}_unreliable"] = est.unreliable
        rec["draws"] = args.draws
        rec["low_precision"] = args.draws < 1000
        records.append(rec)
    stem = Path(args.out) / f"tcr_{args.period}"
    extra = {"matches_reference_vintage": datasets.get_period(args.period).matches_reference_vintage}
    return [write_records(stem, records, resolved_config(args), args.format, extra=extra)]


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        _check(args.threads >= 1, "--threads must be at least 1")
        for path in args.func(args):
            print(path)
    except IfvarError as exc:
        print(f"ifvar {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
