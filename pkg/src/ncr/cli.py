"""Command line entry point: ``ncr {generate,benchmark,matrix,report}``.

Logs go to stderr, results to files; stdout carries one summary line.
Settings resolve as flags > ``--config`` JSON file > defaults.
"""

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .data import SynthSpec, benchmark_synth_specs, generate_synthetic, load_csv, write_csv
from .evaluation import build_report, write_report
from .experiment import default_spec, run_benchmark
from .models import KINDS
from .tuning import GridSpec, write_cell_scores

log = logging.getLogger("ncr")

DEFAULTS = {
    "model": "ols",
    "augmented": False,
    "objective": None,  # r2 for CSV data, mse for synthetic data
    "seed": 42,
    "workers": 1,
    "coarse_grid": False,
    "kernel": None,  # rbf for CSV data, linear for synthetic data
    "n": 1000,
    "slope": 2.0,
    "intercept": 0.0,
    "variance": 5.0,
    "q_grid": None,
    "eps_grid": None,
    "alpha_grid": None,
    "C_grid": None,
    "tube": 0.1,
    # matrix subsetting (config file only)
    "models": None,
    "sizes": None,
    "variances": None,
    "slopes": None,
}


class UsageError(Exception):
    pass


def _env_seed():
    raw = os.environ.get("NCR_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"NCR_SEED must be an integer, got {raw!r}") from None


def _resolve(args):
    """Merge flags, config file and defaults into one settings dict."""
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(config) - set(DEFAULTS) - {"dataset", "target", "out"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    env_seed = _env_seed()
    settings = dict(DEFAULTS)
    if env_seed is not None:
        settings["seed"] = env_seed
    settings.update(config)
    for key, value in vars(args).items():
        if value is not None and key not in ("func", "config"):
            settings[key] = value
    return settings


def _grid(settings, augmented, objective):
    maker = GridSpec.coarse if settings["coarse_grid"] else GridSpec
    grid = maker(objective=objective, augmented=augmented)
    keys = ("q_grid", "eps_grid", "alpha_grid", "C_grid")
    overrides = {k: tuple(float(v) for v in settings[k]) for k in keys if settings.get(k)}
    if not overrides:
        return grid
    label = "custom" if {"q_grid", "eps_grid"} & set(overrides) else grid.label
    return replace(grid, label=label, **overrides)


def _grid_kwargs(grid):
    return {k: tuple(v) if isinstance(v, list) else v for k, v in grid.to_dict().items()}


def _synth_from(settings):
    return SynthSpec(
        n=int(settings["n"]),
        slope=float(settings["slope"]),
        intercept=float(settings["intercept"]),
        noise_variance=float(settings["variance"]),
        seed=int(settings["seed"]),
    )


def cmd_generate(args):
    s = _resolve(args)
    spec = _synth_from(s)
    ds = generate_synthetic(spec)
    out = Path(s["out"])
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        write_csv(ds, out)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None
    print(f"generated n={spec.n} slope={spec.slope:g} variance={spec.noise_variance:g} seed={spec.seed} -> {out}")
    return 0


def cmd_benchmark(args):
    s = _resolve(args)
    if s["model"] not in KINDS:
        raise UsageError(f"--model must be one of {KINDS}")
    if s.get("dataset"):
        if not s.get("target"):
            raise UsageError("--target is required with --dataset")
        try:
            ds = load_csv(s["dataset"], s["target"])
        except (OSError, KeyError, ValueError) as exc:
            log.error("dataset error: %s", exc)
            return 2
        synthetic, mmse_flag = None, False
    else:
        synthetic = _synth_from(s)
        ds, mmse_flag = generate_synthetic(synthetic), True
    objective = s["objective"] or ("mse" if synthetic else "r2")
    kernel = s["kernel"] or ("linear" if synthetic else "rbf")
    augmented = bool(s["augmented"])
    grid = _grid(s, augmented, objective)
    base = default_spec(s["model"], kernel)
    if base.kind == "svr":
        base = replace(base, tube=float(s["tube"]))
    record, pipe, result = run_benchmark(ds, base, grid, seed=int(s["seed"]), with_mmse=mmse_flag, workers=int(s["workers"]))
    metadata = {
        "command": "benchmark",
        "grid": grid.to_dict(),
        "grid_label": grid.label,
        "seed": int(s["seed"]),
        "dataset": synthetic.to_dict() if synthetic else {"csv": str(s["dataset"]), "target": s["target"]},
    }
    report = build_report([record], metadata)
    out = Path(s["out"])
    stem = f"{ds.name}_{base.kind}_{'aug' if augmented else 'base'}"
    write_report(report, out, stem)
    (out / f"{stem}_model.json").write_text(pipe.to_json() + "\n", encoding="utf-8")
    write_cell_scores(result, out / f"{stem}_cells.csv")
    te = record["test_metrics"]
    print(f"{stem}: test r2={te['r2']:.4f} mse={te['mse']:.4f} mae={te['mae']:.4f} -> {out / (stem + '.json')}")
    return 0


def _matrix_job(job):
    spec, kind, augmented, grid_kw, seed = job
    grid = GridSpec(**grid_kw)
    try:
        record, _, _ = run_benchmark(generate_synthetic(spec), default_spec(kind), grid, seed=seed, with_mmse=True)
    except Exception as exc:  # recorded so the rest of the matrix still runs
        record = {"dataset_id": spec.dataset_id, "model": kind, "augmented": augmented, "hyperparams": {}, "error": repr(exc)}
    record["synth"] = spec.to_dict()
    return record


def cmd_matrix(args):
    s = _resolve(args)
    seed = int(s["seed"])
    objective = s["objective"] or "mse"
    models = tuple(s["models"] or KINDS)
    if set(models) - set(KINDS):
        raise UsageError(f"models must be drawn from {KINDS}")
    specs = [
        sp
        for sp in benchmark_synth_specs(seed)
        if (not s["sizes"] or sp.n in s["sizes"])
        and (not s["variances"] or sp.noise_variance in s["variances"])
        and (not s["slopes"] or sp.slope in s["slopes"])
    ]
    if not specs:
        raise UsageError("the size/variance/slope subset selects no dataset")
    jobs = []
    for spec in specs:
        for kind in models:
            for augmented in (False, True):
                jobs.append((spec, kind, augmented, _grid_kwargs(_grid(s, augmented, objective)), seed))
    workers = int(s["workers"])
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_matrix_job, jobs))
    else:
        records = [_matrix_job(j) for j in jobs]
    grid = _grid(s, True, objective)
    report = build_report(
        records,
        {"command": "matrix", "grid": grid.to_dict(), "grid_label": grid.label, "seed": seed, "n_runs": len(records)},
    )
    out = Path(s["out"])
    write_report(report, out, "matrix")
    _write_mse_vs_n(report, out / "mse_vs_n.csv")
    failed = sum(1 for r in records if r.get("error"))
    print(f"matrix: {len(records)} runs ({failed} failed), grid={grid.label} -> {out / 'matrix.json'}")
    return 0


def _write_mse_vs_n(report, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "slope", "noise_variance", "model", "augmented", "test_mse", "mmse", "ratio"])
        rows = []
        for r in report["runs"]:
            if r.get("error"):
                continue
            sy = r["synth"]
            mse, ref = r["test_metrics"]["mse"], r["mmse"]
            rows.append((sy["n"], sy["slope"], sy["noise_variance"], r["model"], int(r["augmented"]), mse, ref, mse / ref))
        for row in sorted(rows):
            w.writerow(row)


def cmd_report(args):
    runs, metas = [], []
    for p in args.inputs:
        try:
            doc = json.loads(Path(p).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            log.error("cannot read report %s: %s", p, exc)
            return 2
        runs.extend(doc["runs"])
        metas.append(doc.get("metadata", {}))
    report = build_report(runs, {"command": "report", "sources": metas})
    json_path, _ = write_report(report, args.out, args.stem)
    lines = [f"{m}: improved {v['improved_count']}" for m, v in report["boost_summary"].items()]
    print(f"report: {len(runs)} runs; " + ("; ".join(lines) or "no boost pairs") + f" -> {json_path}")
    return 0


def _add_common(p):
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("--seed", type=int, help="random seed (default: $NCR_SEED or 42)")
    p.add_argument("--out", help="output path")


def _add_run_flags(p):
    p.add_argument("--model", choices=KINDS)
    p.add_argument("--augmented", action="store_const", const=True, help="add tracemean features")
    p.add_argument("--objective", choices=("r2", "mse"))
    p.add_argument("--workers", type=int)
    p.add_argument("--coarse-grid", dest="coarse_grid", action="store_const", const=True)
    p.add_argument("--kernel", choices=("linear", "rbf"))
    p.add_argument("--tube", type=float, help="SVR epsilon-tube half width")


def _add_synth_flags(p):
    p.add_argument("--n", type=int)
    p.add_argument("--slope", type=float)
    p.add_argument("--intercept", type=float)
    p.add_argument("--variance", type=float, help="noise variance")


def build_parser():
    parser = argparse.ArgumentParser(prog="ncr", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic y = m x + c + noise CSV")
    _add_common(p)
    _add_synth_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("benchmark", help="tune, fit and evaluate one model")
    _add_common(p)
    _add_run_flags(p)
    _add_synth_flags(p)
    p.add_argument("--dataset", help="CSV file (omit for a synthetic dataset)")
    p.add_argument("--target", help="target column of the CSV")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("matrix", help="all 24 synthetic settings x 4 models x baseline/augmented")
    _add_common(p)
    _add_run_flags(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("report", help="merge report JSON files and compute boosts")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--stem", default="report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    del args.verbose, args.command
    try:
        # --out may also come from the config file
        out = args.out or _resolve(args).get("out")
        if not out:
            raise UsageError("--out is required")
        args.out = out
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
