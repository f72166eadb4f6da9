"""Command-line interface: simulate, fit, benchmark, rank.

Every command resolves its configuration (defaults < --config file < flags,
with --seed winning last), embeds the resolved config's hash and the seed in
its outputs, and writes canonical JSON/CSV so identical invocations produce
byte-identical files. Exit codes: 0 success, 2 configuration error, 3 data
error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .baselines import fit_cox_classical, fit_cox_lasso_path
from .dataio import config_hash, read_survival_csv, write_json, write_survival_csv
from .exceptions import (
    DataError,
    InvalidConfigError,
    KOutOfRangeError,
    NumericalError,
)
from .metrics import make_default_methods, run_benchmark
from .network import Architecture
from .path import PathConfig, select_m_by_validation, train_path
from .simulate import SimScenario, generate
from .survival import standardize

FORMAT_VERSION = "1"

PATH_KEYS = (
    "epochs_per_lambda", "learning_rate", "path_multiplier", "M",
    "lambda_init", "dense_epochs", "dropout", "hidden_dims",
)
PATH_DEFAULTS = {
    "epochs_per_lambda": 10,
    "learning_rate": 1e-3,
    "path_multiplier": 0.02,
    "M": 10.0,
    "lambda_init": "auto",
    "dense_epochs": 100,
    "dropout": 0.2,
    "hidden_dims": (30, 30, 30),
}


def _lambda_init(text):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("lambda-init must be a number or 'auto'")


def _hidden_dims(text):
    try:
        return tuple(int(t) for t in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("hidden-dims must be comma-separated ints")


def _load_config_file(path, allowed: set[str]) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InvalidConfigError(f"{path}: config must be a JSON object")
    version = doc.pop("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InvalidConfigError(f"{path}: unsupported format_version {version!r}")
    unknown = set(doc) - allowed
    if unknown:
        raise InvalidConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    return doc


def _resolve(args, file_keys: set[str], defaults: dict) -> dict:
    """defaults < config file < explicit flags; --seed overrides everything."""
    resolved = dict(defaults)
    if getattr(args, "config", None):
        resolved.update(_load_config_file(args.config, file_keys))
    for key in file_keys:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    if getattr(args, "seed", None) is not None:
        resolved["seed"] = args.seed
    if "hidden_dims" in resolved:
        resolved["hidden_dims"] = tuple(int(d) for d in resolved["hidden_dims"])
    return resolved


def _path_config(resolved: dict, p: int, seed: int) -> PathConfig:
    try:
        return PathConfig(
            architecture=Architecture(
                input_dim=p,
                hidden_dims=resolved["hidden_dims"],
                dropout_rate=float(resolved["dropout"]),
            ),
            epochs_per_lambda=int(resolved["epochs_per_lambda"]),
            learning_rate=float(resolved["learning_rate"]),
            path_multiplier=float(resolved["path_multiplier"]),
            M=float(resolved["M"]),
            lambda_init=resolved["lambda_init"]
            if resolved["lambda_init"] == "auto" else float(resolved["lambda_init"]),
            dense_epochs=int(resolved["dense_epochs"]),
            seed=seed,
        )
    except (ValueError, TypeError) as exc:
        raise InvalidConfigError(str(exc)) from None


def _add_path_flags(parser):
    parser.add_argument("--epochs-per-lambda", dest="epochs_per_lambda", type=int)
    parser.add_argument("--learning-rate", dest="learning_rate", type=float)
    parser.add_argument("--path-multiplier", dest="path_multiplier", type=float)
    parser.add_argument("--M", dest="M", type=float,
                        help="hierarchy coefficient (inf allowed, 0 = plain lasso)")
    parser.add_argument("--lambda-init", dest="lambda_init", type=_lambda_init)
    parser.add_argument("--dense-epochs", dest="dense_epochs", type=int)
    parser.add_argument("--dropout", dest="dropout", type=float)
    parser.add_argument("--hidden-dims", dest="hidden_dims", type=_hidden_dims)


def cmd_simulate(args) -> int:
    keys = {"model", "n", "p", "rho", "c", "seed"}
    resolved = _resolve(args, keys, {
        "model": "model1", "n": 100, "p": 10, "rho": 0.0, "c": 20.0, "seed": 0,
    })
    try:
        scenario = SimScenario(
            model=str(resolved["model"]), n=int(resolved["n"]), p=int(resolved["p"]),
            rho=float(resolved["rho"]), c=float(resolved["c"]), seed=int(resolved["seed"]),
        )
    except (ValueError, TypeError) as exc:
        raise InvalidConfigError(str(exc)) from None
    data = generate(scenario)
    write_survival_csv(args.out, data.dataset)
    sidecar = args.scenario_out or str(args.out) + ".json"
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "simulate",
        "scenario": scenario.to_dict(),
        "seed": scenario.seed,
        "config_hash": config_hash(scenario.to_dict()),
        "censor_rate": data.censor_rate,
        "n_events": data.dataset.n_events,
        "true_features": sorted(data.true_features),
    }
    write_json(sidecar, doc)
    print(f"wrote {args.out} ({scenario.n} rows) and {sidecar}")
    return 0


def _standardization_block(stats) -> dict:
    return {"means": stats.means, "sds": stats.sds, "sd_denominator": "n-1"}


def cmd_fit(args) -> int:
    keys = set(PATH_KEYS) | {"seed", "method", "k"}
    resolved = _resolve(args, keys, {**PATH_DEFAULTS, "seed": 0, "method": "lassonet", "k": 3})
    method = str(resolved["method"])
    if method not in ("lassonet", "lasso"):
        raise InvalidConfigError(f"method must be 'lassonet' or 'lasso', got {method!r}")
    k = int(resolved["k"])
    seed = int(resolved["seed"])

    dataset = read_survival_csv(args.data)
    dataset_std, stats = standardize(dataset)
    if not 1 <= k <= dataset.p:
        raise KOutOfRangeError(f"k must lie in 1..{dataset.p}, got {k}")
    config = _path_config(resolved, dataset.p, seed)
    if method == "lassonet" and getattr(args, "select_m", False):
        chosen = select_m_by_validation(dataset_std, config)
        resolved["M"] = chosen
        config = _path_config(resolved, dataset.p, seed)

    if method == "lassonet":
        result = train_path(dataset_std, config)
    else:
        result = fit_cox_lasso_path(dataset_std, config)
    ranking = list(result.ranking)
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "fit",
        "method": method,
        "config": resolved,
        "config_hash": config_hash({**resolved, "method": method}),
        "seed": seed,
        "standardization": _standardization_block(stats),
        "result": result.to_dict(),
        "ranking": ranking,
        "top_k": ranking[:k],
    }
    write_json(args.out, doc)
    print(f"wrote {args.out}; top-{k} features: {[f'x{i}' for i in ranking[:k]]}")
    return 0


def cmd_benchmark(args) -> int:
    keys = {"scenarios", "methods", "replications", "base_seed", "k", "path"}
    resolved = _resolve(args, keys, {
        "scenarios": [], "methods": ["lassonet", "lasso", "cox"],
        "replications": 1, "base_seed": 0, "k": 3, "path": {},
    })
    if getattr(args, "seed", None) is not None:
        resolved["base_seed"] = args.seed
    if not resolved["scenarios"]:
        raise InvalidConfigError("benchmark needs at least one scenario")
    path_overrides = dict(resolved["path"])
    unknown = set(path_overrides) - set(PATH_KEYS)
    if unknown:
        raise InvalidConfigError(f"unknown path keys {sorted(unknown)}")
    path_resolved = {**PATH_DEFAULTS, **path_overrides}
    try:
        scenarios = [
            SimScenario(
                model=str(s.get("model", "model1")), n=int(s["n"]),
                p=int(s.get("p", 10)), rho=float(s.get("rho", 0.0)),
                c=float(s.get("c", 20.0)), seed=0,
            )
            for s in resolved["scenarios"]
        ]
    except (KeyError, ValueError, TypeError) as exc:
        raise InvalidConfigError(f"bad scenario entry: {exc}") from None
    base_config = _path_config(path_resolved, 10, int(resolved["base_seed"]))
    methods = make_default_methods(base_config, include=tuple(resolved["methods"]))
    table = run_benchmark(
        scenarios, methods,
        replications=int(resolved["replications"]),
        base_seed=int(resolved["base_seed"]),
        k=int(resolved["k"]),
    )
    chash = config_hash(resolved)
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "benchmark",
        "config": resolved,
        "config_hash": chash,
        "seed": int(resolved["base_seed"]),
        "provenance": {"package_version": __version__, "rng": "numpy PCG64 / SeedSequence"},
        "table": table.to_dict(),
    }
    if args.out_json:
        write_json(args.out_json, doc)
    if args.out_csv:
        rows = table.to_csv_rows()
        rows[0] = rows[0] + ["config_hash", "seed"]
        tail = [chash, int(resolved["base_seed"])]
        with open(args.out_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(rows[0])
            for row in rows[1:]:
                writer.writerow(row + tail)
    print(f"benchmark done: {len(table.cells)} cells")
    return 0


def cmd_rank(args) -> int:
    keys = set(PATH_KEYS) | {"seed", "k"}
    resolved = _resolve(args, keys, {**PATH_DEFAULTS, "seed": 0, "k": 5})
    k = int(resolved["k"])
    seed = int(resolved["seed"])
    dataset = read_survival_csv(args.data)
    if not 1 <= k <= dataset.p:
        raise KOutOfRangeError(f"k must lie in 1..{dataset.p}, got {k}")
    dataset_std, stats = standardize(dataset)
    config = _path_config(resolved, dataset.p, seed)
    result = train_path(dataset_std, config)
    top = list(result.ranking[:k])

    # post-hoc: classical Cox on the selected columns only
    sub = dataset_std.select_columns([i - 1 for i in top])
    fit = fit_cox_classical(sub)
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "rank",
        "config": resolved,
        "config_hash": config_hash(resolved),
        "seed": seed,
        "standardization": _standardization_block(stats),
        "ranking": list(result.ranking),
        "selected": [
            {
                "feature": f"x{i}",
                "index": i,
                "beta": float(fit.beta[j]),
                "std_err": float(fit.std_err[j]),
                "p_value": float(fit.p_values[j]),
            }
            for j, i in enumerate(top)
        ],
        "post_hoc_converged": fit.converged,
    }
    write_json(args.out, doc)
    print(f"wrote {args.out}; selected {[f'x{i}' for i in top]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxlassonet",
        description="Feature selection for right-censored survival data",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a synthetic dataset CSV")
    p_sim.add_argument("--config")
    p_sim.add_argument("--model", choices=("model1", "model2", "model2_squared"))
    p_sim.add_argument("--n", type=int)
    p_sim.add_argument("--p", type=int)
    p_sim.add_argument("--rho", type=float)
    p_sim.add_argument("--c", type=float)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--scenario-out", dest="scenario_out")
    p_sim.set_defaults(func=cmd_simulate)

    p_fit = sub.add_parser("fit", help="run a selection path on a dataset CSV")
    p_fit.add_argument("--config")
    p_fit.add_argument("--data", required=True)
    p_fit.add_argument("--out", required=True)
    p_fit.add_argument("--method", choices=("lassonet", "lasso"))
    p_fit.add_argument("--k", type=int)
    p_fit.add_argument("--seed", type=int)
    p_fit.add_argument("--select-m", dest="select_m", action="store_true",
                       help="pick M on a validation split before the final path")
    _add_path_flags(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_bench = sub.add_parser("benchmark", help="replicate scenarios and tabulate metrics")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--seed", type=int, help="override base_seed")
    p_bench.add_argument("--out-json", dest="out_json")
    p_bench.add_argument("--out-csv", dest="out_csv")
    p_bench.set_defaults(func=cmd_benchmark)

    p_rank = sub.add_parser("rank", help="select top-k features and refit Cox on them")
    p_rank.add_argument("--config")
    p_rank.add_argument("--data", required=True)
    p_rank.add_argument("--out", required=True)
    p_rank.add_argument("--k", type=int)
    p_rank.add_argument("--seed", type=int)
    _add_path_flags(p_rank)
    p_rank.set_defaults(func=cmd_rank)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidConfigError, KOutOfRangeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
