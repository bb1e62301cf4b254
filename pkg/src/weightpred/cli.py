"""Command-line front end: ingest, gen-weights, predict, evaluate, reproduce-tables.

Exit codes are a stable contract for scripting: 0 success, 1 usage error,
2 IO/parse error, 3 domain or numeric failure.

Defaults mirror the standard experiment protocol: sample 5000 edges, train
on 3500 edges (edge task) or 70% of the vertex set (vertex tasks), and set
the bandwidth h to the standard deviation of the training weights.  Pass
``--sample-size all`` to use every edge of a snapshot.

Every flag can also be supplied through ``--config file.json`` (a flat JSON
object keyed by flag destination names, e.g. ``{"sample_size": 200}``);
explicit flags win over the config file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError, PredictionError
from .evaluation import (
    ExperimentConfig,
    REPORT_FORMAT,
    format_tables,
    mae,
    read_predictions,
    rmse,
    run_experiment,
    write_predictions,
)
from .fairness import compute_fairness_goodness
from .graph import build_graph
from .ingest import (
    DatasetSpec,
    Snapshot,
    build_snapshot,
    load_snapshot,
    save_snapshot,
)

FG_FORMAT = "weightpred-fg-v1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_config_flag(p):
    p.add_argument("--config", default=None, help="JSON file of flag defaults")


def _merged(args, defaults: dict) -> dict:
    """Flag value if given, else config-file value, else built-in default."""
    overrides = {}
    if getattr(args, "config", None):
        try:
            overrides = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ParseError(f"cannot read config: {exc}", path=args.config) from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", path=args.config) from exc
        if not isinstance(overrides, dict):
            raise ParseError("config file must hold a JSON object", path=args.config)
    out = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = overrides.get(key, default)
        out[key] = value
    return out


def _parse_sample_size(value):
    if value is None or value == "all":
        return None
    try:
        return int(value)
    except (TypeError, ValueError):
        raise UsageError(f"--sample-size must be an integer or 'all', got {value!r}")


def _parse_delimiter(value):
    mapping = {"comma": ",", "tab": "\t", "whitespace": " ", "auto": None}
    return mapping.get(value, value)


# ---- subcommand argument groups ---------------------------------------------

_RUN_DEFAULTS = {
    "seed": 0,
    "sample_size": "5000",
    "train_count": None,
    "train_fraction": None,
    "h": None,
    "k": 5,
    "zero_distance_policy": "exclude",
    "denominator_policy": "neighborhood_size",
    "kernel": "rbf",
    "gamma": None,
    "degree": 3,
    "coef0": 1.0,
    "reg_lambda": 1e-3,
    "fg_tol": 1e-6,
    "fg_max_iter": 100,
    "exclude_self": False,
}


def _add_run_flags(p, with_task=True):
    if with_task:
        p.add_argument("--task", choices=("origin", "terminal", "edge"), required=True)
        p.add_argument("--method", choices=("knn", "svm"), required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sample-size", dest="sample_size", default=None,
                   help="edges to sample from the snapshot, or 'all' (default 5000)")
    p.add_argument("--train-count", dest="train_count", type=int, default=None)
    p.add_argument("--train-fraction", dest="train_fraction", type=float, default=None)
    p.add_argument("--h", type=float, default=None,
                   help="fixed bandwidth; default is the training std-dev")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--zero-distance-policy", dest="zero_distance_policy",
                   choices=("exclude", "include"), default=None)
    p.add_argument("--denominator-policy", dest="denominator_policy",
                   choices=("neighborhood_size", "fixed_k"), default=None)
    p.add_argument("--kernel", choices=("linear", "polynomial", "rbf"), default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--coef0", type=float, default=None)
    p.add_argument("--reg-lambda", dest="reg_lambda", type=float, default=None)
    p.add_argument("--fg-tol", dest="fg_tol", type=float, default=None)
    p.add_argument("--fg-max-iter", dest="fg_max_iter", type=int, default=None)
    p.add_argument("--exclude-self", dest="exclude_self", action="store_const",
                   const=True, default=None)
    _add_config_flag(p)


def _build_experiment_config(args, task, method, seed=None) -> ExperimentConfig:
    vals = _merged(args, _RUN_DEFAULTS)
    if vals["train_count"] is not None and vals["train_fraction"] is not None:
        raise UsageError("pass at most one of --train-count / --train-fraction")
    # Neither given -> 70% of the element universe, which with the default
    # 5000-edge sample is exactly the standard 3500-edge training set.
    try:
        return ExperimentConfig(
            task=task,
            method=method,
            seed=seed if seed is not None else vals["seed"],
            sample_size=_parse_sample_size(vals["sample_size"]),
            train_count=vals["train_count"],
            train_fraction=vals["train_fraction"],
            h_mode="fixed" if vals["h"] is not None else "stddev",
            h_value=vals["h"],
            k=vals["k"],
            zero_distance_policy=vals["zero_distance_policy"],
            denominator_policy=vals["denominator_policy"],
            kernel=vals["kernel"],
            gamma=vals["gamma"],
            degree=vals["degree"],
            coef0=vals["coef0"],
            reg_lambda=vals["reg_lambda"],
            fg_tol=vals["fg_tol"],
            fg_max_iter=vals["fg_max_iter"],
            exclude_self=bool(vals["exclude_self"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _snapshot_summary(snapshot: Snapshot) -> str:
    n_pos = sum(1 for r in snapshot.edges if r.weight > 0)
    pct = 100.0 * n_pos / len(snapshot.edges)
    return (
        f"origins={len(snapshot.origins)} terminals={len(snapshot.terminals)} "
        f"edges={len(snapshot.edges)} positive={pct:.2f}%"
    )


# ---- subcommands -------------------------------------------------------------


def cmd_ingest(args) -> int:
    defaults = {"seed": 0, "sample": None, "weight_min": None, "weight_max": None,
                "delimiter": ",", "timestamp": False}
    vals = _merged(args, defaults)
    if vals["weight_min"] is None or vals["weight_max"] is None:
        raise UsageError("--weight-min and --weight-max are required")
    spec = DatasetSpec(
        path=args.input,
        weight_range=(float(vals["weight_min"]), float(vals["weight_max"])),
        has_timestamp=bool(vals["timestamp"]),
        delimiter=_parse_delimiter(vals["delimiter"]),
    )
    sample = _parse_sample_size(vals["sample"]) if vals["sample"] is not None else None
    snapshot = build_snapshot(spec, sample_size=sample, seed=vals["seed"])
    save_snapshot(snapshot, args.output)
    print(_snapshot_summary(snapshot))
    print(f"snapshot written to {args.output}")
    return 0


def cmd_gen_weights(args) -> int:
    defaults = {"fg_tol": 1e-6, "fg_max_iter": 100}
    vals = _merged(args, defaults)
    snapshot = load_snapshot(args.snapshot)
    graph = build_graph([r.pair for r in snapshot.edges])
    scores = compute_fairness_goodness(
        graph,
        {r.pair: r.weight for r in snapshot.edges},
        tol=vals["fg_tol"],
        max_iter=vals["fg_max_iter"],
    )
    payload = {
        "format": FG_FORMAT,
        "fairness": {str(k): v for k, v in scores.fairness.items()},
        "goodness": {str(k): v for k, v in scores.goodness.items()},
        "iterations": scores.iterations,
        "converged": scores.converged,
        "config": {"tol": vals["fg_tol"], "max_iter": vals["fg_max_iter"]},
        "snapshot_digest": snapshot.digest(),
    }
    Path(args.output).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"converged={scores.converged} iterations={scores.iterations}")
    print(f"scores written to {args.output}")
    return 0


def cmd_predict(args) -> int:
    config = _build_experiment_config(args, args.task, args.method)
    snapshot = load_snapshot(args.snapshot)
    result = run_experiment(snapshot, config)
    write_predictions(args.output, result)
    rep = result.report
    print(
        f"{rep.task} {rep.method} seed={rep.seed} "
        f"predictions={rep.n_test} -> {args.output}"
    )
    return 0


def _report_path(base, seed, repeat) -> Path:
    base = Path(base)
    if repeat <= 1:
        return base
    return base.with_name(f"{base.stem}.seed{seed}{base.suffix}")


def cmd_evaluate(args) -> int:
    if args.predictions is not None:
        if args.snapshot is not None:
            raise UsageError("pass either --predictions or --snapshot, not both")
        if args.repeat is not None and args.repeat != 1:
            raise UsageError("--repeat applies only to snapshot mode")
        rows, meta = read_predictions(args.predictions)
        preds = [r.predicted for r in rows]
        truths = [r.truth for r in rows]
        flag_counts: dict = {}
        for row in rows:
            for f in row.flags:
                flag_counts[f] = flag_counts.get(f, 0) + 1
        report = {
            "format": REPORT_FORMAT,
            "task": meta.get("task"),
            "method": meta.get("method"),
            "mae": mae(preds, truths),
            "rmse": rmse(preds, truths),
            "n_test": len(rows),
            "flags": flag_counts,
            "config": json.loads(meta["config"]) if "config" in meta else None,
            "snapshot_digest": meta.get("snapshot_digest"),
            "scored_from": "predictions-file",
        }
        if args.report:
            Path(args.report).write_text(
                json.dumps(report, sort_keys=True, indent=2) + "\n"
            )
        print(f"({report['mae']:.3f}, {report['rmse']:.3f})")
        return 0

    if args.snapshot is None:
        raise UsageError("pass --predictions or --snapshot")
    if args.task is None or args.method is None:
        raise UsageError("snapshot mode requires --task and --method")
    repeat = args.repeat if args.repeat is not None else 1
    if repeat < 1:
        raise UsageError("--repeat must be >= 1")
    snapshot = load_snapshot(args.snapshot)
    base_config = _build_experiment_config(args, args.task, args.method)
    for i in range(repeat):
        config = base_config.with_seed(base_config.seed + i)
        result = run_experiment(snapshot, config)
        rep = result.report
        if args.report:
            path = _report_path(args.report, config.seed, repeat)
            Path(path).write_text(rep.to_json())
        print(f"{rep.task} {rep.method} seed={rep.seed} {rep.pair()}")
    return 0


def cmd_reproduce_tables(args) -> int:
    snapshot = load_snapshot(args.snapshot)
    label = args.label or Path(args.snapshot).stem
    print(_snapshot_summary(snapshot))
    print()
    reports = []
    for task in ("origin", "terminal", "edge"):
        for method in ("knn", "svm"):
            config = _build_experiment_config(args, task, method)
            result = run_experiment(snapshot, config)
            reports.append(result.report)
            if args.output_dir:
                out = Path(args.output_dir)
                out.mkdir(parents=True, exist_ok=True)
                (out / f"report_{task}_{method}.json").write_text(
                    result.report.to_json()
                )
    print(format_tables(reports, label=label))
    return 0


# ---- parser wiring -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="weightpred",
        description="Weight prediction on directed networks via count metrics.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="parse a raw edge list into a snapshot")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--weight-min", dest="weight_min", type=float, default=None)
    p.add_argument("--weight-max", dest="weight_max", type=float, default=None)
    p.add_argument("--delimiter", default=None,
                   help="',', 'tab', 'whitespace', 'auto', or a single character")
    p.add_argument("--timestamp", action="store_const", const=True, default=None,
                   help="records carry a fourth timestamp field")
    p.add_argument("--sample", default=None,
                   help="subsample this many edges at ingest time")
    p.add_argument("--seed", type=int, default=None)
    _add_config_flag(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("gen-weights", help="fairness/goodness scores for a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--fg-tol", dest="fg_tol", type=float, default=None)
    p.add_argument("--fg-max-iter", dest="fg_max_iter", type=int, default=None)
    _add_config_flag(p)
    p.set_defaults(func=cmd_gen_weights)

    p = sub.add_parser("predict", help="predict held-out weights")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--output", required=True)
    _add_run_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score predictions or run end to end")
    p.add_argument("--predictions", default=None)
    p.add_argument("--snapshot", default=None)
    p.add_argument("--report", default=None, help="write the report JSON here")
    p.add_argument("--repeat", type=int, default=None,
                   help="run N seeds (seed, seed+1, ...) in snapshot mode")
    p.add_argument("--task", choices=("origin", "terminal", "edge"), default=None)
    p.add_argument("--method", choices=("knn", "svm"), default=None)
    _add_run_flags(p, with_task=False)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "reproduce-tables", help="all tasks x methods, printed as aligned tables"
    )
    p.add_argument("--snapshot", required=True)
    p.add_argument("--label", default=None, help="dataset name for the table rows")
    p.add_argument("--output-dir", dest="output_dir", default=None)
    _add_run_flags(p, with_task=False)
    p.set_defaults(func=cmd_reproduce_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help()
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, PredictionError, ValueError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
