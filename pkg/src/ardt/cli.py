"""Command-line entry points.

Subcommands:
  benchmark    cross-validate a method roster over datasets, emit tables
  train        fit one method on one file, write a JSON model
  predict      apply a JSON model to a file, write predictions CSV
  generate     write a synthetic dataset as CSV
  dump-curves  tabulate Renyi/Shannon entropy over (alpha, p) grids

A benchmark run is driven by one INI config file (sections + key=value);
command-line flags override file values, and the output directory may also
be overridden through the ARDT_OUTPUT_DIR environment variable. Exit codes:
0 success, 1 configuration error, 2 runtime failure.
"""

import argparse
import configparser
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

import ardt
from ardt.criteria import _renyi_vec, _shannon_vec
from ardt.dataset import Dataset, DatasetError, load_csv, load_keel
from ardt.evaluation import average_ranks, compare_to_control, cross_validate, friedman_test
from ardt.linear import LinearModel, LinearTrainConfig, model_from_json, model_to_json
from ardt.methods import BENCHMARK_METHODS, build_method
from ardt.synth import SynthSpec, generate, generate_daily_blocks, write_csv
from ardt.tree import (
    DecisionTree,
    EnsembleModel,
    TreeConfig,
    ensemble_from_json,
    ensemble_to_json,
    tree_from_json,
    tree_to_json,
)

OUTPUT_DIR_ENV = "ARDT_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: str
    format: str = "auto"  # csv | keel | auto (by extension)
    label_column: str | int | None = None
    positive_label: str = "positive"

    def load(self) -> Dataset:
        fmt = self.format
        if fmt == "auto":
            fmt = "keel" if str(self.path).endswith(".dat") else "csv"
        if fmt == "keel":
            d = load_keel(self.path, self.label_column, self.positive_label)
        elif fmt == "csv":
            if self.label_column is None:
                raise ConfigError(f"dataset {self.name!r}: csv files need label_column")
            d = load_csv(self.path, self.label_column, self.positive_label)
        else:
            raise ConfigError(f"dataset {self.name!r}: unknown format {fmt!r}")
        return Dataset(d.features, d.labels, d.feature_meta, name=self.name)


@dataclass(frozen=True)
class RunConfig:
    datasets: tuple
    methods: tuple
    k: int = 10
    seed: int = 0
    output_dir: str = "out"
    tree: TreeConfig = field(default_factory=TreeConfig)
    linear_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("config needs at least one [dataset.*] section")
        if not self.methods:
            raise ConfigError("config needs at least one method")
        if self.k < 2:
            raise ConfigError(f"k must be >= 2, got {self.k}")


_RUN_KEYS = {"methods", "k", "seed", "output_dir"}
_TREE_KEYS = {
    "criterion", "fixed_alpha", "min_node_size", "max_depth", "min_gain",
    "find_alpha_step", "find_alpha_tol", "prune", "prune_fraction",
    "geometric_pruning_rate",
}
_LINEAR_KEYS = {"learning_rate", "max_iters", "grad_tol", "l2"}
_DATASET_KEYS = {"path", "format", "label_column", "positive_label"}


def _coerce(value: str, like):
    if isinstance(like, bool):
        lowered = value.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"expected a boolean, got {value!r}")
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


def parse_config(path) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")

    run_kwargs = {}
    tree_kwargs = {}
    linear_kwargs = {}
    datasets = []
    for section in parser.sections():
        items = dict(parser.items(section))
        if section == "run":
            unknown = set(items) - _RUN_KEYS
            if unknown:
                raise ConfigError(f"[run]: unknown keys {sorted(unknown)}")
            if "methods" in items:
                run_kwargs["methods"] = tuple(
                    m.strip() for m in items["methods"].split(",") if m.strip())
            if "k" in items:
                run_kwargs["k"] = int(items["k"])
            if "seed" in items:
                run_kwargs["seed"] = int(items["seed"])
            if "output_dir" in items:
                run_kwargs["output_dir"] = items["output_dir"]
        elif section == "tree":
            unknown = set(items) - _TREE_KEYS
            if unknown:
                raise ConfigError(f"[tree]: unknown keys {sorted(unknown)}")
            defaults = TreeConfig()
            for key, val in items.items():
                if key == "max_depth":
                    tree_kwargs[key] = None if val.strip().lower() == "none" else int(val)
                else:
                    tree_kwargs[key] = _coerce(val, getattr(defaults, key))
        elif section == "linear":
            unknown = set(items) - _LINEAR_KEYS
            if unknown:
                raise ConfigError(f"[linear]: unknown keys {sorted(unknown)}")
            defaults = LinearTrainConfig()
            for key, val in items.items():
                linear_kwargs[key] = _coerce(val, getattr(defaults, key))
        elif section.startswith("dataset."):
            unknown = set(items) - _DATASET_KEYS
            if unknown:
                raise ConfigError(f"[{section}]: unknown keys {sorted(unknown)}")
            if "path" not in items:
                raise ConfigError(f"[{section}]: missing required key 'path'")
            label = items.get("label_column")
            if label is not None and label.lstrip("-").isdigit():
                label = int(label)
            datasets.append(DatasetSpec(
                name=section[len("dataset."):],
                path=items["path"],
                format=items.get("format", "auto"),
                label_column=label,
                positive_label=items.get("positive_label", "positive"),
            ))
        else:
            raise ConfigError(f"unknown config section [{section}]")

    try:
        tree_cfg = TreeConfig(**tree_kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[tree]: {exc}") from None
    run_kwargs.setdefault("methods", BENCHMARK_METHODS)
    return RunConfig(
        datasets=tuple(datasets),
        tree=tree_cfg,
        linear_overrides=linear_kwargs,
        **run_kwargs,
    )


def config_digest(config: RunConfig) -> str:
    doc = {
        "datasets": [asdict(d) for d in config.datasets],
        "methods": list(config.methods),
        "k": config.k,
        "seed": config.seed,
        "tree": asdict(config.tree),
        "linear": dict(sorted(config.linear_overrides.items())),
    }
    blob = json.dumps(doc, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# benchmark


def _build_pipelines(config: RunConfig):
    base_linear = LinearTrainConfig()
    pipes = []
    for name in config.methods:
        if name.startswith("LogR") or name.startswith("LinR"):
            method = "closed-form-least-squares" if name.startswith("LinR") else "gradient-descent"
            linear = LinearTrainConfig(method=method, **config.linear_overrides)
        else:
            linear = base_linear
        try:
            pipes.append(build_method(name, tree_config=config.tree, linear_config=linear))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return pipes


def _format_cell(value) -> str:
    return "NA" if value is None else repr(float(value))


def _write_table(path, methods, rows, with_ranks=None):
    """rows: list of (dataset_name, [score or None per method])."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if with_ranks is None:
            writer.writerow(["dataset"] + list(methods))
            for name, scores in rows:
                writer.writerow([name] + [_format_cell(s) for s in scores])
        else:
            header = ["dataset"]
            for m in methods:
                header += [m, f"{m} rank"]
            writer.writerow(header)
            for (name, scores), ranks in zip(rows, with_ranks):
                out = [name]
                for s, r in zip(scores, ranks):
                    out += [_format_cell(s), _format_cell(r)]
                writer.writerow(out)


def _write_rank_table(path, methods, dataset_names, table):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset"] + list(methods))
        for name, row in zip(dataset_names, table.ranks):
            writer.writerow([name] + [repr(float(r)) for r in row])
        writer.writerow(["average"] + [repr(float(r)) for r in table.average])


def run_benchmark(config: RunConfig) -> int:
    pipelines = _build_pipelines(config)
    os.makedirs(config.output_dir, exist_ok=True)
    digest = config_digest(config)

    loaded = []
    failures = []
    for spec in config.datasets:
        try:
            loaded.append((spec.name, spec.load()))
        except (DatasetError, ConfigError, OSError) as exc:
            loaded.append((spec.name, None))
            failures.append({"dataset": spec.name, "method": None, "error": str(exc)})

    results = {}
    for ds_name, data in loaded:
        for pipe in pipelines:
            if data is None:
                results[(ds_name, pipe.name)] = None
                continue
            try:
                results[(ds_name, pipe.name)] = cross_validate(
                    pipe, data, config.k, config.seed)
            except Exception as exc:  # record and continue: partial results
                results[(ds_name, pipe.name)] = None
                failures.append(
                    {"dataset": ds_name, "method": pipe.name, "error": str(exc)})

    methods = [p.name for p in pipelines]
    dataset_names = [name for name, _ in loaded]
    fscore_rows = []
    acc_rows = []
    for ds_name in dataset_names:
        cells = [results[(ds_name, m)] for m in methods]
        fscore_rows.append((ds_name, [c.mean_fscore if c else None for c in cells]))
        acc_rows.append((ds_name, [c.mean_accuracy if c else None for c in cells]))

    complete = not failures
    stats_doc = {
        "seed": config.seed,
        "config_hash": digest,
        "version": ardt.__version__,
        "metrics": {},
    }
    for metric, rows, table_path, ranks_path in (
        ("fscore", fscore_rows, "fscore_table.csv", "fscore_ranks.csv"),
        ("accuracy", acc_rows, "acc_table.csv", "acc_ranks.csv"),
    ):
        ranks = None
        if complete and len(methods) >= 2:
            table = average_ranks([scores for _, scores in rows], higher_is_better=True)
            ranks = table.ranks
            _write_rank_table(
                os.path.join(config.output_dir, ranks_path), methods, dataset_names, table)
            section = {"average_ranks": dict(zip(methods, table.average.tolist()))}
            if len(dataset_names) >= 2:
                statistic, p_value = friedman_test(table)
                control = methods.index("ARDT") if "ARDT" in methods else int(
                    np.argmin(table.average))
                holm = compare_to_control(table, control)
                section.update({
                    "friedman_statistic": statistic,
                    "friedman_p_value": p_value,
                    "degrees_of_freedom": len(methods) - 1,
                    "control": methods[control],
                    "holm": {
                        "z": dict(zip(methods, holm["z"])),
                        "p": dict(zip(methods, holm["p"])),
                        "equivalent_to_control": [
                            m for m, eq in zip(methods, holm["equivalent_to_control"]) if eq],
                    },
                })
            stats_doc["metrics"][metric] = section
        _write_table(
            os.path.join(config.output_dir, table_path), methods, rows, with_ranks=ranks)

    with open(os.path.join(config.output_dir, "friedman_holm.json"), "w") as fh:
        json.dump(stats_doc, fh, indent=1, sort_keys=True)

    manifest = {
        "seed": config.seed,
        "config_hash": digest,
        "version": ardt.__version__,
        "k": config.k,
        "methods": methods,
        "datasets": dataset_names,
        "failures": failures,
        "cells": {
            f"{ds}::{m}": None if results[(ds, m)] is None else {
                "mean_fscore": results[(ds, m)].mean_fscore,
                "mean_accuracy": results[(ds, m)].mean_accuracy,
                "wall_time_s": results[(ds, m)].wall_time,
                "folds": [
                    {"tp": cm.tp, "fp": cm.fp, "tn": cm.tn, "fn": cm.fn}
                    for cm in results[(ds, m)].fold_confusions
                ],
            }
            for ds in dataset_names
            for m in methods
        },
    }
    with open(os.path.join(config.output_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)

    if failures:
        for failure in failures:
            where = failure["dataset"] if failure["method"] is None else (
                f"{failure['dataset']} / {failure['method']}")
            print(f"FAILED {where}: {failure['error']}", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# train / predict


def _load_dataset_args(args) -> Dataset:
    spec = DatasetSpec(
        name=os.path.basename(str(args.data)).rsplit(".", 1)[0],
        path=args.data,
        format=args.format,
        label_column=(
            int(args.label_column)
            if args.label_column is not None and args.label_column.lstrip("-").isdigit()
            else args.label_column),
        positive_label=args.positive_label,
    )
    return spec.load()


def cmd_train(args) -> int:
    data = _load_dataset_args(args)
    linear = LinearTrainConfig(
        method="closed-form-least-squares" if args.method.startswith("LinR")
        else "gradient-descent")
    pipe = build_method(args.method, tree_config=TreeConfig(), linear_config=linear)
    model = pipe.fit(data, args.seed)
    if isinstance(model, DecisionTree):
        text = tree_to_json(model)
    elif isinstance(model, EnsembleModel):
        text = ensemble_to_json(model)
    elif isinstance(model, LinearModel):
        text = model_to_json(model)
    else:
        raise AssertionError(f"unserializable model {type(model)}")
    with open(args.out, "w") as fh:
        fh.write(text)
    print(f"wrote {args.out}")
    return 0


def _features_with_meta(path, feature_meta, label_column):
    """Parse a CSV/KEEL file into a feature matrix using a trained model's
    column metadata; categories unseen in training map to code -1."""
    if str(path).endswith(".dat"):
        raw = load_keel(path)  # reuse the KEEL reader, then realign below
        header = [fm.name for fm in raw.feature_meta]
        raise DatasetError(
            "predict on KEEL files is driven by column names; convert to CSV "
            f"(columns {header}) or pass a csv file")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [[c.strip() for c in row] for row in reader if row]
    drop = None
    if label_column is not None:
        if str(label_column).lstrip("-").isdigit():
            drop = int(label_column) % len(header)
        elif label_column in header:
            drop = header.index(label_column)
    kept = [j for j in range(len(header)) if j != drop]
    if len(kept) != len(feature_meta):
        raise DatasetError(
            f"model expects {len(feature_meta)} feature columns, file has {len(kept)}")
    X = np.empty((len(rows), len(kept)), dtype=np.float64)
    for i, row in enumerate(rows):
        for out_j, j in enumerate(kept):
            fm = feature_meta[out_j]
            if fm.kind == "numeric":
                X[i, out_j] = float(row[j])
            else:
                X[i, out_j] = fm.categories.index(row[j]) if row[j] in fm.categories else -1
    return X


def cmd_predict(args) -> int:
    with open(args.model) as fh:
        doc = json.load(fh)
    kind = doc.get("model")
    text = json.dumps(doc)
    if kind == "decision-tree":
        model = tree_from_json(text)
        meta = model.feature_meta
    elif kind == "ensemble":
        model = ensemble_from_json(text)
        meta = model.trees[0].feature_meta
    elif kind == "linear":
        model = model_from_json(text)
        meta = model.feature_meta
    else:
        raise ValueError(f"malformed model file: unknown model kind {kind!r}")
    X = _features_with_meta(args.data, meta, args.label_column)
    predictions = model.predict_matrix(X)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["prediction"])
        for label in predictions:
            writer.writerow([int(label)])
    print(f"wrote {args.out} ({len(predictions)} predictions)")
    return 0


# ---------------------------------------------------------------------------
# generate / dump-curves


def cmd_generate(args) -> int:
    if args.days:
        data = generate_daily_blocks(
            days=args.days, rows_per_day=args.n, m=args.m,
            boundary=args.boundary, noise=args.noise, seed=args.seed)
    else:
        data = generate(SynthSpec(
            n=args.n, m=args.m, mu=args.mu, boundary=args.boundary,
            separation=args.separation, noise=args.noise, seed=args.seed))
    write_csv(data, args.out)
    print(f"wrote {args.out} ({data.n} rows, {data.m} features)")
    return 0


def cmd_dump_curves(args) -> int:
    alphas = [float(a) for a in args.alphas.split(",") if a.strip() != ""]
    ps = np.linspace(0.0, 1.0, args.p_count)
    if not alphas or args.p_count < 1:
        raise ConfigError("dump-curves needs nonempty alpha and p grids")
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["alpha", "p", "renyi_entropy", "shannon_entropy"])
    shannon = _shannon_vec(ps, 1.0 - ps)
    for a in alphas:
        renyi = _renyi_vec(ps, 1.0 - ps, a)
        for p, hr, hs in zip(ps, renyi, shannon):
            writer.writerow([repr(float(a)), repr(float(p)), repr(float(hr)), repr(float(hs))])
    if args.out == "-":
        sys.stdout.write(out.getvalue())
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(out.getvalue())
        print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # config errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _add_data_args(p):
    p.add_argument("--data", required=True, help="CSV or KEEL .dat file")
    p.add_argument("--format", default="auto", choices=["auto", "csv", "keel"])
    p.add_argument("--label-column", dest="label_column", default=None,
                   help="label column name or index")
    p.add_argument("--positive-label", dest="positive_label", default="positive")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ardt", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("benchmark", help="cross-validated method comparison")
    b.add_argument("--config", required=True, help="INI run configuration")
    b.add_argument("--methods", default=None, help="override: comma-separated method names")
    b.add_argument("--k", type=int, default=None, help="override: fold count")
    b.add_argument("--seed", type=int, default=None, help="override: root seed")
    b.add_argument("--output-dir", default=None, help="override: report directory")

    t = sub.add_parser("train", help="fit one method, write a JSON model")
    _add_data_args(t)
    t.add_argument("--method", required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)

    p = sub.add_parser("predict", help="apply a JSON model to a file")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-column", dest="label_column", default=None,
                   help="column to ignore if the file carries labels")
    p.add_argument("--out", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset CSV")
    g.add_argument("--boundary", default="linear-gaussian",
                   choices=["linear-gaussian", "xor", "annulus"])
    g.add_argument("--n", type=int, default=1000, help="rows (per day when --days is set)")
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--mu", type=float, default=0.1)
    g.add_argument("--separation", type=float, default=2.0)
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--days", type=int, default=0,
                   help="emit day blocks with scrap rate drawn from [0.06, 0.16]")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    c = sub.add_parser("dump-curves", help="entropy curves over (alpha, p) grids")
    c.add_argument("--alphas", default="0,0.1,0.25,0.5,0.75,1,2,4")
    c.add_argument("--p-count", dest="p_count", type=int, default=101)
    c.add_argument("--out", default="-")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "benchmark":
            config = parse_config(args.config)
            updates = {}
            if args.methods:
                updates["methods"] = tuple(
                    m.strip() for m in args.methods.split(",") if m.strip())
            if args.k is not None:
                updates["k"] = args.k
            if args.seed is not None:
                updates["seed"] = args.seed
            outdir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV)
            if outdir:
                updates["output_dir"] = outdir
            if updates:
                config = RunConfig(**{
                    **{f.name: getattr(config, f.name) for f in fields(RunConfig)},
                    **updates,
                })
            return run_benchmark(config)
        if args.command == "train":
            return cmd_train(args)
        if args.command == "predict":
            return cmd_predict(args)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "dump-curves":
            return cmd_dump_curves(args)
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, DatasetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
