"""Command-line interface for generating consensus-ready ensembles."""

from __future__ import annotations

import argparse
import os
import sys
from importlib import metadata

from .datasets import DATASET_SOURCES, fetch_dataset, write_synthetic
from .embed import RunSpec, generate_ensemble
from .impute import impute_datasets, imputer_settings
from .missing import MissingnessSpec, inject_missingness

# packages whose exact versions decide whether ensembles reproduce
_LOCKED_PACKAGES = ("numpy", "scipy", "scikit-learn", "umap-learn")


def _emit(pairs):
    for name, value in pairs:
        sys.stdout.write(f"{name} = {value}\n")


def _fail(category, exc) -> int:
    sys.stderr.write(f"error = {category}\ndetail = {exc}\n")
    return 1


def _cmd_synthetic(args):
    write_synthetic(args.out, args.n, args.features, args.clusters,
                    spread=args.spread, seed=args.seed,
                    labels_path=args.labels_out)
    _emit([
        ("command", "synthetic"),
        ("out", args.out),
        ("n", args.n),
        ("features", args.features),
        ("clusters", args.clusters),
        ("seed", args.seed),
    ])
    return 0


def _cmd_inject(args):
    spec = MissingnessSpec(mechanism=args.mechanism, rate=args.rate,
                           threshold_percentile=args.threshold_percentile)
    fraction = inject_missingness(args.data, spec, args.seed, args.out)
    _emit([
        ("command", "inject"),
        ("out", args.out),
        ("mechanism", spec.mechanism),
        ("rate", "%.17g" % spec.rate),
        ("missing_fraction", "%.17g" % fraction),
        ("seed", args.seed),
    ])
    return 0


def _cmd_impute(args):
    paths = impute_datasets(args.data, args.m, args.seed, args.out_dir,
                            jobs=args.jobs)
    settings = imputer_settings()
    _emit([
        ("command", "impute"),
        ("out_dir", args.out_dir),
        ("m", len(paths)),
        ("estimator", settings["estimator"]),
        ("sample_posterior", "true"),
        ("max_iter", settings["max_iter"]),
        ("seed", args.seed),
    ])
    return 0


def _cmd_embed(args):
    spec = RunSpec(method=args.method, perplexity=args.perplexity[0],
                   n_neighbors=args.n_neighbors, min_dist=args.min_dist,
                   runs=args.runs, seed=args.seed)
    manifest = generate_ensemble(args.data, spec, args.out_dir,
                                 perplexities=args.perplexity,
                                 jobs=args.jobs,
                                 manifest_name=args.manifest_name)
    files = len(args.data) * args.runs * (
        len(args.perplexity) if args.method == "tsne" else 1
    )
    _emit([
        ("command", "embed"),
        ("manifest", manifest),
        ("files", files),
        ("method", args.method),
        ("runs_per_dataset", args.runs),
        ("datasets", len(args.data)),
        ("seed", args.seed),
    ])
    return 0


def _cmd_fetch(args):
    if args.list:
        for name in sorted(DATASET_SOURCES):
            url, note = DATASET_SOURCES[name]
            _emit([(name, f"{note} <{url}>")])
        return 0
    if args.name is None:
        raise ValueError("pass --name or --list")
    path = fetch_dataset(args.name, args.out_dir)
    _emit([("command", "fetch"), ("name", args.name), ("out", path)])
    return 0


def _cmd_lock(args):
    lines = [f"python = {sys.version.split()[0]}\n"]
    for pkg in _LOCKED_PACKAGES:
        try:
            lines.append(f"{pkg} = {metadata.version(pkg)}\n")
        except metadata.PackageNotFoundError:
            lines.append(f"{pkg} = (not installed)\n")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    _emit([("command", "lock"), ("out", args.out)])
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="medembed-harness",
        description="Generate embedding ensembles for median consensus: "
                    "synthetic data, missingness, imputation, batch t-SNE/UMAP.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("synthetic", help="write a Gaussian-clusters dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=150)
    p.add_argument("--features", type=int, default=4)
    p.add_argument("--clusters", type=int, default=3)
    p.add_argument("--spread", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--labels-out", default=None)
    p.set_defaults(fn=_cmd_synthetic)

    p = sub.add_parser("inject", help="delete entries from a complete dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mechanism", choices=["random", "intensity_dependent"],
                   default="random")
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--threshold-percentile", type=float, default=30.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_inject)

    p = sub.add_parser("impute", help="multiply impute a dataset with missing entries")
    p.add_argument("--data", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_impute)

    p = sub.add_parser("embed", help="batch-embed datasets into an ensemble")
    p.add_argument("--data", required=True, nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--method", choices=["tsne", "umap"], default="tsne")
    p.add_argument("--perplexity", type=float, nargs="+", default=[30.0])
    p.add_argument("--n-neighbors", type=int, default=15)
    p.add_argument("--min-dist", type=float, default=0.1)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--manifest-name", default="manifest.json")
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("fetch", help="download a known public dataset")
    p.add_argument("--name", default=None)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--list", action="store_true")
    p.set_defaults(fn=_cmd_fetch)

    p = sub.add_parser("lock", help="pin the versions behind ensemble generation")
    p.add_argument("--out", default="harness-lock.txt")
    p.set_defaults(fn=_cmd_lock)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RuntimeError as e:
        return _fail("UpstreamFailure", e)
    except (ValueError, OSError) as e:
        return _fail(type(e).__name__, e)
