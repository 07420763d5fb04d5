"""Command-line interface.

Subcommands:

* ``consensus``: ensemble of embedding files -> median distance matrix,
  consensus embedding, and a diagnostics report.
* ``distance``: quotient distance between two embedding files.
* ``metrics``: instability summary of an ensemble (optionally against a
  reference embedding).
* ``mds-stability``: rerun stochastic MDS on one matrix and report the
  spread of the outputs.
* ``bench-rate``: Monte-Carlo estimate of how fast the consensus
  concentrates as the ensemble grows.

All reports are "name = value" lines. On failure the process exits
nonzero after printing ``error = <ExceptionClassName>`` and a detail line
to stderr, so callers can branch on the category without parsing prose.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, io
from .errors import MedembedError
from .geometry import embedding_distance
from .io import load_embedding_file
from .mds import MdsConfig
from .median import WeiszfeldConfig
from .metrics import MetricsReport
from .pipeline import run_consensus, run_mds_stability, run_metrics


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except MedembedError as e:
        return _fail(e.category, e)
    except (ValueError, OSError) as e:
        return _fail(type(e).__name__, e)


def _fail(category: str, exc) -> int:
    sys.stderr.write(f"error = {category}\ndetail = {exc}\n")
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medembed",
        description="Integrate unstable low-dimensional embeddings into a median consensus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("consensus", help="median consensus of an ensemble of embedding files")
    _add_manifest_args(p)
    p.add_argument("--dim", type=int, default=2, help="output dimension (default 2)")
    p.add_argument("--mds", choices=("classical", "smacof"), default="classical",
                   help="projection method (default classical)")
    p.add_argument("--eps", type=float, default=None,
                   help="Weiszfeld smoothing; default scales with the input norms")
    p.add_argument("--tol", type=float, default=1e-6, help="Weiszfeld relative-change stop (default 1e-6)")
    p.add_argument("--max-iters", type=int, default=1000, help="Weiszfeld iteration cap (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="seed for the smacof projection (default 0)")
    p.add_argument("--out-prefix", default=None,
                   help="write PREFIX.matrix.txt, PREFIX.embedding.txt, PREFIX.report.txt")
    p.set_defaults(handler=_cmd_consensus)

    p = sub.add_parser("distance", help="quotient distance between two embedding files")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=_cmd_distance)

    p = sub.add_parser("metrics", help="instability summary of an ensemble")
    _add_manifest_args(p)
    p.add_argument("--reference", default=None, help="embedding file to measure distances against")
    p.set_defaults(handler=_cmd_metrics)

    p = sub.add_parser("mds-stability", help="spread of repeated stochastic MDS on one matrix")
    p.add_argument("--matrix", required=True, help="distance matrix file")
    p.add_argument("--runs", type=int, required=True, help="number of independent MDS runs")
    p.add_argument("--dim", type=int, default=2, help="output dimension (default 2)")
    p.add_argument("--seed", type=int, default=0, help="base seed; each run derives its own (default 0)")
    p.set_defaults(handler=_cmd_mds_stability)

    p = sub.add_parser("bench-rate", help="deviation-probability decay of the consensus")
    p.add_argument("--n", type=int, default=bench.DEFAULT_N, help="points per embedding (default 100)")
    p.add_argument("--p", type=int, default=bench.DEFAULT_P, help="embedding dimension (default 2)")
    p.add_argument("--sigma", type=float, default=bench.DEFAULT_SIGMA,
                   help="per-coordinate noise scale (default 0.1)")
    p.add_argument("--noise", choices=("gaussian", "uniform"), default="gaussian")
    p.add_argument("--m-grid", type=int, nargs="+", default=list(bench.DEFAULT_M_GRID),
                   help="ensemble sizes (default 2 5 10 20 50)")
    p.add_argument("--repeats", type=int, default=bench.DEFAULT_REPEATS,
                   help="Monte-Carlo repeats per grid point (default 50)")
    p.add_argument("--epsilon", type=float, default=None,
                   help="deviation threshold; default is half a single-draw deviation")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_bench_rate)

    return parser


def _add_manifest_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", help="JSON manifest listing the ensemble files")
    src.add_argument("--glob", help="shell glob of embedding files (tags become file stems)")


def _load_manifest(args) -> io.Manifest:
    if args.manifest is not None:
        return io.load_manifest(args.manifest)
    return io.manifest_from_glob(args.glob)


def _cmd_consensus(args) -> int:
    manifest = _load_manifest(args)
    weiszfeld = WeiszfeldConfig(epsilon=args.eps, tol=args.tol, max_iters=args.max_iters)
    mds = MdsConfig(target_dim=args.dim, method=args.mds, seed=args.seed)
    result = run_consensus(manifest, weiszfeld, mds)

    n = result.consensus_matrix.shape[0]
    fields = [
        ("command", "consensus"),
        ("m", len(manifest.entries)),
        ("n", n),
        ("p", args.dim),
        ("mds_method", result.mds_method),
        ("weiszfeld_epsilon", result.diagnostics.epsilon),
        ("weiszfeld_iterations", result.diagnostics.iterations),
        ("weiszfeld_converged", result.diagnostics.converged),
        ("weiszfeld_objective", result.diagnostics.final_objective),
        ("projection_gap", result.projection_gap),
    ]
    if result.stress is not None:
        fields.append(("smacof_stress", result.stress))
    for tag, count, mean, sd in result.tag_groups or ():
        label = tag if tag else "(untagged)"
        fields.append((f"tag_count.{label}", count))
        fields.append((f"tag_mean.{label}", mean))
        fields.append((f"tag_sd.{label}", sd))
    report = io.format_report(fields)

    sys.stdout.write(report)
    if args.out_prefix:
        io.write_table(f"{args.out_prefix}.matrix.txt", result.consensus_matrix)
        io.write_table(f"{args.out_prefix}.embedding.txt", result.embedding)
        with open(f"{args.out_prefix}.report.txt", "w", encoding="utf-8") as fh:
            fh.write(report)
    return 0


def _cmd_distance(args) -> int:
    d = embedding_distance(load_embedding_file(args.first), load_embedding_file(args.second))
    sys.stdout.write(io.fmt(d) + "\n")
    return 0


def _cmd_metrics(args) -> int:
    report = run_metrics(_load_manifest(args), args.reference)
    sys.stdout.write(io.format_report(_metrics_fields("metrics", report)))
    return 0


def _cmd_mds_stability(args) -> int:
    mds = MdsConfig(target_dim=args.dim, method="smacof", seed=args.seed)
    report = run_mds_stability(args.matrix, args.runs, mds)
    fields = _metrics_fields("mds-stability", report)
    fields.insert(1, ("runs", args.runs))
    sys.stdout.write(io.format_report(fields))
    return 0


def _metrics_fields(command: str, report: MetricsReport) -> list:
    fields = [("command", command), ("k", report.k)]
    if report.mean_pairwise is not None:
        fields.append(("mean_pairwise", report.mean_pairwise))
        fields.append(("sd_pairwise", report.sd_pairwise))
    if report.mean_to_reference is not None:
        fields.append(("mean_to_reference", report.mean_to_reference))
        fields.append(("sd_to_reference", report.sd_to_reference))
    return fields


def _cmd_bench_rate(args) -> int:
    measure = bench.make_measure(args.n, args.p, args.sigma, args.noise, args.seed)
    report = bench.estimate_rate(measure, args.m_grid, args.repeats, args.epsilon)
    fields = [
        ("command", "bench-rate"),
        ("n", args.n),
        ("p", args.p),
        ("sigma", args.sigma),
        ("noise", args.noise),
        ("seed", args.seed),
        ("m_grid", list(report.m_grid)),
        ("repeats", report.repeats),
        ("epsilon", report.epsilon),
        ("m_ref", report.m_ref),
        ("reference_gap", report.reference_gap),
        ("deviation_prob", list(report.deviation_prob)),
        ("mean_deviation", list(report.mean_deviation)),
        ("projection_gap", list(report.projection_gap)),
        ("failures", list(report.failures)),
        ("fitted_slope", report.fitted_slope),
    ]
    sys.stdout.write(io.format_report(fields))
    return 0


if __name__ == "__main__":
    sys.exit(main())
