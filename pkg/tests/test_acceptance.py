"""Acceptance gate.

One test per shipping criterion, each printing a single PASS/FAIL line
(visible under pytest -v -s or in the captured output of a failure) with
the measured quantities, then asserting. Tolerances and runtime budgets
are pinned here and nowhere else; unit tests cover the finer-grained
behavior.
"""

import math
import time

import numpy as np
import pytest

from conftest import random_canonical, random_similarity
from medembed.bench import estimate_rate, make_measure, sample_embedding
from medembed.cli import main
from medembed.geometry import canonicalize, distance_matrix, embedding_distance
from medembed.io import load_embedding_file, write_manifest, write_table
from medembed.mds import classical_mds
from medembed.median import WeiszfeldConfig, median_objective, weiszfeld_median
from medembed.metrics import mean_distance_to_reference, mean_pairwise_distance


def _criterion(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _consensus_embedding(samples, p=2):
    med, _ = weiszfeld_median([distance_matrix(s) for s in samples], WeiszfeldConfig())
    return classical_mds(med, p)


def _report_dict(text):
    out = {}
    for line in text.splitlines():
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


def test_metric_axioms():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2026)
    worst_self = 0.0
    worst_violation = 0.0
    for _ in range(1000):
        a, b, c = (random_canonical(rng, 8, 2) for _ in range(3))
        dab, dbc, dca = (
            embedding_distance(a, b),
            embedding_distance(b, c),
            embedding_distance(c, a),
        )
        assert dab == embedding_distance(b, a)  # symmetry, exact
        worst_self = max(worst_self, embedding_distance(a, a))
        worst_violation = max(
            worst_violation, dab - dbc - dca, dbc - dca - dab, dca - dab - dbc
        )
    elapsed = time.perf_counter() - t0
    ok = worst_self < 1e-12 and worst_violation <= 1e-9 and elapsed < 10
    _criterion(
        "metric axioms (1000 triples, n=8, p=2)",
        ok,
        f"max self-distance {worst_self:.2e} (<1e-12), "
        f"max triangle violation {worst_violation:.2e} (<=1e-9), {elapsed:.1f}s (<10s)",
    )


def test_quotient_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2027)
    worst = 0.0
    for i in range(200):
        y = random_canonical(rng, 10, 2 + (i % 2))
        worst = max(worst, embedding_distance(y, random_similarity(rng, y)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 5
    _criterion(
        "quotient invariance (200 similarity transforms)",
        ok,
        f"max distance {worst:.2e} (<1e-10), {elapsed:.1f}s (<5s)",
    )


def test_weiszfeld_correctness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2028)
    cfg = WeiszfeldConfig()

    a = distance_matrix(random_canonical(rng, 8, 2))
    b = distance_matrix(random_canonical(rng, 8, 2))
    med, _ = weiszfeld_median([a, a, b], cfg)
    majority_ok = np.linalg.norm(med - a) <= cfg.tol * np.linalg.norm(a)

    m = distance_matrix(random_canonical(rng, 8, 2))
    med, _ = weiszfeld_median([0.0 * m, 1.0 * m, 3.0 * m], cfg)
    collinear_ok = np.linalg.norm(med - m) <= 1e-4 * np.linalg.norm(m)

    med, _ = weiszfeld_median([a], cfg)
    singleton_ok = np.array_equal(med, a)

    worst_excess = -np.inf
    for _ in range(100):
        mats = [distance_matrix(random_canonical(rng, 20, 3)) for _ in range(10)]
        _, diag = weiszfeld_median(mats, cfg)
        bound = min(
            min(median_objective(x, mats) for x in mats),
            median_objective(sum(mats) / len(mats), mats),
        )
        worst_excess = max(worst_excess, diag.final_objective - bound)
    elapsed = time.perf_counter() - t0
    ok = majority_ok and collinear_ok and singleton_ok and worst_excess <= 1e-9 and elapsed < 30
    _criterion(
        "weiszfeld correctness (fixtures + 100 random ensembles m=10 n=20)",
        ok,
        f"majority {majority_ok}, collinear {collinear_ok}, singleton {singleton_ok}, "
        f"max objective excess {worst_excess:.2e} (<=1e-9), {elapsed:.1f}s (<30s)",
    )


def test_consensus_roundtrip():
    rng = np.random.default_rng(2029)

    # median of m identical matrices reproduces the matrix
    pts = random_canonical(rng, 15, 2)
    x = distance_matrix(pts)
    med, _ = weiszfeld_median([x] * 5, WeiszfeldConfig())
    median_rel = np.linalg.norm(med - x) / np.linalg.norm(x)

    # deterministic MDS reproduces exactly realizable matrices
    worst_rel = 0.0
    for _ in range(20):
        src = distance_matrix(random_canonical(rng, 25, 2))
        back = distance_matrix(classical_mds(src, 2))
        worst_rel = max(worst_rel, np.linalg.norm(back - src) / np.linalg.norm(src))

    ok = median_rel < 1e-8 and worst_rel < 1e-8
    _criterion(
        "consensus roundtrip (identical inputs + 20 exact matrices)",
        ok,
        f"median rel err {median_rel:.2e} (<1e-8), worst MDS roundtrip rel err "
        f"{worst_rel:.2e} (<1e-8)",
    )


def test_instability_reduction():
    t0 = time.perf_counter()
    measure = make_measure(100, 2, 0.1, "gaussian", seed=2030)
    replicates = 10
    single = [sample_embedding(measure, i) for i in range(replicates)]
    single_value, _, _ = mean_pairwise_distance(single)

    values = []
    for mi, m in enumerate((2, 10, 20, 50)):
        mces = []
        for r in range(replicates):
            offset = 10_000 * (10 * mi + r + 1)
            mces.append(_consensus_embedding(
                [sample_embedding(measure, offset + j) for j in range(m)]
            ))
        mp, _, _ = mean_pairwise_distance(mces)
        values.append(mp)

    increases = [max(0.0, b / a - 1.0) for a, b in zip(values, values[1:])]
    inversions = sum(1 for v in increases if v > 0)
    one_small_inversion = inversions <= 1 and all(v <= 0.05 for v in increases)
    ratio = values[-1] / single_value
    elapsed = time.perf_counter() - t0
    ok = one_small_inversion and ratio < 0.4 and elapsed < 300
    _criterion(
        "instability reduction (10 replicates, m in {2,10,20,50}, n=100, sigma=0.1)",
        ok,
        f"spread {single_value:.2f} -> {', '.join(f'{v:.2f}' for v in values)}, "
        f"m=50/single ratio {ratio:.3f} (<0.4), inversions {inversions} (<=1, each <=5%), "
        f"{elapsed:.0f}s (<300s)",
    )


def test_deviation_rate_trend():
    t0 = time.perf_counter()
    report = estimate_rate(make_measure(100, 2, 0.1, "gaussian", seed=0))
    probs = report.deviation_prob
    r = report.repeats
    nonincreasing = all(b <= a + 2.0 / math.sqrt(r) for a, b in zip(probs, probs[1:]))
    interior = sum(1 for p in probs if 0.0 < p < 1.0)
    slope_ok = report.fitted_slope < 0 if interior >= 3 else True
    # this fixed-seed run is known to produce interior entries; hold the
    # stronger property too
    observed_decay = interior >= 1 and report.fitted_slope < 0
    elapsed = time.perf_counter() - t0
    ok = nonincreasing and slope_ok and observed_decay and elapsed < 600
    _criterion(
        "deviation rate trend (defaults: n=100, sigma=0.1, m grid 2..50, R=50)",
        ok,
        f"probs {[f'{p:.2f}' for p in probs]}, slope {report.fitted_slope:.4f} (<0), "
        f"interior entries {interior}, {elapsed:.0f}s (<600s)",
    )


def test_scaling_guard():
    t0 = time.perf_counter()

    def per_iter_seconds(n, m=8):
        rng = np.random.default_rng(1234 + n)
        mats = [distance_matrix(canonicalize(rng.standard_normal((n, 3)))) for _ in range(m)]

        def best(iters):
            took, its = math.inf, 0
            for _ in range(3):
                cfg = WeiszfeldConfig(tol=1e-300, max_iters=iters)
                start = time.perf_counter()
                _, diag = weiszfeld_median(mats, cfg)
                dt = time.perf_counter() - start
                if dt < took:
                    took, its = dt, diag.iterations
            return took, its

        t_short, i_short = best(4)
        t_long, i_long = best(24)
        return (t_long - t_short) / (i_long - i_short)

    ratio = per_iter_seconds(400) / per_iter_seconds(200)
    elapsed = time.perf_counter() - t0
    ok = 2.5 <= ratio <= 8.0 and elapsed < 300
    _criterion(
        "scaling guard (per-iteration time, n=400 vs n=200)",
        ok,
        f"ratio {ratio:.2f} (in [2.5, 8]), {elapsed:.0f}s (<300s)",
    )


def test_cli_contract(tmp_path, capsys):
    checks = []

    def run(args):
        code = main(args)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    # embedding file parsing: the three loader examples
    (tmp_path / "tri.txt").write_text("0,0\n1,0\n0,1\n")
    emb = load_embedding_file(tmp_path / "tri.txt")
    checks.append(("loader shape", emb.shape == (3, 2)))

    (tmp_path / "ragged.txt").write_text("1,2\n3\n")
    code, _, err = run(["distance", str(tmp_path / "ragged.txt"), str(tmp_path / "tri.txt")])
    checks.append(("ragged file category", code == 1 and err.startswith("error = InconsistentWidth")))

    (tmp_path / "nan.txt").write_text("nan,0\n1,0\n")
    code, _, err = run(["distance", str(tmp_path / "nan.txt"), str(tmp_path / "tri.txt")])
    checks.append(("nan file category", code == 1 and err.startswith("error = NonFiniteValue")))

    # consensus of identical inputs, then of similarity transforms
    rng = np.random.default_rng(2031)
    pts = random_canonical(rng, 12, 2)
    for i in range(4):
        write_table(tmp_path / f"same{i}.txt", pts)
    code, out, _ = run(["consensus", "--glob", str(tmp_path / "same*.txt"),
                        "--out-prefix", str(tmp_path / "out_same")])
    fields = _report_dict(out)
    close = embedding_distance(load_embedding_file(tmp_path / "out_same.embedding.txt"), pts)
    checks.append(("identical-input consensus", code == 0 and close < 1e-6
                   and float(fields["projection_gap"]) < 1e-8))

    for i in range(4):
        write_table(tmp_path / f"moved{i}.txt", random_similarity(rng, pts))
    code, out, _ = run(["consensus", "--glob", str(tmp_path / "moved*.txt"),
                        "--out-prefix", str(tmp_path / "out_moved")])
    fields = _report_dict(out)
    close = embedding_distance(load_embedding_file(tmp_path / "out_moved.embedding.txt"), pts)
    checks.append(("transformed-input consensus", code == 0 and close < 1e-6
                   and float(fields["projection_gap"]) < 1e-8))

    # noisy ensemble: the consensus sits closer to the source than the
    # inputs do on average
    base = random_canonical(rng, 20, 2)
    noisy = [canonicalize(base + rng.normal(0, 0.1, size=base.shape)) for _ in range(10)]
    for i, arr in enumerate(noisy):
        write_table(tmp_path / f"noisy{i}.txt", arr)
    code, out, _ = run(["consensus", "--glob", str(tmp_path / "noisy*.txt"),
                        "--out-prefix", str(tmp_path / "out_noisy")])
    consensus = load_embedding_file(tmp_path / "out_noisy.embedding.txt")
    to_inputs, _, _ = mean_distance_to_reference(noisy, base)
    checks.append(("noise reduction", code == 0
                   and embedding_distance(consensus, base) < to_inputs))

    # metrics examples
    write_manifest(tmp_path / "pair.json", [("same0.txt", ""), ("same1.txt", "")])
    code, out, _ = run(["metrics", "--manifest", str(tmp_path / "pair.json")])
    checks.append(("identical-pair metrics", code == 0
                   and float(_report_dict(out)["mean_pairwise"]) == 0.0))

    write_manifest(tmp_path / "solo.json", [("same0.txt", "")])
    code, out, _ = run(["metrics", "--manifest", str(tmp_path / "solo.json"),
                        "--reference", str(tmp_path / "same0.txt")])
    checks.append(("self-reference metrics", code == 0
                   and float(_report_dict(out)["mean_to_reference"]) == 0.0))

    # stochastic-MDS spread examples
    code, _, err = run(["mds-stability", "--matrix", str(tmp_path / "out_same.matrix.txt"),
                        "--runs", "1"])
    checks.append(("single-run spread is an error", code == 1
                   and err.startswith("error = EmptyEnsemble")))

    code, out, _ = run(["mds-stability", "--matrix", str(tmp_path / "out_same.matrix.txt"),
                        "--runs", "10", "--seed", "4"])
    checks.append(("exact-matrix spread", code == 0
                   and float(_report_dict(out)["mean_pairwise"]) < 1e-4))

    ens50 = [sample_embedding(make_measure(20, 2, 0.1, seed=9), i) for i in range(50)]
    med, _ = weiszfeld_median([distance_matrix(e) for e in ens50], WeiszfeldConfig())
    write_table(tmp_path / "median50.txt", med)
    code, out, _ = run(["mds-stability", "--matrix", str(tmp_path / "median50.txt"),
                        "--runs", "100", "--seed", "4"])
    spread = float(_report_dict(out)["mean_pairwise"])
    checks.append(("consensus-matrix spread reported", code == 0
                   and math.isfinite(spread) and spread >= 0))

    # identical seed, byte-identical outputs
    args = ["consensus", "--glob", str(tmp_path / "noisy*.txt"), "--mds", "smacof",
            "--seed", "11"]
    code1, out1, _ = run(args + ["--out-prefix", str(tmp_path / "rep1")])
    code2, out2, _ = run(args + ["--out-prefix", str(tmp_path / "rep2")])
    same_bytes = all(
        (tmp_path / f"rep1{s}").read_bytes() == (tmp_path / f"rep2{s}").read_bytes()
        for s in (".matrix.txt", ".embedding.txt", ".report.txt")
    )
    checks.append(("byte-identical reruns", code1 == 0 and code2 == 0
                   and out1 == out2 and same_bytes))

    bench_args = ["bench-rate", "--n", "10", "--m-grid", "2", "4", "--repeats", "20",
                  "--epsilon", "1000", "--seed", "3"]
    _, b1, _ = run(bench_args)
    _, b2, _ = run(bench_args)
    checks.append(("byte-identical bench reruns", b1 == b2))

    failed = [name for name, ok in checks if not ok]
    _criterion(
        "cli contract (loader goldens, consensus goldens, determinism)",
        not failed,
        f"{len(checks)} checks" + (f", failed: {failed}" if failed else ", all passing"),
    )
