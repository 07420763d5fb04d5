"""Monte-Carlo check that the consensus concentrates at an exponential rate.

The experiment: fix a noise measure around a known base configuration,
draw ensembles of size m, run the full consensus (median of distance
matrices, then classical MDS), and estimate Pr(d(consensus, target) >= eps)
for each m on a grid. The target is itself the consensus of a much larger
ensemble from the same measure, since the population minimizer has no
closed form. Decay of the estimated probabilities, summarized by a
log-linear slope, is the observable we assert on.

All randomness is derived hierarchically from the measure's seed via
``np.random.SeedSequence([seed, *key])`` with a distinct key per draw, so
every sample is independent of execution order and the whole report is
reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError, DegenerateEmbedding, MedembedError
from .geometry import (
    as_embedding,
    canonicalize,
    distance_matrix,
    embedding_distance,
    frobenius_distance,
    is_canonical,
)
from .mds import classical_mds
from .median import WeiszfeldConfig, weiszfeld_median

DEFAULT_N = 100
DEFAULT_P = 2
DEFAULT_SIGMA = 0.1
DEFAULT_M_GRID = (2, 5, 10, 20, 50)
DEFAULT_REPEATS = 50

_NOISE_KINDS = ("gaussian", "uniform")
_MAX_DRAW_ATTEMPTS = 10


@dataclass(frozen=True)
class SyntheticMeasure:
    """Noise distribution around a canonical base configuration.

    ``uniform`` noise is U(-sqrt(3)*sigma, sqrt(3)*sigma), so both kinds
    have per-coordinate standard deviation sigma and reports are
    comparable across kinds.
    """

    base: np.ndarray
    sigma: float
    noise_kind: str = "gaussian"
    seed: int = 0

    def __post_init__(self):
        base = as_embedding(self.base)
        # Copy before freezing so we never flip flags on a caller's array.
        base = canonicalize(base) if not is_canonical(base) else base.copy()
        base.flags.writeable = False
        object.__setattr__(self, "base", base)
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.noise_kind not in _NOISE_KINDS:
            raise ValueError(f"noise_kind must be one of {_NOISE_KINDS}, got {self.noise_kind!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class RateReport:
    m_grid: tuple[int, ...]
    epsilon: float
    deviation_prob: tuple[float, ...]
    fitted_slope: float
    projection_gap: tuple[float, ...]
    mean_deviation: tuple[float, ...]
    failures: tuple[int, ...]
    repeats: int
    m_ref: int
    reference_gap: float


def make_measure(n: int, p: int, sigma: float, noise_kind: str = "gaussian", seed: int = 0) -> SyntheticMeasure:
    """Measure around a seeded standard-normal base configuration."""
    if n < 2 or p < 1:
        raise ValueError("need n >= 2 points in p >= 1 dimensions")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    base = canonicalize(rng.standard_normal((n, p)))
    return SyntheticMeasure(base=base, sigma=sigma, noise_kind=noise_kind, seed=seed)


def sample_embedding(measure: SyntheticMeasure, index: int = 0) -> np.ndarray:
    """Draw number ``index`` from the measure: base + noise, canonicalized.

    The same (seed, index) always returns the same embedding. A draw that
    collapses below the degeneracy floor is retried with a fresh
    sub-stream up to 10 times before giving up.
    """
    return _draw(measure, (1, index))


def default_epsilon(measure: SyntheticMeasure, m_grid=DEFAULT_M_GRID) -> float:
    """Deviation threshold aimed at the middle of the grid.

    Per-coordinate noise of scale sigma moves each of the n(n-1) ordered
    distance-matrix entries by about sigma*sqrt(2) (the difference of two
    independent perturbations projected on the pair direction), so one
    draw sits roughly sigma*sqrt(2n(n-1)) from the base in the embedding
    metric, and the consensus of m draws about 1/sqrt(m) of that from the
    large-m target. Because that deviation concentrates tightly in n^2
    matrix dimensions, Pr(d >= eps) transitions from near 1 to near 0
    over a narrow window of m for any fixed eps; placing the crossing at
    the geometric mean of the grid is what makes the decay visible in the
    report instead of landing entirely on one side.
    """
    n = measure.base.shape[0]
    gm = float(np.exp(np.mean(np.log(np.asarray(m_grid, dtype=float)))))
    return measure.sigma * math.sqrt(2.0 * n * (n - 1) / gm)


def estimate_rate(measure: SyntheticMeasure, m_grid=DEFAULT_M_GRID, repeats: int = DEFAULT_REPEATS,
                  epsilon: float | None = None, check_reference: bool = True) -> RateReport:
    """Estimate the deviation-probability decay over ``m_grid``.

    For each m, ``repeats`` independent ensembles are drawn and solved;
    ``deviation_prob[i]`` is the fraction with d(consensus, target) >=
    epsilon. An ensemble whose solve raises counts as a deviation, which
    can only make the reported decay look worse. ``fitted_slope`` is the
    least-squares slope of log(prob) against m over the entries with
    positive probability (NaN when fewer than two qualify).

    The target is the consensus of a reference ensemble of size
    10*max(m_grid). It is recomputed from a disjoint stream, and if the
    two versions differ by epsilon/4 or more the run aborts with
    CalibrationError: the threshold would then be judging reference jitter
    rather than ensemble deviations.
    """
    grid = tuple(int(m) for m in m_grid)
    if not grid:
        raise ValueError("m_grid must be nonempty")
    if grid[0] < 1:
        raise ValueError("ensemble sizes must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("m_grid must be strictly increasing")
    if repeats < 20:
        raise ValueError("repeats below 20 make the probability estimates meaningless; got %d" % repeats)
    if epsilon is None:
        epsilon = default_epsilon(measure, grid)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")

    p = measure.base.shape[1]
    m_ref = 10 * grid[-1]
    target = _consensus(_draws(measure, (2, 0), m_ref), p)[0]
    recheck = _consensus(_draws(measure, (2, 1), m_ref), p)[0]
    reference_gap = embedding_distance(target, recheck)
    if check_reference and reference_gap >= epsilon / 4:
        raise CalibrationError(
            f"two independent reference targets differ by {reference_gap:.6g}, "
            f"not below epsilon/4 = {epsilon / 4:.6g}; raise epsilon or m_grid"
        )

    probs, gaps, means, fails = [], [], [], []
    for mi, m in enumerate(grid):
        exceed = 0
        failed = 0
        dists: list[float] = []
        run_gaps: list[float] = []
        for r in range(repeats):
            try:
                emb, gap = _consensus(_draws(measure, (3, mi, r), m), p)
            except MedembedError:
                failed += 1
                exceed += 1
                continue
            d = embedding_distance(emb, target)
            dists.append(d)
            run_gaps.append(gap)
            if d >= epsilon:
                exceed += 1
        probs.append(exceed / repeats)
        fails.append(failed)
        means.append(float(np.mean(dists)) if dists else math.nan)
        gaps.append(float(np.mean(run_gaps)) if run_gaps else math.nan)

    return RateReport(
        m_grid=grid,
        epsilon=float(epsilon),
        deviation_prob=tuple(probs),
        fitted_slope=_log_linear_slope(grid, probs),
        projection_gap=tuple(gaps),
        mean_deviation=tuple(means),
        failures=tuple(fails),
        repeats=repeats,
        m_ref=m_ref,
        reference_gap=float(reference_gap),
    )


def _log_linear_slope(grid, probs) -> float:
    pts = [(m, math.log(p)) for m, p in zip(grid, probs) if p > 0]
    if len(pts) < 2:
        return math.nan
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def _consensus(samples, p: int):
    """Median of the distance matrices, projected back to p dimensions.

    Returns (embedding, projection gap). This is the same composition the
    CLI pipeline runs; kept local so the bench has no file I/O in the loop.
    """
    mats = [distance_matrix(s) for s in samples]
    med, _ = weiszfeld_median(mats, WeiszfeldConfig())
    emb = classical_mds(med, p)
    return emb, frobenius_distance(med, distance_matrix(emb))


def _draws(measure: SyntheticMeasure, key: tuple[int, ...], count: int):
    return [_draw(measure, key + (j,)) for j in range(count)]


def _draw(measure: SyntheticMeasure, key: tuple[int, ...]) -> np.ndarray:
    shape = measure.base.shape
    for attempt in range(_MAX_DRAW_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence([measure.seed, *key, attempt]))
        if measure.noise_kind == "gaussian":
            noise = rng.normal(0.0, measure.sigma, size=shape)
        else:
            half = math.sqrt(3.0) * measure.sigma
            noise = rng.uniform(-half, half, size=shape)
        try:
            return canonicalize(measure.base + noise)
        except DegenerateEmbedding:
            continue
    raise DegenerateEmbedding(
        f"{_MAX_DRAW_ATTEMPTS} consecutive draws collapsed below the degeneracy floor"
    )
