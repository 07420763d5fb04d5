"""Geometric median of distance matrices via smoothed Weiszfeld iteration.

Given matrices x_1..x_m, the target is argmin_x (1/m) sum_i ||x_i - x||_F.
Starting from the elementwise mean, each step reweights the inputs by the
reciprocal of their distance to the current iterate,

    w_i = 1 / (||x - x_i||_F + eps),    x <- sum_i w_i x_i / sum_i w_i,

where the small constant eps keeps the weights finite when the iterate
lands on an input. The iterate lives in the ambient space of symmetric
hollow matrices; it need not be realizable as a p-dimensional point
configuration (the mds module restores that).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyEnsemble

# Absolute fallback for the smoothing constant when every input is the
# zero matrix (mean Frobenius norm 0, so the relative rule degenerates).
_EPSILON_ABS_FLOOR = 1e-30


@dataclass(frozen=True)
class WeiszfeldConfig:
    """Solver knobs.

    epsilon : smoothing constant added to each weight denominator;
        None selects 1e-8 times the mean Frobenius norm of the inputs,
        which keeps the behavior scale-free.
    tol : relative Frobenius change of the iterate below which the
        iteration stops.
    max_iters : hard cap on the number of update steps.
    """

    epsilon: float | None = None
    tol: float = 1e-6
    max_iters: int = 1000

    def __post_init__(self):
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive (or None for the scale-free default)")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class MedianDiagnostics:
    iterations: int
    final_objective: float
    converged: bool
    objective_trace: list[float] = field(default_factory=list)
    epsilon: float = 0.0  # effective smoothing constant actually used


def median_objective(x, matrices) -> float:
    """(1/m) sum_i ||x_i - x||_F, the quantity the median minimizes."""
    stack = _stack(matrices)
    x = np.asarray(x, dtype=float)
    if x.shape != stack.shape[1:]:
        raise DimensionMismatch(
            f"candidate shape {x.shape} does not match inputs {stack.shape[1:]}"
        )
    diffs = stack - x[None, :, :]
    return float(np.mean(np.sqrt(np.einsum("ijk,ijk->i", diffs, diffs))))


def weiszfeld_median(matrices, cfg: WeiszfeldConfig | None = None):
    """Compute the geometric median of a collection of distance matrices.

    Parameters
    ----------
    matrices : sequence of n x n symmetric hollow arrays, length m >= 1.
    cfg : WeiszfeldConfig, optional.

    Returns
    -------
    (median, diagnostics) : the median is symmetric and hollow exactly;
        the diagnostics carry the iteration count, the objective value at
        the returned iterate, a convergence flag, the objective trace
        (entry 0 is the mean initializer's objective), and the effective
        smoothing constant.
    """
    cfg = cfg or WeiszfeldConfig()
    stack = _stack(matrices)

    if cfg.epsilon is not None:
        eps = cfg.epsilon
    else:
        mean_norm = float(np.mean(np.sqrt(np.einsum("ijk,ijk->i", stack, stack))))
        eps = max(1e-8 * mean_norm, _EPSILON_ABS_FLOOR)

    x = stack.mean(axis=0)
    trace = [_objective(x, stack)]
    converged = False
    iterations = 0
    for _ in range(cfg.max_iters):
        diffs = stack - x[None, :, :]
        dists = np.sqrt(np.einsum("ijk,ijk->i", diffs, diffs))
        w = 1.0 / (dists + eps)
        # Normalizing first keeps the singleton case bit-exact (w/w == 1.0).
        x_new = np.einsum("i,ijk->jk", w / w.sum(), stack)
        step = float(np.linalg.norm(x_new - x))
        denom = max(float(np.linalg.norm(x)), 1e-12)
        x = x_new
        iterations += 1
        trace.append(_objective(x, stack))
        if step / denom < cfg.tol:
            converged = True
            break

    # Convex combinations of symmetric hollow inputs already are symmetric
    # and hollow; enforce it bit-exactly against accumulation-order noise.
    x = 0.5 * (x + x.T)
    np.fill_diagonal(x, 0.0)

    diag = MedianDiagnostics(
        iterations=iterations,
        final_objective=_objective(x, stack),
        converged=converged,
        objective_trace=trace,
        epsilon=eps,
    )
    return x, diag


def _objective(x, stack) -> float:
    diffs = stack - x[None, :, :]
    return float(np.mean(np.sqrt(np.einsum("ijk,ijk->i", diffs, diffs))))


def _stack(matrices) -> np.ndarray:
    mats = [np.asarray(m, dtype=float) for m in matrices]
    if len(mats) == 0:
        raise EmptyEnsemble("need at least one distance matrix")
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionMismatch(f"matrices must be square, got shape {shape}")
    for i, m in enumerate(mats):
        if m.shape != shape:
            raise DimensionMismatch(
                f"matrix {i} has shape {m.shape}, expected {shape}"
            )
    return np.stack(mats)
