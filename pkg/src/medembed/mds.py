"""Projection of a consensus distance matrix back to point coordinates.

Two routes:

* :func:`classical_mds` (Torgerson): double-center the squared matrix,
  eigendecompose, keep the top-p spectrum with negatives clamped to zero.
  Fully deterministic; the pipeline default.
* :func:`smacof_mds`: iterative stress majorization from random uniform
  starts, best of several trials. Stochastic by construction (seeded);
  kept for quantifying exactly that instability.

Both return canonical embeddings (centered, unit mean-squared row norm).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateEmbedding, EigenFailure
from .geometry import canonicalize, validate_distance_matrix

logger = logging.getLogger(__name__)

_METHODS = ("classical", "smacof")


@dataclass(frozen=True)
class MdsConfig:
    target_dim: int = 2
    method: str = "classical"
    smacof_trials: int = 4
    smacof_max_iters: int = 300
    smacof_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.target_dim < 1:
            raise ValueError("target_dim must be at least 1")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.smacof_trials < 1:
            raise ValueError("smacof_trials must be at least 1")
        if self.smacof_max_iters < 1:
            raise ValueError("smacof_max_iters must be at least 1")
        if not self.smacof_tol > 0:
            raise ValueError("smacof_tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


def classical_mds(x, p: int) -> np.ndarray:
    """Torgerson scaling of a (possibly non-Euclidean) distance matrix.

    Double-centers B = -1/2 J (x o x) J, keeps the p largest eigenvalues
    with negative ones clamped to zero, and scales the eigenvectors by the
    square roots. The result is canonicalized, and each column's sign is
    fixed so its largest-magnitude entry is nonnegative (ties resolved
    toward the highest row index), which pins down the reflection
    ambiguity of eigenvectors for reproducible output files.
    """
    x = validate_distance_matrix(x)
    if p < 1:
        raise ValueError("target dimension must be at least 1")
    n = x.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * (j @ (x * x) @ j)
    b = 0.5 * (b + b.T)
    try:
        evals, evecs = np.linalg.eigh(b)
    except np.linalg.LinAlgError as e:
        raise EigenFailure(f"eigendecomposition failed: {e}") from e
    top = np.argsort(evals)[::-1][:p]
    lam = np.clip(evals[top], 0.0, None)
    coords = evecs[:, top] * np.sqrt(lam)[None, :]
    return _fix_column_signs(canonicalize(coords))


def smacof_mds(x, cfg: MdsConfig):
    """Stress-majorization MDS, best of ``cfg.smacof_trials`` random starts.

    Each trial starts from coordinates drawn uniformly in [0, 1) per axis
    from a stream derived from ``cfg.seed``, so the result is bit-for-bit
    reproducible for a fixed seed. Returns ``(embedding, stress)`` where
    the embedding is the canonicalized lowest-stress trial (ties broken by
    the lowest trial index) and stress is the raw stress
    ``sum_{i<j} (x_ij - d_ij(embedding))^2`` of that returned embedding.
    """
    x = validate_distance_matrix(x)
    n = x.shape[0]
    rng = np.random.default_rng(cfg.seed)
    inits = [rng.uniform(0.0, 1.0, size=(n, cfg.target_dim)) for _ in range(cfg.smacof_trials)]

    best = None
    best_stress = np.inf
    for trial, init in enumerate(inits):
        coords, _, trace = _smacof_single(x, init, cfg.smacof_max_iters, cfg.smacof_tol)
        if len(trace) >= cfg.smacof_max_iters:
            logger.debug("smacof trial %d hit max_iters=%d without converging", trial, cfg.smacof_max_iters)
        try:
            emb = canonicalize(coords)
        except DegenerateEmbedding:
            continue  # collapsed trial; treat as infinitely bad
        stress = raw_stress(x, emb)
        if stress < best_stress:
            best, best_stress = emb, stress
    if best is None:
        raise DegenerateEmbedding("every SMACOF trial collapsed to coincident points")
    return best, best_stress


def raw_stress(x, points) -> float:
    """sum over unordered pairs of (x_ij - ||row_i - row_j||)^2."""
    d = pdist(np.asarray(points, dtype=float))
    target = squareform(np.asarray(x, dtype=float), checks=False)
    return float(np.sum((target - d) ** 2))


def _smacof_single(x, init, max_iters: int, tol: float):
    """One majorization descent; returns (coords, stress, stress trace).

    The Guttman transform guarantees the raw stress is nonincreasing, so
    the loop stops when the per-step decrease falls below
    ``tol * max(previous stress, 1e-16)`` or the fit is exact.
    """
    z = np.asarray(init, dtype=float).copy()
    n = z.shape[0]
    stress = raw_stress(x, z)
    trace = [stress]
    for _ in range(max_iters):
        d = squareform(pdist(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d > 0, x / np.where(d > 0, d, 1.0), 0.0)
        b = -ratio
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, ratio.sum(axis=1))
        z = (b @ z) / n
        new_stress = raw_stress(x, z)
        done = (stress - new_stress) < tol * max(stress, 1e-16)
        stress = new_stress
        trace.append(stress)
        if done:
            break
    return z, stress, trace


def project(x, cfg: MdsConfig):
    """Dispatch on ``cfg.method``; returns (embedding, stress or None)."""
    if cfg.method == "classical":
        return classical_mds(x, cfg.target_dim), None
    emb, stress = smacof_mds(x, cfg)
    return emb, stress


def _fix_column_signs(coords: np.ndarray) -> np.ndarray:
    out = coords.copy()
    flipped = np.abs(out)[::-1]
    for col in range(out.shape[1]):
        idx = out.shape[0] - 1 - int(np.argmax(flipped[:, col]))
        if out[idx, col] < 0:
            out[:, col] = -out[:, col]
    return out
