"""Embedding canonicalization and the quotient metric between embeddings.

An *embedding* is an n x p array of point coordinates. Two embeddings are
regarded as the same object when they differ only by translation, uniform
scaling, rotation or reflection. Rather than materializing equivalence
classes, this module represents each class by two computable objects:

* the *canonical form* (centered, unit mean-squared row norm), which fixes
  location and scale, and
* the *pairwise distance matrix* of the canonical form, which additionally
  erases rotations and reflections.

The Frobenius distance between two such matrices is then a true metric on
the quotient, and :func:`embedding_distance` computes it end to end.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateEmbedding, DimensionMismatch

# Below this, the mean-squared row norm of the centered configuration is
# treated as zero (all points coincide up to double-precision noise).
DEGENERACY_FLOOR = 1e-14


def as_embedding(points) -> np.ndarray:
    """Validate and return an n x p float64 coordinate array.

    Requires at least two points, at least one coordinate, and all entries
    finite. Raises ValueError otherwise.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"embedding must be a 2-D array, got ndim={pts.ndim}")
    n, p = pts.shape
    if n < 2:
        raise ValueError(f"embedding needs at least 2 points, got n={n}")
    if p < 1:
        raise ValueError("embedding needs at least 1 coordinate per point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("embedding contains non-finite entries")
    return pts


def canonicalize(points) -> np.ndarray:
    """Center an embedding and rescale it to unit mean-squared row norm.

    Returns a new array ``(points - mean) / s`` with
    ``s = sqrt(mean_i ||row_i - mean||^2)``, so the output has column means
    zero and ``(1/n) sum_i ||row_i||^2 == 1``.

    Raises
    ------
    DegenerateEmbedding
        If all rows coincide, in which case the scale factor vanishes.
    """
    pts = as_embedding(points)
    centered = pts - pts.mean(axis=0)
    msn = float(np.mean(np.einsum("ij,ij->i", centered, centered)))
    scale = np.sqrt(msn)
    if scale < DEGENERACY_FLOOR:
        raise DegenerateEmbedding(
            f"all {pts.shape[0]} points coincide; canonical scale factor "
            f"{scale:.3e} is below {DEGENERACY_FLOOR:.0e}"
        )
    return centered / scale


def is_canonical(points, tol: float = 1e-12) -> bool:
    """Whether an array already satisfies both canonical-form constraints."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        return False
    if not np.all(np.isfinite(pts)):
        return False
    if np.max(np.abs(pts.mean(axis=0))) > tol:
        return False
    msn = float(np.mean(np.einsum("ij,ij->i", pts, pts)))
    return abs(msn - 1.0) <= tol


def distance_matrix(points) -> np.ndarray:
    """Pairwise Euclidean distance matrix of a point configuration.

    The result is exactly symmetric with an exactly zero diagonal. The
    consensus pipeline always calls this on canonical forms; the function
    itself accepts any valid embedding.
    """
    pts = as_embedding(points)
    return squareform(pdist(pts))


def frobenius_distance(a, b) -> float:
    """||a - b||_F over the full matrices (both triangles and the diagonal)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"matrix shapes differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def embedding_distance(y1, y2) -> float:
    """Quotient metric between two embeddings of the same n points.

    Canonicalizes both arguments, maps each to its pairwise distance
    matrix, and returns the Frobenius distance between the matrices. The
    value is invariant under translating, uniformly scaling, rotating or
    reflecting either argument, and the embedding dimensions p may differ.
    """
    p1 = as_embedding(y1)
    p2 = as_embedding(y2)
    if p1.shape[0] != p2.shape[0]:
        raise DimensionMismatch(
            f"embeddings describe different point counts: {p1.shape[0]} vs {p2.shape[0]}"
        )
    return frobenius_distance(
        distance_matrix(canonicalize(p1)), distance_matrix(canonicalize(p2))
    )


def validate_distance_matrix(x, *, check_triangle: bool = False, triangle_tol: float = 1e-9) -> np.ndarray:
    """Check the distance-matrix invariants and return the array as float64.

    Symmetry and hollowness are required exactly, nonnegativity and
    finiteness entrywise. The O(n^3) triangle-inequality check is opt-in;
    it allows violations up to ``triangle_tol``.
    """
    m = np.asarray(x, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"distance matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("distance matrix contains non-finite entries")
    if not np.array_equal(m, m.T):
        raise ValueError("distance matrix is not exactly symmetric")
    if np.any(np.diagonal(m) != 0.0):
        raise ValueError("distance matrix diagonal is not exactly zero")
    if np.any(m < 0.0):
        raise ValueError("distance matrix has negative entries")
    if check_triangle:
        # max over k of (m[i,k] + m[k,j]) >= m[i,j] must hold pairwise
        slack = (m[:, None, :] + m[None, :, :].transpose(0, 2, 1)).min(axis=2) - m
        worst = float(slack.min())
        if worst < -triangle_tol:
            raise ValueError(f"triangle inequality violated by {-worst:.3e}")
    return m
