import numpy as np

from medembed.geometry import canonicalize


def random_canonical(rng, n, p):
    return canonicalize(rng.standard_normal((n, p)))


def random_similarity(rng, pts):
    """Random rotation/reflection, positive scale, and translation of pts."""
    p = pts.shape[1]
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    q = q * np.sign(np.diag(r))  # fixes QR's sign ambiguity; reflections still occur
    scale = float(rng.uniform(0.2, 5.0))
    shift = rng.normal(0.0, 3.0, size=p)
    return scale * (pts @ q) + shift


def random_distance_matrix(rng, n, p=3):
    """Exact Euclidean distance matrix of a random canonical configuration."""
    from medembed.geometry import distance_matrix

    return distance_matrix(random_canonical(rng, n, p))
