#!/usr/bin/env python3
"""Standalone estimate of the mean noise-induced embedding deviation.

Computes, with no imports from the package, the expected quotient
distance between a canonical 50x2 base configuration and a draw of
base + N(0, 0.1^2) per coordinate. The printed mean is frozen into
tests/test_bench.py as the cross-check constant for sample_embedding;
rerun this script if that tolerance band ever needs re-deriving.

Everything here is deliberately written from the definitions (explicit
centering, explicit norm scaling, broadcast pairwise distances) rather
than through the package's geometry helpers.
"""

import numpy as np

N = 50
P = 2
SIGMA = 0.1
DRAWS = 2000


def canonical(points):
    centered = points - points.mean(axis=0)
    scale = np.sqrt((centered**2).sum(axis=1).mean())
    return centered / scale


def pairwise(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def main():
    rng = np.random.default_rng(20260818)
    base = canonical(rng.standard_normal((N, P)))
    base_dm = pairwise(base)
    dists = np.empty(DRAWS)
    for i in range(DRAWS):
        noisy = canonical(base + rng.normal(0.0, SIGMA, size=(N, P)))
        dists[i] = np.linalg.norm(pairwise(noisy) - base_dm)
    print(f"n={N} p={P} sigma={SIGMA} draws={DRAWS}")
    print(f"mean={dists.mean():.6f}")
    print(f"sd={dists.std():.6f}")
    print(f"theory sigma*sqrt(2n(n-1))={SIGMA * np.sqrt(2 * N * (N - 1)):.6f}")


if __name__ == "__main__":
    main()
