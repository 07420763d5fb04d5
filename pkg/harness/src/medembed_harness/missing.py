"""Missingness injection: completely-at-random and intensity-dependent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tables import read_csv, write_csv

MECHANISMS = ("random", "intensity_dependent")


@dataclass(frozen=True)
class MissingnessSpec:
    mechanism: str = "random"
    rate: float = 0.1
    threshold_percentile: float = 30.0

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"mechanism must be one of {MECHANISMS}")
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")
        if not 0.0 < self.threshold_percentile < 100.0:
            raise ValueError("threshold_percentile must lie in (0, 100)")


def deletion_probabilities(data, spec: MissingnessSpec) -> np.ndarray:
    """Per-entry deletion probability under the spec.

    The random mechanism deletes every entry with probability `rate`. The
    intensity-dependent one deletes low values (below the global
    `threshold_percentile` of all entries) with probability min(1, 2*rate)
    and the rest with rate/2, so low-intensity values vanish more often.
    """
    data = np.asarray(data, dtype=float)
    if spec.mechanism == "random":
        return np.full(data.shape, spec.rate)
    tau = np.percentile(data, spec.threshold_percentile)
    return np.where(data < tau, min(1.0, 2.0 * spec.rate), spec.rate / 2.0)


def mask_entries(data, spec: MissingnessSpec, seed) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    if not np.all(np.isfinite(data)):
        raise ValueError("input dataset must be complete and finite")
    if spec.rate == 0.0:
        return data.copy()
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1]))
    out = data.copy()
    out[rng.random(data.shape) < deletion_probabilities(data, spec)] = np.nan
    return out


def inject_missingness(data_path, spec: MissingnessSpec, seed, out_path):
    """Read a complete dataset, delete entries per the spec, write the result.

    Missing entries are written as empty fields. Returns the fraction of
    entries deleted.
    """
    data = read_csv(data_path)
    masked = mask_entries(data, spec, seed)
    write_csv(out_path, masked)
    return float(np.isnan(masked).mean())
