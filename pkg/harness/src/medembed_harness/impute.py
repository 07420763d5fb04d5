"""Multiple imputation by chained equations with posterior sampling."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .tables import read_csv, write_csv


def _derived_seed(seed, index) -> int:
    return int(np.random.SeedSequence([int(seed), 2, int(index)]).generate_state(1)[0])


def observed_bounds(data):
    """Per-column min/max over the observed entries."""
    data = np.asarray(data, dtype=float)
    if np.any(np.all(np.isnan(data), axis=0)):
        cols = np.flatnonzero(np.all(np.isnan(data), axis=0)).tolist()
        raise ValueError(f"columns {cols} have no observed values, cannot impute")
    return np.nanmin(data, axis=0), np.nanmax(data, axis=0)


def impute_once(data, seed, lo=None, hi=None) -> np.ndarray:
    """One chained-equation imputation, sampled from the posterior.

    Imputed values are truncated to the observed per-column range; the
    upstream estimator's iteration defaults are kept as-is.
    """
    # heavy import kept local so workers and the CLI start fast
    from sklearn.experimental import enable_iterative_imputer  # noqa: F401
    from sklearn.impute import IterativeImputer
    from sklearn.linear_model import BayesianRidge

    data = np.asarray(data, dtype=float)
    if lo is None or hi is None:
        lo, hi = observed_bounds(data)
    imputer = IterativeImputer(
        estimator=BayesianRidge(),
        sample_posterior=True,
        min_value=lo,
        max_value=hi,
        random_state=seed,
    )
    return imputer.fit_transform(data)


def imputer_settings() -> dict:
    from sklearn.experimental import enable_iterative_imputer  # noqa: F401
    from sklearn.impute import IterativeImputer

    defaults = IterativeImputer()
    return {
        "estimator": "BayesianRidge",
        "sample_posterior": True,
        "truncation": "observed min/max per column",
        "max_iter": defaults.max_iter,
        "tol": defaults.tol,
    }


def _impute_task(args):
    missing_path, index, seed, out_path = args
    data = read_csv(missing_path)
    lo, hi = observed_bounds(data)
    try:
        completed = impute_once(data, seed, lo, hi)
    except Exception as e:
        raise RuntimeError(f"imputation {index} (seed {seed}) failed: {e}") from e
    write_csv(out_path, completed)
    return out_path


def impute_datasets(missing_path, m, seed, out_dir, jobs=1):
    """Write m completed copies of a dataset with missing entries.

    A dataset with nothing missing yields m identical copies. Returns the
    list of output paths; a provenance record goes to imputation.json next
    to them.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if jobs < 1:
        raise ValueError("jobs must be a positive integer")
    os.makedirs(out_dir, exist_ok=True)
    data = read_csv(missing_path)
    paths = [os.path.join(out_dir, f"imputed_{k:03d}.csv") for k in range(m)]

    if not np.any(np.isnan(data)):
        for p in paths:
            write_csv(p, data)
    else:
        observed_bounds(data)  # fail early on non-imputable columns
        tasks = [(missing_path, k, _derived_seed(seed, k), paths[k]) for k in range(m)]
        if jobs == 1:
            for t in tasks:
                _impute_task(t)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                list(pool.map(_impute_task, tasks))

    record = {
        "source": os.path.abspath(missing_path),
        "m": m,
        "seed": seed,
        "missing_fraction": float(np.isnan(data).mean()),
        "imputer": imputer_settings(),
        "files": [os.path.basename(p) for p in paths],
    }
    with open(os.path.join(out_dir, "imputation.json"), "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")
    return paths
