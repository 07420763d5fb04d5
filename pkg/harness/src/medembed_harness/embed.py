"""Batch embedding runs: t-SNE and UMAP ensembles with explicit random inits."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .tables import read_csv, write_csv

METHODS = ("tsne", "umap")


@dataclass(frozen=True)
class RunSpec:
    method: str = "tsne"
    perplexity: float = 30.0
    n_neighbors: int = 15
    min_dist: float = 0.1
    runs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.perplexity <= 0:
            raise ValueError("perplexity must be positive")
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be at least 2")
        if self.min_dist < 0:
            raise ValueError("min_dist must be nonnegative")
        if self.runs < 1:
            raise ValueError("runs must be a positive integer")


def _derived_seed(seed, index) -> int:
    return int(np.random.SeedSequence([int(seed), 3, int(index)]).generate_state(1)[0])


def run_tsne(data, seed, perplexity) -> np.ndarray:
    from sklearn.manifold import TSNE

    data = np.asarray(data, dtype=float)
    rng = np.random.default_rng(seed)
    # small-variance normal init, standard deviation 1e-2
    init = rng.normal(0.0, 1e-2, size=(data.shape[0], 2))
    tsne = TSNE(n_components=2, perplexity=perplexity, init=init,
                random_state=seed)
    return np.asarray(tsne.fit_transform(data), dtype=float)


def run_umap(data, seed, n_neighbors, min_dist) -> np.ndarray:
    try:
        from umap import UMAP
    except ImportError:
        raise RuntimeError(
            "umap-learn is not installed; pip install umap-learn to use method=umap"
        ) from None

    data = np.asarray(data, dtype=float)
    rng = np.random.default_rng(seed)
    init = rng.uniform(-10.0, 10.0, size=(data.shape[0], 2))
    reducer = UMAP(n_components=2, n_neighbors=n_neighbors, min_dist=min_dist,
                   init=init, random_state=seed)
    return np.asarray(reducer.fit_transform(data), dtype=float)


def _embed_task(args):
    data_path, method, perplexity, n_neighbors, min_dist, seed, out_path = args
    data = read_csv(data_path)
    try:
        if method == "tsne":
            emb = run_tsne(data, seed, perplexity)
        else:
            emb = run_umap(data, seed, n_neighbors, min_dist)
    except Exception as e:
        raise RuntimeError(
            f"{method} run (seed {seed}) on {data_path} failed: {e}"
        ) from e
    if not np.all(np.isfinite(emb)):
        raise RuntimeError(f"{method} run (seed {seed}) produced non-finite output")
    write_csv(out_path, emb)
    return out_path


def generate_ensemble(data_paths, spec: RunSpec, out_dir, perplexities=None,
                      jobs=1, manifest_name="manifest.json"):
    """Run spec.runs embeddings per dataset per perplexity into out_dir.

    Writes every embedding in the consensus CLI's input format plus one
    manifest covering them all; returns the manifest path. Seeds are derived
    from spec.seed by global task index, so a rerun with the same arguments
    reproduces the files.
    """
    if jobs < 1:
        raise ValueError("jobs must be a positive integer")
    data_paths = [os.fspath(p) for p in data_paths]
    if not data_paths:
        raise ValueError("need at least one dataset")
    if perplexities is None:
        perplexities = [spec.perplexity]
    if spec.method == "tsne" and any(p <= 0 for p in perplexities):
        raise ValueError("perplexity must be positive")

    n = None
    for p in data_paths:
        data = read_csv(p)
        if np.any(np.isnan(data)):
            raise ValueError(f"{p}: dataset has missing entries; impute first")
        n = data.shape[0] if n is None else n
        if data.shape[0] != n:
            raise ValueError(f"{p}: expected {n} rows, got {data.shape[0]}")

    os.makedirs(out_dir, exist_ok=True)
    hyper_tags = (
        [f"p{p:g}" for p in perplexities]
        if spec.method == "tsne"
        else [f"k{spec.n_neighbors}-d{spec.min_dist:g}"]
    )
    hyper_vals = perplexities if spec.method == "tsne" else [spec.perplexity]

    tasks, entries = [], []
    index = 0
    for di, data_path in enumerate(data_paths):
        for hyper_tag, perplexity in zip(hyper_tags, hyper_vals):
            for _ in range(spec.runs):
                tag = f"{spec.method}-{hyper_tag}"
                if len(data_paths) > 1:
                    tag += f"-d{di:03d}"
                tag += f"-s{index}"
                fname = tag + ".csv"
                tasks.append((data_path, spec.method, perplexity,
                              spec.n_neighbors, spec.min_dist,
                              _derived_seed(spec.seed, index),
                              os.path.join(out_dir, fname)))
                entries.append({"path": fname, "tag": tag})
                index += 1

    if jobs == 1:
        for t in tasks:
            _embed_task(t)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(_embed_task, tasks))

    manifest = {
        "entries": entries,
        "n": n,
        "p": 2,
        "generator": {
            "tool": "medembed-harness",
            "method": spec.method,
            "perplexity": list(map(float, perplexities)) if spec.method == "tsne"
            else None,
            "n_neighbors": spec.n_neighbors if spec.method == "umap" else None,
            "min_dist": spec.min_dist if spec.method == "umap" else None,
            "runs_per_dataset": spec.runs,
            "seed": spec.seed,
            "seed_derivation": "SeedSequence([seed, 3, task_index])",
            "datasets": [os.path.abspath(p) for p in data_paths],
        },
    }
    manifest_path = os.path.join(out_dir, manifest_name)
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest_path


def generate_runs(data_path, spec: RunSpec, out_dir, jobs=1):
    """Embed one dataset spec.runs times; returns the manifest path."""
    return generate_ensemble([data_path], spec, out_dir, jobs=jobs)
