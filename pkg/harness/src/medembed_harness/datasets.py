"""Input datasets: a synthetic default plus fetchers for public data."""

from __future__ import annotations

import os
import urllib.error
import urllib.request

import numpy as np

from .tables import write_csv

# Public datasets commonly used to exercise this kind of pipeline. The
# fetcher grabs the raw artifact; converting an .rda or a count matrix
# into the CSV input format is left to the caller's own tooling.
DATASET_SOURCES = {
    "toxolopit": (
        "https://raw.githubusercontent.com/lgatto/pRolocdata/master/data/"
        "Barylyuk2020ToxoLopit.rda",
        "hyperLOPIT spatial proteomics of Toxoplasma gondii (R data file)",
    ),
    "embryoid": (
        "https://data.mendeley.com/public-files/datasets/v6n743h5ng/files/"
        "b1865840-e8df-4381-8866-b04d10e4b8b5/file_downloaded",
        "embryoid body scRNA-seq time course (archive)",
    ),
}


def gaussian_clusters(n, features, clusters, spread=0.6, seed=0):
    """Draw n points from `clusters` isotropic Gaussians in `features` dims.

    Returns (data, labels). Cluster centers are themselves Gaussian with
    scale 3, so clusters are well separated relative to the default spread.
    """
    if n < clusters or clusters < 1 or features < 1:
        raise ValueError("need n >= clusters >= 1 and features >= 1")
    if spread <= 0:
        raise ValueError("spread must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0]))
    centers = rng.normal(0.0, 3.0, size=(clusters, features))
    labels = rng.integers(0, clusters, size=n)
    data = centers[labels] + rng.normal(0.0, spread, size=(n, features))
    return data, labels


def write_synthetic(path, n, features, clusters, spread=0.6, seed=0,
                    labels_path=None):
    data, labels = gaussian_clusters(n, features, clusters, spread, seed)
    write_csv(path, data)
    if labels_path is not None:
        with open(labels_path, "w", encoding="utf-8") as fh:
            fh.writelines(f"{int(v)}\n" for v in labels)
    return data


def fetch_dataset(name, out_dir, timeout=60):
    if name not in DATASET_SOURCES:
        known = ", ".join(sorted(DATASET_SOURCES))
        raise ValueError(f"unknown dataset {name!r}; known: {known}")
    url, _ = DATASET_SOURCES[name]
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, name + os.path.splitext(url)[1].split("/")[0])
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = resp.read()
    except (urllib.error.URLError, OSError) as e:
        raise RuntimeError(f"download of {name} from {url} failed: {e}") from None
    with open(out_path, "wb") as fh:
        fh.write(payload)
    return out_path
