"""Ensemble generator feeding the median consensus CLI.

Produces synthetic or fetched datasets, injects missingness, multiply
imputes, and batch-runs t-SNE/UMAP into manifest-tagged embedding files.
"""

from .datasets import DATASET_SOURCES, fetch_dataset, gaussian_clusters, write_synthetic
from .embed import RunSpec, generate_ensemble, generate_runs, run_tsne, run_umap
from .impute import impute_datasets, impute_once, imputer_settings, observed_bounds
from .missing import (
    MissingnessSpec,
    deletion_probabilities,
    inject_missingness,
    mask_entries,
)
from .tables import read_csv, write_csv

__version__ = "0.1.0"

__all__ = [
    "DATASET_SOURCES",
    "MissingnessSpec",
    "RunSpec",
    "deletion_probabilities",
    "fetch_dataset",
    "gaussian_clusters",
    "generate_ensemble",
    "generate_runs",
    "impute_datasets",
    "impute_once",
    "imputer_settings",
    "inject_missingness",
    "mask_entries",
    "observed_bounds",
    "read_csv",
    "run_tsne",
    "run_umap",
    "write_csv",
    "write_synthetic",
    "__version__",
]
