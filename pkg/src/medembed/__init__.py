"""Median consensus embeddings.

Integrates an ensemble of unstable low-dimensional embeddings (random
restarts, multiple imputations, hyperparameter sweeps) into a single
representative one: the geometric median of their pairwise distance
matrices, projected back to coordinates with MDS. Includes instability
metrics for ensembles and a Monte-Carlo bench for the concentration rate
of the consensus.
"""

from .bench import RateReport, SyntheticMeasure, estimate_rate, make_measure, sample_embedding
from .errors import (
    CalibrationError,
    DegenerateEmbedding,
    DimensionMismatch,
    EigenFailure,
    EmptyEnsemble,
    InconsistentWidth,
    MedembedError,
    NonFiniteValue,
    ParseError,
)
from .geometry import (
    canonicalize,
    distance_matrix,
    embedding_distance,
    frobenius_distance,
    is_canonical,
    validate_distance_matrix,
)
from .mds import MdsConfig, classical_mds, smacof_mds
from .median import MedianDiagnostics, WeiszfeldConfig, median_objective, weiszfeld_median
from .metrics import MetricsReport, mean_distance_to_reference, mean_pairwise_distance
from .pipeline import ConsensusResult, run_consensus, run_mds_stability, run_metrics

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ConsensusResult",
    "DegenerateEmbedding",
    "DimensionMismatch",
    "EigenFailure",
    "EmptyEnsemble",
    "InconsistentWidth",
    "MdsConfig",
    "MedembedError",
    "MedianDiagnostics",
    "MetricsReport",
    "NonFiniteValue",
    "ParseError",
    "RateReport",
    "SyntheticMeasure",
    "WeiszfeldConfig",
    "canonicalize",
    "classical_mds",
    "distance_matrix",
    "embedding_distance",
    "estimate_rate",
    "frobenius_distance",
    "is_canonical",
    "make_measure",
    "mean_distance_to_reference",
    "mean_pairwise_distance",
    "median_objective",
    "run_consensus",
    "run_mds_stability",
    "run_metrics",
    "sample_embedding",
    "smacof_mds",
    "validate_distance_matrix",
    "weiszfeld_median",
    "__version__",
]
