"""End-to-end runs: consensus, ensemble metrics, MDS stability.

This is the layer the CLI calls and the only layer that touches files.
The full consensus composition is: load and canonicalize every ensemble
member, map each to its pairwise distance matrix, take the smoothed
geometric median of the matrices, and project the median back to
coordinates with MDS. The projection gap reported alongside measures how
far the median matrix is from being realizable in the target dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateEmbedding
from .geometry import canonicalize, distance_matrix, frobenius_distance
from .io import Manifest, load_embedding_file, load_ensemble, load_matrix_file
from .mds import MdsConfig, project, smacof_mds
from .median import MedianDiagnostics, WeiszfeldConfig, weiszfeld_median
from .metrics import MetricsReport, mean_distance_to_reference, mean_pairwise_distance, summarize


@dataclass(frozen=True)
class ConsensusResult:
    consensus_matrix: np.ndarray
    embedding: np.ndarray
    diagnostics: MedianDiagnostics
    mds_method: str
    projection_gap: float
    stress: float | None
    tags: tuple[str, ...]
    # (tag, count, mean, sd) of input distances to the consensus, per tag,
    # in first-appearance order; None when no entry is tagged.
    tag_groups: tuple[tuple[str, int, float, float], ...] | None


def run_consensus(manifest: Manifest, weiszfeld: WeiszfeldConfig, mds: MdsConfig) -> ConsensusResult:
    embeddings, tags = load_ensemble(manifest)
    canonical = []
    for (path, _), emb in zip(manifest.entries, embeddings):
        try:
            canonical.append(canonicalize(emb))
        except DegenerateEmbedding as e:
            raise DegenerateEmbedding(f"{path}: {e}") from None
    matrices = [distance_matrix(c) for c in canonical]
    median, diagnostics = weiszfeld_median(matrices, weiszfeld)
    embedding, stress = project(median, mds)
    gap = frobenius_distance(median, distance_matrix(embedding))
    groups = None
    if any(tags):
        groups = tuple(group_distances(canonical, tags, embedding))
    return ConsensusResult(
        consensus_matrix=median,
        embedding=embedding,
        diagnostics=diagnostics,
        mds_method=mds.method,
        projection_gap=gap,
        stress=stress,
        tags=tuple(tags),
        tag_groups=groups,
    )


def run_metrics(manifest: Manifest, reference_path=None) -> MetricsReport:
    embeddings, _ = load_ensemble(manifest)
    reference = load_embedding_file(reference_path) if reference_path else None
    return summarize(embeddings, reference)


def run_mds_stability(matrix_path, runs: int, mds: MdsConfig) -> MetricsReport:
    """Rerun stress-majorization MDS on one matrix and summarize the spread.

    Each run gets its own derived seed (and is internally the best of
    ``mds.smacof_trials`` restarts), so the spread measures genuine
    initialization sensitivity, not restart luck.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    matrix = load_matrix_file(matrix_path)
    outputs = []
    for i in range(runs):
        run_seed = int(np.random.SeedSequence([mds.seed, i]).generate_state(1)[0])
        cfg = replace(mds, method="smacof", seed=run_seed)
        emb, _ = smacof_mds(matrix, cfg)
        outputs.append(emb)
    mean, sd, table = mean_pairwise_distance(outputs)
    return MetricsReport(
        k=len(outputs), mean_pairwise=mean, sd_pairwise=sd, pairwise_table=table
    )


def group_distances(embeddings, tags, reference):
    """Per-tag summary of distances to ``reference``.

    Returns a list of (tag, count, mean, sd) in first-appearance order,
    for the per-tag section of the consensus report (how far each
    hyperparameter setting or imputation sits from the consensus).
    """
    order: list[str] = []
    buckets: dict[str, list] = {}
    for tag, emb in zip(tags, embeddings):
        if tag not in buckets:
            order.append(tag)
            buckets[tag] = []
        buckets[tag].append(emb)
    rows = []
    for tag in order:
        mean, sd, _ = mean_distance_to_reference(buckets[tag], reference)
        rows.append((tag, len(buckets[tag]), mean, sd))
    return rows
