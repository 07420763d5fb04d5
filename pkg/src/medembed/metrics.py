"""Ensemble instability summaries.

Two descriptive statistics over an ensemble of embeddings: how far each
member sits from a chosen reference, and how far members sit from each
other. Both use the quotient metric from :mod:`medembed.geometry`, so
they are blind to translation, scale, and rotation of the individual
inputs. Standard deviations are population ones (divide by the count).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyEnsemble
from .geometry import embedding_distance


@dataclass(frozen=True)
class MetricsReport:
    k: int
    mean_pairwise: float | None = None
    sd_pairwise: float | None = None
    pairwise_table: np.ndarray | None = field(default=None, repr=False)
    mean_to_reference: float | None = None
    sd_to_reference: float | None = None
    per_entry_to_reference: np.ndarray | None = field(default=None, repr=False)


def mean_distance_to_reference(embs, ref):
    """Mean and population SD of the quotient distance to ``ref``.

    Returns ``(mean, sd, per_entry)`` where per_entry keeps the individual
    distances in input order for per-tag reporting.
    """
    embs = list(embs)
    if not embs:
        raise EmptyEnsemble("need at least one embedding")
    d = np.array([embedding_distance(e, ref) for e in embs])
    return float(d.mean()), float(d.std()), d


def mean_pairwise_distance(embs):
    """Mean and population SD over all C(k,2) unordered pairs.

    Returns ``(mean, sd, table)`` where table is the condensed vector of
    pairwise distances in (0,1), (0,2), ..., (k-2,k-1) order.
    """
    embs = list(embs)
    k = len(embs)
    if k < 2:
        raise EmptyEnsemble(f"need at least 2 embeddings, got {k}")
    table = np.array(
        [embedding_distance(embs[i], embs[j]) for i in range(k) for j in range(i + 1, k)]
    )
    return float(table.mean()), float(table.std()), table


def summarize(embs, ref=None) -> MetricsReport:
    """Bundle the pairwise summary (k >= 2) with the reference one if given."""
    embs = list(embs)
    if not embs:
        raise EmptyEnsemble("need at least one embedding")
    fields = {"k": len(embs)}
    if len(embs) >= 2:
        mp, sp, table = mean_pairwise_distance(embs)
        fields.update(mean_pairwise=mp, sd_pairwise=sp, pairwise_table=table)
    if ref is not None:
        mr, sr, per = mean_distance_to_reference(embs, ref)
        fields.update(mean_to_reference=mr, sd_to_reference=sr, per_entry_to_reference=per)
    if len(embs) < 2 and ref is None:
        raise EmptyEnsemble("a single embedding with no reference has nothing to summarize")
    return MetricsReport(**fields)
