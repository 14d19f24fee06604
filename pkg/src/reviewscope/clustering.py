"""Recursive topic clustering over phrase embeddings.

A set of phrases is accepted as a topic when its within-cluster density
(mean pairwise cosine similarity) reaches the threshold and it has enough
members; otherwise it is split in two by average-linkage agglomerative
clustering on cosine distance and each part is re-examined. Sets that are
too small — or stuck at the depth limit — become outliers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ClusteringError
from .evaluation import TopicDictionary

NORM_EPS = 1e-12

STATUS_ACCEPTED = "accepted"
STATUS_OUTLIER = "outlier"


@dataclass(frozen=True)
class ClusterParams:
    density_threshold: float = 0.7
    min_size: int = 5
    max_depth: int = 32
    split_arity: int = 2
    density_mode: str = "mean"  # "min" scores a cluster by its weakest pair

    def __post_init__(self):
        if not -1.0 < self.density_threshold <= 1.0:
            raise ValueError("density_threshold must be in (-1, 1]")
        if self.min_size < 1:
            raise ValueError("min_size must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.split_arity < 2:
            raise ValueError("split_arity must be >= 2")
        if self.density_mode not in ("mean", "min"):
            raise ValueError(f"unknown density_mode {self.density_mode!r}")


@dataclass(frozen=True)
class TopicCluster:
    id: int
    members: tuple[tuple[str, np.ndarray], ...]
    density: float
    status: str
    depth: int = 0

    @property
    def phrases(self) -> tuple[str, ...]:
        return tuple(text for text, _ in self.members)

    def __len__(self) -> int:
        return len(self.members)


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms < NORM_EPS):
        raise ClusteringError("zero-norm member vector")
    return matrix / norms[:, None]


def cluster_density(vectors, mode: str = "mean") -> float:
    """Mean (or minimum) pairwise cosine similarity; 1.0 for a singleton."""
    matrix = np.asarray(list(vectors), dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 1:
        raise ClusteringError("density needs at least one vector")
    if matrix.shape[0] == 1:
        if float(np.linalg.norm(matrix[0])) < NORM_EPS:
            raise ClusteringError("zero-norm member vector")
        return 1.0
    unit = _unit_rows(matrix)
    gram = np.clip(unit @ unit.T, -1.0, 1.0)
    pairs = gram[np.triu_indices(matrix.shape[0], k=1)]
    return float(pairs.min() if mode == "min" else pairs.mean())


def agglomerative_split(vectors, arity: int = 2) -> list[list[int]]:
    """Partition vectors into min(arity, n) groups of original indices.

    Average-linkage agglomerative merging on cosine distance, run until
    the target group count remains. Merge order is deterministic: ties
    resolve to the pair whose clusters contain the lowest original
    indices. Cluster distances are maintained by the Lance–Williams
    update, which is exact for average linkage.
    """
    matrix = np.asarray(list(vectors), dtype=np.float64)
    n = matrix.shape[0] if matrix.ndim == 2 else 0
    if n < 2:
        raise ClusteringError("need at least 2 members to split")
    if arity < 2:
        raise ClusteringError("arity must be >= 2")
    target = min(arity, n)

    unit = _unit_rows(matrix)
    dist = 1.0 - np.clip(unit @ unit.T, -1.0, 1.0)
    np.fill_diagonal(dist, np.inf)

    active = np.ones(n, dtype=bool)
    sizes = np.ones(n, dtype=np.int64)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    # Each active slot's index equals the lowest original index in its
    # cluster (merges keep the lower slot), so argmin-first scanning
    # realizes the lowest-member-index tie-break.
    rowmin_val = dist.min(axis=1)
    rowmin_idx = dist.argmin(axis=1)

    remaining = n
    while remaining > target:
        i = int(np.argmin(rowmin_val))
        j = int(np.argmin(dist[i]))
        ni, nj = int(sizes[i]), int(sizes[j])
        merged_row = (ni * dist[i] + nj * dist[j]) / (ni + nj)
        merged_row[i] = np.inf
        merged_row[j] = np.inf
        dist[i, :] = merged_row
        dist[:, i] = merged_row
        dist[j, :] = np.inf
        dist[:, j] = np.inf
        active[j] = False
        sizes[i] += nj
        members[i].extend(members.pop(j))
        remaining -= 1

        rowmin_val[j] = np.inf
        rowmin_val[i] = dist[i].min()
        rowmin_idx[i] = int(np.argmin(dist[i]))
        col = dist[:, i]
        improved = active & (col < rowmin_val)
        improved[i] = False
        rowmin_val[improved] = col[improved]
        rowmin_idx[improved] = i
        stale = active & ~improved & ((rowmin_idx == i) | (rowmin_idx == j))
        stale[i] = False
        stale_rows = np.nonzero(stale)[0]
        if stale_rows.size:
            sub = dist[stale_rows]
            rowmin_val[stale_rows] = sub.min(axis=1)
            rowmin_idx[stale_rows] = sub.argmin(axis=1)

    return [sorted(members[slot]) for slot in sorted(members)]


def recursive_cluster(
    phrases: Sequence[tuple[str, np.ndarray]],
    params: ClusterParams = ClusterParams(),
) -> tuple[list[TopicCluster], list[TopicCluster]]:
    """Split phrases into accepted topic clusters and outliers.

    Recursion per set S: |S| < min_size → outlier; density(S) ≥ threshold
    → accepted; at max_depth → outlier; otherwise split and recurse.
    Cluster ids follow discovery order (depth-first, split order).
    Phrases must be de-duplicated by text beforehand.
    """
    if not phrases:
        raise ClusteringError("no phrases to cluster")
    dims = {len(np.atleast_1d(vec)) for _, vec in phrases}
    if len(dims) != 1:
        raise ClusteringError(f"mixed vector dimensions: {sorted(dims)}")
    texts = [text for text, _ in phrases]
    matrix = np.asarray([np.asarray(vec, dtype=np.float64) for _, vec in phrases])

    accepted: list[TopicCluster] = []
    outliers: list[TopicCluster] = []
    ids = itertools.count()

    def finalize(indices: list[int], depth: int, status: str) -> None:
        density = cluster_density(matrix[indices], mode=params.density_mode)
        cluster = TopicCluster(
            id=next(ids),
            members=tuple((texts[i], matrix[i]) for i in indices),
            density=density,
            status=status,
            depth=depth,
        )
        (accepted if status == STATUS_ACCEPTED else outliers).append(cluster)

    def visit(indices: list[int], depth: int) -> None:
        if len(indices) < params.min_size:
            finalize(indices, depth, STATUS_OUTLIER)
            return
        density = cluster_density(matrix[indices], mode=params.density_mode)
        if density >= params.density_threshold:
            finalize(indices, depth, STATUS_ACCEPTED)
            return
        if depth >= params.max_depth:
            finalize(indices, depth, STATUS_OUTLIER)
            return
        for group in agglomerative_split(matrix[indices], params.split_arity):
            visit([indices[g] for g in group], depth + 1)

    visit(list(range(len(texts))), 0)
    return accepted, outliers


def build_dictionary(
    accepted: Iterable[TopicCluster], source: str = "pipeline"
) -> TopicDictionary:
    """Sorted unique token set over all accepted-cluster phrases."""
    clusters = list(accepted)
    words = sorted({tok for c in clusters for text, _ in c.members for tok in text.split()})
    return TopicDictionary(words=tuple(words), topic_count=len(clusters), source=source)


def write_topics(clusters: Iterable[TopicCluster], path: str | Path) -> None:
    """TSV lines: cluster_id, density (6 dp), status, phrase — one per member."""
    ordered = sorted(clusters, key=lambda c: c.id)
    with Path(path).open("w", encoding="utf-8") as fh:
        for cluster in ordered:
            for text, _ in cluster.members:
                fh.write(f"{cluster.id}\t{cluster.density:.6f}\t{cluster.status}\t{text}\n")


def load_topics(path: str | Path) -> list[tuple[int, float, str, str]]:
    """Read a topics file back as (cluster_id, density, status, phrase) rows."""
    rows: list[tuple[int, float, str, str]] = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ClusteringError(f"{path}:{lineno}: expected 4 tab-separated fields")
        cluster_id, density, status, phrase = parts
        if status not in (STATUS_ACCEPTED, STATUS_OUTLIER):
            raise ClusteringError(f"{path}:{lineno}: unknown status {status!r}")
        rows.append((int(cluster_id), float(density), status, phrase))
    return rows


def accepted_topic_count(rows: Iterable[tuple[int, float, str, str]]) -> int:
    return len({cluster_id for cluster_id, _, status, _ in rows if status == STATUS_ACCEPTED})
