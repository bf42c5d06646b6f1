"""Datasets, CSV ingestion, synthetic generators, and radius queries.

Objects are identified by their row index in an immutable N x d point
matrix. All distances in this package are Euclidean, and neighborhoods
are open balls: ``range_query(p, r)`` returns exactly the ids at strict
distance ``< r``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    InvalidRadius,
    InvalidSpec,
    ParseError,
)

# Inflation applied to KD-tree query radii before the exact strict-< filter,
# so last-ulp disagreements with the tree's internal metric cannot drop a
# boundary point.
_QUERY_SLACK = 1e-9


@dataclass(frozen=True)
class Dataset:
    """Immutable N x d point matrix. Object identity is the row index."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise InvalidSpec(f"points must be 2-D, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise EmptyDataset(f"need N >= 1 and d >= 1, got shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise InvalidSpec("points contain non-finite values")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class GroundTruth:
    """Dense integer labels in 0..k_true-1, one per object."""

    labels: np.ndarray
    k_true: int = field(default=0)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        k = int(labels.max()) + 1 if labels.size else 0
        if self.k_true == 0:
            object.__setattr__(self, "k_true", k)
        if labels.size and (
            labels.min() < 0
            or labels.max() != self.k_true - 1
            or len(np.unique(labels)) != self.k_true
        ):
            raise InvalidSpec("labels must densely cover 0..k_true-1")


class SpatialIndex:
    """KD-tree over a dataset answering open-ball radius queries.

    Results depend only on point coordinates, never on build order, and
    a query centered on dataset point ``i`` always contains ``i``.
    """

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self._tree = cKDTree(dataset.points)

    def range_query(self, center, radius: float) -> np.ndarray:
        """Return the sorted ids at strict distance < radius from center."""
        center = np.asarray(center, dtype=np.float64)
        if center.shape != (self.dataset.d,):
            raise DimensionMismatch(
                f"query point has shape {center.shape}, dataset is {self.dataset.d}-D"
            )
        if radius <= 0:
            raise InvalidRadius(f"radius must be > 0, got {radius}")
        candidates = self._tree.query_ball_point(center, radius * (1.0 + _QUERY_SLACK))
        candidates = np.asarray(candidates, dtype=np.int64)
        if candidates.size == 0:
            return candidates
        dists = np.linalg.norm(self.dataset.points[candidates] - center, axis=1)
        result = candidates[dists < radius]
        result.sort()
        return result

    def range_query_with_distances(self, center, radius: float):
        """Like ``range_query`` but also returns the matching distances."""
        center = np.asarray(center, dtype=np.float64)
        if center.shape != (self.dataset.d,):
            raise DimensionMismatch(
                f"query point has shape {center.shape}, dataset is {self.dataset.d}-D"
            )
        if radius <= 0:
            raise InvalidRadius(f"radius must be > 0, got {radius}")
        candidates = self._tree.query_ball_point(center, radius * (1.0 + _QUERY_SLACK))
        candidates = np.asarray(candidates, dtype=np.int64)
        if candidates.size == 0:
            return candidates, np.empty(0)
        candidates.sort()
        dists = np.linalg.norm(self.dataset.points[candidates] - center, axis=1)
        keep = dists < radius
        return candidates[keep], dists[keep]

    def range_query_many(self, centers: np.ndarray, radius: float) -> list[np.ndarray]:
        """Vectorized ``range_query`` for several centers at once."""
        centers = np.asarray(centers, dtype=np.float64)
        if radius <= 0:
            raise InvalidRadius(f"radius must be > 0, got {radius}")
        raw = self._tree.query_ball_point(
            centers, radius * (1.0 + _QUERY_SLACK), workers=-1
        )
        out = []
        for center, ids in zip(centers, raw):
            ids = np.asarray(ids, dtype=np.int64)
            if ids.size:
                dists = np.linalg.norm(self.dataset.points[ids] - center, axis=1)
                ids = ids[dists < radius]
                ids.sort()
            out.append(ids)
        return out


def _parse_cell(text: str) -> float:
    value = float(text)
    if not np.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def _is_numeric(text: str) -> bool:
    try:
        _parse_cell(text)
    except ValueError:
        return False
    return True


def load_csv(path, label_column=None) -> tuple[Dataset, GroundTruth | None]:
    """Load a dataset from a comma-separated file.

    Parameters
    ----------
    path : str or Path
        File to read (UTF-8). An optional header row is auto-detected:
        a first row where any feature cell fails numeric parsing.
    label_column : int, str, or None
        Column holding ground-truth labels, by position (negative indices
        allowed) or by header name. ``None`` treats every column as a
        feature. Distinct label values are re-encoded densely in first
        appearance order.

    Returns
    -------
    (Dataset, GroundTruth or None)
    """
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyDataset(f"{path}: no rows")

    width = len(rows[0])
    for ln, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"{path}: row {ln} has {len(row)} cells, expected {width}")

    label_idx = None
    if isinstance(label_column, str):
        header = [c.strip() for c in rows[0]]
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise ParseError(f"{path}: no column named {label_column!r}") from None
        rows = rows[1:]
    else:
        if label_column is not None:
            label_idx = label_column if label_column >= 0 else width + label_column
            if not 0 <= label_idx < width:
                raise ParseError(f"{path}: label column {label_column} out of range")
        probe_cols = [j for j in range(width) if j != label_idx]
        if any(not _is_numeric(rows[0][j]) for j in probe_cols):
            rows = rows[1:]
    if not rows:
        raise EmptyDataset(f"{path}: header only, no data rows")

    feature_cols = [j for j in range(width) if j != label_idx]
    if not feature_cols:
        raise ParseError(f"{path}: no feature columns left")

    points = np.empty((len(rows), len(feature_cols)), dtype=np.float64)
    for i, row in enumerate(rows):
        for out_j, j in enumerate(feature_cols):
            try:
                points[i, out_j] = _parse_cell(row[j].strip())
            except ValueError as exc:
                raise ParseError(f"{path}: row {i}, column {j}: {exc}") from None

    truth = None
    if label_idx is not None:
        seen: dict[str, int] = {}
        labels = np.empty(len(rows), dtype=np.int64)
        for i, row in enumerate(rows):
            key = row[label_idx].strip()
            labels[i] = seen.setdefault(key, len(seen))
        truth = GroundTruth(labels, len(seen))

    return Dataset(points), truth


def generate_gaussian_mixture(
    k: int,
    per_cluster_n,
    means,
    stddev,
    seed: int,
) -> tuple[Dataset, GroundTruth]:
    """Sample an isotropic Gaussian mixture with known component labels.

    ``per_cluster_n`` and ``stddev`` may be scalars (shared by every
    component) or length-k sequences. Deterministic for a fixed seed.
    """
    if k < 1:
        raise InvalidSpec(f"k must be >= 1, got {k}")
    means = np.asarray(means, dtype=np.float64)
    if means.ndim != 2 or means.shape[0] != k:
        raise InvalidSpec(f"means must be k x d, got shape {means.shape}")
    counts = np.broadcast_to(np.asarray(per_cluster_n, dtype=np.int64), (k,))
    sigmas = np.broadcast_to(np.asarray(stddev, dtype=np.float64), (k,))
    if (counts < 1).any():
        raise InvalidSpec("every per-cluster count must be >= 1")
    if (sigmas <= 0).any():
        raise InvalidSpec("every stddev must be > 0")

    rng = np.random.default_rng(seed)
    blocks = []
    labels = []
    for c in range(k):
        blocks.append(rng.normal(means[c], sigmas[c], size=(counts[c], means.shape[1])))
        labels.append(np.full(counts[c], c, dtype=np.int64))
    return Dataset(np.vstack(blocks)), GroundTruth(np.concatenate(labels), k)
