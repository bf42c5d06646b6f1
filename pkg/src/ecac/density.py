"""Neighborhood density estimation and the radius heuristic.

The density of object ``i`` is the number of objects at strict distance
``< delta`` from it, self included, so every density is at least 1 and
dividing a distance by a density is always safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .data import Dataset, SpatialIndex
from .errors import DegenerateDataset, InvalidRadius


@dataclass(frozen=True)
class DensityVector:
    """Per-object neighbor counts under a fixed radius."""

    rho: np.ndarray
    delta: float

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=np.int64)
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)


def compute_densities(dataset: Dataset, index: SpatialIndex, delta: float) -> DensityVector:
    """Count, for every object, the objects within open radius ``delta``."""
    if delta <= 0:
        raise InvalidRadius(f"delta must be > 0, got {delta}")
    neighborhoods = index.range_query_many(dataset.points, delta)
    rho = np.array([len(ids) for ids in neighborhoods], dtype=np.int64)
    return DensityVector(rho, float(delta))


def pairwise_distance_percentile(
    dataset: Dataset,
    percentile: float,
    sample_cap: int = 1000,
    seed: int = 0,
) -> float:
    """A low percentile of the (sampled) positive pairwise distances.

    Distances are measured between min(N, sample_cap) points sampled
    without replacement; zero distances (duplicate points) are excluded.
    The percentile is taken as the ``int(p * count)``-th smallest
    distance, clamped to the last one.
    """
    if not 0 < percentile < 1:
        raise InvalidRadius(f"percentile must be in (0, 1), got {percentile}")
    if dataset.n < 2:
        raise DegenerateDataset("need at least two points")
    points = dataset.points
    if dataset.n > sample_cap:
        rng = np.random.default_rng(seed)
        points = points[np.sort(rng.choice(dataset.n, size=sample_cap, replace=False))]
    dists = pdist(points)
    dists = dists[dists > 0]
    if dists.size == 0:
        raise DegenerateDataset("all sampled points coincide")
    dists.sort()
    idx = min(int(percentile * dists.size), dists.size - 1)
    return float(dists[idx])


def default_delta(dataset: Dataset, percentile: float = 0.02, sample_cap: int = 1000) -> float:
    """Default neighborhood radius: a small pairwise-distance percentile.

    The optimizer wants a radius well below the cluster scale; the 2nd
    percentile of pairwise distances adapts to whatever units the data
    is in. Deterministic (fixed sampling seed).
    """
    return pairwise_distance_percentile(dataset, percentile, sample_cap)
