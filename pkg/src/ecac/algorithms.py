"""Center-based clustering algorithms split into their two phases.

Every algorithm here is expressed as a *center process* (pick k dataset
objects as centers) and a *category assignment process* (label every
object by one entry of an arbitrary center-id list). The optimizer only
ever talks to these two callables, so anything decomposable this way can
be plugged in.

Ties anywhere break toward the lower object index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .data import Dataset
from .density import pairwise_distance_percentile
from .errors import EmptyCenters, InvalidK, InvalidRadius


@dataclass(frozen=True)
class CenterBasedAlgorithm:
    """The plug-in seam: a named (center process, assignment process) pair."""

    name: str
    center_process: Callable[[Dataset, int], np.ndarray]
    assignment_process: Callable[[Dataset, Sequence[int]], np.ndarray]
    params: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# K-means

def _lloyd(points: np.ndarray, k: int, seed: int, max_iter: int):
    """Lloyd iteration from k uniformly sampled seed objects.

    Returns (centroids, labels, n_iter). Stops when the assignment
    stabilizes. An emptied cluster keeps its previous centroid.
    """
    rng = np.random.default_rng(seed)
    centroids = points[rng.choice(points.shape[0], size=k, replace=False)].copy()
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    for it in range(1, max_iter + 1):
        new_labels = np.argmin(cdist(points, centroids), axis=1)
        if np.array_equal(new_labels, labels):
            return centroids, labels, it
        labels = new_labels
        for j in range(k):
            members = points[labels == j]
            if members.shape[0]:
                centroids[j] = members.mean(axis=0)
    return centroids, labels, max_iter


def _snap_to_objects(points: np.ndarray, centroids: np.ndarray):
    """Map each centroid to the nearest not-yet-used dataset object."""
    dists = cdist(centroids, points)
    ids = np.empty(centroids.shape[0], dtype=np.int64)
    snap = np.empty(centroids.shape[0], dtype=np.float64)
    used = np.zeros(points.shape[0], dtype=bool)
    for j in range(centroids.shape[0]):
        row = np.where(used, np.inf, dists[j])
        ids[j] = np.argmin(row)
        snap[j] = row[ids[j]]
        used[ids[j]] = True
    return ids, snap


def kmeans_centers_with_snap(
    dataset: Dataset, k: int, seed: int = 0, max_iter: int = 300
):
    """K-means center process, also reporting centroid-to-object snap distances."""
    if not 1 <= k <= dataset.n:
        raise InvalidK(f"k must be in 1..{dataset.n}, got {k}")
    centroids, _, _ = _lloyd(dataset.points, k, seed, max_iter)
    return _snap_to_objects(dataset.points, centroids)


def kmeans_center_process(
    dataset: Dataset, k: int, seed: int = 0, max_iter: int = 300
) -> np.ndarray:
    """Run Lloyd iteration and snap the final centroids to distinct objects."""
    ids, _ = kmeans_centers_with_snap(dataset, k, seed, max_iter)
    return ids


def nearest_center_assignment(dataset: Dataset, centers: Sequence[int]) -> np.ndarray:
    """Label every object by its nearest center's position in the list."""
    centers = np.asarray(centers, dtype=np.int64)
    if centers.size == 0:
        raise EmptyCenters("need at least one center")
    dists = cdist(dataset.points, dataset.points[centers])
    labels = np.argmin(dists, axis=1).astype(np.int64)
    # Coincident centers would otherwise tie-break onto one position.
    labels[centers] = np.arange(centers.size)
    return labels


# ---------------------------------------------------------------------------
# Density peaks

@dataclass(frozen=True)
class DpcQuantities:
    """Per-object density-peak statistics under a cutoff distance.

    ``rho_dpc`` counts neighbors at strict distance < d_c (self excluded).
    ``delta_dpc[i]`` is the distance to the nearest object of higher
    density, where equal densities rank by lower index; the top-ranked
    object instead takes its distance to the farthest object, and its
    ``nearest_higher`` is -1.
    """

    rho_dpc: np.ndarray
    delta_dpc: np.ndarray
    nearest_higher: np.ndarray
    d_c: float


def _density_order(rho: np.ndarray) -> np.ndarray:
    """Object ids sorted from highest to lowest density, lower id first on ties."""
    n = rho.shape[0]
    return np.lexsort((np.arange(n), -rho))


def compute_dpc_quantities(dataset: Dataset, d_c: float) -> DpcQuantities:
    if d_c <= 0:
        raise InvalidRadius(f"d_c must be > 0, got {d_c}")
    points = dataset.points
    n = dataset.n

    rho = np.empty(n, dtype=np.int64)
    for start in range(0, n, 512):
        block = slice(start, min(start + 512, n))
        d = cdist(points[block], points)
        rho[block] = (d < d_c).sum(axis=1) - 1  # drop self

    order = _density_order(rho)
    delta = np.empty(n, dtype=np.float64)
    nearest = np.full(n, -1, dtype=np.int64)
    top = order[0]
    delta[top] = np.linalg.norm(points - points[top], axis=1).max()
    for pos in range(1, n):
        i = order[pos]
        higher = order[:pos]
        d = np.linalg.norm(points[higher] - points[i], axis=1)
        best = np.argmin(d)
        delta[i] = d[best]
        nearest[i] = higher[best]
    return DpcQuantities(rho, delta, nearest, float(d_c))


def default_cutoff(dataset: Dataset, percentile: float = 0.02) -> float:
    """Cutoff making the mean neighbor count roughly ``percentile * N``."""
    return pairwise_distance_percentile(dataset, percentile)


def dpc_center_process(
    dataset: Dataset,
    k: int,
    d_c: float | None = None,
    quantities: DpcQuantities | None = None,
) -> np.ndarray:
    """Pick the k objects with the largest density * separation product.

    This automates the usual visual decision-graph step. Ties on the
    product break toward higher density, then lower index.
    """
    if not 1 <= k <= dataset.n:
        raise InvalidK(f"k must be in 1..{dataset.n}, got {k}")
    q = quantities
    if q is None:
        q = compute_dpc_quantities(dataset, d_c if d_c is not None else default_cutoff(dataset))
    gamma = q.rho_dpc * q.delta_dpc
    ranking = np.lexsort((np.arange(dataset.n), -q.rho_dpc, -gamma))
    return ranking[:k].astype(np.int64)


def dpc_assignment(
    dataset: Dataset, centers: Sequence[int], quantities: DpcQuantities
) -> np.ndarray:
    """Propagate labels down the density gradient from the given centers.

    Objects denser than every center (possible when the optimizer
    supplies extra centers) have no labeled ancestor to inherit from and
    fall back to their nearest center.
    """
    centers = np.asarray(centers, dtype=np.int64)
    if centers.size == 0:
        raise EmptyCenters("need at least one center")
    n = dataset.n
    order = _density_order(quantities.rho_dpc)
    position = np.empty(n, dtype=np.int64)
    position[order] = np.arange(n)
    first_center_pos = position[centers].min()

    labels = np.full(n, -1, dtype=np.int64)
    labels[centers] = np.arange(centers.size)
    center_dists = cdist(dataset.points, dataset.points[centers])
    for i in order:
        if labels[i] >= 0:
            continue
        if position[i] < first_center_pos or quantities.nearest_higher[i] < 0:
            labels[i] = np.argmin(center_dists[i])
        else:
            labels[i] = labels[quantities.nearest_higher[i]]
    return labels


# ---------------------------------------------------------------------------
# Registry

def build_algorithm(name: str, **params) -> CenterBasedAlgorithm:
    """Construct a named algorithm with its two phases bound to ``params``.

    ``kmeans`` accepts ``seed`` and ``max_iter``; ``dpc`` accepts ``d_c``
    (defaulting per dataset). DPC's quantities are computed once per
    dataset and reused by the assignment phase.
    """
    if name == "kmeans":
        seed = params.get("seed", 0)
        max_iter = params.get("max_iter", 300)
        return CenterBasedAlgorithm(
            name="kmeans",
            center_process=lambda ds, k: kmeans_center_process(ds, k, seed, max_iter),
            assignment_process=nearest_center_assignment,
            params={"seed": seed, "max_iter": max_iter},
        )
    if name == "dpc":
        d_c = params.get("d_c")
        # Quantities depend only on (dataset, d_c); compute once and share
        # between the two phases. The strong reference keys the cache safely.
        cache: list = []

        def quantities_for(ds: Dataset) -> DpcQuantities:
            for held, q in cache:
                if held is ds:
                    return q
            q = compute_dpc_quantities(
                ds, d_c if d_c is not None else default_cutoff(ds)
            )
            cache.append((ds, q))
            return q

        return CenterBasedAlgorithm(
            name="dpc",
            center_process=lambda ds, k: dpc_center_process(
                ds, k, quantities=quantities_for(ds)
            ),
            assignment_process=lambda ds, centers: dpc_assignment(
                ds, centers, quantities_for(ds)
            ),
            params={"d_c": d_c},
        )
    raise ValueError(f"unknown algorithm {name!r}")
