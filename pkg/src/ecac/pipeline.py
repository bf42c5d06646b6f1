"""End-to-end clustering runs, with and without the extended-center step."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .algorithms import CenterBasedAlgorithm, kmeans_centers_with_snap
from .data import Dataset, GroundTruth, SpatialIndex
from .density import compute_densities, default_delta
from .errors import InvalidK
from .metrics import nmi, rand_index
from .optimizer import SelectionStrategy, identify_extended_centers, merge_clusters

SCHEMA_VERSION = 1


@dataclass
class ClusteringResult:
    """One clustering run: labels, provenance, and (optional) scores.

    ``timings`` is the only nondeterministic part of a result; everything
    else is a pure function of the inputs and seeds.
    """

    algorithm: str
    k: int
    strategy: str
    labels: np.ndarray
    center_ids: list[int]
    extended_sets: list[list[int]]
    delta: float | None = None
    cap: int | None = None
    fallback_count: int = 0
    iterations: int = 0
    nmi_score: float | None = None
    ri_score: float | None = None
    timings: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    # Per-selection trace; dumped to a JSON-lines file on request, never
    # part of the result record itself.
    trace: list = field(default_factory=list, repr=False)

    @property
    def s(self) -> int:
        return sum(len(group) for group in self.extended_sets)

    def attach_metrics(self, truth: GroundTruth | None):
        if truth is not None:
            self.nmi_score = nmi(truth.labels, self.labels)
            self.ri_score = rand_index(truth.labels, self.labels)
        return self

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "algorithm": self.algorithm,
            "k": self.k,
            "strategy": self.strategy,
            "delta": self.delta,
            "cap": self.cap,
            "s": self.s,
            "iterations": self.iterations,
            "fallback_count": self.fallback_count,
            "labels": [int(x) for x in self.labels],
            "center_ids": [int(x) for x in self.center_ids],
            "extended_sets": [[int(x) for x in group] for group in self.extended_sets],
            "nmi": self.nmi_score,
            "ri": self.ri_score,
            "timings": dict(self.timings),
            "extras": dict(self.extras),
        }

    @classmethod
    def from_dict(cls, record: dict) -> "ClusteringResult":
        return cls(
            algorithm=record["algorithm"],
            k=record["k"],
            strategy=record["strategy"],
            labels=np.asarray(record["labels"], dtype=np.int64),
            center_ids=list(record["center_ids"]),
            extended_sets=[list(g) for g in record["extended_sets"]],
            delta=record.get("delta"),
            cap=record.get("cap"),
            fallback_count=record.get("fallback_count", 0),
            iterations=record.get("iterations", 0),
            nmi_score=record.get("nmi"),
            ri_score=record.get("ri"),
            timings=record.get("timings", {}),
            extras=record.get("extras", {}),
        )


def compute_centers(dataset: Dataset, algorithm: CenterBasedAlgorithm, k: int):
    """Run the center process; returns (center ids, metadata extras)."""
    if not 1 <= k <= dataset.n:
        raise InvalidK(f"k must be in 1..{dataset.n}, got {k}")
    extras = {}
    if algorithm.name == "kmeans":
        ids, snap = kmeans_centers_with_snap(dataset, k, **algorithm.params)
        extras["max_center_snap_distance"] = float(snap.max())
        return list(int(i) for i in ids), extras
    return [int(i) for i in algorithm.center_process(dataset, k)], extras


def run_baseline(
    dataset: Dataset,
    algorithm: CenterBasedAlgorithm,
    k: int,
    centers: list[int] | None = None,
) -> ClusteringResult:
    """The unoptimized algorithm: assignment straight from the k centers."""
    extras = {}
    if centers is None:
        centers, extras = compute_centers(dataset, algorithm, k)
    t0 = time.perf_counter()
    labels = algorithm.assignment_process(dataset, centers)
    total_ms = 1000.0 * (time.perf_counter() - t0)
    return ClusteringResult(
        algorithm=algorithm.name,
        k=k,
        strategy="baseline",
        labels=np.asarray(labels, dtype=np.int64),
        center_ids=list(centers),
        extended_sets=[[c] for c in centers],
        timings={"total_ms": total_ms},
        extras=extras,
    )


def run_optimized(
    dataset: Dataset,
    algorithm: CenterBasedAlgorithm,
    k: int,
    delta: float | None = None,
    strategy: SelectionStrategy | None = None,
    centers: list[int] | None = None,
    index: SpatialIndex | None = None,
) -> ClusteringResult:
    """Center process, extended-center identification, assignment, merge."""
    strategy = strategy or SelectionStrategy()
    extras = {}
    if centers is None:
        centers, extras = compute_centers(dataset, algorithm, k)
    if index is None:
        index = SpatialIndex(dataset)
    if delta is None:
        delta = default_delta(dataset)

    t0 = time.perf_counter()
    densities = compute_densities(dataset, index, delta)
    t1 = time.perf_counter()
    ext = identify_extended_centers(
        dataset, centers, delta, strategy, index=index, densities=densities
    )
    t2 = time.perf_counter()
    initial = algorithm.assignment_process(dataset, ext.all)
    labels = merge_clusters(initial, ext)
    t3 = time.perf_counter()

    result = ClusteringResult(
        algorithm=algorithm.name,
        k=k,
        strategy=strategy.kind,
        labels=labels,
        center_ids=list(centers),
        extended_sets=[list(group) for group in ext.sets],
        delta=float(delta),
        cap=strategy.cap,
        fallback_count=ext.fallback_count,
        iterations=len(ext.trace),
        timings={
            "total_ms": 1000.0 * (t3 - t0),
            "density_ms": 1000.0 * (t1 - t0),
            "extend_ms": 1000.0 * (t2 - t1),
            "assign_ms": 1000.0 * (t3 - t2),
        },
        extras=extras,
        trace=ext.trace,
    )
    result.extras["coverage_complete"] = ext.fully_covered
    return result
