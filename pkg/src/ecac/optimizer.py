"""Greedy identification of extended-centers and micro-cluster merging.

Starting from the clustering centers, each iteration promotes one more
object to extended-center: the (object, set) pair minimizing the
density-weighted distance

    dis(o, E_j) = min_{x in E_j} ||o - x||_2 / rho(o)

is selected, the object joins that set, and its delta-neighborhood joins
the covered region. The loop stops once every object is covered (or a
per-set cap is reached, or every object has been promoted).

Strategies:

* ``local`` (default) draws candidates from the 2*delta neighborhoods of
  the current members; if that pool empties while objects remain
  uncovered, a single whole-dataset step runs and local search resumes.
* ``global`` draws candidates from all remaining objects.
* ``random`` samples the object uniformly (seeded) and attaches it to
  the set whose clustering center is nearest.
* ``nodensity`` is ``local`` without the density weighting.

Ties in the minimization break toward the lower object id, then the
lower set index; every run is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .data import Dataset, SpatialIndex
from .density import DensityVector, compute_densities
from .errors import EmptyCenters, InvalidRadius, InvalidSpec, LabelOutOfRange

LOCAL = "local"
GLOBAL = "global"
RANDOM = "random"
NODENSITY = "nodensity"
STRATEGY_KINDS = (LOCAL, GLOBAL, RANDOM, NODENSITY)


@dataclass(frozen=True)
class SelectionStrategy:
    """How candidate extended-centers are pooled and scored.

    ``cap`` bounds the number of extended-centers per set (parity
    termination for like-for-like ablation comparisons).
    """

    kind: str = LOCAL
    seed: int | None = None
    cap: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise InvalidSpec(f"unknown strategy {self.kind!r}")
        if self.kind == RANDOM and self.seed is None:
            raise InvalidSpec("random strategy requires a seed")
        # cap = 0 is the degenerate mode: no extension at all.
        if self.cap is not None and self.cap < 0:
            raise InvalidSpec(f"cap must be >= 0, got {self.cap}")


@dataclass
class ExtendedSets:
    """Clustering centers plus their extended-centers.

    ``all`` lists every member in identification order (the k centers
    first); ``sets[i]`` starts with center i; ``all_sets[p]`` is the set
    index of ``all[p]``. ``trace`` holds one record per greedy selection:
    object id, set index, selection distance, and covered count after
    the step.
    """

    sets: list[list[int]]
    all: list[int]
    all_sets: list[int]
    coverage: np.ndarray
    delta: float
    fallback_count: int = 0
    trace: list[dict] = field(default_factory=list)

    @property
    def s(self) -> int:
        return len(self.all)

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def fully_covered(self) -> bool:
        return bool(self.coverage.all())


def set_distance(
    o: int,
    members: Sequence[int],
    dataset: Dataset,
    densities: DensityVector | None = None,
    use_density: bool = True,
) -> float:
    """Distance from object ``o`` to an extended-set.

    The minimum Euclidean distance to any member, divided by the density
    of ``o`` when ``use_density`` (density >= 1, so always defined).
    """
    members = np.asarray(members, dtype=np.int64)
    if members.size == 0:
        raise EmptyCenters("extended-set must be nonempty")
    d = float(np.linalg.norm(dataset.points[members] - dataset.points[o], axis=1).min())
    if use_density:
        return d / float(densities.rho[o])
    return d


class _GreedyState:
    """Bookkeeping shared by every strategy."""

    def __init__(self, dataset, index, densities, centers, cap, pool_radius=None):
        self.dataset = dataset
        self.points = dataset.points
        self.index = index
        self.densities = densities
        self.centers = centers
        self.delta = densities.delta
        self.cap = cap
        self.pool_radius = pool_radius
        self.k = len(centers)
        self.n = dataset.n
        self.sets: list[list[int]] = [[] for _ in range(self.k)]
        self.all: list[int] = []
        self.all_sets: list[int] = []
        self.member_of = np.full(self.n, -1, dtype=np.int64)
        self.covered = np.zeros(self.n, dtype=bool)
        self.n_covered = 0
        self.trace: list[dict] = []
        self.fallback_count = 0

    def add(self, o: int, j: int):
        """Register a new member; returns its pool-radius neighbor ids.

        With a pool radius, one tree query serves both purposes: ids
        within the (strictly larger) pool radius feed the candidate
        pool, and the subset at strict distance < delta is newly covered.
        """
        self.member_of[o] = j
        self.sets[j].append(o)
        self.all.append(o)
        self.all_sets.append(j)
        if self.pool_radius is not None:
            ids, dists = self.index.range_query_with_distances(
                self.points[o], self.pool_radius
            )
            newly = ids[dists < self.delta]
        else:
            ids = None
            newly = self.index.range_query(self.points[o], self.delta)
        newly = newly[~self.covered[newly]]
        self.covered[newly] = True
        self.n_covered += newly.size
        return ids

    def record(self, o: int, j: int, dis: float):
        self.trace.append(
            {"object": int(o), "set": int(j), "dis": float(dis), "covered": self.n_covered}
        )

    def full_sets(self) -> np.ndarray:
        if self.cap is None:
            return np.zeros(self.k, dtype=bool)
        return np.array([len(s) - 1 >= self.cap for s in self.sets])

    def done(self) -> bool:
        return (
            self.n_covered == self.n
            or len(self.all) == self.n
            or (self.cap is not None and self.full_sets().all())
        )

    def member_arrays(self):
        return (
            np.asarray(self.all, dtype=np.int64),
            np.asarray(self.all_sets, dtype=np.int64),
        )

    def finish(self) -> ExtendedSets:
        return ExtendedSets(
            sets=self.sets,
            all=self.all,
            all_sets=self.all_sets,
            coverage=self.covered,
            delta=self.delta,
            fallback_count=self.fallback_count,
            trace=self.trace,
        )


def _nearest_open_member(points, cands, member_ids, member_sets, k):
    """For each candidate: min distance to any listed member, and the set
    attaining it (lowest set index when several members tie exactly)."""
    d = cdist(points[cands], points[member_ids])
    min_d = d.min(axis=1)
    sets = np.where(d == min_d[:, None], member_sets[None, :], k).min(axis=1)
    return min_d, sets


def _run_scored(state: _GreedyState, use_density: bool, local: bool):
    """Distance-minimizing selection with either the local or global pool.

    The global pool re-scores every remaining object against every open
    set member each iteration, straight from the definition. The local
    pool is what makes the search fast: the 2*delta frontier is grown
    incrementally, and because the density weight does not depend on the
    set, each pooled object only needs a cached (min distance, best set)
    pair, folded up as members arrive.
    """
    points = state.points
    n, k = state.n, state.k
    rho = state.densities.rho.astype(np.float64)
    best_dis = np.full(n, np.inf)
    best_set = np.full(n, -1, dtype=np.int64)
    in_pool = np.zeros(n, dtype=bool)

    def scan(ids: np.ndarray):
        """Fresh minima over open-set members for the given ids."""
        member_ids, member_sets = state.member_arrays()
        full = state.full_sets()
        if full.any():
            keep = ~full[member_sets]
            member_ids, member_sets = member_ids[keep], member_sets[keep]
        if member_ids.size == 0:
            return None, None
        return _nearest_open_member(points, ids, member_ids, member_sets, k)

    def absorb(o: int, j: int, nearby):
        """Fold the newest member of set j into the local pool's cache."""
        rows = np.flatnonzero(in_pool)
        d = np.linalg.norm(points[rows] - points[o], axis=1)
        better = (d < best_dis[rows]) | ((d == best_dis[rows]) & (j < best_set[rows]))
        rows = rows[better]
        best_dis[rows] = d[better]
        best_set[rows] = j
        entrants = nearby[~in_pool[nearby]]
        if entrants.size:
            dis, sets = scan(entrants)
            if dis is not None:
                best_dis[entrants] = dis
                best_set[entrants] = sets
            in_pool[entrants] = True

    def close_set(f: int):
        """Set f just reached its cap: re-point pool rows that relied on it."""
        rows = np.flatnonzero(in_pool & (best_set == f) & (state.member_of < 0))
        if rows.size == 0:
            return
        dis, sets = scan(rows)
        if dis is None:
            best_dis[rows] = np.inf
            best_set[rows] = -1
        else:
            best_dis[rows] = dis
            best_set[rows] = sets

    for j, center in enumerate(state.centers):
        nearby = state.add(center, j)
        if local:
            absorb(center, j, nearby)

    was_full = state.full_sets()
    while not state.done():
        nonmember = state.member_of < 0
        fallback = False
        if local:
            cands = np.flatnonzero(in_pool & nonmember)
            if cands.size == 0:
                # Disconnected region: one whole-dataset step, then resume.
                cands = np.flatnonzero(nonmember)
                fallback = True
                state.fallback_count += 1
        else:
            cands = np.flatnonzero(nonmember)
        if local and not fallback:
            dis_vec, set_vec = best_dis[cands], best_set[cands]
        else:
            dis_vec, set_vec = scan(cands)
        scores = dis_vec / rho[cands] if use_density else dis_vec
        pick = int(np.argmin(scores))  # ties: lowest object id
        o, j, dis = int(cands[pick]), int(set_vec[pick]), float(scores[pick])
        nearby = state.add(o, j)
        state.record(o, j, dis)
        if local:
            absorb(o, j, nearby)
            full = state.full_sets()
            if full[j] and not was_full[j]:
                close_set(j)
            was_full = full
    return state.finish()


def _run_random(state: _GreedyState, rng: np.random.Generator):
    """Uniformly sampled objects, attached to the nearest center's set."""
    points = state.points
    center_pts = points[state.centers]
    for j, center in enumerate(state.centers):
        state.add(center, j)
    while not state.done():
        cands = np.flatnonzero(state.member_of < 0)
        o = int(rng.choice(cands))
        dists = np.linalg.norm(center_pts - points[o], axis=1)
        dists[state.full_sets()] = np.inf
        j = int(np.argmin(dists))
        # Recorded for the trace only; random selection ignores distances.
        dis = set_distance(o, state.sets[j], state.dataset, state.densities)
        state.add(o, j)
        state.record(o, j, dis)
    return state.finish()


def identify_extended_centers(
    dataset: Dataset,
    centers: Sequence[int],
    delta: float,
    strategy: SelectionStrategy | None = None,
    index: SpatialIndex | None = None,
    densities: DensityVector | None = None,
) -> ExtendedSets:
    """Grow one extended-set per clustering center until coverage.

    ``index`` and ``densities`` may be passed in to reuse previously
    built structures; densities must have been computed at ``delta``.
    """
    strategy = strategy or SelectionStrategy()
    if delta <= 0:
        raise InvalidRadius(f"delta must be > 0, got {delta}")
    centers = [int(c) for c in centers]
    if not centers:
        raise EmptyCenters("need at least one clustering center")
    if len(set(centers)) != len(centers):
        raise InvalidSpec("centers must be distinct object ids")
    if index is None:
        index = SpatialIndex(dataset)
    if densities is None:
        densities = compute_densities(dataset, index, delta)
    elif densities.delta != delta:
        raise InvalidRadius(
            f"densities were computed at delta={densities.delta}, not {delta}"
        )

    local = strategy.kind in (LOCAL, NODENSITY)
    state = _GreedyState(
        dataset, index, densities, centers, strategy.cap,
        pool_radius=2.0 * delta if local else None,
    )
    if strategy.kind == RANDOM:
        return _run_random(state, np.random.default_rng(strategy.seed))
    return _run_scored(state, use_density=strategy.kind != NODENSITY, local=local)


def merge_clusters(initial_labels, ext: ExtendedSets) -> np.ndarray:
    """Collapse the s initial-clusters onto their k extended-sets.

    Initial label p means "assigned to ``ext.all[p]``"; the final label
    is the index of the extended-set containing that member.
    """
    initial = np.asarray(initial_labels, dtype=np.int64)
    if initial.size and (initial.min() < 0 or initial.max() >= ext.s):
        raise LabelOutOfRange(f"initial labels must lie in 0..{ext.s - 1}")
    return np.asarray(ext.all_sets, dtype=np.int64)[initial]
