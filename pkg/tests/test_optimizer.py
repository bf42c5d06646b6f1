import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecac.data import Dataset, SpatialIndex, generate_gaussian_mixture
from ecac.density import compute_densities
from ecac.errors import EmptyCenters, InvalidRadius, InvalidSpec, LabelOutOfRange
from ecac.optimizer import (
    ExtendedSets,
    SelectionStrategy,
    identify_extended_centers,
    merge_clusters,
    set_distance,
)

from oracles import naive_identify, set_distance_scan


def identify(points, centers, delta, **kw):
    return identify_extended_centers(Dataset(np.asarray(points, float)), centers, delta, **kw)


class TestSetDistance:
    def test_density_weighted(self):
        # Object 0 sits 0.5 away from three coincident neighbors, so its
        # rho under delta=1 is 4; the nearest member is 2.0 away.
        ds = Dataset(np.array([[0.0], [0.5], [0.5], [0.5], [2.0]]))
        dens = compute_densities(ds, SpatialIndex(ds), 1.0)
        assert dens.rho[0] == 4
        assert set_distance(0, [4], ds, dens) == pytest.approx(0.5)

    def test_unit_density(self):
        ds = Dataset(np.array([[0.0], [2.0]]))
        dens = compute_densities(ds, SpatialIndex(ds), 0.1)
        assert dens.rho[0] == 1
        assert set_distance(0, [1], ds, dens) == pytest.approx(2.0)

    def test_no_density_is_min_distance(self):
        ds = Dataset(np.array([[0.0], [3.0], [7.0]]))
        assert set_distance(0, [1, 2], ds, use_density=False) == pytest.approx(3.0)

    def test_matches_member_scan(self):
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(40, 2))
        ds = Dataset(pts)
        dens = compute_densities(ds, SpatialIndex(ds), 0.8)
        for _ in range(30):
            members = rng.choice(40, size=rng.integers(1, 10), replace=False).tolist()
            o = int(rng.choice([i for i in range(40) if i not in members]))
            expected = set_distance_scan(pts, o, members, dens.rho)
            assert set_distance(o, members, ds, dens) == pytest.approx(expected)

    def test_empty_set_rejected(self):
        ds = Dataset(np.array([[0.0]]))
        with pytest.raises(EmptyCenters):
            set_distance(0, [], ds, use_density=False)


class TestIdentify:
    def test_immediate_coverage(self):
        ds, _ = generate_gaussian_mixture(2, 10, [[0, 0], [3, 0]], 0.5, seed=0)
        ext = identify_extended_centers(ds, [0, 10], delta=100.0)
        assert ext.s == 2
        assert ext.sets == [[0], [10]]
        assert ext.trace == []
        assert ext.fully_covered

    def test_hand_simulated_line(self):
        # Points 0,1,2,3 on a line, one center at 0, delta 1.5.
        # Densities: rho = [2,3,3,2]. Initially covered {0,1}.
        # Pool = 2delta-ball of 0 = {1,2}; dis(1)=1/3 beats dis(2)=2/3.
        # Then pool = {2,3}; dis(2)=1/3 beats dis(3)=2/2; covering {2}
        # also covers 3, so the loop stops.
        ext = identify([[0.0], [1.0], [2.0], [3.0]], [0], 1.5)
        assert ext.all == [0, 1, 2]
        assert ext.sets == [[0, 1, 2]]
        assert ext.fully_covered
        assert [(t["object"], t["set"]) for t in ext.trace] == [(1, 0), (2, 0)]
        assert ext.trace[0]["dis"] == pytest.approx(1 / 3)
        assert ext.trace[1]["dis"] == pytest.approx(1 / 3)
        assert [t["covered"] for t in ext.trace] == [3, 4]

    def test_fallback_reaches_disconnected_region(self):
        # Second clump far beyond 2*delta of the first: local search must
        # fall back once to jump the gap, then resume.
        pts = [[0.0], [1.0], [50.0], [51.0]]
        ext = identify(pts, [0], 1.2)
        assert ext.fully_covered
        assert ext.fallback_count >= 1
        assert ext.sets[0][0] == 0

    def test_validation_errors(self):
        ds = Dataset(np.zeros((3, 1)))
        with pytest.raises(InvalidRadius):
            identify_extended_centers(ds, [0], 0.0)
        with pytest.raises(EmptyCenters):
            identify_extended_centers(ds, [], 1.0)
        with pytest.raises(InvalidSpec):
            identify_extended_centers(ds, [0, 0], 1.0)
        with pytest.raises(InvalidSpec):
            SelectionStrategy("random")  # no seed
        with pytest.raises(InvalidSpec):
            SelectionStrategy("local", cap=-1)

    def test_densities_delta_mismatch_rejected(self):
        ds = Dataset(np.arange(4.0).reshape(4, 1))
        index = SpatialIndex(ds)
        dens = compute_densities(ds, index, 0.5)
        with pytest.raises(InvalidRadius):
            identify_extended_centers(ds, [0], 1.0, densities=dens)


def random_instance(seed, n=40, d=2, clumps=False):
    rng = np.random.default_rng(seed)
    if clumps:
        a = rng.normal([0, 0], 0.8, (n // 2, d))
        b = rng.normal([8, 0], 0.8, (n - n // 2, d))
        return np.vstack([a, b])
    return rng.uniform(0, 10, size=(n, d))


@pytest.mark.parametrize("kind", ["local", "global", "nodensity", "random"])
@pytest.mark.parametrize("seed,clumps,delta,cap", [
    (0, False, 1.0, None),
    (1, False, 0.6, None),
    (2, True, 0.9, None),
    (3, False, 1.4, 3),
    (4, True, 0.5, 2),
])
def test_matches_naive_reference(kind, seed, clumps, delta, cap):
    pts = random_instance(seed, clumps=clumps)
    centers = [0, len(pts) // 2]
    strategy = SelectionStrategy(kind, seed=99 if kind == "random" else None, cap=cap)
    ext = identify(pts, centers, delta, strategy=strategy)
    sets, order, order_sets, covered, fallbacks, trace = naive_identify(
        pts, centers, delta, kind=kind, seed=99, cap=cap
    )
    assert ext.all == order
    assert ext.all_sets == order_sets
    assert ext.sets == sets
    assert set(np.flatnonzero(ext.coverage).tolist()) == covered
    assert ext.fallback_count == fallbacks
    got_trace = [(t["object"], t["set"], t["covered"]) for t in ext.trace]
    want_trace = [(o, j, c) for (o, j, _, c) in trace]
    assert got_trace == want_trace
    for got, want in zip(ext.trace, trace):
        assert got["dis"] == pytest.approx(want[2], rel=1e-9)


class TestIdentifyProperties:
    def test_termination_and_increments(self):
        pts = random_instance(7, n=60)
        ext = identify(pts, [0, 20, 40], 0.8)
        n, k = 60, 3
        assert len(ext.trace) <= n - k
        assert ext.s == k + len(ext.trace)
        assert ext.fully_covered
        covered_counts = [t["covered"] for t in ext.trace]
        assert all(b >= a for a, b in zip(covered_counts, covered_counts[1:]))

    def test_disjoint_partition(self):
        pts = random_instance(8, n=50)
        ext = identify(pts, [0, 25], 0.7)
        flat = [m for group in ext.sets for m in group]
        assert sorted(flat) == sorted(set(flat))
        assert sorted(flat) == sorted(ext.all)
        assert ext.all[:2] == [0, 25]

    def test_scale_equivariance(self):
        pts = random_instance(9, n=45)
        ext1 = identify(pts, [0, 22], 0.8)
        ext2 = identify(pts * 4.0, [0, 22], 0.8 * 4.0)
        assert ext1.all == ext2.all
        assert ext1.all_sets == ext2.all_sets

    def test_nodensity_equals_standard_when_all_isolated(self):
        # delta below the minimum gap: every density is 1, so the weight
        # divides everything by the same constant.
        rng = np.random.default_rng(12)
        pts = rng.uniform(0, 10, (30, 2))
        from scipy.spatial.distance import pdist

        delta = 0.9 * pdist(pts).min()
        a = identify(pts, [0, 15], delta, strategy=SelectionStrategy("local"))
        b = identify(pts, [0, 15], delta, strategy=SelectionStrategy("nodensity"))
        assert a.all == b.all and a.all_sets == b.all_sets

    def test_cap_bounds_every_set(self):
        pts = random_instance(10, n=50)
        ext = identify(pts, [0, 25], 0.5, strategy=SelectionStrategy("local", cap=4))
        assert all(len(group) - 1 <= 4 for group in ext.sets)

    def test_extended_sets_pure_on_separated_blobs(self):
        ds, gt = generate_gaussian_mixture(
            2, 60, [[0, 0], [80, 0]], 1.0, seed=31
        )
        from ecac.density import default_delta

        delta = default_delta(ds)
        for kind in ("local", "global"):
            ext = identify_extended_centers(
                ds, [0, 60], delta, strategy=SelectionStrategy(kind)
            )
            for group in ext.sets:
                assert len(set(gt.labels[group].tolist())) == 1


class TestMergeClusters:
    def test_identity_when_no_extension(self):
        ext = ExtendedSets(
            sets=[[4], [9]], all=[4, 9], all_sets=[0, 1],
            coverage=np.ones(10, bool), delta=1.0,
        )
        initial = np.array([0, 1, 1, 0])
        assert merge_clusters(initial, ext).tolist() == [0, 1, 1, 0]

    def test_union_by_set(self):
        # all = [e1, e2, e3] with e1,e3 in set 0 and e2 in set 1.
        ext = ExtendedSets(
            sets=[[5, 7], [6]], all=[5, 6, 7], all_sets=[0, 1, 0],
            coverage=np.ones(4, bool), delta=1.0,
        )
        assert merge_clusters([0, 2, 1, 2], ext).tolist() == [0, 0, 1, 0]

    def test_label_out_of_range(self):
        ext = ExtendedSets(
            sets=[[0]], all=[0], all_sets=[0],
            coverage=np.ones(2, bool), delta=1.0,
        )
        with pytest.raises(LabelOutOfRange):
            merge_clusters([0, 1], ext)

    def test_counts_preserved(self):
        pts = random_instance(13, n=50, clumps=True)
        ds = Dataset(pts)
        ext = identify_extended_centers(ds, [0, 25], 0.8)
        from ecac.algorithms import nearest_center_assignment

        initial = nearest_center_assignment(ds, ext.all)
        final = merge_clusters(initial, ext)
        for set_idx, group in enumerate(ext.sets):
            member_positions = [ext.all.index(m) for m in group]
            expected = sum(int((initial == p).sum()) for p in member_positions)
            assert int((final == set_idx).sum()) == expected


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), delta=st.floats(0.3, 3.0))
def test_identify_always_terminates_covered(seed, delta):
    pts = random_instance(seed, n=25)
    ext = identify(pts, [0, 12], delta)
    assert ext.fully_covered
    assert ext.s <= 25
    assert len(ext.trace) == ext.s - 2
