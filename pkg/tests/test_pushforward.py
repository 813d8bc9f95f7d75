from __future__ import annotations

from fractions import Fraction

import pytest

from _gen import paired_sets
from berkclusters.berktree import DISTINGUISHED, MetricTree, TreePoint, distance_to_axis, hull_from_clusters
from berkclusters.clusters import Pairing, PointSet, compute_clusters, is_r_separated
from berkclusters.errors import NoInfinityInS, NotSeparated, OptimalityNotAsserted, ValidationError
from berkclusters.pushforward import (
    PushforwardParams,
    branch_hull,
    check_branch_separation,
    predict_branch_clusters,
    pushforward_hull,
)

F = Fraction
G1 = Pairing.of([("a0", "b0"), ("a1", "b1")])
S_POINTS = {"a0": -9, "b0": 9, "a1": 3, "b1": 12, "a2": 1, "b2": "inf"}
S_PAIRS = Pairing.of([("a0", "b0"), ("a1", "b1"), ("a2", "b2")])


def _wild() -> PointSet:
    return PointSet.of(2, {"a0": 0, "b0": "inf", "a1": 9, "b1": 1})


def test_params() -> None:
    wild = PushforwardParams.for_field(2, 2)
    assert (wild.vp, wild.r, wild.branch_r) == (1, 1, 2)
    tame = PushforwardParams.for_field(2, 3)
    assert (tame.vp, tame.r) == (0, 0)
    assert PushforwardParams(3, F(1)).r == F(1, 2)
    with pytest.raises(ValidationError):
        PushforwardParams(1, F(0))
    with pytest.raises(ValidationError):
        PushforwardParams(4, F(0))


def test_wild_genus_one_edge_grows_by_two() -> None:
    params = PushforwardParams.for_field(2, 2)
    t = hull_from_clusters(compute_clusters(_wild()), G1)
    tB = pushforward_hull(t, params)
    assert list(t.edge_lengths().values()) == [3]
    assert list(tB.edge_lengths().values()) == [5]
    cdB = predict_branch_clusters(_wild(), G1, params)
    assert cdB.relative_depth({"a1", "b1"}) == 5
    assert check_branch_separation(tB, params)


def test_tame_genus_one_even_depth_unchanged() -> None:
    S = PointSet.of(3, {"a0": 0, "b0": "inf", "a1": 3, "b1": 12})
    cd = compute_clusters(S)
    cdB = predict_branch_clusters(S, G1, PushforwardParams.for_field(2, 3))
    assert cd.relative_depth({"a1", "b1"}) == cdB.relative_depth({"a1", "b1"}) == 1
    assert cdB.combinatorial() == cd.combinatorial()


def test_tame_g2_tame_even_kept_odd_doubled() -> None:
    S = PointSet.of(3, S_POINTS)
    cd = compute_clusters(S)
    cdB = predict_branch_clusters(S, S_PAIRS, PushforwardParams.for_field(2, 3), optimal=True)
    assert cdB.combinatorial() == cd.combinatorial()
    for c in cd.clusters:
        if cd.relative_depth(c) is None:
            continue
        factor = 2 if len(c) % 2 else 1
        assert cdB.relative_depth(c) == factor * cd.relative_depth(c)


def test_tame_edges_on_axes_scale_by_p() -> None:
    """With v(p) = 0 the tube is the axes themselves."""
    for S, P in paired_sets(51, 60, ell=3):
        t = hull_from_clusters(compute_clusters(S), P)
        for p in (2, 3):
            tB = pushforward_hull(t, PushforwardParams(p, F(0)), optimal=True)
            for n, length in t.edge_lengths().items():
                par = t.parent[n]
                on_axis = any(
                    distance_to_axis(t, TreePoint(n), i) == 0 and distance_to_axis(t, TreePoint(par), i) == 0
                    for i in range(len(t.axes))
                )
                assert tB.length[n] == (p * length if on_axis else length)


def test_only_trivial_odd_cluster_means_identity() -> None:
    S = PointSet.of(3, {"a0": 0, "b0": "inf", "a1": 1, "b1": 10})
    cd = compute_clusters(S)
    assert [c for c in cd.clusters if len(c) % 2 and c != cd.maximal] == []
    cdB = predict_branch_clusters(S, G1, PushforwardParams(2, F(0)))
    assert dict(cdB.depths) == dict(cd.depths)


def test_structure_is_preserved() -> None:
    for S, P in paired_sets(52, 40):
        params = PushforwardParams.for_field(2, S.ell)
        if not is_r_separated(S, P, params.r):
            continue
        t = hull_from_clusters(compute_clusters(S), P)
        tB = pushforward_hull(t, params, optimal=True)
        assert (tB.nodes, dict(tB.parent), dict(tB.attach), tB.axes) == (t.nodes, dict(t.parent), dict(t.attach), t.axes)
        assert all(tB.length[n] >= t.length[n] for n in t.nodes)


def test_closed_forms_hold_on_random_inputs() -> None:
    """predict_branch_clusters raises if a closed form disagrees with the tree."""
    seen = 0
    for S, P in paired_sets(53, 120):
        for p in (2, 3):
            params = PushforwardParams(p, F(1) if S.ell == p else F(0))
            if is_r_separated(S, P, params.r):
                cdB = predict_branch_clusters(S, P, params, optimal=True)
                assert check_branch_separation(branch_hull(S, P, params, optimal=True), params)
                assert cdB.combinatorial() == compute_clusters(S).combinatorial()
                seen += 1
    assert seen > 50


def test_not_separated_is_rejected() -> None:
    S = PointSet.of(2, {"a0": 0, "b0": "inf", "a1": 1, "b1": 3})
    t = hull_from_clusters(compute_clusters(S), G1)
    with pytest.raises(NotSeparated):
        pushforward_hull(t, PushforwardParams.for_field(2, 2))


def test_optimality_must_be_asserted_beyond_genus_one() -> None:
    S = PointSet.of(3, S_POINTS)
    with pytest.raises(OptimalityNotAsserted):
        predict_branch_clusters(S, S_PAIRS, PushforwardParams.for_field(2, 3))


def test_infinity_required() -> None:
    S = PointSet.of(3, {"a0": 0, "b0": 5, "a1": 1, "b1": 10})
    with pytest.raises(NoInfinityInS):
        predict_branch_clusters(S, G1, PushforwardParams.for_field(2, 3))
    T = PointSet.of(3, {"a0": "inf", "b0": 5, "a1": 1, "b1": 10})
    with pytest.raises(NoInfinityInS):
        predict_branch_clusters(T, G1, PushforwardParams.for_field(2, 3))


def test_branch_separation_negative_control() -> None:
    # two distinguished vertices 3 apart on different axes; the bound is strict
    top, low = frozenset({"a0", "a1", "b1"}), frozenset({"a1", "b1"})
    t = MetricTree(
        ("a0", "b0", "a1", "b1"), "b0", (top, low), {top: None, low: top}, {top: F(0), low: F(3)},
        {"a0": top, "b0": top, "a1": low, "b1": low}, axes=(("a0", "b0"), ("a1", "b1")),
        kinds={top: DISTINGUISHED, low: DISTINGUISHED},
    )
    assert check_branch_separation(t, PushforwardParams(2, F(1, 2)))
    assert not check_branch_separation(t, PushforwardParams(3, F(1)))
    assert not check_branch_separation(t, PushforwardParams(2, F(1)))
    assert check_branch_separation(t, PushforwardParams(2, F(0)))
