from __future__ import annotations

import random
from fractions import Fraction

import pytest

from _gen import random_finite_set
from berkclusters.clusters import PointSet, compute_clusters, same_cluster_combinatorics
from berkclusters.errors import SizeMismatch, TooFewPoints
from berkclusters.position import position_tree, same_position, trees_isomorphic, triple_tree
from berkclusters.projline import translation

F = Fraction
S_POINTS = {"a0": -9, "b0": 9, "a1": 3, "b1": 12, "a2": 1, "b2": "inf"}
S_PRIME_POINTS = {"a0": -9, "b0": 9, "a1": 27, "b1": F(27, 4), "a2": 1, "b2": "inf"}
IDENT = {k: k for k in S_POINTS}


def test_tame_g2_position_tree() -> None:
    T = position_tree(PointSet.of(3, S_POINTS))
    assert len(T.vertices) == 4
    top = T.clusters.maximal
    assert T.r_map["a2"] == top and T.r_map["b2"] == top
    assert T.r_map["a0"] == frozenset({"a0", "b0"})
    assert T.fiber(top) == {"a2", "b2"}


def test_tame_g2_moved_position_tree() -> None:
    assert len(position_tree(PointSet.of(3, S_PRIME_POINTS)).vertices) == 3


def test_three_points_one_vertex() -> None:
    T = position_tree(PointSet.of(5, [0, 1, "inf"]))
    assert len(T.vertices) == 1
    assert len(set(T.r_map.values())) == 1 and len(T.r_map) == 3


def test_too_few_points() -> None:
    with pytest.raises(TooFewPoints):
        position_tree(PointSet.of(3, [0, 1]))


def test_s_and_s_prime_differ_in_position() -> None:
    S, Sp = PointSet.of(3, S_POINTS), PointSet.of(3, S_PRIME_POINTS)
    assert not same_position(S, IDENT, Sp)
    assert same_position(S, IDENT, S)


def test_size_mismatch() -> None:
    with pytest.raises(SizeMismatch):
        same_position(PointSet.of(3, [0, 1, 2]), {"0": "0"}, PointSet.of(3, [0, 1, 2, 3]))


def test_translation_keeps_position() -> None:
    rng = random.Random(4)
    for _ in range(40):
        A = random_finite_set(rng, rng.choice([2, 3]), rng.randint(3, 6))
        moved = A.mapped(translation(F(rng.randint(-99, 99), rng.randint(1, 9))))
        phi = {lab: lab for lab in A.labels}
        assert same_position(A, phi, moved)


def test_triple_classification_agrees_with_clusters() -> None:
    rng = random.Random(12)
    checked = 0
    for _ in range(60):
        A = random_finite_set(rng, rng.choice([2, 3]), rng.randint(3, 5))
        assert trees_isomorphic(position_tree(A), triple_tree(A))
        checked += 1
    assert trees_isomorphic(position_tree(PointSet.of(3, S_POINTS)), triple_tree(PointSet.of(3, S_POINTS)))
    assert checked == 60


def test_vertex_count_is_cluster_count() -> None:
    rng = random.Random(13)
    for _ in range(50):
        A = random_finite_set(rng, 3, rng.randint(2, 7))
        A = PointSet.of(3, {**A.as_dict(), "w": "inf"})
        assert len(position_tree(A).vertices) == len(compute_clusters(A).clusters)


def test_same_position_iff_cluster_bijection() -> None:
    """With infinity fixed, compare against a direct tree-isomorphism search."""
    rng = random.Random(14)
    for _ in range(80):
        A = random_finite_set(rng, rng.choice([2, 3]), rng.randint(2, 4))
        A = PointSet.of(A.ell, {**A.as_dict(), "w": "inf"})
        B = random_finite_set(rng, A.ell, len(A) - 1)
        B = PointSet.of(B.ell, {**B.as_dict(), "w": "inf"})
        fin_a = [x for x in A.labels if x != "w"]
        fin_b = [x for x in B.labels if x != "w"]
        rng.shuffle(fin_b)
        phi = dict(zip(fin_a, fin_b)) | {"w": "w"}
        via_clusters = same_cluster_combinatorics(compute_clusters(A), compute_clusters(B), phi)
        via_trees = trees_isomorphic(position_tree(A), position_tree(B), phi)
        assert same_position(A, phi, B) == via_clusters == via_trees


def test_dot_lists_every_point() -> None:
    dot = position_tree(PointSet.of(3, S_POINTS)).to_dot()
    assert dot.startswith("graph position {")
    for lab in S_POINTS:
        assert f'label="{lab}"' in dot
