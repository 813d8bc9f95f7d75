from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import paired_sets, random_finite_set
from berkclusters.clusters import (
    Pairing,
    PointSet,
    compute_clusters,
    genus_of_cover,
    is_r_separated,
    mobius_transport,
    pairing_from_clusters,
    reciprocal_prediction,
    same_cluster_combinatorics,
)
from berkclusters.errors import NotClusteredInPairs
from berkclusters.projline import Mobius, translation
from berkclusters.valuation import val

F = Fraction

S_POINTS = {"a0": -9, "b0": 9, "a1": 3, "b1": 12, "a2": 1, "b2": "inf"}
S_PRIME_POINTS = {"a0": -9, "b0": 9, "a1": 27, "b1": F(27, 4), "a2": 1, "b2": "inf"}


def _brute_clusters(A: PointSet) -> dict[frozenset[str], Fraction]:
    """Every intersection of A with a disc around one of its points, by brute force."""
    fin = {lab: A[lab] for lab in A.finite_labels}
    out = {}
    for c, zc in fin.items():
        radii = {val(zc - w, A.ell) for lab, w in fin.items() if lab != c}
        for r in radii:
            members = frozenset(lab for lab, w in fin.items() if lab == c or val(zc - w, A.ell) >= r)
            if len(members) >= 2:
                out[members] = min(val(fin[x] - fin[y], A.ell) for x, y in combinations(members, 2))
    return out


def test_tame_g2_clusters_and_depths() -> None:
    cd = compute_clusters(PointSet.of(3, S_POINTS))
    want = {
        frozenset({"a0", "b0"}): 2,
        frozenset({"a1", "b1"}): 2,
        frozenset({"a0", "b0", "a1", "b1"}): 1,
        frozenset({"a0", "b0", "a1", "b1", "a2"}): 0,
    }
    assert dict(cd.depths) == want
    assert set(cd.even_clusters()) == {c for c in want if len(c) % 2 == 0}


def test_tame_g2_moved_even_clusters() -> None:
    cd = compute_clusters(PointSet.of(3, S_PRIME_POINTS))
    assert set(cd.even_clusters()) == {frozenset({"a1", "b1"}), frozenset({"a0", "b0", "a1", "b1"})}


def test_two_points_one_cluster() -> None:
    cd = compute_clusters(PointSet.of(5, [0, 1]))
    assert len(cd.clusters) == 1
    assert cd.depth(cd.maximal) == 0


def test_relative_depths() -> None:
    cd = compute_clusters(PointSet.of(3, S_POINTS))
    assert cd.relative_depth(cd.maximal) is None
    assert cd.relative_depth({"a0", "b0"}) == 1
    assert cd.relative_depth({"a0", "b0", "a1", "b1"}) == 1


def test_transport_identity_and_inversion() -> None:
    S = PointSet.of(3, S_POINTS)
    cd = compute_clusters(S)
    same = mobius_transport(cd, Mobius(F(1), F(0), F(0), F(1)))
    assert dict(same.depths) == dict(cd.depths)
    pair = compute_clusters(PointSet.of(3, {"a1": 3, "b1": 12}))
    image = mobius_transport(pair, Mobius(F(0), F(81), F(1), F(0)))
    assert image.depth({"a1", "b1"}) == val(F(27) - F(27, 4), 3) == 4


def test_translation_preserves_combinatorics() -> None:
    rng = random.Random(5)
    cd = compute_clusters(PointSet.of(3, S_POINTS))
    for _ in range(100):
        c = F(rng.randint(-1000, 1000), rng.randint(1, 30))
        moved = mobius_transport(cd, translation(c))
        assert same_cluster_combinatorics(cd, moved)


def test_reciprocal_rule_matches_recomputation_200_sets() -> None:
    rng = random.Random(8)
    inv = Mobius(F(0), F(1), F(1), F(0))
    done = 0
    while done < 200:
        A = random_finite_set(rng, rng.choice([2, 3, 5]), rng.randint(3, 7))
        if any(A[lab] == 0 for lab in A.labels):
            continue
        cd = compute_clusters(A)
        assert mobius_transport(cd, inv).combinatorial() == reciprocal_prediction(cd)
        done += 1


def test_compute_clusters_matches_brute_force() -> None:
    rng = random.Random(21)
    for _ in range(150):
        A = random_finite_set(rng, rng.choice([2, 3]), rng.randint(2, 8))
        assert dict(compute_clusters(A).depths) == _brute_clusters(A)


@given(st.integers(0, 10**9))
@settings(max_examples=100)
def test_laminar_monotone_and_order_free(seed: int) -> None:
    rng = random.Random(seed)
    A = random_finite_set(rng, rng.choice([2, 3, 5]), rng.randint(2, 8))
    cd = compute_clusters(A)
    cs = cd.clusters
    for c1, c2 in combinations(cs, 2):
        assert c1 <= c2 or c2 <= c1 or not (c1 & c2)
    for c in cs:
        par = cd.parent(c)
        if par is not None:
            assert cd.depth(c) > cd.depth(par)
            assert cd.relative_depth(c) == cd.depth(c) - cd.depth(par)
    labels = list(A.labels)
    rng.shuffle(labels)
    shuffled = PointSet.of(A.ell, {lab: A[lab] for lab in labels})
    assert dict(compute_clusters(shuffled).depths) == dict(cd.depths)


def test_pairing_examples() -> None:
    P = pairing_from_clusters(PointSet.of(3, S_POINTS))
    assert set(P.pairs) == {("a0", "b0"), ("a1", "b1"), ("a2", "b2")}
    Q = pairing_from_clusters(PointSet.of(2, {"x": 0, "y": "inf", "u": 1, "w": 9}))
    assert {frozenset(p) for p in Q.pairs} == {frozenset({"x", "y"}), frozenset({"u", "w"})}


def test_pairing_of_zero_one_nine_depends_on_the_prime() -> None:
    # over Q_3 the point 9 is close to 0, not to 1
    A = PointSet.of(3, {"x": 0, "y": "inf", "u": 1, "w": 9})
    assert _brute_clusters(A) == {frozenset({"x", "w"}): 2, frozenset({"x", "u", "w"}): 0}
    Q = pairing_from_clusters(A)
    assert {frozenset(p) for p in Q.pairs} == {frozenset({"x", "w"}), frozenset({"u", "y"})}


def _brute_classes(A: PointSet) -> list[frozenset[str]]:
    evens = [c for c in _brute_clusters(A) if len(c) % 2 == 0]
    classes: dict[frozenset, set[str]] = {}
    for lab in A.labels:
        classes.setdefault(frozenset(c for c in evens if lab in c), set()).add(lab)
    return [frozenset(c) for c in classes.values()]


@pytest.mark.parametrize("ell", [5, 7])
def test_pairing_on_zero_one_ell_ell_plus_one(ell: int) -> None:
    A = PointSet.of(ell, {"0": 0, "1": 1, "l": ell, "l1": ell + 1})
    classes = _brute_classes(A)
    if all(len(c) == 2 for c in classes):
        P = pairing_from_clusters(A)
        assert {frozenset(p) for p in P.pairs} == set(classes)
    else:
        with pytest.raises(NotClusteredInPairs):
            pairing_from_clusters(A)


def test_pairing_failure_on_odd_set() -> None:
    with pytest.raises(NotClusteredInPairs):
        pairing_from_clusters(PointSet.of(3, [0, 1, 2]))


def test_separation_examples() -> None:
    S = PointSet.of(3, S_POINTS)
    P = Pairing.of([("a0", "b0"), ("a1", "b1"), ("a2", "b2")])
    assert is_r_separated(S, P, F(0))
    assert not is_r_separated(S, P, F(10**6))
    T = PointSet.of(3, {"a0": 0, "b0": "inf", "a1": 1, "b1": 82})
    assert is_r_separated(T, Pairing.of([("a0", "b0"), ("a1", "b1")]), F(1))


def test_separation_rejects_wrong_pairing() -> None:
    S = PointSet.of(3, S_POINTS)
    wrong = Pairing.of([("a0", "a1"), ("b0", "b1"), ("a2", "b2")])
    assert not is_r_separated(S, wrong, F(0))


def test_genus() -> None:
    assert int(genus_of_cover(2, 6)) == 2
    assert int(genus_of_cover(3, 4)) == 2
    assert int(genus_of_cover(2, 4)) == 1
    assert not genus_of_cover(2, 5).integral


def test_separated_pairing_is_recovered() -> None:
    for S, P in paired_sets(31, 100):
        if is_r_separated(S, P, F(0)):
            assert set(pairing_from_clusters(S).pairs) == set(P.pairs)


def test_clusters_json_shape() -> None:
    cd = compute_clusters(PointSet.of(3, S_POINTS))
    top = cd.to_json()["clusters"][0]
    assert top["depth"] == "0"
    assert sorted(top["members"]) == ["a0", "a1", "a2", "b0", "b1"]
    assert cd.picture() == "(((a0 b0)_1 (a1 b1)_1)_1 a2)_0 b2"
