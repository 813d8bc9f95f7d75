"""Seeded generators of random point sets shared by the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from berkclusters.clusters import Pairing, PointSet, pairing_from_clusters
from berkclusters.errors import NotClusteredInPairs


def random_finite_set(rng: random.Random, ell: int, n: int) -> PointSet | None:
    """``n`` distinct rationals with a fair amount of ``ell``-adic structure."""
    pts: list[Fraction] = []
    while len(pts) < n:
        if pts and rng.random() < 0.6:
            z = rng.choice(pts) + ell ** rng.randint(0, 5) * rng.choice([1, -1, 2, ell + 1])
        else:
            z = Fraction(sum(rng.randrange(ell) * ell**k for k in range(6)), rng.choice([1, 1, 1, ell]))
        if z not in pts:
            pts.append(z)
    return PointSet.of(ell, {f"z{k}": z for k, z in enumerate(pts)})


def random_paired_set(rng: random.Random, ell: int | None = None,
                      g: int | None = None) -> tuple[PointSet, Pairing] | None:
    """A set with infinity that is clustered in pairs, or ``None`` on a miss."""
    ell = ell or rng.choice([2, 3])
    g = g if g is not None else rng.randint(1, 3)
    pts: dict[str, object] = {}
    centres: list[int] = []
    for i in range(g):
        if centres and rng.random() < 0.5:
            c = rng.choice(centres) + ell ** rng.randint(1, 4) * rng.randint(1, 5)
        else:
            c = sum(rng.randrange(ell) * ell**k for k in range(6))
        centres.append(c)
        pts[f"a{i}"] = Fraction(c)
        pts[f"b{i}"] = Fraction(c + rng.choice([1, -1]) * ell ** rng.randint(1, 6))
    pts[f"a{g}"] = Fraction(rng.randint(-40, 40))
    pts[f"b{g}"] = "inf"
    if len({str(v) for v in pts.values()}) < len(pts):
        return None
    S = PointSet.of(ell, pts)
    try:
        return S, pairing_from_clusters(S)
    except NotClusteredInPairs:
        return None


def paired_sets(seed: int, count: int, **kw) -> list[tuple[PointSet, Pairing]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        hit = random_paired_set(rng, **kw)
        if hit is not None:
            out.append(hit)
    return out
