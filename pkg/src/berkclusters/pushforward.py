"""Dilation of the convex hull: from fixed points to branch points.

Parts of the hull lying within ``r = v(p)/(p-1)`` of an axis are stretched by a
factor of ``p``; everything else keeps its length.  Reading the stretched
tree back as clusters predicts the cluster data of the branch points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .berktree import (
    MetricTree,
    TreePoint,
    clusters_from_hull,
    hull_from_clusters,
    mu,
    separated_check_vertices,
)
from .clusters import ClusterData, Pairing, PointSet, compute_clusters
from .errors import (
    InternalInconsistency,
    NoInfinityInS,
    NotSeparated,
    OptimalityNotAsserted,
    ValidationError,
)
from .valuation import ValQ, is_prime, valq


@dataclass(frozen=True)
class PushforwardParams:
    """The degree ``p`` of the cover and the valuation ``vp = v(p)``."""

    p: int
    vp: ValQ

    def __post_init__(self) -> None:
        if not (isinstance(self.p, int) and self.p >= 2 and is_prime(self.p)):
            raise ValidationError(f"p must be a prime >= 2, got {self.p!r}")
        vp = valq(self.vp)
        if vp < 0:
            raise ValidationError("v(p) must be non-negative")
        object.__setattr__(self, "vp", vp)

    @classmethod
    def for_field(cls, p: int, ell: int) -> PushforwardParams:
        """``v(p)`` is 1 when ``p`` is the residue characteristic, else 0."""
        return cls(p, Fraction(1) if p == ell else Fraction(0))

    @property
    def r(self) -> ValQ:
        return self.vp / (self.p - 1)

    @property
    def branch_r(self) -> ValQ:
        return self.p * self.vp / (self.p - 1)


def _require_hypotheses(t: MetricTree, params: PushforwardParams, optimal: bool) -> None:
    if not separated_check_vertices(t, params.r):
        raise NotSeparated(f"axes are not {params.r}-separated")
    if not optimal and t.g != 1:
        raise OptimalityNotAsserted("optimality must be asserted for genus-index g != 1")


def pushforward_hull(t: MetricTree, params: PushforwardParams, optimal: bool = False) -> MetricTree:
    """Stretch every edge by ``(p - 1)`` times its length near the axes.

    For ``g = 1`` a set clustered in separated pairs is automatically optimal;
    otherwise ``optimal=True`` must be passed.
    """
    _require_hypotheses(t, params, optimal)
    new = {}
    for n in t.nodes:
        par = t.parent[n]
        if par is not None:
            new[n] = t.length[n] + (params.p - 1) * mu(t, TreePoint(n), TreePoint(par), params.r)
    return t.with_lengths(new)


def push_point(t: MetricTree, x: TreePoint, params: PushforwardParams) -> TreePoint:
    """Where a skeleton point of ``t`` lands in the stretched tree."""
    return TreePoint(x.node, x.up + (params.p - 1) * mu(t, TreePoint(x.node), x, params.r))


def _closed_form(cd: ClusterData, s: frozenset[str], params: PushforwardParams) -> ValQ | None:
    """Relative depth of the image of ``s`` when a closed form applies."""
    delta = cd.relative_depth(s)
    if delta is None:
        return None
    if len(s) % 2:
        return params.p * delta
    if params.vp == 0:
        return delta
    par = cd.parent(s)
    # the closed form is usually stated for parents of size <= 2g; the
    # maximal cluster's vertex lies on the axis through infinity, so the
    # same count holds for its children
    if not cd.is_union_of_even(s) and not cd.is_union_of_even(par):  # type: ignore[arg-type]
        return delta + 2 * params.vp
    return None


def predict_branch_clusters(S: PointSet, P: Pairing, params: PushforwardParams,
                            optimal: bool = False) -> ClusterData:
    """Predicted cluster data of the branch points, labelled like ``S``.

    Absolute depths are anchored at the depth of the maximal cluster of ``S``;
    only relative depths carry meaning.
    """
    inf = S.infinity_label
    if inf is None or not any(b == inf for _, b in P.pairs):
        raise NoInfinityInS("infinity must be the second point of some pair; move a point there first")
    cd = compute_clusters(S)
    t = hull_from_clusters(cd, P)
    tB = pushforward_hull(t, params, optimal)
    cdB = clusters_from_hull(tB, cd.depth(cd.maximal))
    for s in cd.clusters:
        want = _closed_form(cd, s, params)
        if want is not None and cdB.relative_depth(s) != want:
            raise InternalInconsistency(
                f"cluster {sorted(s)}: tree gives {cdB.relative_depth(s)}, closed form gives {want}"
            )
    return ClusterData(S.ell, cdB.labels, cdB.infinity_label, cdB.depths)


def branch_hull(S: PointSet, P: Pairing, params: PushforwardParams, optimal: bool = False) -> MetricTree:
    """The stretched hull itself."""
    return pushforward_hull(hull_from_clusters(compute_clusters(S), P), params, optimal)


def check_branch_separation(tB: MetricTree, params: PushforwardParams) -> bool:
    """Branch points are clustered in ``p v(p)/(p-1)``-separated pairs."""
    return separated_check_vertices(tB, params.branch_r)
