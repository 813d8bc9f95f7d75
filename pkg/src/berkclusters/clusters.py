"""Clusters of finite subsets of the projective line and pairing tests.

A cluster is the intersection of a point set with a disc of the ground field,
so the point at infinity belongs to no cluster.  Singletons are never stored.
Every test here is phrased purely in terms of clusters and depths; the
metric-tree versions of the same tests live in :mod:`berkclusters.berktree`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotClusteredInPairs, TooFewPoints, ValidationError
from .projline import INFINITY, Mobius, ProjPoint, apply, as_point, point_from_json, point_to_json
from .valuation import INF, ValQ, val, valq_str


def _label_for(z: ProjPoint) -> str:
    return "inf" if z is INFINITY else str(point_to_json(z))


@dataclass(frozen=True)
class PointSet:
    """Distinct labelled points of the projective line over Q_ell."""

    ell: int
    items: tuple[tuple[str, ProjPoint], ...]

    def __post_init__(self) -> None:
        labels = [lab for lab, _ in self.items]
        if len(set(labels)) != len(labels):
            raise ValidationError("point labels must be distinct")
        object.__setattr__(self, "items", tuple((str(lab), as_point(z)) for lab, z in self.items))
        if sum(1 for _, z in self.items if z is INFINITY) > 1:
            raise ValidationError("infinity appears twice")

    @classmethod
    def of(cls, ell: int, points: Mapping[str, object] | Sequence[object]) -> PointSet:
        """Build from a label->point mapping or a plain sequence of points.

        Sequence entries may be ints, Fractions, approximants, ``INFINITY`` or
        strings (``"inf"``, ``"27/4"``); their labels are their printed forms.
        """
        if isinstance(points, Mapping):
            pairs = [(str(k), _coerce_point(v, ell)) for k, v in points.items()]
        else:
            pts = [_coerce_point(v, ell) for v in points]
            pairs = [(_label_for(z), z) for z in pts]
        return cls(ell, tuple(pairs))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.items)

    @property
    def infinity_label(self) -> str | None:
        return next((lab for lab, z in self.items if z is INFINITY), None)

    @property
    def contains_infinity(self) -> bool:
        return self.infinity_label is not None

    @property
    def finite_labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, z in self.items if z is not INFINITY)

    def as_dict(self) -> dict[str, ProjPoint]:
        return dict(self.items)

    def __getitem__(self, label: str) -> ProjPoint:
        for lab, z in self.items:
            if lab == label:
                return z
        raise KeyError(label)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def mapped(self, m: Mobius) -> PointSet:
        """Image under ``m``, keeping labels."""
        return PointSet(self.ell, tuple((lab, apply(m, z)) for lab, z in self.items))

    def relabeled(self, phi: Mapping[str, str]) -> PointSet:
        return PointSet(self.ell, tuple((phi[lab], z) for lab, z in self.items))

    def to_json(self) -> dict[str, object]:
        return {lab: point_to_json(z) for lab, z in self.items}


def _coerce_point(v: object, ell: int) -> ProjPoint:
    if isinstance(v, (str, dict)):
        return point_from_json(v, ell)
    return as_point(v)


@dataclass(frozen=True)
class Cluster:
    members: frozenset[str]
    depth: ValQ
    parent: frozenset[str] | None
    relative_depth: ValQ | None
    children: tuple[frozenset[str], ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_even(self) -> bool:
        return len(self.members) % 2 == 0


def _sort_key(c: frozenset[str], order: Mapping[str, int]) -> tuple:
    return (-len(c), sorted(order[x] for x in c))


@dataclass(frozen=True)
class ClusterData:
    """All clusters (of size at least two) of a point set, with depths.

    ``depths`` maps each cluster to its depth.  ``points`` is optional and
    kept out of equality, so cluster data built from a tree compares equal to
    cluster data computed from coordinates.
    """

    ell: int | None
    labels: tuple[str, ...]
    infinity_label: str | None
    depths: Mapping[frozenset[str], ValQ]
    points: PointSet | None = field(default=None, compare=False, repr=False)
    _parent: dict = field(init=False, compare=False, repr=False)
    _children: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        order = {lab: k for k, lab in enumerate(self.labels)}
        cl = sorted(self.depths, key=lambda c: _sort_key(c, order))
        object.__setattr__(self, "depths", {c: self.depths[c] for c in cl})
        parent: dict = {}
        children: dict = {c: [] for c in cl}
        for c in cl:
            sup = [d for d in cl if c < d]
            if not sup:
                parent[c] = None
                continue
            par = min(sup, key=len)
            parent[c] = par
            children[par].append(c)
        for a in cl:
            for b in cl:
                if a is not b and (a & b) and not (a <= b or b <= a):
                    raise ValidationError("clusters are not laminar")
        object.__setattr__(self, "_parent", parent)
        object.__setattr__(self, "_children", {c: tuple(v) for c, v in children.items()})

    # structure ----------------------------------------------------------

    @property
    def clusters(self) -> tuple[frozenset[str], ...]:
        return tuple(self.depths)

    @property
    def finite_labels(self) -> tuple[str, ...]:
        return tuple(lab for lab in self.labels if lab != self.infinity_label)

    @property
    def maximal(self) -> frozenset[str]:
        roots = [c for c, par in self._parent.items() if par is None]
        if len(roots) != 1:
            raise ValidationError("cluster data has no unique maximal cluster")
        return roots[0]

    def depth(self, c: Iterable[str]) -> ValQ:
        return self.depths[frozenset(c)]

    def parent(self, c: Iterable[str]) -> frozenset[str] | None:
        return self._parent[frozenset(c)]

    def children(self, c: Iterable[str]) -> tuple[frozenset[str], ...]:
        return self._children[frozenset(c)]

    def relative_depth(self, c: Iterable[str]) -> ValQ | None:
        c = frozenset(c)
        par = self._parent[c]
        return None if par is None else self.depths[c] - self.depths[par]

    def cluster(self, c: Iterable[str]) -> Cluster:
        c = frozenset(c)
        return Cluster(c, self.depths[c], self._parent[c], self.relative_depth(c), self._children[c])

    def all_clusters(self) -> tuple[Cluster, ...]:
        return tuple(self.cluster(c) for c in self.depths)

    def even_clusters(self) -> tuple[frozenset[str], ...]:
        return tuple(c for c in self.depths if len(c) % 2 == 0)

    def smallest_containing(self, labels: Iterable[str]) -> frozenset[str] | None:
        s = frozenset(labels)
        best = None
        for c in self.depths:
            if s <= c and (best is None or len(c) < len(best)):
                best = c
        return best

    def child_parts(self, c: Iterable[str]) -> list[frozenset[str]]:
        """Maximal proper sub-clusters of ``c``, singletons included."""
        c = frozenset(c)
        kids = list(self._children[c])
        covered = frozenset().union(*kids) if kids else frozenset()
        order = {lab: k for k, lab in enumerate(self.labels)}
        singles = [frozenset([x]) for x in sorted(c - covered, key=order.__getitem__)]
        return kids + singles

    def is_union_of_even(self, c: Iterable[str]) -> bool:
        """True iff ``c`` is a disjoint union of at least two even clusters."""
        parts = self.child_parts(c)
        return len(parts) >= 2 and all(len(x) % 2 == 0 for x in parts)

    def combinatorial(self) -> frozenset[frozenset[str]]:
        return frozenset(self.depths)

    def relative_profile(self) -> dict[frozenset[str], ValQ | None]:
        """Clusters with relative depths (``None`` for the maximal cluster)."""
        return {c: self.relative_depth(c) for c in self.depths}

    # output -------------------------------------------------------------

    def to_json(self) -> dict[str, object]:
        order = {lab: k for k, lab in enumerate(self.labels)}

        def node(c: frozenset[str]) -> dict[str, object]:
            rel = self.relative_depth(c)
            out: dict[str, object] = {
                "members": sorted(c, key=order.__getitem__),
                "depth": valq_str(self.depths[c]),
            }
            if rel is not None:
                out["relative_depth"] = valq_str(rel)
            out["children"] = [node(k) for k in self._children[c]]
            return out

        roots = [c for c, par in self._parent.items() if par is None]
        return {
            "labels": list(self.labels),
            "infinity": self.infinity_label,
            "clusters": [node(r) for r in roots],
            "picture": self.picture(),
        }

    def picture(self) -> str:
        """Nested-bracket picture; each cluster is annotated with its
        relative depth, the maximal cluster with its absolute depth."""

        def render(c: frozenset[str]) -> str:
            inner = " ".join(
                render(x) if len(x) > 1 else next(iter(x)) for x in self.child_parts(c)
            )
            rel = self.relative_depth(c)
            tag = valq_str(self.depths[c]) if rel is None else valq_str(rel)
            return f"({inner})_{tag}"

        roots = [c for c, par in self._parent.items() if par is None]
        body = " ".join(render(r) for r in roots)
        if self.infinity_label is not None:
            body += f" {self.infinity_label}"
        return body


def compute_clusters(A: PointSet) -> ClusterData:
    """Every intersection of ``A`` with a disc that has at least two points.

    For each finite ``z`` and each threshold ``t = v(z - w)``, the disc of
    radius ``t`` about ``z`` cuts out ``{w : v(z - w) >= t}``; every cluster
    arises this way for ``z`` in it and ``t`` its depth.
    """
    fin = A.finite_labels
    if len(fin) < 2:
        raise TooFewPoints("need at least two finite points to form clusters")
    pts = A.as_dict()
    vv: dict[tuple[str, str], ValQ] = {}
    for i, x in enumerate(fin):
        for y in fin[i + 1:]:
            d = val(pts[x] - pts[y], A.ell)  # type: ignore[operator]
            if d == INF:
                raise ValidationError(f"points {x!r} and {y!r} coincide")
            vv[(x, y)] = vv[(y, x)] = d

    depths: dict[frozenset[str], ValQ] = {}
    for z in fin:
        for t in {vv[(z, w)] for w in fin if w != z}:
            c = frozenset([z] + [w for w in fin if w != z and vv[(z, w)] >= t])
            if c not in depths:
                depths[c] = min(vv[(x, y)] for x in c for y in c if x != y)
    return ClusterData(A.ell, A.labels, A.infinity_label, depths, A)


def mobius_transport(cd: ClusterData, m: Mobius) -> ClusterData:
    """Cluster data of the image set, recomputed from transformed points."""
    if cd.points is None:
        raise ValidationError("cluster data carries no coordinates to transport")
    return compute_clusters(cd.points.mapped(m))


def reciprocal_prediction(cd: ClusterData) -> frozenset[frozenset[str]]:
    """Clusters of ``1/A`` predicted combinatorially from those of ``A``.

    Needs ``A`` finite and free of ``0``.  A cluster whose smallest disc misses
    ``0`` maps to itself.  The discs around ``0`` cut out the sets
    ``{z : v(z) >= t}``, which include the points of maximal valuation; the
    complement of each such set is a cluster of the image.  The whole set is
    always a cluster of the image.
    """
    A = cd.points
    if A is None or A.contains_infinity:
        raise ValidationError("reciprocal prediction needs a finite point set with coordinates")
    pts = A.as_dict()
    vals = {lab: val(z, A.ell) for lab, z in pts.items()}  # type: ignore[arg-type]
    if INF in vals.values():
        raise ValidationError("reciprocal prediction needs 0 outside the set")
    everything = frozenset(A.labels)
    out = {everything}
    for c, d in cd.depths.items():
        if min(vals[x] for x in c) < d:
            out.add(c)
    for t in set(vals.values()):
        rest = everything - frozenset(lab for lab, v in vals.items() if v >= t)
        if len(rest) >= 2:
            out.add(rest)
    return frozenset(out)


def same_cluster_combinatorics(cd1: ClusterData, cd2: ClusterData, phi: Mapping[str, str] | None = None) -> bool:
    """Does the label bijection ``phi`` carry the clusters of one onto the other?"""
    if phi is None:
        phi = {lab: lab for lab in cd1.labels}
    image = frozenset(frozenset(phi[x] for x in c) for c in cd1.depths)
    return image == cd2.combinatorial()


# pairings -----------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    """A partition of labels into ordered pairs ``(a_i, b_i)``."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        pairs = tuple((str(a), str(b)) for a, b in self.pairs)
        flat = [x for pr in pairs for x in pr]
        if len(set(flat)) != len(flat):
            raise ValidationError("pairing repeats a label")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def of(cls, pairs: Iterable[Sequence[str]]) -> Pairing:
        out = []
        for pr in pairs:
            if len(pr) != 2:
                raise ValidationError(f"pairing block {list(pr)!r} does not have two labels")
            out.append((str(pr[0]), str(pr[1])))
        return cls(tuple(out))

    @property
    def g(self) -> int:
        return len(self.pairs) - 1

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(x for pr in self.pairs for x in pr)

    def index_of(self, label: str) -> int:
        for i, pr in enumerate(self.pairs):
            if label in pr:
                return i
        raise KeyError(label)

    def partner(self, label: str) -> str:
        a, b = self.pairs[self.index_of(label)]
        return b if label == a else a

    def check_partition(self, labels: Iterable[str]) -> None:
        if self.labels != frozenset(labels) or 2 * len(self.pairs) != len(self.labels):
            raise ValidationError("pairing does not partition the point labels")

    def to_json(self) -> list[list[str]]:
        return [list(pr) for pr in self.pairs]


def axis_clusters(cd: ClusterData, P: Pairing, c: frozenset[str]) -> set[int]:
    """Indices ``i`` whose axis passes through the vertex of cluster ``c``.

    The axis from ``a_i`` to ``b_i`` passes through the disc of ``c`` when
    exactly one endpoint lies in ``c``, or when ``c`` is the smallest cluster
    holding both.
    """
    on = set()
    for i, (a, b) in enumerate(P.pairs):
        k = (a in c) + (b in c)
        if k == 1 or (k == 2 and cd.smallest_containing((a, b)) == c):
            on.add(i)
    return on


def is_clustered_in_pairs(cd: ClusterData, P: Pairing) -> bool:
    """No cluster vertex lies on two axes: the axes are pairwise disjoint."""
    P.check_partition(cd.labels)
    if len(cd.labels) % 2:
        return False
    return all(len(axis_clusters(cd, P, c)) <= 1 for c in cd.depths)


def pairing_from_clusters(A: PointSet) -> Pairing:
    """Recover the pairs as classes of "lies in exactly the same even clusters"."""
    if len(A) % 2:
        raise NotClusteredInPairs("a set of odd size cannot be clustered in pairs")
    cd = compute_clusters(A)
    evens = cd.even_clusters()
    classes: dict[frozenset, list[str]] = {}
    for lab in A.labels:
        key = frozenset(c for c in evens if lab in c)
        classes.setdefault(key, []).append(lab)
    pairs = []
    for block in classes.values():
        if len(block) != 2:
            raise NotClusteredInPairs(f"class {block!r} has size {len(block)}")
        a, b = block
        if a == A.infinity_label:
            a, b = b, a
        pairs.append((a, b))
    P = Pairing(tuple(pairs))
    if not is_clustered_in_pairs(cd, P):
        raise NotClusteredInPairs("candidate pairing fails the clustered-in-pairs test")
    return P


def _moved_to_infinity(A: PointSet) -> PointSet:
    """Send the lexicographically last label to infinity by ``z -> 1/(z - w)``."""
    w = A[max(A.labels)]
    m = Mobius(Fraction(0), Fraction(1), Fraction(1), -w)  # type: ignore[arg-type]
    return A.mapped(m)


def natural(cd: ClusterData, c: frozenset[str]) -> bool:
    return cd.is_union_of_even(c)


def is_r_separated(A: PointSet, P: Pairing, r: ValQ) -> bool:
    """Cluster-language test for being clustered in ``r``-separated pairs.

    Conditions: (i) clustered in pairs; (ii) every even cluster ``c`` that is
    not a union of even clusters sits more than ``2r`` deeper than the
    nearest strictly larger cluster that is not such a union either;
    (iii) two such clusters with the same parent have relative depths summing
    to more than ``2r``.  Sets without infinity are first moved so that one
    of their points is at infinity; separation is invariant under that move.
    """
    P.check_partition(A.labels)
    if not A.contains_infinity:
        A = _moved_to_infinity(A)
    cd = compute_clusters(A)
    if not is_clustered_in_pairs(cd, P):
        return False
    marked = [c for c in cd.even_clusters() if not natural(cd, c)]
    for c in marked:
        up = cd.parent(c)
        while up is not None and natural(cd, up):
            up = cd.parent(up)
        if up is not None and not cd.depth(c) - cd.depth(up) > 2 * r:
            return False
    for i, c1 in enumerate(marked):
        for c2 in marked[i + 1:]:
            par = cd.parent(c1)
            if par is not None and par == cd.parent(c2):
                if not cd.relative_depth(c1) + cd.relative_depth(c2) > 2 * r:  # type: ignore[operator]
                    return False
    return True


@dataclass(frozen=True)
class Genus:
    value: Fraction
    integral: bool

    def __int__(self) -> int:
        if not self.integral:
            raise ValueError(f"genus {self.value} is not an integer")
        return int(self.value)


def genus_of_cover(p: int, d: int) -> Genus:
    """``(p - 1)(d - 2) / 2`` for a cyclic degree-``p`` cover with ``d`` branch points."""
    if d < 3:
        raise ValidationError("need at least three branch points")
    value = Fraction((p - 1) * (d - 2), 2)
    return Genus(value, value.denominator == 1)
