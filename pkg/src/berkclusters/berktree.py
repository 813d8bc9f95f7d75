"""Convex hulls in the Berkovich line as finite metric trees.

Internal nodes are named by their clusters.  The node of a cluster is the
point of the disc that cluster spans, and the edge from a node to its parent
has the cluster's relative depth as its length.  Every point of ``A`` hangs
off a node by an infinitely long leaf ray; the point at infinity hangs off the
root.  All metric operations live on the skeleton (the part spanned by the
nodes), where distances are finite.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .clusters import ClusterData, Pairing
from .errors import LeafDistanceInfinite, NoInfinityLeaf, NotClusteredInPairs, ValidationError
from .valuation import ValQ, valq, valq_str

DISTINGUISHED = "distinguished"
NATURAL = "natural"
PLAIN = "plain"


@dataclass(frozen=True)
class TreePoint:
    """The skeleton point ``up`` units above ``node`` on the edge to its parent.

    ``up`` runs from ``0`` (the node itself) to the edge length (the parent).
    """

    node: frozenset[str]
    up: ValQ = Fraction(0)


@dataclass(frozen=True)
class MetricTree:
    labels: tuple[str, ...]
    infinity_label: str | None
    nodes: tuple[frozenset[str], ...]
    parent: Mapping[frozenset[str], frozenset[str] | None]
    length: Mapping[frozenset[str], ValQ]
    attach: Mapping[str, frozenset[str]]
    axes: tuple[tuple[str, str], ...] = ()
    kinds: Mapping[frozenset[str], str] = field(default_factory=dict)
    root_depth: ValQ | None = None
    ell: int | None = None
    _height: dict = field(init=False, compare=False, repr=False)
    _ancestors: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        roots = [n for n in self.nodes if self.parent[n] is None]
        if len(roots) != 1:
            raise ValidationError("a metric tree needs exactly one root")
        for n in self.nodes:
            if self.parent[n] is not None and not self.length[n] > 0:
                raise ValidationError("skeleton edges must have positive length")
        height: dict = {}
        ancestors: dict = {}

        def walk(n):
            if n in height:
                return
            par = self.parent[n]
            if par is None:
                height[n], ancestors[n] = Fraction(0), (n,)
                return
            walk(par)
            height[n] = height[par] + self.length[n]
            ancestors[n] = (n,) + ancestors[par]

        for n in self.nodes:
            walk(n)
        object.__setattr__(self, "_height", height)
        object.__setattr__(self, "_ancestors", ancestors)

    # structure ----------------------------------------------------------

    @property
    def root(self) -> frozenset[str]:
        return next(n for n in self.nodes if self.parent[n] is None)

    @property
    def g(self) -> int:
        return len(self.axes) - 1

    def height(self, n: frozenset[str]) -> ValQ:
        """Distance from the root down to node ``n``."""
        return self._height[n]

    def children(self, n: frozenset[str]) -> list[frozenset[str]]:
        return [c for c in self.nodes if self.parent[c] == n]

    def leaves_at(self, n: frozenset[str]) -> list[str]:
        return [lab for lab in self.labels if self.attach[lab] == n]

    def degree(self, n: frozenset[str]) -> int:
        return len(self.children(n)) + len(self.leaves_at(n)) + (self.parent[n] is not None)

    def lca(self, m: frozenset[str], n: frozenset[str]) -> frozenset[str]:
        up = set(self._ancestors[m])
        return next(a for a in self._ancestors[n] if a in up)

    def vertex(self, n: Iterable[str]) -> TreePoint:
        return TreePoint(frozenset(n), Fraction(0))

    def leaf_vertex(self, label: str) -> TreePoint:
        """The skeleton point a leaf ray hangs from."""
        return TreePoint(self.attach[label], Fraction(0))

    def axis_ends(self, i: int) -> tuple[TreePoint, TreePoint]:
        """End points of the part of the ``i``-th axis lying in the skeleton."""
        a, b = self.axes[i]
        return self.leaf_vertex(a), self.leaf_vertex(b)

    def on_axes(self, n: frozenset[str]) -> set[int]:
        x = TreePoint(n)
        return {i for i in range(len(self.axes)) if distance_to_axis(self, x, i) == 0}

    def edge_lengths(self) -> dict[frozenset[str], ValQ]:
        return {n: self.length[n] for n in self.nodes if self.parent[n] is not None}

    def with_lengths(self, lengths: Mapping[frozenset[str], ValQ]) -> MetricTree:
        full = {n: lengths.get(n, self.length.get(n, Fraction(0))) for n in self.nodes}
        return MetricTree(self.labels, self.infinity_label, self.nodes, dict(self.parent), full,
                          dict(self.attach), self.axes, dict(self.kinds), self.root_depth, self.ell)

    # output -------------------------------------------------------------

    def node_ids(self) -> dict[frozenset[str], str]:
        return {n: f"v{k}" for k, n in enumerate(self.nodes)}

    def _members(self, n: frozenset[str]) -> list[str]:
        return [lab for lab in self.labels if lab in n]

    def to_json(self) -> dict[str, object]:
        ids = self.node_ids()
        nodes = []
        for n in self.nodes:
            par = self.parent[n]
            nodes.append({
                "id": ids[n],
                "members": self._members(n),
                "parent": None if par is None else ids[par],
                "length": None if par is None else valq_str(self.length[n]),
                "kind": self.kinds.get(n),
            })
        return {
            "labels": list(self.labels),
            "infinity": self.infinity_label,
            "ell": self.ell,
            "root_depth": None if self.root_depth is None else valq_str(self.root_depth),
            "nodes": nodes,
            "leaves": {lab: ids[self.attach[lab]] for lab in self.labels},
            "axes": [list(ax) for ax in self.axes],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, object]) -> MetricTree:
        byid: dict[str, frozenset[str]] = {}
        for nd in obj["nodes"]:  # type: ignore[union-attr]
            byid[nd["id"]] = frozenset(nd["members"])
        parent, length, kinds = {}, {}, {}
        for nd in obj["nodes"]:  # type: ignore[union-attr]
            n = byid[nd["id"]]
            parent[n] = None if nd["parent"] is None else byid[nd["parent"]]
            length[n] = Fraction(0) if nd["length"] is None else valq(nd["length"])
            if nd.get("kind") is not None:
                kinds[n] = nd["kind"]
        rd = obj.get("root_depth")
        return cls(
            labels=tuple(obj["labels"]),  # type: ignore[arg-type]
            infinity_label=obj.get("infinity"),  # type: ignore[arg-type]
            nodes=tuple(byid.values()),
            parent=parent,
            length=length,
            attach={lab: byid[i] for lab, i in obj["leaves"].items()},  # type: ignore[union-attr]
            axes=tuple(tuple(ax) for ax in obj.get("axes", [])),  # type: ignore[union-attr]
            kinds=kinds,
            root_depth=None if rd is None else valq(rd),  # type: ignore[arg-type]
            ell=obj.get("ell"),  # type: ignore[arg-type]
        )

    def to_dot(self, name: str = "hull") -> str:
        ids = self.node_ids()
        shape = {DISTINGUISHED: "box", NATURAL: "circle", PLAIN: "point"}
        on = {n: sorted(self.on_axes(n)) for n in self.nodes} if self.axes else {}
        lines = [f"graph {name} {{"]
        for n in self.nodes:
            members = " ".join(self._members(n))
            axes = f" axes={on[n]}" if on.get(n) else ""
            lines.append(f'  {ids[n]} [shape={shape.get(self.kinds.get(n, NATURAL), "circle")}, '
                         f'label="{{{members}}}{axes}"];')
        for n in self.nodes:
            par = self.parent[n]
            if par is not None:
                lines.append(f'  {ids[par]} -- {ids[n]} [label="{valq_str(self.length[n])}"];')
        for k, lab in enumerate(self.labels):
            lines.append(f'  leaf{k} [shape=plaintext, label="{lab}"];')
            lines.append(f'  {ids[self.attach[lab]]} -- leaf{k} [style=dashed, label="+inf"];')
        lines.append("}")
        return "\n".join(lines)


# construction ---------------------------------------------------------------


def cluster_tree(cd: ClusterData) -> MetricTree:
    """The metric tree of a set's clusters, with no pairing attached."""
    nodes = cd.clusters
    parent = {c: cd.parent(c) for c in nodes}
    length = {c: (cd.relative_depth(c) if cd.parent(c) is not None else Fraction(0)) for c in nodes}
    top = cd.maximal
    attach = {}
    for lab in cd.labels:
        if lab == cd.infinity_label:
            attach[lab] = top
        else:
            attach[lab] = min((c for c in nodes if lab in c), key=len)
    t = MetricTree(cd.labels, cd.infinity_label, nodes, parent, length, attach,
                   root_depth=cd.depth(top), ell=cd.ell)
    kinds = {n: (NATURAL if t.degree(n) >= 3 else PLAIN) for n in nodes}
    return MetricTree(cd.labels, cd.infinity_label, nodes, parent, length, attach,
                      kinds=kinds, root_depth=cd.depth(top), ell=cd.ell)


def hull_from_clusters(cd: ClusterData, P: Pairing) -> MetricTree:
    """The hull of a set clustered in pairs, with axes and vertex kinds.

    Kinds are read from the geometry: a node with at least three directions is
    distinguished if an axis runs through it and natural otherwise; a node
    with two directions (only possible at a root without infinity) is plain.
    """
    P.check_partition(cd.labels)
    raw = cluster_tree(cd)
    t = MetricTree(raw.labels, raw.infinity_label, raw.nodes, raw.parent, raw.length, raw.attach,
                   axes=P.pairs, root_depth=raw.root_depth, ell=raw.ell)
    n_axes = len(P.pairs)
    for i in range(n_axes):
        for j in range(i + 1, n_axes):
            if axis_distance(t, i, j) == 0:
                raise NotClusteredInPairs(f"axes {P.pairs[i]} and {P.pairs[j]} meet")
    kinds = {}
    for n in t.nodes:
        if t.degree(n) < 3:
            kinds[n] = PLAIN
        elif t.on_axes(n):
            kinds[n] = DISTINGUISHED
        else:
            kinds[n] = NATURAL
    return MetricTree(t.labels, t.infinity_label, t.nodes, t.parent, t.length, t.attach,
                      axes=P.pairs, kinds=kinds, root_depth=t.root_depth, ell=t.ell)


def clusters_from_hull(t: MetricTree, d0: ValQ) -> ClusterData:
    """Read cluster data back off a tree rooted at its infinity leaf.

    Each node gives the cluster of finite labels beneath it, at depth ``d0``
    plus its distance below the root.
    """
    if t.infinity_label is None:
        raise NoInfinityLeaf("clusters can only be read from a tree with an infinity leaf")
    depths = {n: d0 + t.height(n) for n in t.nodes}
    for n in t.nodes:
        below = {lab for lab in t.labels if lab != t.infinity_label and _below(t, t.attach[lab], n)}
        if frozenset(below) != n:
            raise ValidationError("node names do not match the leaves beneath them")
    return ClusterData(t.ell, t.labels, t.infinity_label, depths)


def _below(t: MetricTree, m: frozenset[str], n: frozenset[str]) -> bool:
    return n in t._ancestors[m]


# metric ---------------------------------------------------------------------


def _check_point(t: MetricTree, x: TreePoint) -> None:
    if not isinstance(x, TreePoint):
        raise LeafDistanceInfinite(f"{x!r} is not a skeleton point; leaves lie at infinite distance")
    if x.node not in t.parent:
        raise ValidationError(f"unknown node {sorted(x.node)}")
    top = t.length[x.node] if t.parent[x.node] is not None else 0
    if not 0 <= x.up <= top:
        raise ValidationError(f"offset {x.up} outside the edge [0, {top}]")


def point_height(t: MetricTree, x: TreePoint) -> ValQ:
    return t.height(x.node) - x.up


def distance(t: MetricTree, x: TreePoint, y: TreePoint) -> ValQ:
    """Path length between two skeleton points."""
    _check_point(t, x)
    _check_point(t, y)
    hx, hy = point_height(t, x), point_height(t, y)
    meet = min(t.height(t.lca(x.node, y.node)), hx, hy)
    return hx + hy - 2 * meet


def distance_to_path(t: MetricTree, q: TreePoint, u: TreePoint, w: TreePoint) -> ValQ:
    return (distance(t, q, u) + distance(t, q, w) - distance(t, u, w)) / 2


def distance_to_axis(t: MetricTree, x: TreePoint, i: int) -> ValQ:
    """Distance from ``x`` to the ``i``-th axis (whose skeleton part is a path)."""
    u, w = t.axis_ends(i)
    return distance_to_path(t, x, u, w)


def path_distance(t: MetricTree, p1: tuple[TreePoint, TreePoint], p2: tuple[TreePoint, TreePoint]) -> ValQ:
    """Distance between two skeleton paths; zero when they meet."""
    (u1, w1), (u2, w2) = p1, p2
    l1, l2 = distance(t, u1, w1), distance(t, u2, w2)
    a = (distance(t, u1, u2) + distance(t, w1, w2) - l1 - l2) / 2
    b = (distance(t, u1, w2) + distance(t, w1, u2) - l1 - l2) / 2
    return max(Fraction(0), a, b)


def axis_distance(t: MetricTree, i: int, j: int) -> ValQ:
    return path_distance(t, t.axis_ends(i), t.axis_ends(j))


def leaf_path(t: MetricTree, a: str, b: str) -> tuple[TreePoint, TreePoint]:
    """Skeleton part of the path between two leaves."""
    return t.leaf_vertex(a), t.leaf_vertex(b)


def point_along(t: MetricTree, x: TreePoint, y: TreePoint, s: ValQ) -> TreePoint:
    """The point at distance ``s`` from ``x`` on the path to ``y``."""
    total = distance(t, x, y)
    if not 0 <= s <= total:
        raise ValidationError(f"parameter {s} outside [0, {total}]")
    hx, hy = point_height(t, x), point_height(t, y)
    meet = min(t.height(t.lca(x.node, y.node)), hx, hy)
    rise = hx - meet
    if s <= rise:
        return _climb(t, x, s)
    return _climb(t, y, total - s)


def _climb(t: MetricTree, x: TreePoint, s: ValQ) -> TreePoint:
    n, u = x.node, x.up
    while True:
        par = t.parent[n]
        room = (t.length[n] - u) if par is not None else 0
        if s <= room:
            return TreePoint(n, u + s)
        s -= room
        n, u = par, Fraction(0)  # type: ignore[assignment]


def canonical(t: MetricTree, x: TreePoint) -> TreePoint:
    """Represent a point sitting on a parent node by that node itself."""
    par = t.parent[x.node]
    if par is not None and x.up == t.length[x.node]:
        return TreePoint(par, Fraction(0))
    return x


def _intervals_near_axes(t: MetricTree, x: TreePoint, y: TreePoint, r: ValQ) -> list[tuple[ValQ, ValQ]]:
    """Parameter intervals of ``[x, y]`` within distance ``r`` of some axis."""
    total = distance(t, x, y)
    out = []
    for i in range(len(t.axes)):
        u, w = t.axis_ends(i)
        du_x, du_y = distance(t, x, u), distance(t, y, u)
        dw_x, dw_y = distance(t, x, w), distance(t, y, w)
        tu = (total + du_x - du_y) / 2
        tw = (total + dw_x - dw_y) / 2
        if tu != tw:
            lo, hi = min(tu, tw) - r, max(tu, tw) + r
        else:
            gap_u = (du_x + du_y - total) / 2
            gap_w = (dw_x + dw_y - total) / 2
            gap = (gap_u + gap_w - distance(t, u, w)) / 2
            if r < gap:
                continue
            lo, hi = tu - (r - gap), tu + (r - gap)
        lo, hi = max(lo, Fraction(0)), min(hi, total)
        if lo <= hi:
            out.append((lo, hi))
    return out


def mu(t: MetricTree, x: TreePoint, y: TreePoint, r: ValQ) -> ValQ:
    """Length of the part of ``[x, y]`` within distance ``r`` of the axes.

    Along the path, the distance to one axis is zero on the stretch the path
    shares with it (or a single closest point) and grows with slope one on
    either side, so its sublevel set is one interval.  The answer is the
    length of the union of those intervals.
    """
    if r < 0:
        raise ValidationError("mu needs r >= 0")
    ivs = sorted(_intervals_near_axes(t, x, y, r))
    total = Fraction(0)
    cur_lo = cur_hi = None
    for lo, hi in ivs:
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def mu_by_sampling(t: MetricTree, x: TreePoint, y: TreePoint, r: ValQ) -> ValQ:
    """Slow check of :func:`mu`: count grid cells whose midpoints are near an axis.

    Breakpoints of the distance functions lie on a grid of step
    ``1 / (2 * D)``, where ``D`` is a common denominator of every edge length,
    offset and ``r``, so testing cell midpoints is exact.
    """
    total = distance(t, x, y)
    dens = [Fraction(v).denominator for v in t.length.values()]
    dens += [Fraction(x.up).denominator, Fraction(y.up).denominator, Fraction(r).denominator]
    step = Fraction(1, 2 * lcm(*dens))
    count = 0
    k = 0
    while (k + 1) * step <= total:
        mid = point_along(t, x, y, (k + Fraction(1, 2)) * step)
        if any(distance_to_axis(t, mid, i) <= r for i in range(len(t.axes))):
            count += 1
        k += 1
    return count * step


# separation -----------------------------------------------------------------


def distinguished_vertices(t: MetricTree) -> list[frozenset[str]]:
    return [n for n in t.nodes if t.kinds.get(n) == DISTINGUISHED]


def separated_check_vertices(t: MetricTree, r: ValQ) -> bool:
    """Every two distinguished vertices on no common axis are more than ``2r`` apart."""
    dv = distinguished_vertices(t)
    on = {n: t.on_axes(n) for n in dv}
    for k, v in enumerate(dv):
        for w in dv[k + 1:]:
            if on[v] & on[w]:
                continue
            if not distance(t, TreePoint(v), TreePoint(w)) > 2 * r:
                return False
    return True


def tubes_disjoint(t: MetricTree, r: ValQ) -> bool:
    """The closed radius-``r`` neighbourhoods of distinct axes do not meet."""
    n = len(t.axes)
    return all(axis_distance(t, i, j) > 2 * r for i in range(n) for j in range(i + 1, n))


def skeleton_points(t: MetricTree) -> list[TreePoint]:
    """Every node, plus the midpoint of every edge (handy sample points)."""
    pts = [TreePoint(n) for n in t.nodes]
    pts += [TreePoint(n, t.length[n] / 2) for n in t.nodes if t.parent[n] is not None]
    return pts

