"""The position of a finite set: the tree T(A) and the map r_A.

The tree is read off the cluster dictionary once some point sits at
infinity.  A slow classification of ordered triples is kept alongside as an
independent check for small sets.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .clusters import ClusterData, PointSet, compute_clusters, same_cluster_combinatorics
from .errors import SizeMismatch, TooFewPoints, ValidationError
from .projline import INFINITY, Mobius, ProjPoint, apply, compose, inverse, three_point_map
from .valuation import val


@dataclass(frozen=True)
class PositionTree:
    vertices: tuple[frozenset[str], ...]
    parent: Mapping[frozenset[str], frozenset[str] | None]
    r_map: Mapping[str, frozenset[str]]
    clusters: ClusterData

    def edges(self) -> list[tuple[frozenset[str], frozenset[str]]]:
        return [(v, par) for v, par in self.parent.items() if par is not None]

    def fiber(self, v: frozenset[str]) -> frozenset[str]:
        return frozenset(z for z, w in self.r_map.items() if w == v)

    def to_dot(self) -> str:
        order = {lab: k for k, lab in enumerate(self.clusters.labels)}
        name = {v: f"v{k}" for k, v in enumerate(self.vertices)}
        lines = ["graph position {"]
        for v in self.vertices:
            members = " ".join(sorted(v, key=order.__getitem__))
            lines.append(f'  {name[v]} [shape=circle, label="{{{members}}}"];')
        for v, par in self.edges():
            lines.append(f"  {name[par]} -- {name[v]};")
        for k, lab in enumerate(self.clusters.labels):
            lines.append(f'  p{k} [shape=plaintext, label="{lab}"];')
            lines.append(f"  {name[self.r_map[lab]]} -- p{k} [style=dashed];")
        lines.append("}")
        return "\n".join(lines)


def _to_infinity(w: ProjPoint) -> Mobius:
    """A Mobius map sending ``w`` to infinity (identity if it already is)."""
    if w is INFINITY:
        return Mobius(Fraction(1), Fraction(0), Fraction(0), Fraction(1))
    return Mobius(Fraction(0), Fraction(1), Fraction(1), -w)  # type: ignore[operator]


def normalized(A: PointSet, label: str | None = None) -> PointSet:
    """Move ``label`` (default: infinity if present, else the lexicographically
    last label) to infinity."""
    if label is None:
        if A.contains_infinity:
            return A
        label = max(A.labels)
    return A.mapped(_to_infinity(A[label]))


def position_tree(A: PointSet) -> PositionTree:
    if len(A) < 3:
        raise TooFewPoints("the position of a set needs at least three points")
    B = normalized(A)
    cd = compute_clusters(B)
    verts = cd.clusters
    inf_label = B.infinity_label
    top = cd.maximal
    r_map: dict[str, frozenset[str]] = {}
    for lab in B.labels:
        if lab == inf_label:
            r_map[lab] = top
        else:
            r_map[lab] = min((c for c in verts if lab in c), key=len)
    parent = {c: cd.parent(c) for c in verts}
    return PositionTree(verts, parent, r_map, cd)


def same_position(A: PointSet, phi: Mapping[str, str], A2: PointSet, designated: str | None = None) -> bool:
    """Is there a tree isomorphism T(A) -> T(A2) commuting with ``phi`` and r?

    With infinity in both sets and fixed by ``phi`` this is the statement that
    ``phi`` carries clusters onto clusters.  Otherwise the designated point
    (default: the lexicographically last label of ``A``) and its image are
    moved to infinity first.
    """
    if len(A) != len(A2):
        raise SizeMismatch(f"sets of sizes {len(A)} and {len(A2)}")
    if len(A) < 3:
        raise TooFewPoints("the position of a set needs at least three points")
    if sorted(phi) != sorted(A.labels) or sorted(phi.values()) != sorted(A2.labels):
        raise ValidationError("phi must be a bijection between the label sets")
    ia, ib = A.infinity_label, A2.infinity_label
    if designated is None and ia is not None and ib is not None and phi[ia] == ib:
        B, B2 = A, A2
    else:
        w = designated if designated is not None else max(A.labels)
        B, B2 = normalized(A, w), normalized(A2, phi[w])
    return same_cluster_combinatorics(compute_clusters(B), compute_clusters(B2), phi)


# independent triple classification ------------------------------------------


def _reduces_invertibly(m: Mobius, ell: int) -> bool:
    ents = [val(x, ell) for x in m.entries()]
    lowest = min(ents)
    return val(m.det(), ell) == 2 * lowest


def _residue(z: ProjPoint, ell: int) -> int | None:
    """Reduction of a point of P^1(Q) modulo ell; ``None`` stands for infinity."""
    if z is INFINITY or val(z, ell) < 0:  # type: ignore[arg-type]
        return None
    z = Fraction(z)  # type: ignore[arg-type]
    return z.numerator * pow(z.denominator, -1, ell) % ell


@dataclass(frozen=True)
class TripleTree:
    """T(A) from triples: vertices are classes of ordered triples."""

    vertices: tuple[int, ...]
    adjacent: frozenset[frozenset[int]]
    r_map: Mapping[str, int]


def triple_tree(A: PointSet) -> TripleTree:
    """Classify ordered triples of an exact point set (debug oracle, n <= 6).

    Triples are equivalent when the Mobius maps sending them to ``0, 1, inf``
    differ by a map with invertible reduction.  The vertex ``r(z)`` is the class
    whose reduction separates ``z`` from every other point, and two classes
    are adjacent when no third class separates them.
    """
    if len(A) < 3:
        raise TooFewPoints("need three points")
    if len(A) > 6:
        raise ValidationError("the triple oracle is limited to six points")
    ell = A.ell
    labels = A.labels
    reps: list[Mobius] = []
    for t in permutations(labels, 3):
        g = three_point_map(*(A[x] for x in t))
        if not any(_reduces_invertibly(compose(g, inverse(h)), ell) for h in reps):
            reps.append(g)
    red = [{lab: _residue(apply(g, A[lab]), ell) for lab in labels} for g in reps]

    def direction(x: int, u: int) -> int | None | str:
        """The residue at vertex ``x`` in whose direction vertex ``u`` lies."""
        if x == u:
            return "here"
        g = reps[u]
        # a point of the residue disc of x containing the vertex u: the median
        # of three points whose reductions under g are 0, 1, inf
        pre = inverse(g)
        imgs = [_residue(apply(reps[x], apply(pre, Fraction(w))), ell) for w in (0, 1)]
        imgs.append(_residue(apply(reps[x], apply(pre, INFINITY)), ell))
        for k in range(3):
            if imgs[k] == imgs[(k + 1) % 3] or imgs[k] == imgs[(k + 2) % 3]:
                return imgs[k]
        raise ValidationError("distinct vertices must share a direction")  # pragma: no cover

    n = len(reps)
    adjacent = set()
    for u in range(n):
        for w in range(u + 1, n):
            between = any(direction(x, u) != direction(x, w) for x in range(n) if x not in (u, w))
            if not between:
                adjacent.add(frozenset((u, w)))
    r_map = {}
    for lab in labels:
        hits = [k for k in range(n) if list(red[k].values()).count(red[k][lab]) == 1]
        if len(hits) != 1:
            raise ValidationError(f"point {lab!r} has {len(hits)} separating vertices")  # pragma: no cover
        r_map[lab] = hits[0]
    return TripleTree(tuple(range(n)), frozenset(adjacent), r_map)


def _as_graph(t: PositionTree | TripleTree) -> tuple[list, set, dict]:
    if isinstance(t, PositionTree):
        verts = list(t.vertices)
        edges = {frozenset(e) for e in t.edges()}
        return verts, edges, dict(t.r_map)
    return list(t.vertices), set(t.adjacent), dict(t.r_map)


def trees_isomorphic(t1: PositionTree | TripleTree, t2: PositionTree | TripleTree,
                     phi: Mapping[str, str] | None = None) -> bool:
    """Brute-force search for a graph isomorphism commuting with the r-maps."""
    v1, e1, r1 = _as_graph(t1)
    v2, e2, r2 = _as_graph(t2)
    if phi is None:
        phi = {lab: lab for lab in r1}
    if len(v1) != len(v2) or len(e1) != len(e2):
        return False
    for perm in permutations(v2):
        f = dict(zip(v1, perm))
        if all(f[r1[z]] == r2[phi[z]] for z in r1) and {frozenset(f[x] for x in e) for e in e1} == e2:
            return True
    return False
