"""Command-line front end.

Every subcommand reads an instance JSON file and writes JSON to standard
output (DOT with ``--dot`` where a tree is involved).  Exit status is 0 on
success, 1 when ``compare`` finds a mismatch, 2 on invalid input and 3 when the
numerical oracle fails to converge or runs out of precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .berktree import hull_from_clusters, separated_check_vertices, tubes_disjoint
from .clusters import (
    Pairing,
    PointSet,
    compute_clusters,
    is_r_separated,
    pairing_from_clusters,
)
from .errors import BerkClustersError, NonConvergence, PrecisionExhausted, ValidationError
from .position import position_tree
from .projline import point_to_json
from .pushforward import (
    PushforwardParams,
    branch_hull,
    check_branch_separation,
    predict_branch_clusters,
)
from .schottky import WhittakerGroup, branch_points_numeric, relative_data_match
from .valuation import is_prime, valq, valq_str

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass(frozen=True)
class Instance:
    ell: int
    p: int
    vp: Fraction
    points: PointSet
    pairing: Pairing | None
    optimal: bool
    precision: int | None
    max_words: int

    @property
    def params(self) -> PushforwardParams:
        return PushforwardParams(self.p, self.vp)

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {
            "prime_ell": self.ell,
            "p": self.p,
            "vp": str(self.vp),
            "points": self.points.to_json(),
            "optimal": self.optimal,
            "max_words": self.max_words,
        }
        if self.pairing is not None:
            out["pairing"] = self.pairing.to_json()
        if self.precision is not None:
            out["precision"] = self.precision
        return out


def _field(obj: dict, name: str, kind, default=None, required: bool = False):
    if name not in obj:
        if required:
            raise ValidationError(f"field {name!r}: missing")
        return default
    value = obj[name]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ValidationError(f"field {name!r}: expected an integer, got {value!r}")
    if kind is bool and not isinstance(value, bool):
        raise ValidationError(f"field {name!r}: expected true or false, got {value!r}")
    return value


def parse_instance(obj: object) -> Instance:
    """Validate an instance dictionary; errors name the offending field."""
    if not isinstance(obj, dict):
        raise ValidationError("instance: expected a JSON object")
    ell = _field(obj, "prime_ell", int, required=True)
    if not is_prime(ell):
        raise ValidationError(f"field 'prime_ell': {ell} is not prime")
    p = _field(obj, "p", int, default=2)
    if not is_prime(p):
        raise ValidationError(f"field 'p': {p} is not prime")
    default_vp = Fraction(1) if p == ell else Fraction(0)
    try:
        vp = valq(obj["vp"]) if "vp" in obj else default_vp
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"field 'vp': {exc}") from exc
    pts = obj.get("points")
    if not isinstance(pts, (dict, list)) or not pts:
        raise ValidationError("field 'points': expected a non-empty object or list")
    try:
        S = PointSet.of(ell, pts)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"field 'points': {exc}") from exc
    except ValidationError as exc:
        raise ValidationError(f"field 'points': {exc}") from exc
    pairing = None
    if "pairing" in obj:
        raw = obj["pairing"]
        if not isinstance(raw, list) or not all(isinstance(b, list) and len(b) == 2 for b in raw):
            raise ValidationError("field 'pairing': expected a list of two-element lists")
        try:
            pairing = Pairing.of([[str(x) for x in b] for b in raw])
            pairing.check_partition(S.labels)
        except ValidationError as exc:
            raise ValidationError(f"field 'pairing': {exc}") from exc
    optimal = _field(obj, "optimal", bool, default=False)
    precision = _field(obj, "precision", int)
    max_words = _field(obj, "max_words", int, default=16)
    if precision is not None and precision < 1:
        raise ValidationError("field 'precision': must be positive")
    if max_words < 0:
        raise ValidationError("field 'max_words': must be non-negative")
    return Instance(ell, p, vp, S, pairing, optimal, precision, max_words)


def load_instance(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"instance file: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"instance file: malformed JSON ({exc})") from exc
    return parse_instance(obj)


def _with_overrides(inst: Instance, args: argparse.Namespace) -> Instance:
    ell = args.ell if args.ell is not None else inst.ell
    p = args.p if args.p is not None else inst.p
    if args.ell is not None and not is_prime(ell):
        raise ValidationError(f"--ell: {ell} is not prime")
    if args.p is not None and not is_prime(p):
        raise ValidationError(f"--p: {p} is not prime")
    vp = inst.vp
    if args.vp is not None:
        vp = valq(args.vp)
    elif args.p is not None or args.ell is not None:
        vp = Fraction(1) if p == ell else Fraction(0)
    pts = inst.points if ell == inst.ell else PointSet.of(ell, inst.points.to_json())
    precision = args.precision if args.precision is not None else inst.precision
    max_words = args.max_words if args.max_words is not None else inst.max_words
    return Instance(ell, p, vp, pts, inst.pairing, inst.optimal or args.optimal, precision, max_words)


def _warn_vp(inst: Instance) -> None:
    natural = Fraction(1) if inst.p == inst.ell else Fraction(0)
    if inst.vp != natural:
        print(f"warning: v(p) = {inst.vp} differs from {natural}, the value for p = {inst.p} over "
              f"Q_{inst.ell}; treating it as a hypothetical", file=sys.stderr)


def _pairing(inst: Instance) -> Pairing:
    if inst.pairing is not None:
        return inst.pairing
    return pairing_from_clusters(inst.points)


def _emit(obj: object) -> None:
    print(json.dumps(obj, indent=2))


# subcommands ------------------------------------------------------------------


def cmd_clusters(inst: Instance, args: argparse.Namespace) -> int:
    cd = compute_clusters(inst.points)
    out = cd.to_json()
    out["even_clusters"] = [sorted(c, key=inst.points.labels.index) for c in cd.even_clusters()]
    _emit(out)
    return EXIT_OK


def cmd_position(inst: Instance, args: argparse.Namespace) -> int:
    t = position_tree(inst.points)
    if args.dot:
        print(t.to_dot())
        return EXIT_OK
    order = inst.points.labels.index
    ids = {v: k for k, v in enumerate(t.vertices)}
    _emit({
        "vertices": [sorted(v, key=order) for v in t.vertices],
        "edges": sorted([sorted((ids[a], ids[b])) for a, b in t.edges()]),
        "r": {lab: ids[t.r_map[lab]] for lab in inst.points.labels},
    })
    return EXIT_OK


def cmd_hull(inst: Instance, args: argparse.Namespace) -> int:
    cd = compute_clusters(inst.points)
    t = hull_from_clusters(cd, _pairing(inst))
    if args.dot:
        print(t.to_dot())
    else:
        _emit(t.to_json())
    return EXIT_OK


def cmd_push(inst: Instance, args: argparse.Namespace) -> int:
    _warn_vp(inst)
    P = _pairing(inst)
    if args.d0 is not None:
        from .berktree import clusters_from_hull

        tB = branch_hull(inst.points, P, inst.params, inst.optimal)
        cdB = clusters_from_hull(tB, valq(args.d0))
    else:
        cdB = predict_branch_clusters(inst.points, P, inst.params, inst.optimal)
        tB = branch_hull(inst.points, P, inst.params, inst.optimal)
    if args.dot:
        print(tB.to_dot("branch_hull"))
        return EXIT_OK
    _emit({
        "branch_clusters": cdB.to_json(),
        "branch_hull": tB.to_json(),
        "branch_separated": check_branch_separation(tB, inst.params),
        "branch_r": valq_str(inst.params.branch_r),
    })
    return EXIT_OK


def _run_oracle(inst: Instance, args: argparse.Namespace):
    P = _pairing(inst)
    precision = inst.precision
    if precision is None and inst.p != 2:
        precision = 30
    G = WhittakerGroup.build(inst.points, P, inst.p, precision)
    return P, branch_points_numeric(inst.points, P, G, inst.max_words, pair_index=args.pair_index)


def _log_json(log) -> list[dict]:
    out = []
    for entry in log:
        out.append({k: (valq_str(v) if isinstance(v, (Fraction, float)) else v) for k, v in entry.items()})
    return out


def cmd_oracle(inst: Instance, args: argparse.Namespace) -> int:
    _, B = _run_oracle(inst, args)
    _emit({
        "branch_points": {lab: _scalar_str(z) for lab, z in B.raw.items},
        "normalized": {lab: _scalar_str(z) for lab, z in B.normalized.items},
        "clusters": B.clusters.to_json(),
        "pair_index": B.pair_index,
        "truncation_length": B.truncation_length,
        "tail_floor": valq_str(B.tail_floor),
        "convergence": "heuristic: stable cluster data at two consecutive lengths, differences above the tail floor",
        "log": _log_json(B.log),
    })
    return EXIT_OK


def _scalar_str(z) -> str:
    j = point_to_json(z)
    return j if isinstance(j, str) else repr(z)


def cmd_compare(inst: Instance, args: argparse.Namespace) -> int:
    _warn_vp(inst)
    P, B = _run_oracle(inst, args)
    pred = predict_branch_clusters(inst.points, P, inst.params, inst.optimal)
    obs = B.clusters
    order = inst.points.labels.index
    rows = []
    for c in sorted(set(pred.clusters) | set(obs.clusters), key=lambda c: (-len(c), sorted(map(order, c)))):
        rp = pred.relative_depth(c) if c in pred.depths else None
        ro = obs.relative_depth(c) if c in obs.depths else None
        rows.append({
            "cluster": sorted(c, key=order),
            "parity": "even" if len(c) % 2 == 0 else "odd",
            "predicted": None if rp is None else valq_str(rp),
            "observed": None if ro is None else valq_str(ro),
        })
    match = relative_data_match(pred, obs)
    _emit({
        "verdict": "MATCH" if match else "MISMATCH",
        "relative_depths": rows,
        "truncation_length": B.truncation_length,
        "tail_floor": valq_str(B.tail_floor),
    })
    return EXIT_OK if match else EXIT_MISMATCH


def cmd_check_separated(inst: Instance, args: argparse.Namespace) -> int:
    r = valq(args.r) if args.r is not None else inst.params.r
    P = _pairing(inst)
    res = is_r_separated(inst.points, P, r)
    out = {"r": valq_str(r), "separated": res}
    if inst.points.contains_infinity:
        try:
            t = hull_from_clusters(compute_clusters(inst.points), P)
            out["vertex_test"] = separated_check_vertices(t, r)
            out["tube_test"] = tubes_disjoint(t, r)
        except BerkClustersError:
            out["vertex_test"] = out["tube_test"] = False
    _emit(out)
    return EXIT_OK


COMMANDS = {
    "clusters": cmd_clusters,
    "position": cmd_position,
    "hull": cmd_hull,
    "push": cmd_push,
    "oracle": cmd_oracle,
    "compare": cmd_compare,
    "check-separated": cmd_check_separated,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="berkclusters", description="Cluster data of Mumford superelliptic branch points.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("instance", help="instance JSON file")
        sp.add_argument("--r", help="separation radius (rational)")
        sp.add_argument("--p", type=int, help="override the cover degree p")
        sp.add_argument("--ell", type=int, help="override the residue characteristic")
        sp.add_argument("--vp", help="override v(p)")
        sp.add_argument("--precision", type=int, help="l-adic digits for odd p")
        sp.add_argument("--max-words", type=int, dest="max_words", help="cap on word length L")
        sp.add_argument("--pair-index", type=int, dest="pair_index", help="pair sent to 0 and infinity")
        sp.add_argument("--dot", action="store_true", help="emit Graphviz DOT instead of JSON")
        sp.add_argument("--d0", help="depth of the maximal branch cluster")
        sp.add_argument("--optimal", action="store_true", help="assert that the set is optimal")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        inst = _with_overrides(load_instance(args.instance), args)
        return COMMANDS[args.command](inst, args)
    except (NonConvergence, PrecisionExhausted) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BerkClustersError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
