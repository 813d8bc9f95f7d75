"""Two labellings of one Schottky group that sit differently on the line.

Applying s0 : z -> 81/z to the pair {3, 12} gives {27, 27/4}.  The group
is unchanged, but the cluster pictures differ: S has three even clusters
and S' only two.  So no Mobius map carries one set onto the other with the
same clusters.  The theta oracle sees the same branch points for both, and
only S matches the dilation prediction.  S is therefore the optimal choice.
"""

from __future__ import annotations

from fractions import Fraction

from berkclusters import (
    Pairing,
    PointSet,
    PushforwardParams,
    WhittakerGroup,
    branch_points_numeric,
    compute_clusters,
    predict_branch_clusters,
    same_position,
)
from berkclusters.schottky import relative_data_match

PAIRS = Pairing.of([("a0", "b0"), ("a1", "b1"), ("a2", "b2")])


def report(name: str, S: PointSet) -> None:
    cd = compute_clusters(S)
    print(f"{name}: {cd.picture()}")
    print(f"  even clusters: {sorted(sorted(c) for c in cd.even_clusters())}")
    params = PushforwardParams.for_field(2, 3)
    predicted = predict_branch_clusters(S, PAIRS, params, optimal=True)
    bp = branch_points_numeric(S, PAIRS, WhittakerGroup.build(S, PAIRS, 2), 14)
    print(f"  dilation prediction: {predicted.picture()}")
    print(f"  theta oracle:        {bp.clusters.picture()}")
    print(f"  agree: {relative_data_match(predicted, bp.clusters)}")


def main() -> None:
    S = PointSet.of(3, {"a0": -9, "b0": 9, "a1": 3, "b1": 12, "a2": 1, "b2": "inf"})
    Sp = PointSet.of(3, {"a0": -9, "b0": 9, "a1": 27, "b1": Fraction(27, 4), "a2": 1, "b2": "inf"})
    report("S ", S)
    report("S'", Sp)
    print("same position:", same_position(S, {lab: lab for lab in S.labels}, Sp))


if __name__ == "__main__":
    main()
