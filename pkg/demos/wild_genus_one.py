"""Walk the wild genus-one example end to end.

Over Q_2 with p = 2, the set {0, inf, 9, 1} has one pair cluster {9, 1} of
relative depth 3.  Stretching the hull predicts relative depth 3 + 2 v(2) = 5
for the branch points.  The theta oracle then computes the branch points
numerically and reads off the same number.
"""

from __future__ import annotations

from fractions import Fraction

from berkclusters import (
    GAMMA,
    GAMMA0,
    Pairing,
    PointSet,
    PushforwardParams,
    WhittakerGroup,
    branch_points_numeric,
    compute_clusters,
    predict_branch_clusters,
    theta,
    val,
)


def main() -> None:
    S = PointSet.of(2, {"a0": 0, "b0": "inf", "a1": 9, "b1": 1})
    P = Pairing.of([("a0", "b0"), ("a1", "b1")])
    print("fixed points:     ", compute_clusters(S).picture())

    params = PushforwardParams.for_field(2, 2)
    predicted = predict_branch_clusters(S, P, params)
    print("predicted branch: ", predicted.picture())

    G = WhittakerGroup.build(S, P, 2)
    for sub, name in ((GAMMA, "subgroup"), (GAMMA0, "full group")):
        res = theta(G, sub, Fraction(9), Fraction(1), Fraction(0), 10)
        print(f"v(theta(0) - 1), {name}: {val(res.value - 1, 2)}  (tail floor {res.empirical_floor})")

    bp = branch_points_numeric(S, P, G, 16)
    print(f"oracle branch:     {bp.clusters.picture()}  at word length {bp.truncation_length}")
    for lab in S.labels:
        print(f"  {lab}: {bp.raw[lab]}")


if __name__ == "__main__":
    main()
