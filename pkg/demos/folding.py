"""Folding a wild genus-two set into its optimal representative.

The pairs {3, 67} and {-3, -67} differ by the generator z -> -z fixing 0 and
infinity, so both sets give the same group and the same branch points.
The folded set (with -3, -67) matches the dilation prediction.  The
unfolded one does not, which shows why the prediction needs optimality.
"""

from __future__ import annotations

from pathlib import Path

from berkclusters.cli import load_instance
from berkclusters.clusters import pairing_from_clusters
from berkclusters.pushforward import predict_branch_clusters
from berkclusters.schottky import WhittakerGroup, branch_points_numeric, relative_data_match

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    for name in ("g2_wild_folded.json", "g2_wild_unfolded.json"):
        inst = load_instance(FIXTURES / name)
        S = inst.points
        P = inst.pairing or pairing_from_clusters(S)
        predicted = predict_branch_clusters(S, P, inst.params, optimal=True)
        bp = branch_points_numeric(S, P, WhittakerGroup.build(S, P, 2), inst.max_words)
        print(name)
        print(f"  predicted: {predicted.picture()}")
        print(f"  oracle:    {bp.clusters.picture()}")
        print(f"  match:     {relative_data_match(predicted, bp.clusters)}")


if __name__ == "__main__":
    main()
