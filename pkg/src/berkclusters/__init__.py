"""Cluster data of branch points of Mumford superelliptic curves.

Exact combinatorics of finite subsets of the projective line over a
discretely valued field (clusters, position trees, convex hulls) together
with the hull dilation that predicts branch-point clusters and a truncated
theta-function oracle that computes branch points numerically.
"""

from .berktree import MetricTree, TreePoint, clusters_from_hull, hull_from_clusters, mu
from .clusters import ClusterData, Pairing, PointSet, compute_clusters, is_r_separated, pairing_from_clusters
from .errors import BerkClustersError, NonConvergence, PrecisionExhausted, ValidationError
from .position import position_tree, same_position
from .projline import INFINITY, Mobius
from .pushforward import PushforwardParams, check_branch_separation, predict_branch_clusters, pushforward_hull
from .schottky import GAMMA, GAMMA0, WhittakerGroup, branch_points_numeric, theta
from .valuation import INF, PadicApprox, val

__all__ = [
    "GAMMA",
    "GAMMA0",
    "INF",
    "INFINITY",
    "BerkClustersError",
    "ClusterData",
    "MetricTree",
    "Mobius",
    "NonConvergence",
    "PadicApprox",
    "Pairing",
    "PointSet",
    "PrecisionExhausted",
    "PushforwardParams",
    "TreePoint",
    "ValidationError",
    "WhittakerGroup",
    "branch_points_numeric",
    "check_branch_separation",
    "clusters_from_hull",
    "compute_clusters",
    "hull_from_clusters",
    "is_r_separated",
    "mu",
    "pairing_from_clusters",
    "position_tree",
    "predict_branch_clusters",
    "pushforward_hull",
    "same_position",
    "theta",
    "val",
]
