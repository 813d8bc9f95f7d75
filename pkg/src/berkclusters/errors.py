"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BerkClustersError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BerkClustersError):
    """Input violates a documented precondition."""


class PrecisionExhausted(BerkClustersError):
    """An approximant is indistinguishable from zero at its current precision."""


class NoRootExists(ValidationError):
    """No primitive p-th root of unity exists in the requested field."""


class DegenerateFixedPoints(ValidationError):
    """The two prescribed fixed points coincide."""


class NotClusteredInPairs(ValidationError):
    """The point set is not clustered in pairs (for the given pairing)."""


class TooFewPoints(ValidationError):
    """Fewer points than the construction needs."""


class SizeMismatch(ValidationError):
    """Two point sets that must be the same size are not."""


class NoInfinityLeaf(ValidationError):
    """A rooted reading needs a point at infinity and there is none."""


class LeafDistanceInfinite(ValidationError):
    """A distance was requested to a leaf, which lies at infinite distance."""


class NotSeparated(ValidationError):
    """The axes are not separated at the radius the construction needs."""


class OptimalityNotAsserted(ValidationError):
    """The caller did not assert optimality of the input set."""


class NoInfinityInS(ValidationError):
    """Infinity must be the second point of some pair."""


class HypothesesUnmet(ValidationError):
    """An instance fails the hypotheses of a formula being checked."""


class PoleHit(BerkClustersError):
    """A theta evaluation point coincides with an enumerated pole."""


class NonConvergence(BerkClustersError):
    """Truncated products did not stabilize within the word-length cap."""


class InternalInconsistency(BerkClustersError):
    """Two independent computations that must agree did not."""
