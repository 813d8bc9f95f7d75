"""Points of the projective line and fractional linear transformations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Union

from .errors import DegenerateFixedPoints, PrecisionExhausted, ValidationError
from .valuation import PadicApprox, Scalar, is_zero, scalar_from_json, scalar_to_json


class _Infinity:
    """The point at infinity.  There is exactly one instance, ``INFINITY``."""

    _instance: _Infinity | None = None

    def __new__(cls) -> _Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()

ProjPoint = Union[Fraction, PadicApprox, _Infinity]


def is_infinity(z: object) -> bool:
    return z is INFINITY


def as_point(z: object) -> ProjPoint:
    """Normalize ints to ``Fraction``; pass other points through."""
    if z is INFINITY or isinstance(z, (Fraction, PadicApprox)):
        return z  # type: ignore[return-value]
    if isinstance(z, int) and not isinstance(z, bool):
        return Fraction(z)
    raise ValidationError(f"not a point of the projective line: {z!r}")


def point_to_json(z: ProjPoint) -> str | dict:
    return "inf" if z is INFINITY else scalar_to_json(z)  # type: ignore[arg-type]


def point_from_json(obj: object, ell: int) -> ProjPoint:
    if isinstance(obj, str) and obj.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    return scalar_from_json(obj, ell)


def points_equal(z: ProjPoint, w: ProjPoint) -> bool:
    """Equality, up to precision for approximants."""
    if z is INFINITY or w is INFINITY:
        return z is w
    return is_zero(z - w)  # type: ignore[operator]


@dataclass(frozen=True)
class Mobius:
    """The map ``z -> (a z + b) / (c z + d)``, a matrix up to scaling."""

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self) -> None:
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))
        if _all_exact(self) and self.det() == 0:
            raise ValidationError("singular matrix")

    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: Mobius) -> Mobius:
        return compose(self, other)

    def __call__(self, z: ProjPoint) -> ProjPoint:
        return apply(self, z)

    def to_json(self) -> list[list[str | dict]]:
        return [[scalar_to_json(self.a), scalar_to_json(self.b)],
                [scalar_to_json(self.c), scalar_to_json(self.d)]]


def _all_exact(m: Mobius) -> bool:
    return all(isinstance(x, Fraction) for x in m.entries())


IDENTITY = Mobius(Fraction(1), Fraction(0), Fraction(0), Fraction(1))


def _cleared(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Mobius:
    """Scale exact matrices to coprime integer entries; leave others alone."""
    ents = (a, b, c, d)
    if all(isinstance(x, Fraction) for x in ents):
        den = lcm(*(x.denominator for x in ents))
        ints = [int(x * den) for x in ents]
        g = gcd(*ints)
        lead = next(x for x in ints if x != 0)
        if lead < 0:
            g = -g
        return Mobius(*(Fraction(x // g) for x in ints))
    return Mobius(a, b, c, d)


def apply(m: Mobius, z: ProjPoint) -> ProjPoint:
    """``(a z + b) / (c z + d)`` with ``m(inf) = a / c`` and ``x / 0 = inf``."""
    if z is INFINITY:
        num, den = m.a, m.c
    else:
        num = m.a * z + m.b  # type: ignore[operator]
        den = m.c * z + m.d  # type: ignore[operator]
    if isinstance(den, PadicApprox) and den.is_tracked_zero:
        raise PrecisionExhausted("denominator indistinguishable from 0")
    if isinstance(den, Fraction) and den == 0:
        return INFINITY
    return num / den  # type: ignore[operator]


def compose(m1: Mobius, m2: Mobius) -> Mobius:
    """The matrix product, i.e. the map ``z -> m1(m2(z))``."""
    return _cleared(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def inverse(m: Mobius) -> Mobius:
    return _cleared(m.d, -m.b, -m.c, m.a)


def power(m: Mobius, n: int) -> Mobius:
    if n < 0:
        return power(inverse(m), -n)
    result, base = IDENTITY, m
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def mobius_equal(m1: Mobius, m2: Mobius) -> bool:
    """Projective equality: the entry vectors are proportional."""
    u, w = m1.entries(), m2.entries()
    return all(is_zero(u[i] * w[j] - u[j] * w[i]) for i in range(4) for j in range(i + 1, 4))


def is_identity(m: Mobius) -> bool:
    return mobius_equal(m, IDENTITY)


def translation(c: Scalar) -> Mobius:
    return Mobius(Fraction(1), c, Fraction(0), Fraction(1))


def three_point_map(z0: ProjPoint, z1: ProjPoint, zinf: ProjPoint) -> Mobius:
    """The Mobius map sending ``z0, z1, zinf`` to ``0, 1, inf``."""
    if points_equal(z0, z1) or points_equal(z1, zinf) or points_equal(z0, zinf):
        raise DegenerateFixedPoints("three_point_map needs three distinct points")
    one, zero = Fraction(1), Fraction(0)
    if zinf is INFINITY:
        return _cleared(one, -z0, zero, z1 - z0)  # type: ignore[operator]
    if z0 is INFINITY:
        return _cleared(zero, z1 - zinf, one, -zinf)  # type: ignore[operator]
    if z1 is INFINITY:
        return _cleared(one, -z0, one, -zinf)  # type: ignore[operator]
    u = z1 - zinf  # type: ignore[operator]
    w = z1 - z0  # type: ignore[operator]
    return _cleared(u, -z0 * u, w, -zinf * w)  # type: ignore[operator]


def order_p_fixing(a: ProjPoint, b: ProjPoint, p: int, zeta: Scalar) -> Mobius:
    """The conjugate of ``z -> zeta z`` by a map sending ``0 -> a`` and ``inf -> b``.

    ``zeta`` must be a primitive ``p``-th root of unity; the result has order
    ``p`` and fixes exactly ``a`` and ``b``.
    """
    if points_equal(a, b):
        raise DegenerateFixedPoints(f"fixed points coincide: {a!r}")
    one, zero = Fraction(1), Fraction(0)
    if b is INFINITY:
        return _cleared(zeta, a * (one - zeta), zero, one)  # type: ignore[operator]
    if a is INFINITY:
        return _cleared(one, b * (zeta - one), zero, zeta)  # type: ignore[operator]
    return _cleared(b * zeta - a, a * b * (one - zeta), zeta - one, b - a * zeta)  # type: ignore[operator]


def mobius_from_json(obj: object, ell: int) -> Mobius:
    try:
        (a, b), (c, d) = obj  # type: ignore[misc]
    except (TypeError, ValueError) as exc:
        raise ValidationError("a Mobius map is a 2x2 array") from exc
    return Mobius(*(scalar_from_json(x, ell) for x in (a, b, c, d)))
