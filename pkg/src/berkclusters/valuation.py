"""Discretely valued scalars: exact rationals and capped-precision l-adic numbers.

Valuations are normalized so that ``v(ell) == 1``.  A valuation value is a
:class:`fractions.Fraction` or the float ``INF`` (positive infinity), which
compares above every rational and absorbs addition.

Two scalar backends share one interface:

* exact rationals (``Fraction``; ``int`` is accepted on input), and
* :class:`PadicApprox`, an element of Q_ell known to a fixed relative precision,
  used only where a root of unity is irrational over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import NoRootExists, PrecisionExhausted, ValidationError

INF = math.inf

ValQ = Union[Fraction, float]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _int_val(n: int, ell: int) -> int:
    """Number of factors of ``ell`` in a nonzero integer."""
    n = abs(n)
    k = 0
    while n % ell == 0:
        n //= ell
        k += 1
    return k


def valq(x: int | Fraction | float | str) -> ValQ:
    """Coerce to a valuation value; strings accept ``"+inf"`` and ``"n/d"``."""
    if isinstance(x, str):
        s = x.strip()
        if s in ("+inf", "inf", "INF", "+INF"):
            return INF
        return Fraction(s)
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return INF
        raise ValidationError(f"valuation values must be rational or +inf, got {x!r}")
    return Fraction(x)


def valq_str(q: ValQ) -> str:
    return "+inf" if q == INF else str(Fraction(q))


@dataclass(frozen=True)
class PadicApprox:
    """``ell**valuation * unit`` with ``unit`` known modulo ``ell**prec``.

    A *tracked zero* has ``prec == 0`` and ``unit == 0``; its ``valuation``
    field is then only a floor (the value is divisible by ``ell**valuation``).
    The absolute precision ``valuation + prec`` is the exponent below which
    every digit is known.
    """

    prime: int
    valuation: int
    unit: int
    prec: int

    def __post_init__(self) -> None:
        if self.prec < 0:
            raise ValidationError("precision must be non-negative")
        if self.prec == 0:
            if self.unit != 0:
                object.__setattr__(self, "unit", 0)
        else:
            u = self.unit % self.prime**self.prec
            if u % self.prime == 0:
                raise ValidationError("leading unit digit must be nonzero")
            object.__setattr__(self, "unit", u)

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, prime: int, floor: int) -> PadicApprox:
        return cls(prime, floor, 0, 0)

    @classmethod
    def from_rational(cls, x: int | Fraction, prime: int, abs_prec: int) -> PadicApprox:
        """Reduce an exact rational to absolute precision ``abs_prec``."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(prime, abs_prec)
        v = val(x, prime)
        if v >= abs_prec:
            return cls.zero(prime, abs_prec)
        n, d = x.numerator, x.denominator
        n //= prime ** _int_val(n, prime)
        d //= prime ** _int_val(d, prime)
        prec = abs_prec - int(v)
        mod = prime**prec
        return cls(prime, int(v), n * pow(d, -1, mod) % mod, prec)

    # inspection ---------------------------------------------------------

    @property
    def is_tracked_zero(self) -> bool:
        return self.prec == 0

    @property
    def abs_prec(self) -> int:
        return self.valuation + self.prec

    def digits(self) -> list[int]:
        """Base-``prime`` digits of the unit, least significant first."""
        out, u = [], self.unit
        for _ in range(self.prec):
            out.append(u % self.prime)
            u //= self.prime
        return out

    def lift(self) -> Fraction:
        """The canonical rational representative (unit in ``[0, ell**prec)``)."""
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def to_json(self) -> dict:
        return {"val": self.valuation, "digits": self.digits(), "prec": self.prec}

    @classmethod
    def from_json(cls, obj: dict, prime: int) -> PadicApprox:
        digits = obj.get("digits", [])
        unit = sum(dg * prime**k for k, dg in enumerate(digits))
        return cls(prime, int(obj["val"]), unit, int(obj["prec"]))

    def __repr__(self) -> str:
        if self.is_tracked_zero:
            return f"O({self.prime}^{self.valuation})"
        return f"{self.prime}^{self.valuation}*{self.unit} + O({self.prime}^{self.abs_prec})"

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other: object, abs_prec: int) -> PadicApprox | None:
        if isinstance(other, PadicApprox):
            if other.prime != self.prime:
                raise ValidationError("mixed primes in l-adic arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicApprox.from_rational(other, self.prime, abs_prec)
        return None

    def __neg__(self) -> PadicApprox:
        return PadicApprox(self.prime, self.valuation, -self.unit, self.prec)

    def __add__(self, other: object) -> PadicApprox | Fraction:
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        o = self._coerce(other, self.abs_prec)
        if o is None:
            return NotImplemented
        return _padd(self, o)

    __radd__ = __add__

    def __sub__(self, other: object) -> PadicApprox | Fraction:
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        if isinstance(other, PadicApprox):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: object) -> PadicApprox | Fraction:
        return (-self) + other

    def __mul__(self, other: object) -> PadicApprox | Fraction:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            o = PadicApprox.from_rational(other, self.prime, val(Fraction(other), self.prime) + self.prec)
        elif isinstance(other, PadicApprox):
            o = other
        else:
            return NotImplemented
        return _pmul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> PadicApprox:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            o = PadicApprox.from_rational(other, self.prime, val(Fraction(other), self.prime) + max(self.prec, 1))
        elif isinstance(other, PadicApprox):
            o = other
        else:
            return NotImplemented
        return _pmul(self, _pinv(o))

    def __rtruediv__(self, other: object) -> PadicApprox | Fraction:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                _pinv(self)
                return Fraction(0)
            return _pinv(self) * other
        return NotImplemented

    def __pow__(self, n: int) -> PadicApprox | Fraction:
        if n < 0:
            return _pinv(self) ** (-n)
        result: PadicApprox | Fraction = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = _pmul(base, base)
        return result


def _padd(x: PadicApprox, y: PadicApprox) -> PadicApprox:
    ell = x.prime
    a = min(x.abs_prec, y.abs_prec)
    m = min(x.valuation, y.valuation)
    if m >= a:
        return PadicApprox.zero(ell, a)
    mod = ell ** (a - m)
    s = (x.unit * ell ** (x.valuation - m) + y.unit * ell ** (y.valuation - m)) % mod
    if s == 0:
        return PadicApprox.zero(ell, a)
    k = _int_val(s, ell)
    return PadicApprox(ell, m + k, s // ell**k, a - m - k)


def _pmul(x: PadicApprox, y: PadicApprox) -> PadicApprox:
    if x.prime != y.prime:
        raise ValidationError("mixed primes in l-adic arithmetic")
    prec = min(x.prec, y.prec)
    return PadicApprox(x.prime, x.valuation + y.valuation, x.unit * y.unit, prec)


def _pinv(x: PadicApprox) -> PadicApprox:
    if x.is_tracked_zero:
        raise PrecisionExhausted(f"cannot invert {x!r}: indistinguishable from 0")
    mod = x.prime**x.prec
    return PadicApprox(x.prime, -x.valuation, pow(x.unit, -1, mod), x.prec)


Scalar = Union[Fraction, PadicApprox]


def val(x: int | Fraction | PadicApprox, ell: int | None = None) -> ValQ:
    """Valuation normalized by ``v(ell) = 1``; ``val(0) = INF``.

    ``ell`` is required for exact rationals and ignored for approximants.
    """
    if isinstance(x, PadicApprox):
        if x.is_tracked_zero:
            raise PrecisionExhausted(f"valuation of {x!r} is undetermined (>= {x.valuation})")
        return Fraction(x.valuation)
    if ell is None:
        raise ValidationError("an exact rational needs the prime ell to be valued")
    x = Fraction(x)
    if x == 0:
        return INF
    return Fraction(_int_val(x.numerator, ell) - _int_val(x.denominator, ell))


def is_zero(x: Scalar | int) -> bool:
    """Exact zero, or an approximant indistinguishable from zero."""
    if isinstance(x, PadicApprox):
        return x.is_tracked_zero
    return x == 0


def hensel_root_of_unity(p: int, ell: int, precision: int) -> Scalar:
    """A primitive ``p``-th root of unity in Z_ell to ``precision`` digits.

    For ``p == 2`` the exact value ``-1`` is returned.  Otherwise the smallest
    residue ``r`` in ``2..ell-1`` with ``r**p == 1 (mod ell)`` is lifted by
    Newton iteration on ``x**p - 1``.
    """
    if not is_prime(p) or not is_prime(ell):
        raise ValidationError("p and ell must be prime")
    if p == 2:
        return Fraction(-1)
    if (ell - 1) % p != 0:
        raise NoRootExists(f"{p} does not divide {ell} - 1")
    if precision < 1:
        raise ValidationError("precision must be at least 1")
    r = next(r for r in range(2, ell) if pow(r, p, ell) == 1)
    mod = ell**precision
    x, k = r, 1
    while k < precision:
        k = min(2 * k, precision)
        m = ell**k
        x = (x - (pow(x, p, m) - 1) * pow(p * pow(x, p - 1, m), -1, m)) % m
    return PadicApprox(ell, 0, x % mod, precision)


def scalar_to_json(x: Scalar | int) -> str | dict:
    if isinstance(x, PadicApprox):
        return x.to_json()
    return str(Fraction(x))


def scalar_from_json(obj: object, ell: int) -> Scalar:
    if isinstance(obj, dict):
        return PadicApprox.from_json(obj, ell)
    if isinstance(obj, bool):
        raise ValidationError(f"not a scalar: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational scalar: {obj!r}") from exc
    raise ValidationError(f"not a scalar: {obj!r}")
