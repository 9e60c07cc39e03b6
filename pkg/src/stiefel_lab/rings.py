"""Exact scalar arithmetic for the supported coefficient rings.

Five rings are supported: prime fields F_p (p an odd prime), the rationals Q,
the localization Z_(p) of the integers at an odd prime, truncated p-adic
integers Z_p carried exactly modulo p^N, and the plain integers Z (admitted
only for the signed-permutation checks).  Every value is immutable and every
operation is exact; there is no floating point anywhere in this module.

Valuations are discrete (value group Z).  2 is a unit in every ring except Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

FINITE_FIELD = "finite-field"
RATIONALS = "rationals"
LOCALIZED = "localized-at-p"
PADIC = "padic-truncated"
INTEGERS = "integers"

INFINITY = math.inf


class RingError(ValueError):
    """Operation applied to a scalar whose ring does not support it."""


def is_odd_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingDescriptor:
    """Tag describing one of the supported coefficient rings."""

    kind: str
    p: Optional[int] = None
    precision: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind in (FINITE_FIELD, LOCALIZED, PADIC):
            if not is_odd_prime(self.p):
                raise RingError(f"{self.kind} requires an odd prime, got {self.p}")
        elif self.kind in (RATIONALS, INTEGERS):
            if self.p is not None:
                raise RingError(f"{self.kind} carries no prime")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == PADIC:
            if not isinstance(self.precision, int) or self.precision < 1:
                raise RingError("p-adic precision must be >= 1")
        elif self.precision is not None:
            raise RingError(f"{self.kind} carries no precision")

    @property
    def henselian(self) -> bool:
        return self.kind == PADIC

    @property
    def formally_real(self) -> bool:
        # Field-level flag: Q itself, and the quotient field of Z_(p).
        return self.kind in (RATIONALS, LOCALIZED)

    @property
    def is_field(self) -> bool:
        return self.kind in (FINITE_FIELD, RATIONALS)

    @property
    def is_local(self) -> bool:
        """Local ring in which diagonalization applies (fields included)."""
        return self.kind in (FINITE_FIELD, RATIONALS, LOCALIZED, PADIC)

    @property
    def two_is_unit(self) -> bool:
        return self.kind != INTEGERS

    @property
    def modulus(self) -> Optional[int]:
        if self.kind == PADIC:
            return self.p ** self.precision
        return None

    def residue_ring(self) -> "RingDescriptor":
        if self.kind not in (LOCALIZED, PADIC):
            raise RingError(f"{self.kind} has no residue field here")
        return RingDescriptor(FINITE_FIELD, self.p)

    def label(self) -> str:
        return {
            FINITE_FIELD: f"F{self.p}",
            RATIONALS: "Q",
            LOCALIZED: f"Z_({self.p})",
            PADIC: f"Z{self.p}^{self.precision}",
            INTEGERS: "Z",
        }[self.kind]

    def scalar(self, value) -> "Scalar":
        return Scalar(self, value)

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, 0)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, 1)


def finite_field(p: int) -> RingDescriptor:
    return RingDescriptor(FINITE_FIELD, p)


def rationals() -> RingDescriptor:
    return RingDescriptor(RATIONALS)


def localized_at(p: int) -> RingDescriptor:
    return RingDescriptor(LOCALIZED, p)


def padic(p: int, precision: int) -> RingDescriptor:
    return RingDescriptor(PADIC, p, precision)


def integers() -> RingDescriptor:
    return RingDescriptor(INTEGERS)


def _int_valuation(n: int, p: int) -> Union[int, float]:
    if n == 0:
        return INFINITY
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _fraction_valuation(x: Fraction, p: int) -> Union[int, float]:
    if x == 0:
        return INFINITY
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


Raw = Union[int, Fraction, "Scalar"]


class Scalar:
    """One exact element of a supported ring, normalized on construction.

    Representations: residue in [0, p) for F_p; reduced Fraction for Q and
    Z_(p) (the latter with nonnegative p-valuation); residue in [0, p^N) for
    truncated p-adics; arbitrary-precision int for Z.
    """

    __slots__ = ("ring", "value")

    def __init__(self, ring: RingDescriptor, value: Raw) -> None:
        if isinstance(value, Scalar):
            if value.ring != ring:
                raise RingError(f"cannot reinterpret {value.ring.label()} scalar as {ring.label()}")
            value = value.value
        kind = ring.kind
        if kind == FINITE_FIELD:
            if isinstance(value, Fraction):
                if value.denominator % ring.p == 0:
                    raise RingError(f"denominator not invertible mod {ring.p}")
                value = value.numerator * pow(value.denominator, -1, ring.p)
            value = int(value) % ring.p
        elif kind == RATIONALS:
            value = Fraction(value)
        elif kind == LOCALIZED:
            value = Fraction(value)
            if value.denominator % ring.p == 0:
                raise RingError(f"{value} has negative {ring.p}-adic valuation")
        elif kind == PADIC:
            m = ring.modulus
            if isinstance(value, Fraction):
                if value.denominator % ring.p == 0:
                    raise RingError(f"{value} has negative {ring.p}-adic valuation")
                value = value.numerator * pow(value.denominator, -1, m)
            value = int(value) % m
        else:  # INTEGERS
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise RingError(f"{value} is not an integer")
                value = value.numerator
            value = int(value)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "value", value)

    def __setattr__(self, *args) -> None:
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other: Raw) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingError(
                    f"ring mismatch: {self.ring.label()} vs {other.ring.label()}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(self.ring, other)
        raise TypeError(f"cannot coerce {other!r} into {self.ring.label()}")

    def __add__(self, other: Raw) -> "Scalar":
        other = self._coerce(other)
        return Scalar(self.ring, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other: Raw) -> "Scalar":
        other = self._coerce(other)
        return Scalar(self.ring, self.value - other.value)

    def __rsub__(self, other: Raw) -> "Scalar":
        return self._coerce(other) - self

    def __mul__(self, other: Raw) -> "Scalar":
        other = self._coerce(other)
        return Scalar(self.ring, self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return Scalar(self.ring, -self.value)

    def __truediv__(self, other: Raw) -> "Scalar":
        other = self._coerce(other)
        kind = self.ring.kind
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if kind == FINITE_FIELD:
            return Scalar(self.ring, self.value * pow(other.value, -1, self.ring.p))
        if kind == RATIONALS:
            return Scalar(self.ring, Fraction(self.value, 1) / other.value)
        if kind == LOCALIZED:
            q = Fraction(self.value, 1) / other.value
            if q.denominator % self.ring.p == 0:
                raise RingError(f"{other.value} does not divide {self.value} in {self.ring.label()}")
            return Scalar(self.ring, q)
        if kind == PADIC:
            if not other.is_unit():
                raise RingError("can only divide by units at finite p-adic precision")
            return Scalar(self.ring, self.value * pow(other.value, -1, self.ring.modulus))
        # INTEGERS: exact division only
        q, r = divmod(self.value, other.value)
        if r != 0:
            raise RingError(f"{other.value} does not divide {self.value} in Z")
        return Scalar(self.ring, q)

    def __rtruediv__(self, other: Raw) -> "Scalar":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return (self.ring.one / self) ** (-n)
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            try:
                other = Scalar(self.ring, other)
            except RingError:
                return False
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ring == other.ring and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.ring, self.value))

    def __repr__(self) -> str:
        return f"{self.value}@{self.ring.label()}"

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        kind = self.ring.kind
        if kind == FINITE_FIELD or kind == RATIONALS:
            return self.value != 0
        if kind == LOCALIZED:
            return self.value != 0 and self.value.numerator % self.ring.p != 0
        if kind == PADIC:
            return self.value % self.ring.p != 0
        return self.value in (1, -1)

    def lift(self) -> Union[int, Fraction]:
        """Exact integer/fraction representative (residues lift to [0, mod))."""
        return self.value


def valuation(x: Scalar, p: Optional[int] = None) -> Union[int, float]:
    """p-adic valuation of a scalar over Q or Z_(p); +infinity at zero.

    Over Z_(p) the prime is attached to the ring and `p`, if supplied, must
    agree with it.  Over Q the prime must be supplied.
    """
    kind = x.ring.kind
    if kind == LOCALIZED:
        if p is not None and p != x.ring.p:
            raise RingError(f"prime {p} is not attached to {x.ring.label()}")
        return _fraction_valuation(x.value, x.ring.p)
    if kind == RATIONALS:
        if p is None:
            raise RingError("valuation over Q needs an explicit prime")
        if not is_odd_prime(p):
            raise RingError(f"{p} is not an odd prime")
        return _fraction_valuation(x.value, p)
    raise RingError(f"valuation undefined over {x.ring.label()}")


def padic_unit_part(x: Scalar) -> tuple[Union[int, float], int]:
    """(valuation, unit residue) of a truncated p-adic; valuation capped at N."""
    if x.ring.kind != PADIC:
        raise RingError("expects a truncated p-adic scalar")
    if x.value == 0:
        return INFINITY, 0
    v = _int_valuation(x.value, x.ring.p)
    return v, x.value // x.ring.p ** v


def residue(x: Scalar) -> Scalar:
    """Residue-field image of a scalar over Z_(p) or truncated Z_p."""
    kind = x.ring.kind
    if kind == LOCALIZED:
        f = x.value
        if f.denominator % x.ring.p == 0:
            raise RingError(f"{f} has negative valuation, no residue")
        return Scalar(x.ring.residue_ring(), f)
    if kind == PADIC:
        return Scalar(x.ring.residue_ring(), x.value)
    raise RingError(f"residue undefined over {x.ring.label()}")


def is_square(a: Scalar) -> Optional[Scalar]:
    """Square-root witness in a prime field, or None; exhaustive search."""
    if a.ring.kind != FINITE_FIELD:
        raise RingError("is_square works over prime fields only")
    p = a.ring.p
    for r in range(p):
        if r * r % p == a.value:
            return Scalar(a.ring, r)
    return None


def _heights(bound: int):
    """Rationals of height <= bound: max(|num|, |den|) after reduction,
    ordered by increasing height and then numerically."""
    seen = set()
    for h in range(0, bound + 1):
        batch = []
        for num in range(-h, h + 1):
            for den in range(1, h + 1):
                f = Fraction(num, den)
                if max(abs(f.numerator), f.denominator) == h and f not in seen:
                    seen.add(f)
                    batch.append(f)
        for f in sorted(batch):
            yield f


def sum_of_squares(a: Scalar, k: int, height_bound: Optional[int] = None):
    """Decompose a as x_1^2 + ... + x_k^2, or report failure.

    Over a prime field the search is exhaustive, so None means the
    decomposition does not exist.  Over Q, Z_(p), truncated Z_p, and Z the
    search runs over candidates of height <= height_bound (|x| <= bound over
    Z) and None only means "not found within the bound".
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ring = a.ring
    kind = ring.kind
    if kind == FINITE_FIELD:
        p = ring.p
        target = a.value
        found = _ff_sum_of_squares(target, k, p)
        if found is None:
            return None
        return tuple(Scalar(ring, x) for x in found)
    if kind == PADIC:
        return _padic_sum_of_squares(a, k)
    if height_bound is None:
        raise ValueError(f"height bound required over {ring.label()}")
    if kind == INTEGERS:
        candidates = [Fraction(n) for n in range(-height_bound, height_bound + 1)]
        candidates.sort(key=lambda f: (abs(f), f < 0))
    else:
        candidates = list(_heights(height_bound))
        candidates.sort(key=lambda f: (max(abs(f.numerator), f.denominator), f))
        if kind == LOCALIZED:
            candidates = [c for c in candidates if c.denominator % ring.p != 0]
    target = Fraction(a.value)
    out = _bounded_sum_of_squares(target, k, candidates)
    if out is None:
        return None
    return tuple(Scalar(ring, x) for x in out)


def _ff_sum_of_squares(target: int, k: int, p: int):
    squares = sorted({x * x % p: x for x in range(p)}.items())

    def rec(rem: int, depth: int, acc):
        if depth == k:
            return acc if rem == 0 else None
        for sq, root in squares:
            got = rec((rem - sq) % p, depth + 1, acc + [root])
            if got is not None:
                return got
        return None

    return rec(target % p, 0, [])


def _bounded_sum_of_squares(target: Fraction, k: int, candidates):
    # Squares are nonnegative over Q, so partial sums may be pruned.
    def rec(rem: Fraction, depth: int, acc):
        if depth == k:
            return acc if rem == 0 else None
        if rem < 0:
            return None
        for c in candidates:
            c2 = c * c
            if c2 > rem:
                continue
            got = rec(rem - c2, depth + 1, acc + [c])
            if got is not None:
                return got
        return None

    return rec(target, 0, [])


def _padic_sum_of_squares(a: Scalar, k: int):
    """Residue-field decomposition lifted through one unit coordinate."""
    ring = a.ring
    p = ring.p
    kappa = finite_field(p)
    abar = a.value % p
    # Need a residue witness with some unit coordinate to drive the lift.
    found = _ff_sum_of_squares(abar, k, p)
    if found is None:
        return None
    if all(x % p == 0 for x in found):
        # a = 0 mod p^2 at least; retry demanding a unit slot.
        found = None
        for first in range(1, p):
            rest = _ff_sum_of_squares((abar - first * first) % p, k - 1, p) if k > 1 else (
                [] if (abar - first * first) % p == 0 else None)
            if rest is not None:
                found = [first] + list(rest)
                break
        if found is None:
            return None
    idx = next(i for i, x in enumerate(found) if x % p != 0)
    others = [Scalar(ring, x) for i, x in enumerate(found) if i != idx]
    rem = a
    for s in others:
        rem = rem - s * s
    root = hensel_root(ring, (ring.one, ring.zero, -rem), found[idx])
    out = others[:idx] + [root] + others[idx:]
    return tuple(out)


def hensel_root(ring: RingDescriptor, coeffs, r0: int) -> Scalar:
    """Root of a quadratic aX^2 + bX + c over truncated Z_p by Newton lifting.

    `coeffs` is (a, b, c); r0 must be a simple root of the reduction mod p.
    The result r satisfies f(r) = 0 mod p^N and r = r0 mod p, and is the
    unique such root, so the procedure is deterministic.
    """
    if ring.kind != PADIC:
        raise RingError("hensel_root needs a truncated p-adic ring")
    a, b, c = (Scalar(ring, x) for x in coeffs)
    p, m = ring.p, ring.modulus
    r = Scalar(ring, r0)
    f = a * r * r + b * r + c
    df = ring.scalar(2) * a * r + b
    if f.value % p != 0:
        raise RingError(f"{r0} is not a root mod {p}")
    if df.value % p == 0:
        raise RingError(f"{r0} is not a simple root mod {p} (derivative vanishes)")
    for _ in range(ring.precision.bit_length() + 2):
        f = a * r * r + b * r + c
        if f.value == 0:
            break
        df = ring.scalar(2) * a * r + b
        r = r - f / df
    f = a * r * r + b * r + c
    if f.value != 0:
        raise RingError("Newton iteration failed to converge")
    if (r.value - r0) % p != 0:
        raise RingError("lifted root left its residue class")
    return r


def padic_sqrt(a: Scalar) -> Optional[Scalar]:
    """Square root of a unit in truncated Z_p, when the residue is a square."""
    if a.ring.kind != PADIC:
        raise RingError("padic_sqrt needs a truncated p-adic ring")
    if not a.is_unit():
        raise RingError("padic_sqrt handles units only")
    root_bar = is_square(residue(a))
    if root_bar is None:
        return None
    return hensel_root(a.ring, (a.ring.one, a.ring.zero, -a), root_bar.value)
