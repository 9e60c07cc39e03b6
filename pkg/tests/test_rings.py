"""Scalar arithmetic: field axioms, valuations, residues, squares, Hensel."""

import math
import random
from fractions import Fraction

import pytest

from stiefel_lab.rings import (
    RingError,
    Scalar,
    finite_field,
    hensel_root,
    integers,
    is_square,
    localized_at,
    padic,
    padic_sqrt,
    rationals,
    residue,
    sum_of_squares,
    valuation,
)

F3 = finite_field(3)
F5 = finite_field(5)
F7 = finite_field(7)
Q = rationals()
Z5 = localized_at(5)


def factor_count(n: int, p: int) -> int:
    """Oracle: count factors of p by repeated division."""
    assert n != 0
    c = 0
    while n % p == 0:
        n //= p
        c += 1
    return c


def test_field_axioms_exhaustive():
    for ring in (F3, F5, F7):
        p = ring.p
        elems = [ring.scalar(i) for i in range(p)]
        for a in elems:
            assert a + ring.zero == a
            assert a * ring.one == a
            assert a + (-a) == ring.zero
            if not a.is_zero():
                assert a * (ring.one / a) == ring.one
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                for c in elems:
                    assert (a + b) + c == a + (b + c)
                    assert (a * b) * c == a * (b * c)
                    assert a * (b + c) == a * b + a * c


def test_valuation_examples():
    assert valuation(Z5.scalar(Fraction(5, 3))) == 1
    assert valuation(Z5.scalar(0)) == math.inf
    # 9/25: oracle counts factors of 5 in numerator and denominator.
    expected = factor_count(9, 5) - factor_count(25, 5)
    assert expected == -2
    assert valuation(Q.scalar(Fraction(9, 25)), 5) == expected


def test_valuation_ring_mismatch():
    with pytest.raises(RingError):
        valuation(Z5.scalar(1), 7)
    with pytest.raises(RingError):
        valuation(Q.scalar(1))  # prime not attached
    with pytest.raises(RingError):
        valuation(F5.scalar(1), 5)


def test_valuation_is_multiplicative_and_ultrametric():
    rng = random.Random(11)
    for _ in range(300):
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
        y = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
        vx = valuation(Q.scalar(x), 5)
        vy = valuation(Q.scalar(y), 5)
        if x != 0 and y != 0:
            assert valuation(Q.scalar(x * y), 5) == vx + vy
        if x + y != 0:
            assert valuation(Q.scalar(x + y), 5) >= min(vx, vy)


def test_residue_examples():
    # 1/7 over Z_(5): oracle is the modular inverse, 7 * 3 = 21 = 1 mod 5.
    assert 7 * 3 % 5 == 1
    assert residue(Z5.scalar(Fraction(1, 7))) == F5.scalar(3)
    assert residue(Z5.scalar(Fraction(5, 3))) == F5.scalar(0)
    assert residue(padic(5, 2).scalar(16)) == F5.scalar(1)


def test_residue_negative_valuation_rejected():
    with pytest.raises(RingError):
        Z5.scalar(Fraction(1, 5))
    with pytest.raises(RingError):
        residue(Q.scalar(Fraction(1, 5)))


def test_residue_is_multiplicative():
    rng = random.Random(7)
    for _ in range(200):
        x = Fraction(rng.randint(-30, 30), rng.choice([1, 2, 3, 7, 9, 11]))
        y = Fraction(rng.randint(-30, 30), rng.choice([1, 3, 7, 13]))
        assert residue(Z5.scalar(x * y)) == residue(Z5.scalar(x)) * residue(Z5.scalar(y))
        assert residue(Z5.scalar(x + y)) == residue(Z5.scalar(x)) + residue(Z5.scalar(y))


def test_is_square_examples():
    r = is_square(F5.scalar(4))
    assert r is not None and r * r == F5.scalar(4)
    # Oracle: the squares mod 5 are exactly {0, 1, 4}.
    assert sorted({x * x % 5 for x in range(5)}) == [0, 1, 4]
    assert is_square(F5.scalar(2)) is None
    assert is_square(F3.scalar(0)) == F3.scalar(0)


def test_is_square_agrees_with_exhaustion():
    for ring in (F3, F5, F7):
        p = ring.p
        squares = {x * x % p for x in range(p)}
        for a in range(p):
            witness = is_square(ring.scalar(a))
            assert (witness is not None) == (a in squares)
            if witness is not None:
                assert witness * witness == ring.scalar(a)


def test_sum_of_squares_examples():
    got = sum_of_squares(F3.scalar(2), 2)
    assert got is not None and sum(x * x for x, in zip(got)) == F3.scalar(2)
    # -1 over F5: 2^2 = 4 = -1 (exhaustive).
    got = sum_of_squares(F5.scalar(-1), 1)
    assert got is not None and got[0] * got[0] == F5.scalar(-1)
    # 7 = 7 mod 8 is not a sum of 3 squares; exhaustive over |x| <= 2.
    assert all(
        a * a + b * b + c * c != 7
        for a in range(-2, 3) for b in range(-2, 3) for c in range(-2, 3)
    )
    assert sum_of_squares(integers().scalar(7), 3, height_bound=3) is None


def test_sum_of_squares_found_values_check_out():
    got = sum_of_squares(Q.scalar(Fraction(1, 4)), 1, height_bound=4)
    assert got is not None and got[0] * got[0] == Q.scalar(Fraction(1, 4))
    got = sum_of_squares(Z5.scalar(2), 2, height_bound=3)
    assert got is not None
    assert sum((x * x for x in got), Z5.zero) == Z5.scalar(2)


def test_sum_of_squares_padic_lifts():
    ring = padic(5, 3)
    got = sum_of_squares(ring.scalar(-1), 1)
    assert got is not None and got[0] * got[0] == ring.scalar(-1)
    got = sum_of_squares(ring.scalar(7), 2)
    assert got is not None
    assert sum((x * x for x in got), ring.zero) == ring.scalar(7)


def hensel_oracle(a, b, c, r0, p, N):
    """Oracle: exhaust all residues mod p^N for roots congruent to r0."""
    m = p ** N
    return [r for r in range(m) if (a * r * r + b * r + c) % m == 0 and (r - r0) % p == 0]


def test_hensel_root_examples():
    ring = padic(5, 2)
    r = hensel_root(ring, (1, 0, -6), 1)
    assert hensel_oracle(1, 0, -6, 1, 5, 2) == [16]
    assert r == ring.scalar(16)

    ring4 = padic(5, 4)
    assert hensel_root(ring4, (1, 0, -1), 1) == ring4.scalar(1)

    r = hensel_root(ring, (1, 0, 1), 2)
    assert hensel_oracle(1, 0, 1, 2, 5, 2) == [7]
    assert r == ring.scalar(7)


def test_hensel_root_matches_exhaustive_enumeration():
    rng = random.Random(3)
    for p in (3, 5, 7):
        for N in (1, 2, 3):
            ring = padic(p, N)
            for _ in range(40):
                a, b, c = rng.randrange(p**N), rng.randrange(p**N), rng.randrange(p**N)
                simple = [
                    r for r in range(p)
                    if (a * r * r + b * r + c) % p == 0 and (2 * a * r + b) % p != 0
                ]
                for r0 in simple:
                    root = hensel_root(ring, (a, b, c), r0)
                    assert root.value in hensel_oracle(a, b, c, r0, p, N)


def test_hensel_root_rejects_non_simple_roots():
    ring = padic(5, 3)
    with pytest.raises(RingError):
        hensel_root(ring, (1, 0, 0), 0)  # double root of X^2


def test_padic_sqrt():
    ring = padic(5, 4)
    r = padic_sqrt(ring.scalar(6))
    assert r is not None and r * r == ring.scalar(6)
    assert padic_sqrt(ring.scalar(2)) is None  # 2 is a non-square mod 5


def test_division_rules():
    assert F5.scalar(1) / F5.scalar(7) == F5.scalar(3)
    with pytest.raises(RingError):
        Z5.scalar(1) / Z5.scalar(5)
    with pytest.raises(RingError):
        padic(5, 2).scalar(1) / padic(5, 2).scalar(5)
    with pytest.raises(RingError):
        integers().scalar(3) / integers().scalar(2)
    assert integers().scalar(6) / integers().scalar(2) == integers().scalar(3)


def test_unit_detection():
    assert Z5.scalar(Fraction(1, 7)).is_unit()
    assert not Z5.scalar(5).is_unit()
    assert padic(5, 3).scalar(7).is_unit()
    assert not padic(5, 3).scalar(10).is_unit()
    assert integers().scalar(-1).is_unit()
    assert not integers().scalar(2).is_unit()


def test_ring_descriptor_flags():
    assert padic(5, 2).henselian and not localized_at(5).henselian
    assert rationals().formally_real and localized_at(5).formally_real
    assert not finite_field(5).formally_real
    assert not integers().two_is_unit and localized_at(3).two_is_unit
    with pytest.raises(RingError):
        finite_field(2)
    with pytest.raises(RingError):
        localized_at(9)
    with pytest.raises(RingError):
        padic(5, 0)
