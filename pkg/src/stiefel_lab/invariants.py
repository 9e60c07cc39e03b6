"""Arithmetic invariants: Pythagoras number P, Stufe s, u-invariant, and the
unit-vector threshold m, computed by brute force where the ring is finite and
reported as certified bounds elsewhere.

Infinite-ring values are *never* reported as infinity from a search: each is
either exact-with-certificate (a witness object the caller can replay) or a
bounded-search bound tagged with its height.  Comparisons between reports are
therefore interval comparisons and may legitimately come out undetermined.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from stiefel_lab import gfnum
from stiefel_lab.rings import (
    FINITE_FIELD,
    LOCALIZED,
    PADIC,
    RATIONALS,
    RingDescriptor,
    RingError,
    Scalar,
    localized_at,
    sum_of_squares,
)
from stiefel_lab.quadmod import diagonal_module, euclidean
from stiefel_lab.repsolve import find_isotropic, represents

INF = math.inf


@dataclass(frozen=True)
class InvariantValue:
    """Interval [lo, hi] with a provenance tag; exact when lo == hi."""

    lo: float
    hi: float
    source: str

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def value(self) -> int:
        if not self.exact:
            raise ValueError(f"value not pinned: [{self.lo}, {self.hi}]")
        return int(self.lo)

    def __str__(self) -> str:
        if self.exact:
            return f"{int(self.lo)} ({self.source})"
        hi = "inf" if self.hi == INF else int(self.hi)
        return f"[{self.lo}, {hi}] ({self.source})"


def exact(v: int, source: str = "exhaustive") -> InvariantValue:
    return InvariantValue(v, v, source)


@dataclass(frozen=True)
class InvariantReport:
    ring: RingDescriptor
    pythagoras: InvariantValue
    stufe: InvariantValue
    u_invariant: InvariantValue
    m_invariant: InvariantValue
    search_bound: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "ring": self.ring.label(),
            "P": str(self.pythagoras),
            "s": str(self.stufe),
            "u": str(self.u_invariant),
            "m": str(self.m_invariant),
            "search_bound": self.search_bound,
        }


# ---------------------------------------------------------------------------
# Finite fields: everything exhaustive
# ---------------------------------------------------------------------------


def _ff_sum_chain(p: int):
    """S_1 ⊆ S_2 ⊆ ... until stable; returns the chain list."""
    s1 = frozenset(x * x % p for x in range(p))
    chain = [s1]
    while True:
        nxt = frozenset((a + b) % p for a in chain[-1] for b in s1)
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def _ff_all_unit_diagonals(p: int, rank: int):
    return itertools.product(range(1, p), repeat=rank)


def _ff_diag_isotropic(diag, p: int) -> bool:
    n = len(diag)
    X = gfnum.all_vectors(p, n)[1:]
    vals = (X * X % p) @ np.array(diag, dtype=np.int64) % p
    return bool((vals == 0).any())


def _ff_diag_represents_one(diag, p: int) -> bool:
    n = len(diag)
    X = gfnum.all_vectors(p, n)
    vals = (X * X % p) @ np.array(diag, dtype=np.int64) % p
    return bool((vals == 1).any())


def compute_invariants(ring: RingDescriptor, max_rank: int = 4) -> InvariantReport:
    """All four invariants of an odd prime field, by exhaustive search.

    P from the stabilization of the sums-of-squares chain; s from the least k
    with -1 a sum of k squares; u as the largest rank of an anisotropic
    diagonal unit form (a diagonal form of higher rank contains one of lower
    rank, so scanning ranks until every form is isotropic is complete); m as
    the least rank forcing every diagonal unit form to represent 1 (again
    inherited by higher ranks through subforms).
    """
    if ring.kind != FINITE_FIELD:
        raise RingError("compute_invariants is exhaustive over prime fields only")
    p = ring.p
    chain = _ff_sum_chain(p)
    stable = chain[-1]
    pyth = next(i + 1 for i, s in enumerate(chain) if s == stable)
    minus_one = (p - 1) % p
    stufe = None
    for k, s in enumerate(chain, start=1):
        if minus_one in s:
            stufe = k
            break
    if stufe is None:
        stufe = INF if minus_one not in stable else len(chain)
    u = 0
    for rank in range(1, max_rank + 1):
        if any(not _ff_diag_isotropic(d, p) for d in _ff_all_unit_diagonals(p, rank)):
            u = rank
        else:
            break
    m = None
    for rank in range(1, max_rank + 1):
        if all(_ff_diag_represents_one(d, p) for d in _ff_all_unit_diagonals(p, rank)):
            m = rank
            break
    if m is None:
        raise AssertionError(f"no rank <= {max_rank} forces a unit vector over F_{p}")
    return InvariantReport(
        ring,
        pythagoras=exact(pyth),
        stufe=exact(stufe) if stufe != INF else InvariantValue(len(chain) + 1, INF, "exhaustive"),
        u_invariant=exact(u),
        m_invariant=exact(m),
    )


# ---------------------------------------------------------------------------
# Local rings: Hensel-certified values and bounded-search bounds
# ---------------------------------------------------------------------------


def padic_invariants(ring: RingDescriptor, max_rank: int = 3) -> InvariantReport:
    """s, u, m over truncated Z_p by Hensel-certified witnesses; these agree
    with the residue field (the lifts are the certificates, the failures are
    exact because an anisotropic reduction stays anisotropic)."""
    if ring.kind != PADIC:
        raise RingError("expects a truncated p-adic ring")
    kappa_report = compute_invariants(ring.residue_ring())
    tag = f"hensel-certified at precision {ring.precision}"
    s_val = None
    for k in range(1, 5):
        if sum_of_squares(ring.scalar(-1), k) is not None:
            s_val = k
            break
    assert s_val == kappa_report.stufe.value()
    u_val = 0
    for rank in range(1, max_rank + 1):
        found_aniso = False
        for d in _ff_all_unit_diagonals(ring.p, rank):
            q = diagonal_module(ring, list(d))
            if not find_isotropic(q).found:
                found_aniso = True
                break
        if found_aniso:
            u_val = rank
        else:
            break
    assert u_val == kappa_report.u_invariant.value()
    m_val = None
    for rank in range(1, max_rank + 1):
        if all(
            represents(diagonal_module(ring, list(d)), ring.one) is not None
            for d in _ff_all_unit_diagonals(ring.p, rank)
        ):
            m_val = rank
            break
    assert m_val == kappa_report.m_invariant.value()
    # P: squeezed between P(kappa) and s + 1 (2 is a unit).
    p_lo = kappa_report.pythagoras.value()
    p_hi = s_val + 1
    pyth = (
        exact(p_lo, tag)
        if p_lo == p_hi
        else InvariantValue(p_lo, p_hi, "interval: P(residue) <= P <= s + 1")
    )
    return InvariantReport(
        ring,
        pythagoras=pyth,
        stufe=exact(s_val, tag),
        u_invariant=exact(u_val, tag),
        m_invariant=exact(m_val, tag),
    )


def localized_invariants(ring: RingDescriptor, height: int = 50) -> InvariantReport:
    """Z_(p): bounded-search bounds; the m value combines the explicit
    rank-3 witness (lower bound at the height) with the quotient-field
    constant m_Q = 4 for the upper bound."""
    if ring.kind != LOCALIZED:
        raise RingError("expects Z_(p)")
    # Stufe: -1 is never a bounded sum of squares (every partial sum is
    # nonnegative); report the searched floor rather than asserting infinity.
    s_checked = 4
    for k in range(1, s_checked + 1):
        assert sum_of_squares(ring.scalar(-1), k, height_bound=height) is None
    stufe = InvariantValue(s_checked + 1, INF, f"no witness for k <= {s_checked} at height {height}")
    # u: n<1> is definite, hence anisotropic at every tested rank.
    u_checked = 6
    for rank in range(1, u_checked + 1):
        assert not find_isotropic(euclidean(ring, rank), height_bound=height).found
    u = InvariantValue(u_checked, INF, f"n<1> anisotropic for n <= {u_checked} at height {height}")
    wit = m_zp_witness(ring.p, height)
    assert wit.establishes_lower_bound
    m = InvariantValue(4, 4, f"rank-3 witness at height {height}; <= m_Q = 4")
    # P: 7 is a sum of four squares but of no three at the searched height.
    assert no_rational_three_square(7, height)
    pyth = InvariantValue(4, INF, f"7 needs four squares; searched height {height}")
    return InvariantReport(ring, pyth, stufe, u, m, search_bound=height)


# ---------------------------------------------------------------------------
# The certified table used by the sufficient-condition evaluators
# ---------------------------------------------------------------------------

_ARITH_CACHE: dict = {}


def known_arithmetic(ring: RingDescriptor) -> dict:
    """m and P for the ring, its residue field, and its quotient field, with
    flags, as used by the unit-vector and connectivity condition checkers.

    Prime-field values are computed exhaustively (and cached); the constants
    m_Q = P_Q = 4 rest on the four-square decomposition plus the integral
    three-square obstruction, both replayed in this package's tests.  None
    marks a value the package does not certify (treated as "condition not
    applicable"), never a claim of infinity.
    """
    if ring in _ARITH_CACHE:
        return _ARITH_CACHE[ring]
    if ring.kind == FINITE_FIELD:
        rep = compute_invariants(ring)
        out = {
            "m_A": rep.m_invariant.value(),
            "P_kappa": rep.pythagoras.value(),
            "m_K": rep.m_invariant.value(),
            "P_K": rep.pythagoras.value(),
            "henselian": True,  # trivial valuation: the field is its own residue field
            "kappa_formally_real": False,
            "K_formally_real": False,
        }
    elif ring.kind == PADIC:
        rep = compute_invariants(ring.residue_ring())
        out = {
            "m_A": rep.m_invariant.value(),  # henselian: m agrees with the residue field
            "P_kappa": rep.pythagoras.value(),
            "m_K": None,
            "P_K": None,
            "henselian": True,
            "kappa_formally_real": False,
            "K_formally_real": False,
        }
    elif ring.kind == LOCALIZED:
        rep = compute_invariants(ring.residue_ring())
        out = {
            "m_A": 4,
            "P_kappa": rep.pythagoras.value(),
            "m_K": 4,
            "P_K": 4,
            "henselian": False,
            "kappa_formally_real": False,
            "K_formally_real": True,
        }
    elif ring.kind == RATIONALS:
        out = {
            "m_A": 4,
            "P_kappa": 4,
            "m_K": 4,
            "P_K": 4,
            "henselian": True,
            "kappa_formally_real": True,
            "K_formally_real": True,
        }
    else:
        raise RingError(f"no arithmetic table for {ring.label()}")
    _ARITH_CACHE[ring] = out
    return out


# ---------------------------------------------------------------------------
# Inequality ledger
# ---------------------------------------------------------------------------


def _leq(x: InvariantValue, y: InvariantValue) -> str:
    if x.hi <= y.lo:
        return "pass"
    if x.lo > y.hi:
        return "fail"
    return "undetermined"


def _eq(x: InvariantValue, y: InvariantValue) -> str:
    if x.exact and y.exact and x.lo == y.lo:
        return "pass"
    if x.hi < y.lo or y.hi < x.lo:
        return "fail"
    return "undetermined"


def check_inequalities(
    report_a: InvariantReport,
    report_kappa: Optional[InvariantReport] = None,
    report_k: Optional[InvariantReport] = None,
) -> list[tuple[str, str]]:
    """Evaluate the invariant inequalities on a ring / residue-field /
    quotient-field triple; each entry is (name, pass | fail | undetermined).
    Failures list the violated inequality by name."""
    out = []
    a = report_a

    def rec(name, status):
        out.append((name, status))

    if a.ring.is_field:
        rec("P <= m", _leq(a.pythagoras, a.m_invariant))
    if a.ring.two_is_unit:
        plus1 = InvariantValue(a.stufe.lo + 1, a.stufe.hi + 1 if a.stufe.hi != INF else INF,
                               a.stufe.source)
        rec("P <= s + 1", _leq(a.pythagoras, plus1))
        rec("s <= u", _leq(a.stufe, a.u_invariant))
        rec("m <= u", _leq(a.m_invariant, a.u_invariant))
    if report_kappa is not None:
        if report_kappa.ring != a.ring.residue_ring():
            raise ValueError("residue report does not match the ring")
        k = report_kappa
        rec("m_kappa <= m_A", _leq(k.m_invariant, a.m_invariant))
        rec("P(kappa) <= P(A)", _leq(k.pythagoras, a.pythagoras))
        rec("s(kappa) <= s(A)", _leq(k.stufe, a.stufe))
        rec("u(kappa) <= u(A)", _leq(k.u_invariant, a.u_invariant))
        if a.ring.henselian:
            rec("henselian: m_A = m_kappa", _eq(a.m_invariant, k.m_invariant))
            rec("henselian: s_A = s_kappa", _eq(a.stufe, k.stufe))
            rec("henselian: u_A = u_kappa", _eq(a.u_invariant, k.u_invariant))
    if report_k is not None:
        kk = report_k
        if kk.ring.kind != RATIONALS or a.ring.kind != LOCALIZED:
            raise ValueError("quotient-field comparison wired for Z_(p) inside Q")
        rec("m_A <= m_K", _leq(a.m_invariant, kk.m_invariant))
        rec("s(A) = s(K)", _eq(a.stufe, kk.stufe))
        rec("u(A) <= u(K)", _leq(a.u_invariant, kk.u_invariant))
    return out


# ---------------------------------------------------------------------------
# The rank-3 witness for m over Z_(p)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MZpWitness:
    p: int
    height: int
    four_square: tuple[Fraction, ...]
    rational_three_square_found: bool
    integer_three_square_found: bool

    @property
    def establishes_lower_bound(self) -> bool:
        return not self.rational_three_square_found and not self.integer_three_square_found


def no_rational_three_square(target: int, height: int) -> bool:
    """True when a^2 + b^2 + c^2 = target * d^2 has no integer solution with
    1 <= d <= height and |a|, |b|, |c| <= height.  Vector height here is the
    max of the cleared-denominator entries (common denominator d included)."""
    for d in range(1, height + 1):
        rhs = target * d * d
        amax = min(height, math.isqrt(rhs))
        for a in range(amax + 1):
            rem_a = rhs - a * a
            bmax = min(height, math.isqrt(rem_a))
            for b in range(a, bmax + 1):
                c2 = rem_a - b * b
                c = math.isqrt(c2)
                if c * c == c2 and c <= height:
                    return False
    return True


def m_zp_witness(p: int, height: int) -> MZpWitness:
    """The rank-3 module 3<1/7> inside Euclidean 12-space over Z_(p): 1/7 is
    an explicit sum of four squares, yet no unit vector turns up at the given
    height, and 7 is not a sum of three integer squares at all.  Together:
    m(Z_(p)) >= 4 at this search height."""
    if height < 1:
        raise ValueError("height must be >= 1")
    if 7 % p == 0:
        raise RingError(f"construction needs p not dividing 7, got p = {p}")
    ring = localized_at(p)
    # Explicit four-square decomposition 7 = 4 + 1 + 1 + 1, rescaled by 1/7.
    quads = None
    for combo in itertools.product(range(0, 3), repeat=4):
        if sum(c * c for c in combo) == 7:
            quads = combo
            break
    assert quads is not None
    four = tuple(Fraction(c, 7) for c in quads)
    total = sum(f * f for f in four)
    assert total == Fraction(1, 7)
    for f in four:
        Scalar(ring, f)  # all lie in Z_(p) since p does not divide 7
    rational_found = not no_rational_three_square(7, height)
    integer_found = any(
        a * a + b * b + c * c == 7
        for a in range(-2, 3) for b in range(-2, 3) for c in range(-2, 3)
    )
    return MZpWitness(p, height, four, rational_found, integer_found)


# ---------------------------------------------------------------------------
# The two-unit-vector hypothesis and its Pythagoras bound
# ---------------------------------------------------------------------------


def _signed_perm_orbit_reps(units: np.ndarray, p: int) -> np.ndarray:
    """One representative per orbit of the signed-permutation action; the
    orbit invariant is the sorted multiset of min(c, p - c).  Signed
    permutations are isometries, so the two-vector hypothesis only needs one
    representative as the first vector of the pair."""
    keys = np.sort(np.minimum(units, p - units), axis=1)
    _, first = np.unique(keys, axis=0, return_index=True)
    return units[np.sort(first)]


def shapiro_bound_check(ring: RingDescriptor, k: int, n_extra: int = 2) -> dict:
    """Exhaustively test, for n in [k, k + n_extra], that the orthogonal
    complement of every pair of unit vectors in Euclidean n-space contains a
    unit vector, then check P <= k - 2 against the exhaustive invariants.
    The prime field F_3 is rejected: the implication fails there."""
    if ring.kind != FINITE_FIELD:
        raise RingError("hypothesis test implemented over prime fields")
    if ring.p == 3:
        raise ValueError("F_3 is excluded: the bound is false over it")
    p = ring.p
    results = {}
    chunk = 2048
    for n in range(k, k + n_extra + 1):
        G = np.eye(n, dtype=np.int64)
        units = gfnum.unit_sphere(G, p)
        reps = _signed_perm_orbit_reps(units, p)
        ok = True
        for e in reps:
            perp = units[(units @ e) % p == 0]
            if perp.size == 0:
                ok = False
                break
            # every candidate f needs a unit vector orthogonal to both e and
            # f; chunked so the pairing product stays small
            for lo in range(0, len(units), chunk):
                pairings = (perp @ units[lo:lo + chunk].T) % p
                if not (pairings == 0).any(axis=0).all():
                    ok = False
                    break
            if not ok:
                break
        results[n] = ok
    hypothesis = all(results.values())
    pyth = compute_invariants(ring).pythagoras.value()
    return {
        "field": ring.label(),
        "k": k,
        "hypothesis_by_n": results,
        "hypothesis": hypothesis,
        "pythagoras": pyth,
        "bound_holds": (not hypothesis) or pyth <= k - 2,
    }
