"""Stability-range and connectivity-range formulas, evaluated exactly.

Every bound is stated in the source material as "the map is a surjection /
isomorphism for i <= (fraction)"; the functions here keep the fraction exact
(Fraction comparisons, never pre-floored) and derive the integer cutoff from
it, so there is no off-by-one drift.

Two of the connectivity-range items and one hypothesis flag look inconsistent
in the source (an A-side invariant appearing in a quotient-field clause, and
a formally-real hypothesis attached to the ring rather than its residue
field).  Both readings are implemented side by side, labelled "literal" and
"corrected", and nothing silently picks one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

CONSTANT_CASES = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")
ABELIAN_CASES = ("i", "ii", "iii", "iv", "v", "vi")


def _floor(x: Fraction) -> int:
    return math.floor(x)


@dataclass(frozen=True)
class RangeInputs:
    """Parameters feeding a range formula: the rank n, one invariant value
    (which of m_A / m_K / P(residue) / P(K) depends on the case), flags, and
    the coefficient degree for polynomial coefficients."""

    n: int
    invariant: int
    henselian: bool = False
    formally_real: bool = False
    degree: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.invariant < 1:
            raise ValueError("rank and invariant must be positive")
        if self.degree is not None and self.degree < -1:
            raise ValueError("coefficient degree must be >= -1")


@dataclass(frozen=True)
class RangeResult:
    surjective_up_to: int
    isomorphism_up_to: int
    case: str
    kind: str

    def __post_init__(self) -> None:
        if self.isomorphism_up_to > self.surjective_up_to:
            raise ValueError("isomorphism range cannot exceed surjectivity range")

    @property
    def empty(self) -> bool:
        return self.surjective_up_to < 0

    def as_row(self) -> tuple:
        return (self.kind, self.case, self.surjective_up_to, self.isomorphism_up_to)


_CONSTANT_SURJ = {
    "i": lambda n, v: Fraction(n - v - 1, 3),
    "ii": lambda n, v: Fraction(n - v, 2),
    "iii": lambda n, v: Fraction(n - 3 - 2 * v, 2 * v + 1),
    "iv": lambda n, v: Fraction(n - 2 - v, v + 1),
    "v": lambda n, v: Fraction(n - v - 1, 3),
    "vi": lambda n, v: Fraction(n - v, 2),
    "vii": lambda n, v: Fraction(n - 3 - 2 * v, 2 * v + 1),
    "viii": lambda n, v: Fraction(n - 2 - v, v + 1),
}

_CONSTANT_ISO = {
    "i": lambda n, v: Fraction(n - v - 2, 3),
    "ii": lambda n, v: Fraction(n - v - 1, 2),
    "iii": lambda n, v: Fraction(n - 4 - 2 * v, 2 * v + 1),
    "iv": lambda n, v: Fraction(n - 3 - v, v + 1),
    "v": lambda n, v: Fraction(n - v - 2, 3),
    "vi": lambda n, v: Fraction(n - v - 1, 2),
    "vii": lambda n, v: Fraction(n - 4 - 2 * v, 2 * v + 1),
    "viii": lambda n, v: Fraction(n - 3 - v, v + 1),
}

# Which hypotheses each constant-coefficient case carries. "fr" names the
# literal flag: case (ii) literally says the *ring* is formally real (the
# corrected reading asks it of the residue field); both are exposed.
_CONSTANT_HYP = {
    "i": {"invariant": "m_A"},
    "ii": {"invariant": "m_A", "fr": "A (literal) / residue field (corrected)"},
    "iii": {"invariant": "P_kappa", "henselian": True},
    "iv": {"invariant": "P_kappa", "henselian": True, "fr": "residue field"},
    "v": {"invariant": "m_K"},
    "vi": {"invariant": "m_K", "fr": "K"},
    "vii": {"invariant": "P_K"},
    "viii": {"invariant": "P_K", "fr": "K"},
}


def range_constant(case: str, inputs: RangeInputs) -> RangeResult:
    """Constant-coefficient stability range for one of the eight cases."""
    if case not in CONSTANT_CASES:
        raise ValueError(f"unknown case {case!r}")
    hyp = _CONSTANT_HYP[case]
    if hyp.get("henselian") and not inputs.henselian:
        raise ValueError(f"case ({case}) requires a henselian ring")
    if "fr" in hyp and not inputs.formally_real:
        raise ValueError(f"case ({case}) requires the formally-real flag")
    n, v = inputs.n, inputs.invariant
    return RangeResult(
        _floor(_CONSTANT_SURJ[case](n, v)),
        _floor(_CONSTANT_ISO[case](n, v)),
        case,
        "constant",
    )


_ABELIAN_SURJ = {
    "i": lambda n, v: Fraction(n - v - 2, 3),
    "ii": lambda n, v: Fraction(n - 4 * v - 2, 2 * v + 1),
    "iii": lambda n, v: Fraction(n - v - max(3, v + 1), max(3, v + 1)),
    "iv": lambda n, v: Fraction(n - v - 2, 3),
    "v": lambda n, v: Fraction(n - 4 * v - 2, 2 * v + 1),
    "vi": lambda n, v: Fraction(n - v - max(3, v + 1), max(3, v + 1)),
}

_ABELIAN_ISO = {
    "i": lambda n, v: Fraction(n - v - 4, 3),
    "ii": lambda n, v: Fraction(n - 4 * v - 4, 2 * v + 1),
    "iii": lambda n, v: Fraction(n - v - 2 - max(3, v + 1), max(3, v + 1)),
    "iv": lambda n, v: Fraction(n - v - 4, 3),
    "v": lambda n, v: Fraction(n - 4 * v - 4, 2 * v + 1),
    "vi": lambda n, v: Fraction(n - v - 2 - max(3, v + 1), max(3, v + 1)),
}

_ABELIAN_HYP = {
    "i": {"invariant": "m_A"},
    "ii": {"invariant": "P_kappa", "henselian": True},
    "iii": {"invariant": "P_kappa", "henselian": True, "fr": "residue field"},
    "iv": {"invariant": "m_K"},
    "v": {"invariant": "P_K"},
    "vi": {"invariant": "P_K", "fr": "K"},
}


def range_abelian(case: str, inputs: RangeInputs) -> RangeResult:
    """Ranges for coefficients on which the commutator subgroup acts
    trivially; six cases, with the max{3, P + 1} denominators."""
    if case not in ABELIAN_CASES:
        raise ValueError(f"unknown case {case!r}")
    hyp = _ABELIAN_HYP[case]
    if hyp.get("henselian") and not inputs.henselian:
        raise ValueError(f"case ({case}) requires a henselian ring")
    if "fr" in hyp and not inputs.formally_real:
        raise ValueError(f"case ({case}) requires the formally-real flag")
    n, v = inputs.n, inputs.invariant
    return RangeResult(
        _floor(_ABELIAN_SURJ[case](n, v)),
        _floor(_ABELIAN_ISO[case](n, v)),
        case,
        "abelian",
    )


def range_polynomial(case: str, inputs: RangeInputs) -> RangeResult:
    """Ranges for a coefficient system of finite degree r: the constant-
    coefficient surjectivity fraction shifted down by r (surjection) and
    r + 1 (isomorphism)."""
    if case not in CONSTANT_CASES:
        raise ValueError(f"unknown case {case!r}")
    if inputs.degree is None:
        raise ValueError("polynomial ranges need a coefficient degree")
    hyp = _CONSTANT_HYP[case]
    if hyp.get("henselian") and not inputs.henselian:
        raise ValueError(f"case ({case}) requires a henselian ring")
    if "fr" in hyp and not inputs.formally_real:
        raise ValueError(f"case ({case}) requires the formally-real flag")
    n, v, r = inputs.n, inputs.invariant, inputs.degree
    base = _CONSTANT_SURJ[case](n, v)
    return RangeResult(
        _floor(base - r),
        _floor(base - r - 1),
        case,
        "polynomial",
    )


def intro_corollary_ranges(which: int, case: str, n: int, invariant: int,
                           d: Optional[int] = None) -> int:
    """Vanishing/stability degree bounds of the three introductory
    corollaries: the largest i satisfying the stated inequality."""
    if which == 1:
        if d is None:
            raise ValueError("corollary 1 needs the exterior-power degree d")
        v = invariant
        fr = {
            "a": Fraction(n - v - 3 * d - 4, 3),
            "b": Fraction(n - v - 2 * d - 2, 2),
            "c": Fraction(n - 3 - 2 * v - (d + 1) * (2 * v + 1), 2 * v + 1),
            "d": Fraction(n - 2 - v - (d + 1) * (v + 1), v + 1),
        }[case]
        return _floor(fr)
    if which == 2:
        v = invariant
        fr = {
            "a": Fraction(n - v - 10, 3),
            "b": Fraction(n - v - 6, 2),
            "c": Fraction(n - 3 - 2 * v, 2 * v + 1) - 3,
            "d": Fraction(n - 2 - v, v + 1) - 3,
        }[case]
        return _floor(fr)
    if which == 3:
        return _floor(Fraction(n - 8, 2))
    raise ValueError(f"unknown corollary {which}")


# ---------------------------------------------------------------------------
# Connectivity ranges for the Stiefel complex
# ---------------------------------------------------------------------------

_CNT_LITERAL = {
    "i": ("(n - m_A - 3)/3", lambda n, a: Fraction(n - a["m_A"] - 3, 3)),
    "ii": ("(n - 5 - 2 P_kappa)/(2 P_kappa + 1)",
           lambda n, a: Fraction(n - 5 - 2 * a["P_kappa"], 2 * a["P_kappa"] + 1)),
    "iii": ("(n - m_A - 2)/2", lambda n, a: Fraction(n - a["m_A"] - 2, 2)),
    "iv": ("(n - 4 - P_kappa)/(P_kappa + 1)",
           lambda n, a: Fraction(n - 4 - a["P_kappa"], a["P_kappa"] + 1)),
    "v": ("(n - m_K - 3)/3", lambda n, a: Fraction(n - a["m_K"] - 3, 3)),
    "vi": ("(n - 5 - 2 P_K)/(2 P_K + 1)",
           lambda n, a: Fraction(n - 5 - 2 * a["P_K"], 2 * a["P_K"] + 1)),
    # The literal text of (vii) and (viii) reuses the A-side invariants.
    "vii": ("(n - m_A - 2)/2 [literal]", lambda n, a: Fraction(n - a["m_A"] - 2, 2)),
    "viii": ("(n - 4 - P_kappa)/(P_kappa + 1) [literal]",
             lambda n, a: Fraction(n - 4 - a["P_kappa"], a["P_kappa"] + 1)),
}

_CNT_CORRECTED = {
    "vii": ("(n - m_K - 2)/2 [corrected]", lambda n, a: Fraction(n - a["m_K"] - 2, 2)),
    "viii": ("(n - 4 - P_K)/(P_K + 1) [corrected]",
             lambda n, a: Fraction(n - 4 - a["P_K"], a["P_K"] + 1)),
}


def connectivity_degree(case: str, n: int, arith: dict) -> dict:
    """Connectivity degree of the rank-n Stiefel complex per the stated case;
    returns the literal evaluation and, where the text looks inconsistent,
    the corrected variant alongside (never silently picking one)."""
    if case not in _CNT_LITERAL:
        raise ValueError(f"unknown connectivity case {case!r}")
    label, fn = _CNT_LITERAL[case]
    try:
        literal = _floor(fn(n, arith))
    except TypeError:
        literal = None  # an invariant needed by the formula is uncertified
    out = {"case": case, "formula": label, "literal": literal}
    if case in _CNT_CORRECTED:
        clabel, cfn = _CNT_CORRECTED[case]
        try:
            out["corrected"] = _floor(cfn(n, arith))
        except TypeError:
            out["corrected"] = None
        out["corrected_formula"] = clabel
    return out


# ---------------------------------------------------------------------------
# Sufficient conditions for sphericity of the skeleton posets
# ---------------------------------------------------------------------------


def intersection_connect_conditions(n: int, l: int, r: int, s: int, arith: dict) -> dict:
    """The eight numbered sufficient conditions for |X_l| of a double frame
    complement to be a wedge of (l-1)-spheres; needs r >= s >= 0."""
    if not (r >= s >= 0):
        raise ValueError("conditions are stated for r >= s >= 0")
    if l < 1:
        raise ValueError("l must be >= 1")
    a, b = r + l - 1, s + l - 1
    ma, pk = arith.get("m_A"), arith.get("P_kappa")
    mk, pK = arith.get("m_K"), arith.get("P_K")
    hen = arith.get("henselian", False)
    kfr = arith.get("kappa_formally_real", False)
    Kfr = arith.get("K_formally_real", False)
    conds = {
        "i": hen and ma is not None and n >= 2 * a + b + ma,
        "ii": hen and pk is not None and n >= 2 * pk * a + b + 1,
        "iii": hen and kfr and ma is not None and n >= a + b + ma,
        "iv": hen and kfr and pk is not None and n >= pk * a + b + 1,
        "v": mk is not None and n >= 2 * a + b + mk,
        "vi": pK is not None and n >= 2 * pK * a + b + 1,
        "vii": Kfr and mk is not None and n >= a + b + mk,
        "viii": Kfr and pK is not None and n >= pK * a + b + 1,
    }
    return {"conditions": conds, "any": any(conds.values())}


# ---------------------------------------------------------------------------
# Coefficient-system degree bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeClaim:
    """User-supplied claim that a coefficient system has the given degree at
    the given level, with sub-claims for its stabilization kernel and
    cokernel.  Degree < 0 means the system vanishes from the level on."""

    degree: int
    level: int
    kernel: Optional["DegreeClaim"] = None
    cokernel: Optional["DegreeClaim"] = None

    def validate(self) -> None:
        """Enforce the recursion: a degree-r (r >= 0) claim needs a kernel of
        degree -1 at the same level and a cokernel of degree r - 1 one level
        lower."""
        if self.degree < 0:
            if self.kernel is not None or self.cokernel is not None:
                raise ValueError("a vanishing system carries no sub-claims")
            return
        if self.kernel is None or self.cokernel is None:
            raise ValueError("degree >= 0 needs kernel and cokernel claims")
        if self.kernel.degree >= 0:
            raise ValueError("kernel claim must have negative degree")
        if self.kernel.level != self.level:
            raise ValueError("kernel claim must sit at the same level")
        if self.cokernel.degree != self.degree - 1:
            raise ValueError("cokernel claim must drop the degree by one")
        if self.cokernel.level != self.level - 1:
            raise ValueError("cokernel claim must drop the level by one")
        self.kernel.validate()
        self.cokernel.validate()


def sum_degree(r: int, s: int) -> int:
    """Degree of a direct sum of coefficient systems of degrees r and s."""
    return max(r, s)


# ---------------------------------------------------------------------------
# The golden parameter grid (exactly 200 rows)
# ---------------------------------------------------------------------------


def golden_grid() -> list[dict]:
    """Deterministic 200-point parameter grid covering every theorem case
    and corollary; used for the frozen range table."""
    rows = []
    ns = (8, 12, 20, 30, 50)
    case_values = {
        "i": ("m_A", 4), "ii": ("m_A", 4), "iii": ("P_kappa", 2), "iv": ("P_kappa", 2),
        "v": ("m_K", 4), "vi": ("m_K", 4), "vii": ("P_K", 2), "viii": ("P_K", 2),
    }
    for case in CONSTANT_CASES:
        name, val = case_values[case]
        for n in ns:
            inp = RangeInputs(n, val, henselian=True, formally_real=True)
            res = range_constant(case, inp)
            rows.append({"kind": "constant", "case": case, "n": n,
                         "invariant": f"{name}={val}",
                         "surjective": res.surjective_up_to,
                         "isomorphism": res.isomorphism_up_to})
    ab_values = {"i": ("m_A", 4), "ii": ("P_kappa", 2), "iii": ("P_kappa", 2),
                 "iv": ("m_K", 4), "v": ("P_K", 2), "vi": ("P_K", 2)}
    for case in ABELIAN_CASES:
        name, val = ab_values[case]
        for n in ns:
            inp = RangeInputs(n, val, henselian=True, formally_real=True)
            res = range_abelian(case, inp)
            rows.append({"kind": "abelian", "case": case, "n": n,
                         "invariant": f"{name}={val}",
                         "surjective": res.surjective_up_to,
                         "isomorphism": res.isomorphism_up_to})
    for case in CONSTANT_CASES:
        name, val = case_values[case]
        for n in ns:
            inp = RangeInputs(n, val, henselian=True, formally_real=True, degree=1)
            res = range_polynomial(case, inp)
            rows.append({"kind": "polynomial(r=1)", "case": case, "n": n,
                         "invariant": f"{name}={val}",
                         "surjective": res.surjective_up_to,
                         "isomorphism": res.isomorphism_up_to})
    for case in "abcd":
        val = 4 if case in "ab" else 2
        for n in ns:
            bound = intro_corollary_ranges(1, case, n, val, d=1)
            rows.append({"kind": "corollary-1(d=1)", "case": case, "n": n,
                         "invariant": f"{'m_K' if case in 'ab' else 'P_K'}={val}",
                         "surjective": bound, "isomorphism": bound})
    for case in "abcd":
        val = 4 if case in "ab" else 2
        for n in ns:
            bound = intro_corollary_ranges(2, case, n, val)
            rows.append({"kind": "corollary-2", "case": case, "n": n,
                         "invariant": f"{'m_K' if case in 'ab' else 'P_K'}={val}",
                         "surjective": bound, "isomorphism": bound})
    for n in ns:
        bound = intro_corollary_ranges(3, "", n, 0)
        rows.append({"kind": "corollary-3", "case": "-", "n": n,
                     "invariant": "-", "surjective": bound, "isomorphism": bound})
    arith = {"m_A": 4, "P_kappa": 2, "m_K": 4, "P_K": 2}
    for case in CONSTANT_CASES:
        for n in ns:
            got = connectivity_degree(case, n, arith)
            rows.append({"kind": "connectivity", "case": case, "n": n,
                         "invariant": "m=4, P=2",
                         "surjective": got["literal"],
                         "isomorphism": got.get("corrected", got["literal"])})
    for n in ns:
        bound = intro_corollary_ranges(1, "a", n, 4, d=2)
        rows.append({"kind": "corollary-1(d=2)", "case": "a", "n": n,
                     "invariant": "m_K=4", "surjective": bound,
                     "isomorphism": bound})
    assert len(rows) == 200, len(rows)
    return rows
