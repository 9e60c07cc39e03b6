"""Isotropy and representation solvers.

The organizing fact: a non-singular form represents a unit a exactly when the
orthogonal sum with <-a> is isotropic, and a transversal zero of that sum
turns the isotropic vector into an explicit representation.  Isotropic
vectors are found exhaustively over prime fields, by Hensel lifting a
hyperbolic pair over truncated p-adics, and by bounded-height search over Q
rescaled into Z_(p).

Bounded search cannot prove negatives over infinite rings, so "not found
within bound" is a first-class outcome carrying its bound and is never
conflated with proven absence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from stiefel_lab import gfnum
from stiefel_lab.rings import (
    FINITE_FIELD,
    LOCALIZED,
    PADIC,
    RATIONALS,
    RingError,
    Scalar,
    hensel_root,
    residue,
    valuation,
)
from stiefel_lab.quadmod import (
    Frame,
    QuadraticModule,
    Vector,
    complement_core,
    diagonal_module,
    evaluate,
    intersect_complements,
    orthogonal_sum,
    polar,
    vec,
)

DEFAULT_HEIGHT_BOUND = 20

REGIME_EXHAUSTIVE = "exhaustive"
REGIME_HENSEL = "hensel-lifted"
REGIME_RESCALED = "rescaled-from-quotient-field"
REGIME_NOT_FOUND = "not-found-within-bound"


@dataclass(frozen=True)
class IsotropyWitness:
    """Outcome of an isotropy search, qualified by how it was obtained.

    vector is None exactly when nothing was found; in the exhaustive and
    hensel regimes that is a proof of anisotropy, in the bounded regime it
    only reports search exhaustion at `height_bound`.  Over truncated
    p-adics q(vector) = 0 means = 0 mod p^precision.
    """

    vector: Optional[Vector]
    regime: str
    precision: Optional[int] = None
    height_bound: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.vector is not None

    def __bool__(self) -> bool:
        return self.found


def _ff_first_zero(q: QuadraticModule) -> Optional[tuple[int, ...]]:
    p, n = q.ring.p, q.rank
    G = np.array(q.int_gram(), dtype=np.int64)
    X = gfnum.all_vectors(p, n)[1:]  # skip zero
    vals = gfnum.gram_values(G, X, p)
    hits = np.flatnonzero(vals == 0)
    if hits.size == 0:
        return None
    return tuple(int(c) for c in X[hits[0]])


def _int_gram_lift(q: QuadraticModule) -> tuple[list[list[int]], int]:
    """Integer matrix D*G and the positive scale D clearing denominators."""
    denoms = [Fraction(e.value).denominator for row in q.gram for e in row]
    scale = 1
    for d in denoms:
        scale = scale * d // math.gcd(scale, d)
    lifted = [[int(Fraction(e.value) * scale) for e in row] for row in q.gram]
    return lifted, scale


def _integer_shells(n: int, bound: int):
    """Nonzero integer vectors by increasing max-norm, lexicographic within."""
    for h in range(1, bound + 1):
        shell = []
        for v in itertools.product(range(-h, h + 1), repeat=n):
            if max(abs(c) for c in v) == h:
                shell.append(v)
        shell.sort()
        yield from shell


def _rational_definite(q: QuadraticModule) -> bool:
    """Exact Sylvester test: all leading principal minors strictly positive
    (or strictly alternating) makes the form definite over Q, hence
    anisotropic -- a proof, not a search outcome."""
    n = q.rank
    minors = []
    for k in range(1, n + 1):
        sub = [[Fraction(q.gram[i][j].value) for j in range(k)] for i in range(k)]
        det = Fraction(1)
        mat = [row[:] for row in sub]
        sign = 1
        for c in range(k):
            piv = next((i for i in range(c, k) if mat[i][c] != 0), None)
            if piv is None:
                det = Fraction(0)
                break
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                sign = -sign
            det *= mat[c][c]
            inv = 1 / mat[c][c]
            for i in range(c + 1, k):
                f = mat[i][c] * inv
                if f:
                    for j in range(c, k):
                        mat[i][j] -= f * mat[c][j]
        minors.append(sign * det)
    if all(m > 0 for m in minors):
        return True
    return all((m > 0) == (i % 2 == 1) and m != 0 for i, m in enumerate(minors))


def find_isotropic(
    q: QuadraticModule, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> IsotropyWitness:
    """Primitive vector with q = 0, per-ring strategy as documented above."""
    ring = q.ring
    if not q.is_nonsingular():
        raise ValueError("isotropy search expects a non-singular module")
    if q.rank == 0:
        return IsotropyWitness(None, REGIME_EXHAUSTIVE)
    if ring.kind == FINITE_FIELD:
        hit = _ff_first_zero(q)
        if hit is None:
            return IsotropyWitness(None, REGIME_EXHAUSTIVE)
        return IsotropyWitness(vec(ring, hit), REGIME_EXHAUSTIVE)
    if ring.kind == PADIC:
        return _padic_isotropic(q)
    if ring.kind in (LOCALIZED, RATIONALS):
        if _rational_definite(q):
            # Definite over Q: only the zero vector vanishes, exactly.
            return IsotropyWitness(None, REGIME_EXHAUSTIVE)
        lifted, _ = _int_gram_lift(q)
        n = q.rank
        for cand in _integer_shells(n, height_bound):
            total = 0
            for i in range(n):
                ci = cand[i]
                if not ci:
                    continue
                row = lifted[i]
                for j in range(n):
                    if cand[j]:
                        total += ci * row[j] * cand[j]
            if total == 0:
                v = vec(ring, cand)
                if ring.kind == LOCALIZED:
                    v = scale_to_primitive(v, ring.p)
                witness = IsotropyWitness(v, REGIME_RESCALED, height_bound=height_bound)
                assert evaluate(q, witness.vector).is_zero()
                return witness
        return IsotropyWitness(None, REGIME_NOT_FOUND, height_bound=height_bound)
    raise RingError(f"isotropy search not supported over {ring.label()}")


def _padic_isotropic(q: QuadraticModule) -> IsotropyWitness:
    """Hyperbolic pair mod p, then one Hensel root closes the value to zero."""
    from stiefel_lab.quadmod import reduce_mod_p

    ring = q.ring
    red = reduce_mod_p(q)
    hit = _ff_first_zero(red)
    if hit is None:
        return IsotropyWitness(None, REGIME_EXHAUSTIVE, precision=ring.precision)
    kappa = red.ring
    xbar = vec(kappa, hit)
    # Partner with B(x, y) = 1, then push q(y) to zero along x.
    ybar = None
    for j in range(red.rank):
        e = tuple(kappa.one if t == j else kappa.zero for t in range(red.rank))
        b = polar(red, xbar, e)
        if not b.is_zero():
            ybar = tuple(c / b for c in e)
            break
    if ybar is None:
        raise AssertionError("non-singular form with degenerate vector")
    t = evaluate(red, ybar)
    ybar = tuple(y - t * x for y, x in zip(ybar, xbar))
    u = vec(ring, [c.value for c in xbar])
    v = vec(ring, [c.value for c in ybar])
    a, b, c = evaluate(q, u), polar(q, u, v), evaluate(q, v)
    lam = hensel_root(ring, (a, b, c), 0)
    w = tuple(lam * ui + vi for ui, vi in zip(u, v))
    assert evaluate(q, w).is_zero()
    assert any(residue(c).value != 0 for c in w), "witness not primitive"
    return IsotropyWitness(w, REGIME_HENSEL, precision=ring.precision)


def scale_to_primitive(x: Sequence[Scalar], p: int) -> Vector:
    """Divide by a coordinate of minimal p-valuation: all valuations become
    nonnegative and some coordinate becomes 1 (so the vector is primitive)."""
    xs = tuple(x)
    if all(c.is_zero() for c in xs):
        raise ValueError("cannot rescale the zero vector")
    vals = [valuation(c, p) if c.ring.kind in (LOCALIZED, RATIONALS) else None for c in xs]
    if any(v is None for v in vals):
        raise RingError("rescaling needs scalars over Q or Z_(p)")
    best = min(range(len(xs)), key=lambda i: (vals[i], i))
    pivot = xs[best]
    from stiefel_lab.rings import localized_at

    target = localized_at(p)
    out = tuple(Scalar(target, Fraction(c.value) / Fraction(pivot.value)) for c in xs)
    return out


def transversal_zero(
    blocks: Sequence[QuadraticModule], height_bound: int = DEFAULT_HEIGHT_BOUND
) -> Optional[Vector]:
    """Zero vector of the orthogonal sum whose block components all have unit
    values.  Even block count and a semi-local ring are required; exhaustive
    over prime fields, residue transversal plus a Hensel adjustment over
    truncated p-adics, bounded search over Q and Z_(p)."""
    if not blocks:
        raise ValueError("need at least one block")
    ring = blocks[0].ring
    if any(b.ring != ring for b in blocks):
        raise RingError("blocks live over different rings")
    if len(blocks) % 2 != 0:
        raise ValueError("transversality needs an even number of blocks")
    if not ring.is_local:
        raise RingError("transversality implemented for semi-local rings here")
    if ring.kind == FINITE_FIELD:
        return _ff_transversal(blocks)
    if ring.kind == PADIC:
        return _padic_transversal(blocks)
    return _bounded_transversal(blocks, height_bound)


def _ff_transversal(blocks: Sequence[QuadraticModule]) -> Optional[Vector]:
    ring = blocks[0].ring
    p = ring.p
    per_block = []
    for b in blocks:
        G = np.array(b.int_gram(), dtype=np.int64)
        X = gfnum.all_vectors(p, b.rank)
        vals = gfnum.gram_values(G, X, p)
        keep = vals % p != 0
        per_block.append([(tuple(map(int, x)), int(v) % p) for x, v in zip(X[keep], vals[keep])])
    for combo in itertools.product(*per_block):
        if sum(v for _, v in combo) % p == 0:
            flat = tuple(c for x, _ in combo for c in x)
            return vec(ring, flat)
    return None


def _padic_transversal(blocks: Sequence[QuadraticModule]) -> Optional[Vector]:
    from stiefel_lab.quadmod import reduce_mod_p

    ring = blocks[0].ring
    reduced = [reduce_mod_p(b) for b in blocks]
    base = _ff_transversal(reduced)
    if base is None:
        return None
    total = orthogonal_sum_all(blocks)
    x0 = vec(ring, [c.value for c in base])
    # Direction with unit pairing keeps every block value in its residue
    # class while Newton closes the total value to zero.
    w = None
    for j in range(total.rank):
        e = tuple(ring.one if t == j else ring.zero for t in range(total.rank))
        if polar(total, x0, e).is_unit():
            w = e
            break
    if w is None:
        raise AssertionError("primitive vector with no unit pairing in a non-singular form")
    lam = hensel_root(ring, (evaluate(total, w), polar(total, x0, w), evaluate(total, x0)), 0)
    x = tuple(xi + lam * wi for xi, wi in zip(x0, w))
    assert evaluate(total, x).is_zero()
    offset = 0
    for b in blocks:
        part = x[offset: offset + b.rank]
        assert evaluate(b, part).is_unit(), "block value left the unit class"
        offset += b.rank
    return x


def _bounded_transversal(
    blocks: Sequence[QuadraticModule], height_bound: int
) -> Optional[Vector]:
    ring = blocks[0].ring
    total = orthogonal_sum_all(blocks)
    n = total.rank
    lifted, _ = _int_gram_lift(total)
    spans = [b.rank for b in blocks]
    for cand in _integer_shells(n, height_bound):
        total_val = 0
        for i in range(n):
            if cand[i]:
                for j in range(n):
                    if cand[j]:
                        total_val += cand[i] * lifted[i][j] * cand[j]
        if total_val != 0:
            continue
        x = vec(ring, cand)
        offset, ok = 0, True
        for b, span in zip(blocks, spans):
            if not evaluate(b, x[offset: offset + span]).is_unit():
                ok = False
                break
            offset += span
        if ok:
            return x
    return None


def orthogonal_sum_all(blocks: Sequence[QuadraticModule]) -> QuadraticModule:
    total = blocks[0]
    for b in blocks[1:]:
        total = orthogonal_sum(total, b)
    return total


def represents(
    q: QuadraticModule, a: Scalar, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> Optional[Vector]:
    """Vector v with q(v) = a, via isotropy of q + <-a>.

    The isotropic witness (v | x) gives v/x directly when its last coordinate
    is a unit; otherwise a transversal zero of the two-block decomposition
    supplies one.  None over a prime field is a proof; over Q and Z_(p) it
    only reports the bound."""
    ring = q.ring
    a = Scalar(ring, a)
    if not a.is_unit():
        raise ValueError("representation targets must be units")
    if q.rank == 0:
        return None
    aug = orthogonal_sum(q, diagonal_module(ring, [-a.value]))
    witness = find_isotropic(aug, height_bound)
    if not witness.found:
        return None
    w = witness.vector
    x = w[-1]
    if not x.is_unit():
        t = transversal_zero([q, diagonal_module(ring, [-a.value])], height_bound)
        if t is None:
            return None
        w, x = t, t[-1]
    v = tuple(c / x for c in w[:-1])
    got = evaluate(q, v)
    if ring.kind == PADIC:
        assert got == a
    else:
        assert got == a, f"representation check failed: {got} != {a}"
    return v


def hensel_isotropy_replay(p: int = 5, precision: int = 4, count: int = 50,
                           seed: int = 0, all_precisions: bool = False) -> dict:
    """Seed-fixed non-singular binary and ternary forms over truncated Z_p
    whose reductions are isotropic; every one must produce an exact isotropy
    witness by Hensel lifting (at every precision up to the target when
    all_precisions is set).  Returns counts for reporting."""
    import random as _random

    from stiefel_lab.rings import padic as _padic
    from stiefel_lab.quadmod import quadratic_module, reduce_mod_p

    rng = _random.Random(seed)
    done = 0
    generated = 0
    precisions = range(1, precision + 1) if all_precisions else [precision]
    while done < count:
        generated += 1
        if generated > 100 * count:
            raise RuntimeError("form generation stalled")
        rank = rng.choice([2, 3])
        rows = [[rng.randrange(p ** precision) for _ in range(rank)] for _ in range(rank)]
        for i in range(rank):
            for j in range(i):
                rows[i][j] = rows[j][i]
        ring = _padic(p, precision)
        q = quadratic_module(ring, rows)
        if not q.is_nonsingular():
            continue
        if not find_isotropic(reduce_mod_p(q)).found:
            continue
        for n_prec in precisions:
            ring_n = _padic(p, n_prec)
            qn = quadratic_module(ring_n, rows)
            w = find_isotropic(qn)
            if not (w.found and w.regime == REGIME_HENSEL):
                raise AssertionError(f"lift failed at precision {n_prec}: {rows}")
            if not evaluate(qn, w.vector).is_zero():
                raise AssertionError("witness does not vanish")
        done += 1
    return {"p": p, "precision": precision, "count": done, "seed": seed,
            "forms_generated": generated}


@dataclass(frozen=True)
class ConditionReport:
    """Which sufficient conditions for a unit vector in U-perp ∩ V-perp hold
    at (n, r, s), and whether one was found."""

    n: int
    r: int
    s: int
    conditions: tuple[tuple[str, bool, bool], ...]  # (label, applicable, holds)
    found: bool

    def any_holds(self) -> bool:
        return any(h for _, app, h in self.conditions if app)


def unit_vector_conditions(ring, n: int, r: int, s: int) -> list[tuple[str, bool, bool]]:
    """Evaluate the residue-side and quotient-side sufficient conditions using
    the package's certified invariant table for the ring."""
    from stiefel_lab.invariants import known_arithmetic

    inv = known_arithmetic(ring)
    out = []
    ma, pk = inv["m_A"], inv["P_kappa"]
    hen, kfr = inv["henselian"], inv["kappa_formally_real"]
    out.append(("residue-m", ma is not None, ma is not None and n >= ma + r + 2 * s))
    out.append(("residue-m-formally-real", kfr and ma is not None,
                kfr and ma is not None and n >= ma + r + s))
    out.append(("residue-P-henselian", hen and pk is not None,
                hen and pk is not None and n > 2 * pk * r + s))
    out.append(("residue-P-henselian-formally-real", hen and kfr and pk is not None,
                hen and kfr and pk is not None and n > pk * r + s))
    mk, pK = inv["m_K"], inv["P_K"]
    Kfr = inv["K_formally_real"]
    app2 = r >= s  # the quotient-field statement assumes r >= s
    out.append(("quotient-m", app2 and mk is not None,
                app2 and mk is not None and n >= mk + 2 * r + s))
    out.append(("quotient-m-formally-real", app2 and Kfr and mk is not None,
                app2 and Kfr and mk is not None and n >= mk + r + s))
    out.append(("quotient-P", app2 and pK is not None,
                app2 and pK is not None and n > 2 * pK * r + s))
    out.append(("quotient-P-formally-real", app2 and Kfr and pK is not None,
                app2 and Kfr and pK is not None and n > pK * r + s))
    return out


def unit_vector_in_complement(
    q: QuadraticModule,
    u_frame: Frame,
    v_frame: Frame,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
) -> tuple[Optional[Vector], ConditionReport]:
    """Unit vector orthogonal to both frames, searched first in the
    non-singular core and then (over finite fields) in the full intersection;
    returns the vector and the report of which sufficient conditions held."""
    ring = q.ring
    n, r, s = q.rank, len(u_frame), len(v_frame)
    conditions = tuple((lbl, app, holds) for lbl, app, holds in
                       unit_vector_conditions(ring, n, r, s))
    found_vec: Optional[Vector] = None
    core = complement_core(q, u_frame, v_frame)
    if core.rank:
        got = represents(core.restricted_module(), ring.one, height_bound)
        if got is not None:
            found_vec = core.to_ambient(got)
    if found_vec is None and ring.kind == FINITE_FIELD:
        inter = intersect_complements(q, u_frame.as_submodule(), v_frame.as_submodule())
        if inter.rank:
            sub = inter.restricted_module()
            G = np.array(sub.int_gram(), dtype=np.int64)
            X = gfnum.all_vectors(ring.p, sub.rank)
            vals = gfnum.gram_values(G, X, ring.p)
            hits = np.flatnonzero(vals == 1)
            if hits.size:
                found_vec = inter.to_ambient(vec(ring, tuple(map(int, X[hits[0]]))))
    if found_vec is not None:
        assert evaluate(q, found_vec) == ring.one
        for fr in (u_frame, v_frame):
            for fv in fr.vectors:
                assert polar(q, found_vec, fv).is_zero()
    report = ConditionReport(n, r, s, conditions, found_vec is not None)
    return found_vec, report
