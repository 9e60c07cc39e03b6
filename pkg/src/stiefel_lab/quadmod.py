"""Quadratic modules as symmetric Gram matrices, with exact operations.

Convention: a rank-n module stores a symmetric Gram matrix G and

    q(x)      = x^T G x,
    B_q(x, y) = 2 x^T G y,

so one matrix carries both the form and its polar form (2 is a unit in every
ring where forms are manipulated).  A diagonal form <a_1, ..., a_n> has
G = diag(a_1, ..., a_n); Euclidean n-space has the identity Gram matrix.

Vectors are tuples of Scalars; matrices are tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from stiefel_lab.rings import (
    FINITE_FIELD,
    INTEGERS,
    LOCALIZED,
    PADIC,
    RATIONALS,
    INFINITY,
    RingDescriptor,
    RingError,
    Scalar,
    padic_unit_part,
    residue,
    valuation,
)

Vector = tuple[Scalar, ...]
Matrix = tuple[Vector, ...]


class PrecisionError(RingError):
    """A truncated p-adic elimination would need a non-unit pivot."""


def vec(ring: RingDescriptor, entries: Sequence) -> Vector:
    return tuple(Scalar(ring, e) for e in entries)


def mat(ring: RingDescriptor, rows: Sequence[Sequence]) -> Matrix:
    return tuple(vec(ring, row) for row in rows)


def std_basis_vector(ring: RingDescriptor, n: int, i: int) -> Vector:
    return vec(ring, [1 if j == i else 0 for j in range(n)])


def mat_vec(rows: Matrix, x: Vector) -> Vector:
    return tuple(sum((r[j] * x[j] for j in range(1, len(x))), r[0] * x[0]) for r in rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum((ra[k] * cb[k] for k in range(1, len(ra))), ra[0] * cb[0]) for cb in bt)
        for ra in a
    )


def mat_transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def identity_matrix(ring: RingDescriptor, n: int) -> Matrix:
    return tuple(std_basis_vector(ring, n, i) for i in range(n))


def _bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(rows: Matrix, ring: RingDescriptor) -> Scalar:
    """Exact determinant, via integer lifts for residue rings."""
    n = len(rows)
    if n == 0:
        return ring.one
    if ring.kind in (FINITE_FIELD, PADIC, INTEGERS):
        lifted = [[int(e.value) for e in row] for row in rows]
        return Scalar(ring, _bareiss_det(lifted))
    frac = [[Fraction(e.value) for e in row] for row in rows]
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if frac[i][k] != 0), None)
        if piv is None:
            return ring.zero
        if piv != k:
            frac[k], frac[piv] = frac[piv], frac[k]
            out = -out
        out *= frac[k][k]
        inv = 1 / frac[k][k]
        for i in range(k + 1, n):
            f = frac[i][k] * inv
            if f:
                for j in range(k, n):
                    frac[i][j] -= f * frac[k][j]
    return Scalar(ring, out)


def _pivot_valuation(x: Scalar):
    kind = x.ring.kind
    if kind == LOCALIZED:
        return valuation(x)
    if kind == PADIC:
        return padic_unit_part(x)[0]
    return 0 if not x.is_zero() else INFINITY


def kernel(rows: Matrix, ring: RingDescriptor, ncols: Optional[int] = None) -> list[Vector]:
    """Basis of {x : rows . x = 0} with valuation-aware pivoting.

    Over Z_(p) pivots are chosen with minimal valuation so the returned basis
    reduces to a linearly independent family mod p (a direct summand).  Over
    truncated p-adics only unit pivots keep full precision; anything else
    raises PrecisionError rather than silently degrading.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    a = [list(r) for r in rows]
    nrows = len(a)
    pivots: list[int] = []
    r = 0
    for _ in range(ncols):
        best = None
        for i in range(r, nrows):
            for c in range(ncols):
                if c in pivots:
                    continue
                v = _pivot_valuation(a[i][c])
                if v == INFINITY:
                    continue
                if best is None or v < best[0]:
                    best = (v, i, c)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, c = best
        if ring.kind == PADIC and v > 0:
            raise PrecisionError(
                "elimination over truncated p-adics hit a non-unit pivot; "
                "raise the working precision"
            )
        a[r], a[i] = a[i], a[r]
        inv_piv = a[r][c]
        a[r] = [e / inv_piv for e in a[r]]
        for i2 in range(nrows):
            if i2 != r and not a[i2][c].is_zero():
                f = a[i2][c]
                a[i2] = [e - f * pe for e, pe in zip(a[i2], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        x = [ring.zero] * ncols
        x[fc] = ring.one
        for i, pc in enumerate(pivots):
            x[pc] = -a[i][fc]
        out.append(tuple(x))
    return out


def row_rank(rows: Matrix, ring: RingDescriptor) -> int:
    if not rows:
        return 0
    return len(rows) - len(kernel(mat_transpose(rows), ring, ncols=len(rows)))


@dataclass(frozen=True)
class QuadraticModule:
    """Free quadratic module presented by a symmetric Gram matrix."""

    ring: RingDescriptor
    gram: Matrix

    def __post_init__(self) -> None:
        n = len(self.gram)
        for row in self.gram:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be exactly symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def evaluate(self, x: Sequence) -> Scalar:
        return evaluate(self, x)

    def polar(self, x: Sequence, y: Sequence) -> Scalar:
        return polar(self, x, y)

    def det(self) -> Scalar:
        return det(self.gram, self.ring)

    def is_nonsingular(self) -> bool:
        return self.det().is_unit()

    def int_gram(self) -> list[list[int]]:
        """Residue Gram matrix as plain ints (finite fields only)."""
        if self.ring.kind != FINITE_FIELD:
            raise RingError("int_gram is a finite-field accessor")
        return [[e.value for e in row] for row in self.gram]

    def scale_vector(self, raw: Sequence) -> Vector:
        return vec(self.ring, raw)


def quadratic_module(ring: RingDescriptor, rows: Sequence[Sequence]) -> QuadraticModule:
    return QuadraticModule(ring, mat(ring, rows))


def diagonal_module(ring: RingDescriptor, entries: Sequence) -> QuadraticModule:
    n = len(entries)
    rows = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return quadratic_module(ring, rows)


def euclidean(ring: RingDescriptor, n: int) -> QuadraticModule:
    return diagonal_module(ring, [1] * n)


def _as_vector(q: QuadraticModule, x: Sequence) -> Vector:
    if len(x) != q.rank:
        raise ValueError(f"vector length {len(x)} does not match rank {q.rank}")
    return vec(q.ring, x)


def evaluate(q: QuadraticModule, x: Sequence) -> Scalar:
    x = _as_vector(q, x)
    total = q.ring.zero
    for i in range(q.rank):
        if x[i].is_zero():
            continue
        for j in range(q.rank):
            if not x[j].is_zero():
                total = total + x[i] * q.gram[i][j] * x[j]
    return total


def polar(q: QuadraticModule, x: Sequence, y: Sequence) -> Scalar:
    """B(x, y) = q(x + y) - q(x) - q(y) = 2 x^T G y; the factor of 2 lives
    here, not in the Gram matrix."""
    x, y = _as_vector(q, x), _as_vector(q, y)
    total = q.ring.zero
    for i in range(q.rank):
        if x[i].is_zero():
            continue
        for j in range(q.rank):
            if not y[j].is_zero():
                total = total + x[i] * q.gram[i][j] * y[j]
    return total + total


def orthogonal_sum(q1: QuadraticModule, q2: QuadraticModule) -> QuadraticModule:
    if q1.ring != q2.ring:
        raise RingError("orthogonal sum needs a common ring")
    n1, n2 = q1.rank, q2.rank
    zero = q1.ring.zero
    rows = []
    for i in range(n1):
        rows.append(tuple(q1.gram[i]) + (zero,) * n2)
    for i in range(n2):
        rows.append((zero,) * n1 + tuple(q2.gram[i]))
    return QuadraticModule(q1.ring, tuple(rows))


def hyperbolic_space(ring: RingDescriptor, n: int) -> QuadraticModule:
    """n<1,-1>, the split form of rank 2n."""
    return diagonal_module(ring, [1 if i % 2 == 0 else -1 for i in range(2 * n)])


@dataclass(frozen=True)
class Submodule:
    """Direct summand of a quadratic module, stored by an explicit basis."""

    ambient: QuadraticModule
    basis: Matrix  # rows are basis vectors in ambient coordinates

    def __post_init__(self) -> None:
        ring = self.ambient.ring
        k = len(self.basis)
        for b in self.basis:
            if len(b) != self.ambient.rank:
                raise ValueError("basis vector has wrong length")
        if k == 0:
            return
        if ring.kind in (LOCALIZED, PADIC):
            kappa = ring.residue_ring()
            reduced = tuple(tuple(residue(e) for e in row) for row in self.basis)
            if row_rank(reduced, kappa) != k:
                raise ValueError("basis does not reduce to independent vectors mod p (not a direct summand)")
        else:
            check_ring = RingDescriptor(RATIONALS) if ring.kind == INTEGERS else ring
            rows = tuple(tuple(Scalar(check_ring, e.value) for e in row) for row in self.basis)
            if row_rank(rows, check_ring) != k:
                raise ValueError("basis is not linearly independent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def restricted_module(self) -> QuadraticModule:
        """Gram matrix of the ambient form restricted to this basis."""
        g = mat_mul(mat_mul(self.basis, self.ambient.gram), mat_transpose(self.basis))
        return QuadraticModule(self.ambient.ring, g)

    def to_ambient(self, coords: Sequence) -> Vector:
        coords = vec(self.ambient.ring, coords)
        n = self.ambient.rank
        out = [self.ambient.ring.zero] * n
        for c, b in zip(coords, self.basis):
            for j in range(n):
                out[j] = out[j] + c * b[j]
        return tuple(out)


@dataclass(frozen=True)
class Frame:
    """Ordered tuple of pairwise-orthogonal unit vectors."""

    ambient: QuadraticModule
    vectors: Matrix

    def __post_init__(self) -> None:
        one = self.ambient.ring.one
        for i, v in enumerate(self.vectors):
            if evaluate(self.ambient, v) != one:
                raise ValueError(f"frame vector {i} does not have value 1")
            for j in range(i):
                if not polar(self.ambient, self.vectors[i], self.vectors[j]).is_zero():
                    raise ValueError(f"frame vectors {i}, {j} are not orthogonal")

    def __len__(self) -> int:
        return len(self.vectors)

    def as_submodule(self) -> Submodule:
        return Submodule(self.ambient, self.vectors)


def frame(q: QuadraticModule, raw_vectors: Sequence[Sequence]) -> Frame:
    return Frame(q, tuple(vec(q.ring, v) for v in raw_vectors))


def _unit_value_probe(q: QuadraticModule) -> Optional[Vector]:
    """A vector of unit q-value: probe e_i, then e_i + e_j, then e_i + e_j + e_k.

    Over a local ring with 2 a unit, non-singularity guarantees success within
    the two-vector probes already (the polar identity makes q(e_i + e_j) a
    unit whenever B(e_i, e_j) is and both diagonal values are not).
    """
    ring, n = q.ring, q.rank
    for i in range(n):
        if q.gram[i][i].is_unit():
            return std_basis_vector(ring, n, i)
    for i in range(n):
        for j in range(i + 1, n):
            v = tuple(
                ring.one if k in (i, j) else ring.zero for k in range(n)
            )
            if evaluate(q, v).is_unit():
                return v
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                v = tuple(
                    ring.one if t in (i, j, k) else ring.zero for t in range(n)
                )
                if evaluate(q, v).is_unit():
                    return v
    return None


def diagonalize(q: QuadraticModule) -> tuple[Matrix, tuple[Scalar, ...]]:
    """Orthogonal basis with unit diagonal values: returns (P, entries) with
    P^T G P = diag(entries) exactly, columns of P forming the basis."""
    ring = q.ring
    if not ring.is_local or not ring.two_is_unit:
        raise RingError("diagonalization needs a local ring with 2 a unit")
    if not q.is_nonsingular():
        raise ValueError("cannot diagonalize a singular module")
    n = q.rank
    if n == 0:
        return tuple(), tuple()
    v = _unit_value_probe(q)
    if v is None:
        raise ValueError("no unit-length vector found; form should be singular")
    a = evaluate(q, v)
    comp = orthogonal_complement(q, Submodule(q, (v,)))
    sub = comp.restricted_module()
    p_sub, entries_sub = diagonalize(sub)
    columns = [v]
    for col in mat_transpose(p_sub) if p_sub else ():
        columns.append(comp.to_ambient(col))
    p_matrix = mat_transpose(tuple(columns))
    entries = (a,) + entries_sub
    check = mat_mul(mat_mul(mat_transpose(p_matrix), q.gram), p_matrix)
    for i in range(n):
        for j in range(n):
            want = entries[i] if i == j else ring.zero
            if check[i][j] != want:
                raise AssertionError("diagonalization verification failed")
        if not entries[i].is_unit():
            raise AssertionError("diagonal entry is not a unit")
    return p_matrix, entries


def orthogonal_complement(q: QuadraticModule, u: Submodule) -> Submodule:
    """U-perp = kernel of x -> B(x, -)|_U, as a direct summand."""
    if not q.is_nonsingular():
        raise ValueError("ambient module must be non-singular")
    if u.rank == 0:
        return Submodule(q, identity_matrix(q.ring, q.rank))
    rows = mat_mul(u.basis, q.gram)
    basis = kernel(rows, q.ring, ncols=q.rank)
    out = Submodule(q, tuple(basis))
    for b in out.basis:
        for uv in u.basis:
            if not polar(q, b, uv).is_zero():
                raise AssertionError("complement basis fails orthogonality")
    return out


def intersect_complements(q: QuadraticModule, u: Submodule, v: Submodule) -> Submodule:
    """U-perp intersected with V-perp, via one stacked kernel computation."""
    if u.rank == 0 and v.rank == 0:
        return Submodule(q, identity_matrix(q.ring, q.rank))
    rows = mat_mul(u.basis + v.basis, q.gram)
    return Submodule(q, tuple(kernel(rows, q.ring, ncols=q.rank)))


def split_radical(q: QuadraticModule) -> tuple[Submodule, Submodule]:
    """Split V = R + W with W free non-singular and q(R) inside the maximal
    ideal: the radical of the reduction is computed over the residue field and
    a complement of it is lifted."""
    ring = q.ring
    if not ring.is_local or not ring.two_is_unit:
        raise RingError("radical splitting needs a local ring with 2 a unit")
    n = q.rank
    if ring.kind in (LOCALIZED, PADIC):
        kappa = ring.residue_ring()
        reduced = reduce_mod_p(q)
    else:
        kappa = ring
        reduced = q
    rad_basis = kernel(reduced.gram, kappa, ncols=n)
    # Complete the radical to a basis of the reduction; the spanning standard
    # vectors at non-pivot positions of the radical matrix do the job.
    if rad_basis:
        rows = [list(r) for r in rad_basis]
        pivots = []
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = rows[r][c]
            rows[r] = [e / inv for e in rows[r]]
            for i2 in range(len(rows)):
                if i2 != r and not rows[i2][c].is_zero():
                    f = rows[i2][c]
                    rows[i2] = [e - f * pe for e, pe in zip(rows[i2], rows[r])]
            pivots.append(c)
            r += 1
        w_positions = [c for c in range(n) if c not in pivots]
    else:
        w_positions = list(range(n))
    w_basis = tuple(std_basis_vector(ring, n, c) for c in w_positions)
    w = Submodule(q, w_basis)
    w_form = w.restricted_module()
    if w_basis and not w_form.is_nonsingular():
        raise AssertionError("lifted complement of the radical is singular")
    if len(w_positions) == n:
        return Submodule(q, tuple()), w
    if not w_positions:
        return Submodule(q, identity_matrix(ring, n)), w
    r_sub = orthogonal_complements_inside(q, w)
    return r_sub, w


def orthogonal_complements_inside(q: QuadraticModule, w: Submodule) -> Submodule:
    """Complement of a non-singular W inside a possibly singular ambient."""
    rows = mat_mul(w.basis, q.gram)
    basis = kernel(rows, q.ring, ncols=q.rank)
    return Submodule(q, tuple(basis))


def complement_core(
    q: QuadraticModule, u_frame: Frame, v_frame: Frame
) -> Submodule:
    """Non-singular W inside U-perp intersect V-perp with
    rank(W) >= n - r - 2s; the W-part of the radical splitting."""
    n, r, s = q.rank, len(u_frame), len(v_frame)
    inter = intersect_complements(q, u_frame.as_submodule(), v_frame.as_submodule())
    sub_form = inter.restricted_module()
    _, w_inside = split_radical(sub_form)
    ambient_basis = tuple(inter.to_ambient(row) for row in w_inside.basis)
    w = Submodule(q, ambient_basis)
    if w.rank < n - r - 2 * s:
        raise AssertionError(
            f"core has rank {w.rank} < n - r - 2s = {n - r - 2 * s}"
        )
    if w.rank and not w.restricted_module().is_nonsingular():
        raise AssertionError("core is singular")
    return w


def hyperbolic_module(ring: RingDescriptor, n: int) -> tuple[QuadraticModule, Matrix]:
    """Rank-2n module (M + M*, q(m, f) = f(m)) together with an explicit
    isometry witness onto n<1,-1>: returns (module, P) with P^T G P the
    diagonal Gram of n<1,-1>."""
    if not ring.two_is_unit:
        raise RingError("the standard witness needs 2 invertible")
    half = ring.one / ring.scalar(2)
    zero = ring.zero
    rows = []
    for i in range(2 * n):
        row = [zero] * (2 * n)
        if i < n:
            row[n + i] = half
        else:
            row[i - n] = half
        rows.append(tuple(row))
    q = QuadraticModule(ring, tuple(rows))
    cols = []
    for i in range(n):
        plus = [zero] * (2 * n)
        plus[i] = ring.one
        plus[n + i] = ring.one
        minus = [zero] * (2 * n)
        minus[i] = ring.one
        minus[n + i] = -ring.one
        cols.append(tuple(plus))
        cols.append(tuple(minus))
    p_matrix = mat_transpose(tuple(cols))
    target = hyperbolic_space(ring, n)
    if n:
        check = mat_mul(mat_mul(mat_transpose(p_matrix), q.gram), p_matrix)
        if check != target.gram:
            raise AssertionError("hyperbolic witness failed verification")
    return q, p_matrix


def reduce_mod_p(q: QuadraticModule) -> QuadraticModule:
    """Entrywise residue of the Gram matrix over the residue field."""
    if q.ring.kind not in (LOCALIZED, PADIC):
        raise RingError("reduction needs a p-aware local ring")
    rows = tuple(tuple(residue(e) for e in row) for row in q.gram)
    return QuadraticModule(q.ring.residue_ring(), rows)


def is_isometric_ff(q1: QuadraticModule, q2: QuadraticModule) -> bool:
    """Isometry test over a prime field: equal rank and square discriminant
    ratio classify non-singular forms completely."""
    from stiefel_lab.rings import is_square

    if q1.ring.kind != FINITE_FIELD or q1.ring != q2.ring:
        raise RingError("finite-field isometry test needs one common prime field")
    d1, d2 = q1.det(), q2.det()
    if not (d1.is_unit() and d2.is_unit()):
        raise ValueError("both forms must be non-singular")
    if q1.rank != q2.rank:
        return False
    return is_square(d1 / d2) is not None
