"""Reflections, Cartan-Dieudonne factorization, frame transport, groups."""

import itertools
import random
from fractions import Fraction

import pytest

from stiefel_lab.rings import Scalar, finite_field, localized_at, rationals
from stiefel_lab.quadmod import (
    diagonal_module,
    euclidean,
    evaluate,
    frame,
    identity_matrix,
    mat_transpose,
    polar,
    quadratic_module,
    vec,
)
from stiefel_lab.isometry import (
    Isometry,
    abelianization_exponent,
    block_sum,
    cartan_dieudonne,
    enumerate_group,
    frame_transport,
    identity_isometry,
    orthonormal_extension,
    reflection,
    stabilizer_restrict,
)

F3 = finite_field(3)
F5 = finite_field(5)
Q = rationals()
Z5 = localized_at(5)


def test_reflection_examples():
    e2 = euclidean(Q, 2)
    tau = reflection(e2, [1, 0])
    assert tau.apply([1, 0]) == vec(Q, [-1, 0])
    assert tau.apply([0, 1]) == vec(Q, [0, 1])
    assert tau.apply([3, 4]) == vec(Q, [-3, 4])

    # Note (1, 2) over F_5 has q = 5 = 0, so it admits no reflection; (1, 1)
    # has the unit value 2.
    e2f = euclidean(F5, 2)
    with pytest.raises(ValueError):
        reflection(e2f, [1, 2])
    tau = reflection(e2f, [1, 1])
    assert tau.compose(tau).is_identity()
    assert tau.apply([1, 1]) == vec(F5, [-1, -1])

    # v = (1, 1): the defining formula evaluated directly as an oracle.
    tau = reflection(e2, [1, 1])
    x = vec(Q, [1, 0])
    coef = polar(e2, x, vec(Q, [1, 1])) / evaluate(e2, [1, 1])
    expected = tuple(xi - coef * vi for xi, vi in zip(x, vec(Q, [1, 1])))
    assert tau.apply(x) == expected == vec(Q, [0, -1])


def test_reflection_fixes_orthogonal_hyperplane():
    e3 = euclidean(F3, 3)
    tau = reflection(e3, [1, 1, 0])
    for w in ([1, 2, 0], [0, 0, 1]):
        assert polar(e3, w, [1, 1, 0]).is_zero()
        assert tau.apply(w) == vec(F3, w)


def test_reflection_needs_unit_value():
    with pytest.raises(ValueError):
        reflection(euclidean(F3, 3), [1, 1, 1])  # q = 3 = 0


def compose_all(q, vectors):
    out = identity_isometry(q)
    for v in vectors:
        out = out.compose(reflection(q, v))
    return out


def test_cartan_dieudonne_examples():
    e3 = euclidean(F3, 3)
    assert cartan_dieudonne(e3, identity_isometry(e3)) == []

    tau = reflection(e3, [1, 1, 0])
    refs = cartan_dieudonne(e3, tau)
    assert len(refs) == 1
    assert compose_all(e3, refs).matrix == tau.matrix

    e2 = euclidean(F3, 2)
    for phi in enumerate_group(e2):
        refs = cartan_dieudonne(e2, phi)
        assert len(refs) <= 4
        assert compose_all(e2, refs).matrix == phi.matrix


def cartan_dieudonne_group_sweep(n_max=3):
    """Factor every element of O_n(F_3) for n <= n_max; returns counts."""
    counts = {}
    for n in range(1, n_max + 1):
        q = euclidean(F3, n)
        group = enumerate_group(q)
        for phi in group:
            refs = cartan_dieudonne(q, phi)
            assert len(refs) <= 2 * n
            assert compose_all(q, refs).matrix == phi.matrix
        counts[n] = len(group)
    return counts


def test_cartan_dieudonne_all_of_o3_f3():
    counts = cartan_dieudonne_group_sweep(3)
    assert counts == {1: 2, 2: 8, 3: 48}
    assert counts[2] + counts[3] == 56


def random_z5_isometry(rng, n=3):
    """Random product of reflections over Z_(5), entries small fractions."""
    q = euclidean(Z5, n)
    out = identity_isometry(q)
    for _ in range(rng.randint(1, 4)):
        while True:
            v = [Fraction(rng.randint(-3, 3), rng.choice([1, 2, 3])) for _ in range(n)]
            if any(v):
                val = sum(Fraction(c) * Fraction(c) for c in v)
                if val.numerator % 5 != 0 and val.denominator % 5 != 0:
                    break
        out = out.compose(reflection(q, v))
    return q, out


def test_cartan_dieudonne_over_z5():
    rng = random.Random(0)
    for _ in range(20):
        q, phi = random_z5_isometry(rng)
        refs = cartan_dieudonne(q, phi)
        assert len(refs) <= 2 * q.rank
        assert compose_all(q, refs).matrix == phi.matrix


def test_frame_transport_examples():
    e3 = euclidean(F5, 3)
    f1 = frame(e3, [[1, 0, 0]])
    f2 = frame(e3, [[0, 1, 0]])
    phi = frame_transport(e3, f1, f2)
    assert phi.apply([1, 0, 0]) == vec(F5, [0, 1, 0])

    assert frame_transport(e3, f1, f1).apply([0, 1, 1]) is not None

    # All pairs of 1-frames in Euclidean 2-space over F_3 (4 unit vectors).
    e2 = euclidean(F3, 2)
    units = [[1, 0], [2, 0], [0, 1], [0, 2]]
    for a in units:
        for b in units:
            phi = frame_transport(e2, frame(e2, [a]), frame(e2, [b]))
            assert phi.apply(a) == vec(F3, b)


def test_orthonormal_extension_is_isometry():
    e4 = euclidean(F5, 4)
    # Two orthogonal non-standard unit vectors, found programmatically.
    from stiefel_lab.stiefel import unit_vectors

    units = unit_vectors(e4)
    v1 = next(u for u in units if sum(1 for c in u if not c.is_zero()) > 1)
    v2 = next(
        u for u in units
        if polar(e4, u, v1).is_zero() and u != v1 and u != tuple(-c for c in v1)
    )
    f = frame(e4, [[c.value for c in v1], [c.value for c in v2]])
    ext = orthonormal_extension(e4, f)
    cols = mat_transpose(ext.matrix)
    assert cols[0] == v1 and cols[1] == v2


def test_stabilizer_restrict_examples():
    e2 = euclidean(F3, 2)
    psi = reflection(e2, [1, 1])
    embedded = block_sum(psi, euclidean(F3, 1))
    back = stabilizer_restrict(embedded, 2)
    assert back.matrix == psi.matrix

    e3 = euclidean(F3, 3)
    ident = identity_isometry(e3)
    assert stabilizer_restrict(ident, 2).is_identity()

    with pytest.raises(ValueError):
        stabilizer_restrict(reflection(e3, [0, 0, 1]), 2)  # moves e3


def test_stabilizer_exhaustive_o3_f3():
    e3 = euclidean(F3, 3)
    e2 = euclidean(F3, 2)
    fixing = []
    for phi in enumerate_group(e3):
        if phi.apply([0, 0, 1]) == vec(F3, [0, 0, 1]):
            fixing.append(phi)
    assert len(fixing) == 8  # the O_2(F_3) block
    for phi in fixing:
        psi = stabilizer_restrict(phi, 2)
        again = block_sum(psi, euclidean(F3, 1))
        assert again.matrix == phi.matrix


def test_enumerate_group_examples():
    assert len(enumerate_group(euclidean(F3, 2))) == 8
    assert len(enumerate_group(euclidean(F5, 1))) == 2
    group3 = enumerate_group(euclidean(F3, 3))
    assert len(group3) == 48
    assert abelianization_exponent(group3) == 2


def test_abelianization_exponent_divides_two():
    for n, p in ((2, 3), (2, 5), (3, 3)):
        group = enumerate_group(euclidean(finite_field(p), n))
        assert abelianization_exponent(group) in (1, 2)


def test_group_closure_is_a_group():
    group = enumerate_group(euclidean(F3, 2))
    keys = {g.int_matrix() for g in group}
    for a in group:
        assert a.inverse().int_matrix() in keys
        for b in group:
            assert a.compose(b).int_matrix() in keys


def brute_orthogonal(p, n):
    """Independent oracle: every matrix with M^T M = I, by brute force."""
    import numpy as np

    out = set()
    eye = np.eye(n, dtype=np.int64)
    for flat in itertools.product(range(p), repeat=n * n):
        M = np.array(flat, dtype=np.int64).reshape(n, n)
        if ((M.T @ M) % p == eye).all():
            out.add(tuple(map(tuple, M)))
    return out


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3)])
def test_reflections_generate_everything(p, n):
    """The reflection closure equals the full isometry group, so hyperplane
    reflections generate; cross-checked against brute-force enumeration."""
    ring = finite_field(p)
    closure = {g.int_matrix() for g in enumerate_group(euclidean(ring, n))}
    assert closure == brute_orthogonal(p, n)


def test_o4_f3_order_and_abelianization():
    group = enumerate_group(euclidean(F3, 4))
    assert len(group) == 1152
    assert abelianization_exponent(group) == 2


def test_o3_f5_order():
    # |O_3| over a field with q elements is 2 q (q^2 - 1); here 2*5*24.
    assert len(enumerate_group(euclidean(F5, 3))) == 240
