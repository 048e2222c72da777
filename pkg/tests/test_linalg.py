import random

import pytest

from ramify.errors import DimensionMismatch, SingularMatrix
from ramify.fields import field_create
from ramify.linalg import MatrixFF, fixed_subspace

F3 = field_create(3, 1)
F4 = field_create(2, 2)


def all_vectors(field, n):
    vecs = [()]
    for _ in range(n):
        vecs = [v + (x,) for v in vecs for x in field.elements()]
    return vecs


def fixed_set_oracle(mats):
    """Enumerate every vector and keep the ones fixed by all matrices."""
    field, n = mats[0].field, mats[0].n
    out = []
    for v in all_vectors(field, n):
        ok = True
        for m in mats:
            image = tuple(
                sum((row[j] * v[j] for j in range(n)), field.zero())
                for row in m.rows
            )
            if image != v:
                ok = False
                break
        if ok:
            out.append(v)
    return set(out)


def span(field, basis, n):
    out = {tuple(field.zero() for _ in range(n))}
    for vec in basis:
        new = set()
        for c in field.elements():
            scaled = tuple(c * x for x in vec)
            for w in out:
                new.add(tuple(a + b for a, b in zip(scaled, w)))
        out |= new
    # close under addition (enough for the tiny spaces in these tests)
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                s = tuple(x + y for x, y in zip(a, b))
                if s not in out:
                    out.add(s)
                    changed = True
    return out


def test_identity_fixes_everything():
    ident = MatrixFF.identity(F3, 2)
    dim, basis = fixed_subspace([ident])
    assert dim == 2


def test_diagonal_with_root_of_unity():
    zeta = F4.generator()
    m = MatrixFF(F4, [[F4.one(), F4.zero()], [F4.zero(), zeta]])
    dim, basis = fixed_subspace([m])
    assert dim == 1
    assert basis[0][1] == F4.zero()


def test_swap_matrix_fixed_line():
    swap = MatrixFF.from_int_rows(F3, [[0, 1], [1, 0]])
    dim, basis = fixed_subspace([swap])
    assert dim == 1
    assert span(F3, basis, 2) == fixed_set_oracle([swap])


def test_fixed_dim_invariant_under_conjugation():
    rng = random.Random(7)
    mats = [
        MatrixFF.from_int_rows(F3, [[1, 1, 0], [0, 1, 0], [0, 0, 2]]),
        MatrixFF.from_int_rows(F3, [[1, 0, 0], [0, 0, 1], [0, 2, 0]]),
    ]
    base_dim = fixed_subspace(mats)[0]
    for _ in range(5):
        while True:
            c = MatrixFF(
                F3,
                [[F3.from_int(rng.randrange(3)) for _ in range(3)] for _ in range(3)],
            )
            if c.is_invertible():
                break
        conj = [c * m * c.inverse() for m in mats]
        assert fixed_subspace(conj)[0] == base_dim


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fixed_subspace([])
    with pytest.raises(DimensionMismatch):
        fixed_subspace([MatrixFF.identity(F3, 2), MatrixFF.identity(F3, 3)])


def test_matrix_inverse_and_rank():
    m = MatrixFF.from_int_rows(F3, [[1, 2], [1, 1]])
    assert m.rank() == 2
    assert (m * m.inverse()).is_identity()
    singular = MatrixFF.from_int_rows(F3, [[1, 2], [2, 1]])
    assert singular.rank() == 1
    with pytest.raises(SingularMatrix):
        singular.inverse()


def test_matrix_power_and_subtraction():
    m = MatrixFF.from_int_rows(F3, [[1, 1], [0, 1]])
    assert (m ** 3).is_identity()
    nil = m - MatrixFF.identity(F3, 2)
    assert (nil ** 2).is_zero()
