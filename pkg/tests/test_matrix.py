"""Exact linear algebra kernel: ranks, kernels, solves, certificates."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgkit.errors import FieldMismatchError
from dgkit.fields import GF, QQ
from dgkit.matrix import Mat, extend_columns_to_basis, invert, kron, rank_kernel_image


def rand_mat(rng, field, rows, cols, density=0.7, span=5):
    def entry():
        if rng.random() > density:
            return field.zero()
        return field.from_int(rng.randint(-span, span))
    return Mat(field, rows, cols, [[entry() for _ in range(cols)] for _ in range(rows)])


def oracle_rank(m: Mat) -> int:
    """Independent elimination: first-nonzero pivoting, forward-only, on a copy."""
    fld = m.field
    rows = [list(r) for r in m.entries]
    rank = 0
    col = 0
    while rank < len(rows) and col < m.cols:
        piv = None
        for i in range(rank, len(rows)):
            if not fld.is_zero(rows[i][col]):
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = fld.inv(rows[rank][col])
        rows[rank] = [fld.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not fld.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [fld.sub(a, fld.mul(f, b)) for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def test_identity_rank():
    m = Mat.identity(QQ, 2)
    rank, ker, img = rank_kernel_image(m)
    assert rank == 2 and ker.cols == 0 and img.cols == 2


def test_zero_matrix_kernel():
    m = Mat.zero(QQ, 1, 1)
    rank, ker, img = rank_kernel_image(m)
    assert rank == 0 and ker.cols == 1 and img.cols == 0


def test_rank_matches_independent_oracle_f7(rng):
    for _ in range(25):
        m = rand_mat(rng, GF(7), 5, 7)
        rank, ker, img = rank_kernel_image(m)
        assert rank == oracle_rank(m)
        assert rank + ker.cols == m.cols
        assert (m @ ker).is_zero()
        assert img.rank() == rank


def test_rank_transpose_invariance(rng, field):
    for _ in range(20):
        m = rand_mat(rng, field, rng.randint(0, 5), rng.randint(0, 5))
        assert m.rank() == m.transpose().rank()


def test_solve_identity():
    b = Mat(QQ, 2, 1, [[Fraction(3)], [Fraction(-5, 2)]])
    assert Mat.identity(QQ, 2).solve(b) == b


def test_solve_zero_matrix_certificate():
    m = Mat.zero(QQ, 2, 2)
    b = Mat(QQ, 2, 1, [[Fraction(1)], [Fraction(0)]])
    x, y = m.solve_with_certificate(b)
    assert x is None
    assert (y @ m).is_zero()
    assert not (y @ b).is_zero()


def test_solve_construct_roundtrip(rng, field):
    for _ in range(20):
        m = rand_mat(rng, field, 4, 3)
        x0 = rand_mat(rng, field, 3, 1)
        b = m @ x0
        x = m.solve(b)
        assert x is not None
        assert m @ x == b


def test_mixed_field_rejected():
    a = Mat.identity(QQ, 2)
    b = Mat.identity(GF(7), 2)
    with pytest.raises(FieldMismatchError):
        _ = a @ b


def test_exactness_roundtrip_through_strings(rng):
    m = rand_mat(rng, QQ, 4, 4, span=50)
    m2 = Mat(QQ, 4, 4, [[QQ.parse(QQ.render(v)) for v in row] for row in m.entries])
    assert m == m2
    # a denominator-heavy solve stays exact
    scaled = m.scale(Fraction(1, 97))
    if scaled.rank() == 4:
        x = scaled.solve(Mat.identity(QQ, 4).col(0))
        assert scaled @ x == Mat.identity(QQ, 4).col(0)


def test_extend_columns_to_basis(rng):
    m = rand_mat(rng, QQ, 5, 2)
    comp = extend_columns_to_basis(m)
    full = m.image_basis().hstack(
        Mat.from_columns(QQ, 5, [Mat.basis_column(QQ, 5, i).column_values(0) for i in comp]))
    assert full.rank() == 5


def test_invert(rng):
    for _ in range(10):
        m = rand_mat(rng, QQ, 3, 3, density=1.0)
        if m.rank() == 3:
            assert m @ invert(m) == Mat.identity(QQ, 3)


def test_kron_row_major_vec_identity(rng):
    # vec(A X B^t) == (A kron B) vec(X) with row-major vec
    a = rand_mat(rng, QQ, 2, 3)
    b = rand_mat(rng, QQ, 2, 2)
    x = rand_mat(rng, QQ, 3, 2)
    prod = a @ x @ b.transpose()
    vec_x = Mat.column(QQ, [x.entries[i][j] for i in range(3) for j in range(2)])
    vec_p = Mat.column(QQ, [prod.entries[i][j] for i in range(2) for j in range(2)])
    assert kron(a, b) @ vec_x == vec_p


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=2, max_size=4))
def test_rank_plus_nullity_property(rows):
    m = Mat(QQ, len(rows), 3, [[Fraction(v) for v in r] for r in rows])
    rank, ker, img = rank_kernel_image(m)
    assert rank + ker.cols == 3
    assert (m @ ker).is_zero()
