from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from homsys.exactfield import (
    QQ,
    Matrix,
    PrimeField,
    field_from_spec,
    kernel_basis,
    min_poly,
    solve,
    split_by_min_poly,
)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_identity_has_empty_kernel():
    assert kernel_basis(Matrix.identity(QQ, 2)) == []


def test_row_vector_kernel():
    (v,) = kernel_basis(Matrix(QQ, 1, 2, [[1, 1]]))
    assert v[0] == -v[1] != 0


def test_rationals_stay_reduced():
    m = Matrix(QQ, 1, 1, [[Fraction(6, -4)]])
    x = m.rows[0][0]
    assert x == Fraction(-3, 2) and x.denominator == 2


def test_prime_field_residues():
    F = PrimeField(7)
    assert F.reduce(-1) == 6
    assert F.reduce(Fraction(1, 3)) == 5  # 3 * 5 = 15 = 1 mod 7
    with pytest.raises(ValueError):
        PrimeField(9)


def test_field_spec_parsing():
    assert field_from_spec("rational") is QQ
    assert field_from_spec("p:101") == PrimeField(101)
    assert field_from_spec({"type": "prime", "p": 13}) == PrimeField(13)
    with pytest.raises(ValueError):
        QQ.parse(0.5)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_against_sympy(rows):
    m = Matrix(QQ, len(rows), len(rows[0]), rows)
    ker = kernel_basis(m)
    ref = sympy.Matrix(rows)
    assert len(ker) == len(ref.nullspace())
    assert m.rank() == ref.rank()
    assert m.rank() + len(ker) == m.ncols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_against_sympy(rows):
    m = Matrix(QQ, len(rows), len(rows), rows)
    ref = sympy.Matrix(rows)
    assert m.is_invertible() == (ref.det() != 0)
    if m.is_invertible():
        inv = m.inverse()
        assert inv @ m == Matrix.identity(QQ, m.nrows)
        assert [[sympy.Rational(x.numerator, x.denominator) for x in r] for r in inv.rows] == ref.inv().tolist()


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_is_exact_or_none(rows, rhs):
    m = Matrix(QQ, len(rows), len(rows[0]), rows)
    b = rhs[: m.nrows]
    x = solve(m, b)
    aug = sympy.Matrix(rows).row_join(sympy.Matrix(b))
    consistent = aug.rank() == sympy.Matrix(rows).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert list(m.apply(x)) == [Fraction(v) for v in b]


@pytest.mark.parametrize("F", [QQ, PrimeField(101)])
def test_prime_and_rational_rank_agree_on_small_matrix(F):
    m = Matrix(F, 3, 3, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert m.rank() == 2


def test_min_poly_and_primary_blocks():
    zero = Matrix.zeros(QQ, 2, 2)
    assert [b for b in split_by_min_poly(zero)] and sum(len(b) for b in split_by_min_poly(zero)) == 2
    assert len(split_by_min_poly(zero)) == 1
    diag = Matrix(QQ, 2, 2, [[1, 0], [0, 2]])
    blocks = split_by_min_poly(diag)
    assert sorted(len(b) for b in blocks) == [1, 1]
    j2 = Matrix(QQ, 2, 2, [[0, 1], [0, 0]])
    assert min_poly(j2) == [0, 0, 1]
    assert len(split_by_min_poly(j2)) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_primary_blocks_are_invariant(rows):
    phi = Matrix(QQ, len(rows), len(rows), rows)
    blocks = split_by_min_poly(phi)
    assert sum(len(b) for b in blocks) == phi.nrows
    for b in blocks:
        span = Matrix.from_columns(QQ, phi.nrows, b)
        for v in b:
            assert solve(span, phi.apply(v)) is not None
