from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import Echelon, nullspace, rank_of

from frobpoisson import GF, QQ, Matrix, homology_dim, kernel_basis, parse_field, rank
from frobpoisson.fields import FieldError, Mod
from frobpoisson.linalg import CompositionError, RowSpace, SingularMatrixError, inverse, quotient, solve

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    )


def test_rational_field_keeps_integers_and_fractions():
    assert QQ(3) == 3 and type(QQ(3)) is int
    assert QQ(Fraction(4, 2)) == 2 and type(QQ(Fraction(4, 2))) is int
    assert QQ.div(1, 3) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        QQ.div(1, 0)


def test_prime_field_arithmetic():
    F = GF(7)
    a, b = F(3), F(5)
    assert a + b == F(1)
    assert a * b == F(1)
    assert F.div(1, 3) == F(5)
    assert F(Fraction(1, 2)) == F(4)
    assert -a == F(4)
    assert not F(14)
    with pytest.raises(FieldError):
        F(Fraction(1, 7))


def test_characteristic_two_and_composites_rejected():
    with pytest.raises(FieldError):
        GF(2)
    with pytest.raises(FieldError):
        GF(9)
    with pytest.raises(FieldError):
        parse_field("F2")
    with pytest.raises(FieldError):
        parse_field("R")
    assert parse_field("F5") is GF(5)
    assert parse_field("Q") is QQ


def test_mixing_primes_is_an_error():
    with pytest.raises(FieldError):
        GF(5)(Mod(1, 7))
    with pytest.raises(FieldError):
        QQ(Mod(1, 7))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_oracle(rows):
    M = Matrix.from_dense(rows)
    assert rank(M) == rank_of([{j: x for j, x in enumerate(r) if x} for r in rows])


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([3, 5, 7]))
def test_rank_matches_oracle_mod_p(rows, p):
    F = GF(p)
    M = Matrix.from_dense([[F(x) for x in r] for r in rows], F)
    ech = Echelon()
    for r in rows:
        ech.add({j: F(x) for j, x in enumerate(r) if x % p})
    assert rank(M) == ech.rank


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_is_kernel_of_full_dimension(rows):
    M = Matrix.from_dense(rows)
    ker = kernel_basis(M)
    assert all(not M.apply(v) for v in ker)
    assert len(ker) == M.ncols - rank(M)
    assert len(ker) == len(nullspace([{j: x for j, x in enumerate(r) if x} for r in rows], M.ncols))
    if ker:
        assert rank(Matrix.from_rows(ker, M.ncols)) == len(ker)


@settings(max_examples=60, deadline=None)
@given(matrices(5, 5), st.lists(small, min_size=6, max_size=6))
def test_solve(rows, x):
    A = Matrix.from_dense(rows)
    x = {j: v for j, v in enumerate(x[: A.ncols]) if v}
    b = A.apply(x)
    sol = solve(A, b)
    assert sol is not None and A.apply(sol) == b


def test_solve_inconsistent():
    A = Matrix.from_dense([[1, 0], [2, 0]])
    assert solve(A, {0: 1, 1: 1}) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse(rows):
    M = Matrix.from_dense(rows)
    n = M.nrows
    if rank(M) < n:
        with pytest.raises(SingularMatrixError):
            inverse(M)
    else:
        assert M @ inverse(M) == Matrix.identity(n)


def test_rowspace_rref_invariants():
    rs = RowSpace(4)
    assert rs.add({0: 2, 1: 4})
    assert rs.add({1: 1, 3: 1})
    assert not rs.add({0: 1, 1: 3, 3: 1})
    assert rs.rank == 2
    assert rs.free_columns() == [2, 3]
    for p, row in rs.pivots.items():
        assert row[p] == 1
        assert all(q == p or q not in row for q in rs.pivots)
    assert rs.contains({0: 1, 1: 2})
    assert not rs.reduce({0: 1, 1: 2})


def test_quotient_project_lift():
    Q = quotient(3, [{0: 1, 1: -1}])
    assert Q.dim == 2
    assert Q.project({0: 1}) == Q.project({1: 1})
    for i in range(Q.dim):
        assert Q.project(Q.section(i)) == {i: 1}


def test_homology_dim_and_composition_guard():
    d1 = Matrix.from_dense([[1], [1]])  # k -> k^2
    d2 = Matrix.from_dense([[1, -1]])  # k^2 -> k
    h = homology_dim(d1, d2)
    assert (h.dim, h.kernel_dim, h.image_rank) == (0, 1, 1)
    with pytest.raises(CompositionError):
        homology_dim(d1, Matrix.from_dense([[1, 0]]))
    h0 = homology_dim(Matrix.zero(2, 1), d2)
    assert h0.dim == 1 and not d2.apply(h0.representatives[0])


def test_matrix_shape_errors():
    with pytest.raises(ValueError):
        Matrix.from_dense([[1, 2]]) @ Matrix.from_dense([[1, 2]])
    with pytest.raises(ValueError):
        homology_dim(Matrix.zero(3, 1), Matrix.zero(1, 2))
