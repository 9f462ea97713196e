import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.ffalg import (
    SUPPORTED_ORDERS,
    FieldError,
    PolyFq,
    SingularMatrix,
    all_matrices,
    batch_inverse,
    batch_rank,
    centralizer_space,
    charpoly_by_expansion,
    decode,
    encode,
    field_for_order,
    identity,
    invariant_factor_key,
    invariant_factors,
    mat_inv,
    mat_rank,
    matrix,
    monic_irreducibles,
    nullity,
    nullspace,
    poly_factor,
    row_reduce,
    solve_intertwiner_space,
    transpose,
)


def elements(q):
    return st.integers(min_value=0, max_value=q - 1)


def square_matrices(q, n):
    return st.lists(elements(q), min_size=n * n, max_size=n * n).map(lambda xs: matrix(xs).reshape(n, n))


class TestFieldDesc:
    @pytest.mark.parametrize("q", SUPPORTED_ORDERS)
    def test_inverses(self, q):
        field = field_for_order(q)
        for a in range(1, q):
            assert 1 == field.smul(a, field.sinv(a))

    @pytest.mark.parametrize("q", SUPPORTED_ORDERS)
    def test_vectorised_matches_scalar(self, q):
        field = field_for_order(q)
        a, b = np.meshgrid(np.arange(q), np.arange(q), indexing='ij')
        assert [[field.sadd(x, y) for y in range(q)] for x in range(q)] == field.add(a, b).tolist()
        assert [[field.smul(x, y) for y in range(q)] for x in range(q)] == field.mul(a, b).tolist()
        assert [[field.ssub(x, y) for y in range(q)] for x in range(q)] == field.sub(a, b).tolist()

    @pytest.mark.parametrize("q", [6, 10, 16, 27])
    def test_unsupported(self, q):
        with pytest.raises(FieldError, match="Unsupported field order"):
            field_for_order(q)

    @pytest.mark.parametrize("q", SUPPORTED_ORDERS)
    def test_negation(self, q):
        field = field_for_order(q)
        values = np.arange(q)
        assert not field.add(values, field.neg(values)).any()

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            field_for_order(4).sinv(0)

    @pytest.mark.parametrize("q", [4, 8, 9])
    @given(data=st.data())
    @settings(max_examples=50, deadline=None)
    def test_distributive(self, q, data):
        field = field_for_order(q)
        a, b, c = (data.draw(elements(q)) for _ in range(3))
        assert field.smul(a, field.sadd(b, c)) == field.sadd(field.smul(a, b), field.smul(a, c))
        assert field.smul(a, field.smul(b, c)) == field.smul(field.smul(a, b), c)


class TestEncoding:
    def test_lexicographic(self):
        field = field_for_order(3)
        stack = all_matrices(field, 1, 2)
        assert [[0, 0], [0, 1], [0, 2], [1, 0]] == stack[:4, 0].tolist()
        assert list(range(9)) == encode(field, stack).tolist()

    def test_decode_shape(self):
        field = field_for_order(2)
        assert (5, 2, 3) == decode(field, np.arange(5), 2, 3).shape


class TestRank:
    @pytest.mark.parametrize("q, n, expected", [(2, 2, 6), (3, 2, 48), (4, 2, 180), (2, 3, 168)])
    def test_batch_rank_counts_gl(self, q, n, expected):
        field = field_for_order(q)
        assert expected == int((batch_rank(field, all_matrices(field, n, n)) == n).sum())

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_batch_rank_matches_scalar(self, q):
        field = field_for_order(q)
        stack = all_matrices(field, 2, 3)
        assert [mat_rank(field, m) for m in stack] == batch_rank(field, stack).tolist()

    @pytest.mark.parametrize("q", [2, 3, 5])
    @given(data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_rank_nullity(self, q, data):
        field = field_for_order(q)
        m = data.draw(square_matrices(q, 4))[:3]
        kernel = nullspace(field, m)
        assert 4 == mat_rank(field, m) + nullity(field, m)
        assert len(kernel) == nullity(field, m)
        if len(kernel):
            assert not field.matmul(m, transpose(kernel)).any()

    def test_f2_packed_rank_agrees_with_elimination(self):
        field = field_for_order(2)
        for m in all_matrices(field, 3, 3)[::7]:
            assert len(row_reduce(field, m)[1]) == mat_rank(field, m)


class TestInverse:
    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_mat_inv(self, q):
        field = field_for_order(q)
        stack = all_matrices(field, 2, 2)
        for m in stack[batch_rank(field, stack) == 2]:
            assert np.array_equal(identity(2), field.matmul(m, mat_inv(field, m)))

    def test_batch_inverse(self):
        field = field_for_order(3)
        stack = all_matrices(field, 2, 2)
        invertible = stack[batch_rank(field, stack) == 2]
        products = field.matmul(invertible, batch_inverse(field, invertible))
        assert (products == identity(2)).all()

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            mat_inv(field_for_order(2), matrix([[1, 1], [1, 1]]))
        with pytest.raises(SingularMatrix):
            batch_inverse(field_for_order(2), matrix([[[1, 0], [0, 0]]]))


class TestIntertwiners:
    def test_symmetric_pair_admits_identity(self):
        field = field_for_order(3)
        A = matrix([[1, 2], [2, 0]])
        B = matrix([[0, 1], [1, 1]])
        basis = solve_intertwiner_space(field, A, B)
        for g in basis:
            assert np.array_equal(field.matmul(g, A), field.matmul(transpose(A), g))
            assert np.array_equal(field.matmul(g, B), field.matmul(transpose(B), g))
        assert mat_rank(field, basis.reshape(len(basis), -1)) == len(basis) >= 1

    def test_centralizer_of_scalar_is_everything(self):
        field = field_for_order(2)
        assert 9 == len(centralizer_space(field, identity(3)))

    def test_centralizer_of_jordan_block(self):
        field = field_for_order(5)
        J = matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        # polynomials in J
        assert 3 == len(centralizer_space(field, J))


class TestPolynomials:
    @pytest.mark.parametrize("q, degree, expected", [(2, 1, 2), (2, 2, 1), (2, 3, 2), (2, 4, 3), (3, 2, 3), (4, 2, 6)])
    def test_irreducible_counts(self, q, degree, expected):
        assert expected == len(monic_irreducibles(field_for_order(q), degree))

    def test_factor_square(self):
        field = field_for_order(2)
        factors = poly_factor(PolyFq(field, (1, 0, 1)))
        assert [((1, 1), 2)] == [(f.coeffs, m) for f, m in factors]

    def test_irreducible_over_f3(self):
        field = field_for_order(3)
        f = PolyFq(field, (1, 0, 1))
        assert [(f, 1)] == poly_factor(f)

    def test_divmod(self):
        field = field_for_order(5)
        a = PolyFq(field, (1, 2, 3, 4))
        b = PolyFq(field, (2, 1))
        quot, rem = divmod(a, b)
        assert a == quot * b + rem
        assert rem.degree < b.degree


class TestInvariantFactors:
    def test_identity(self):
        field = field_for_order(2)
        assert [(1, 1), (1, 1)] == [f.coeffs for f in invariant_factors(field, identity(2))]

    def test_unipotent_jordan_block(self):
        field = field_for_order(2)
        assert ((1, 0, 1),) == invariant_factor_key(field, matrix([[1, 1], [0, 1]]))

    def test_class_count_gl2_f3(self):
        field = field_for_order(3)
        stack = all_matrices(field, 2, 2)
        keys = {invariant_factor_key(field, g) for g in stack[batch_rank(field, stack) == 2]}
        assert 8 == len(keys)

    @pytest.mark.parametrize("q", [2, 3])
    @given(data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_conjugation_invariant(self, q, data):
        field = field_for_order(q)
        g = data.draw(square_matrices(q, 3))
        p = data.draw(square_matrices(q, 3))
        if mat_rank(field, p) < 3:
            p = identity(3)
        conjugated = field.matmul(field.matmul(p, g), mat_inv(field, p))
        assert invariant_factor_key(field, g) == invariant_factor_key(field, conjugated)

    @pytest.mark.parametrize("q", [2, 3, 4])
    @given(data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_product_is_characteristic_polynomial(self, q, data):
        field = field_for_order(q)
        g = data.draw(square_matrices(q, 3))
        product = PolyFq.constant(field, 1)
        for f in invariant_factors(field, g):
            product = product * f
            assert f.is_monic()
        assert charpoly_by_expansion(field, g) == product


class TestSmallExamples:
    @pytest.mark.parametrize("q, m, expected", [(2, identity(3), 3), (3, np.zeros((2, 2), dtype=np.int64), 0),
                                                (2, matrix([[1, 1], [1, 1]]), 1)], ids=("identity", "zero", "ones"))
    def test_rank(self, q, m, expected):
        assert expected == mat_rank(field_for_order(q), m)

    def test_intertwiners_of_zero_pair(self):
        field = field_for_order(2)
        zero = np.zeros((2, 2), dtype=np.int64)
        assert 4 == len(solve_intertwiner_space(field, zero, zero))

    def test_intertwiners_by_exhaustion(self):
        field = field_for_order(2)
        J = matrix([[0, 1], [0, 0]])
        zero = np.zeros((2, 2), dtype=np.int64)
        solutions = [g for g in all_matrices(field, 2, 2)
                     if np.array_equal(field.matmul(g, J), field.matmul(transpose(J), g))]
        assert len(solutions) == 2 ** len(solve_intertwiner_space(field, J, zero))

    def test_irreducible_charpoly(self):
        field = field_for_order(2)
        assert [(1, 1, 1)] == [f.coeffs for f in invariant_factors(field, matrix([[0, 1], [1, 1]]))]

    def test_factor_product_of_roots(self):
        field = field_for_order(2)
        factors = poly_factor(PolyFq(field, (0, 1, 1)))
        assert {(0, 1): 1, (1, 1): 1} == {f.coeffs: m for f, m in factors}
