import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.common import partitions
from src.deligne import (
    DeligneFiltration,
    FiltrationError,
    NotNilpotent,
    all_subspaces,
    deligne_filtration,
    deligne_uniqueness_check,
    jordan_chains,
    jordan_matrix,
    nilpotency_index,
    nilpotent_class_representatives,
    nilpotent_matrices,
    nu_image_check,
    weight_filtrations,
)
from src.ffalg import field_for_order, is_invertible, mat_inv, matrix, span_basis, transpose
from src.groups import OrderBoundExceeded


def invertible_matrices(field, N):
    entries = st.lists(st.integers(0, field.q - 1), min_size=N * N, max_size=N * N)
    return entries.map(lambda values: matrix(values).reshape(N, N)).filter(lambda m: is_invertible(field, m))


class TestJordan:
    @pytest.mark.parametrize("partition, index", [((1,), 1), ((2,), 2), ((2, 1), 2), ((3, 1), 3)])
    def test_nilpotency_index(self, partition, index):
        assert index == nilpotency_index(field_for_order(2), jordan_matrix(partition))

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            nilpotency_index(field_for_order(3), matrix([[1, 0], [0, 0]]))

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_chain_lengths_are_jordan_type(self, q, N):
        field = field_for_order(q)
        for partition, A in nilpotent_class_representatives(N):
            assert list(partition) == [len(c) for c in jordan_chains(field, A)]

    def test_chains_on_conjugated_matrix(self):
        field = field_for_order(2)
        # conjugate of a (2,1) Jordan matrix
        A = matrix([[0, 1, 1], [0, 0, 0], [0, 0, 0]])
        assert [2, 1] == [len(c) for c in jordan_chains(field, A)]

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    @given(data=st.data())
    @settings(max_examples=15, deadline=None)
    def test_conjugation_moves_filtration(self, q, N, data):
        field = field_for_order(q)
        h = data.draw(invertible_matrices(field, N))
        h_inv = mat_inv(field, h)
        for partition, A in nilpotent_class_representatives(N):
            original = deligne_filtration(field, A)
            moved = deligne_filtration(field, field.matmul(field.matmul(h, A), h_inv))
            for i in range(original.low - 1, original.high + 2):
                assert original.dimension(i) == moved.dimension(i)
                if original.dimension(i) == 0:
                    continue
                image = span_basis(field, field.matmul(original.subspace(i), transpose(h)), N)
                assert np.array_equal(image, moved.subspace(i))

    def test_zero_matrix_count(self):
        assert 1 == len(nilpotent_matrices(2, 1))
        # nilpotent 2x2 over F_q: q^2
        assert 4 == len(nilpotent_matrices(2, 2))
        assert 9 == len(nilpotent_matrices(3, 2))

    def test_size_bound(self):
        with pytest.raises(OrderBoundExceeded, match="size bound"):
            nilpotent_matrices(2, 3, size_bound=100)


class TestDeligneFiltration:
    @pytest.mark.parametrize("partition, graded", [((1,), {0: 1}), ((2,), {-1: 1, 1: 1}),
                                                   ((3, 1), {-2: 1, 0: 2, 2: 1}),
                                                   ((2, 2), {-1: 2, 1: 2})])
    def test_graded_dimensions(self, partition, graded):
        filtration = deligne_filtration(field_for_order(2), jordan_matrix(partition))
        assert graded == filtration.graded_dimensions()

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_every_class_verifies(self, q, N):
        field = field_for_order(q)
        for _, A in nilpotent_class_representatives(N):
            assert deligne_filtration(field, A).verify()

    def test_runs_from_whole_space_to_zero(self):
        filtration = deligne_filtration(field_for_order(3), jordan_matrix((3,)))
        assert 3 == filtration.dimension(filtration.low)
        assert 0 == filtration.dimension(filtration.high)

    def test_kernel_and_cokernel_filtrations(self):
        filtration = deligne_filtration(field_for_order(2), jordan_matrix((3, 1)))
        kernel = filtration.kernel_filtration()
        cokernel = filtration.cokernel_filtration()
        assert [0, 1] == kernel[0]
        assert [0] == kernel[2]
        assert [0, 1] == cokernel[-2]
        assert [1] == cokernel[0]
        assert {3: [0], 1: [1]} == filtration.mu()

    def test_wrong_chains_rejected(self):
        field = field_for_order(2)
        A = jordan_matrix((2,))
        # two independent vectors, but not a chain of A
        chains = [[np.array([1, 0])], [np.array([0, 1])]]
        with pytest.raises(FiltrationError):
            DeligneFiltration(field, A, chains).verify()

    def test_to_dict(self):
        data = deligne_filtration(field_for_order(2), jordan_matrix((2,))).to_dict()
        assert [-1, 1] == sorted(data['weights'])


class TestUniqueness:
    def test_subspace_counts(self):
        # subspaces of F_2^2: 0, three lines, the plane
        assert 5 == len(all_subspaces(field_for_order(2), 2))

    def test_zero_matrix_has_trivial_filtration(self):
        field = field_for_order(2)
        found = weight_filtrations(field, matrix([[0, 0], [0, 0]]))
        assert 1 == len(found)

    @pytest.mark.parametrize("dim", [1, 2])
    def test_unique(self, dim):
        assert deligne_uniqueness_check(dim)

    @pytest.mark.slow
    def test_unique_dim3(self):
        assert deligne_uniqueness_check(3)


class TestNuImage:
    def test_zero_matrix(self):
        report = nu_image_check(field_for_order(2), np.zeros((2, 2), dtype=np.int64))
        assert report.passed
        assert (6, 6) == (report.image_size, report.parabolic_size)

    @pytest.mark.parametrize("q, N", [(2, 1), (2, 2), (2, 3), (3, 2)])
    def test_every_class(self, q, N):
        field = field_for_order(q)
        for partition in partitions(N):
            assert nu_image_check(field, jordan_matrix(partition)).passed

    @pytest.mark.slow
    def test_n4(self):
        field = field_for_order(2)
        for partition in partitions(4):
            assert nu_image_check(field, jordan_matrix(partition)).passed
