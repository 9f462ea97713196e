from math import factorial

import pytest

from src.common import compositions, partitions
from src.jacquet import BasisBoundExceeded
from src.symgrp import (
    MAX_DEGREE,
    SnCharTable,
    adjoint_hecke_commute,
    class_size,
    classification_predicts_gelfand,
    composition_sweep,
    conjugate,
    cycle_to_perm,
    hook_degree,
    inverse_conjugacy_check,
    iterated_lr_coefficient,
    lr_coefficient,
    misprint_notes,
    mn_character,
    named_witnesses,
    restriction_matrix,
    sn_table,
    strong_gelfand_check,
    young_generators,
    young_restriction_mult,
)


class TestPartitionsAndClasses:
    @pytest.mark.parametrize("partition, expected", [((3, 1), (2, 1, 1)), ((2, 2), (2, 2)), ((1,), (1,)), ((), ())])
    def test_conjugate(self, partition, expected):
        assert expected == conjugate(partition)

    @pytest.mark.parametrize("partition, expected", [((3, 2, 1), 16), ((2, 2), 2), ((4,), 1), ((3, 1, 1), 6)])
    def test_hook_degree(self, partition, expected):
        assert expected == hook_degree(partition)

    @pytest.mark.parametrize("cycle_type, expected", [((1, 1, 1, 1), 1), ((2, 1, 1), 6), ((2, 2), 3), ((4,), 6)])
    def test_class_size(self, cycle_type, expected):
        assert expected == class_size(cycle_type)


class TestCharacters:
    @pytest.mark.parametrize("partition, cycle_type, expected", [((2, 1), (1, 1, 1), 2), ((2, 1), (3,), -1),
                                                                 ((2, 1), (2, 1), 0), ((1, 1, 1), (2, 1), -1),
                                                                 ((2, 2), (2, 2), 2), ((3, 1), (4,), -1)])
    def test_mn(self, partition, cycle_type, expected):
        assert expected == mn_character(partition, cycle_type)

    def test_sizes_differ(self):
        with pytest.raises(ValueError, match="different sizes"):
            mn_character((2, 1), (2, 2))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_tables_validate(self, n):
        table = sn_table(n)
        assert table.validate()
        assert factorial(n) == sum(d * d for d in table.degrees) == sum(table.class_sizes)

    def test_degree_limit(self):
        with pytest.raises(ValueError, match="n <= %d" % MAX_DEGREE):
            SnCharTable(MAX_DEGREE + 1)


class TestRestriction:
    def test_single_multiplicity(self):
        assert 1 == young_restriction_mult((2, 2), ((2, 1), (1,)))

    def test_targets_must_split(self):
        with pytest.raises(ValueError, match="do not split"):
            young_restriction_mult((2, 2), ((2,), (1,)))

    @pytest.mark.parametrize("composition", [(2, 2), (3, 1), (2, 1, 1), (3, 2)])
    def test_matrix_matches_littlewood_richardson(self, composition):
        rows, targets, matrix = restriction_matrix(composition)
        for i, lam in enumerate(rows):
            for t, target in enumerate(targets):
                assert iterated_lr_coefficient(lam, target) == matrix[i, t]
                assert young_restriction_mult(lam, target) == matrix[i, t]

    def test_lr(self):
        assert 2 == lr_coefficient((3, 2, 1), (2, 1), (2, 1))
        assert 1 == lr_coefficient((2, 1), (1,), (1, 1))
        assert 0 == lr_coefficient((3,), (1,), (1, 1))


class TestStrongGelfand:
    def test_three_three(self):
        report = strong_gelfand_check((3, 3))
        assert not report.passed
        assert 2 == report.max_multiplicity
        assert (3, 2, 1) == report.partition
        assert ((2, 1), (2, 1)) == report.targets

    @pytest.mark.parametrize("composition", [(4,), (3, 1), (1, 3), (2, 2), (4, 2), (1, 1)])
    def test_passes(self, composition):
        report = strong_gelfand_check(composition)
        assert report.passed
        assert 1 == report.max_multiplicity

    @pytest.mark.parametrize("n", range(1, 7))
    def test_classification(self, n):
        for composition in compositions(n):
            assert classification_predicts_gelfand(composition) == strong_gelfand_check(composition).passed

    def test_too_large(self):
        with pytest.raises(ValueError, match="at most"):
            strong_gelfand_check((6, 5))

    @pytest.mark.parametrize("composition, expected", [((3,), True), ((2, 1), True), ((3, 1), True),
                                                       ((1, 1, 1), False)])
    def test_inverse_conjugacy(self, composition, expected):
        assert expected == inverse_conjugacy_check(composition)


class TestAdjointHecke:
    def test_generators(self):
        assert [[1, 0, 2, 3], [0, 1, 3, 2]] == [g.tolist() for g in young_generators((2, 2))]
        assert [] == young_generators((1, 1))

    def test_cycle_to_perm(self):
        assert [1, 2, 0, 3] == cycle_to_perm((1, 2, 3), 4).tolist()

    def test_named_witnesses(self):
        assert ((1, 2), (2, 3)) == named_witnesses((1, 1, 1))
        assert ((1, 2, 3, 4, 5, 6), (1, 4, 5)) == named_witnesses((3, 3))
        assert named_witnesses((4, 2)) is None

    def test_misprint_notes(self):
        notes = misprint_notes((1, 1, 1))
        assert [2, 2] == notes['literal_second_witness']
        assert not notes['literal_well_formed']
        assert [2, 3] == notes['used_second_witness']
        assert {} == misprint_notes((3, 3))

    def test_three_blocks_do_not_commute(self):
        result = adjoint_hecke_commute((1, 1, 1))
        assert not result.report.commutative
        assert result.named is not None
        assert 'named' == result.named.source

    @pytest.mark.parametrize("composition", [(3,), (2, 1), (3, 1), (2, 2), (4, 1)])
    def test_commutative(self, composition):
        result = adjoint_hecke_commute(composition)
        assert result.report.commutative
        assert result.named is None

    def test_basis_bound_without_witness(self):
        with pytest.raises(BasisBoundExceeded, match="bound is 2"):
            adjoint_hecke_commute((2, 2), basis_bound=2)

    def test_basis_bound_falls_back_to_named(self):
        result = adjoint_hecke_commute((1, 1, 1), basis_bound=2)
        assert result.report is result.named
        assert not result.report.commutative

    def test_sweep(self):
        for row in composition_sweep(4):
            assert row.predicted == row.strong_gelfand == row.commutative

    @pytest.mark.slow
    def test_sweep_to_six(self):
        for row in composition_sweep(6):
            assert row.predicted == row.strong_gelfand == row.commutative


def test_partition_counts_match_table_size():
    for n in range(1, 7):
        assert len(list(partitions(n))) == len(sn_table(n).partitions)
