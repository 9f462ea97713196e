import numpy as np
import pytest

from src.chartab import (
    CharacterTableError,
    LiftOutOfRange,
    choose_prime,
    dixon_table,
    is_admissible_prime,
    kappa_selfduality_check,
    lift_small,
    match_product_rows,
    product_table,
)
from src.groups import GroupSpec, conjugacy_classes, enumerate_group, exponent


def classes_of(spec):
    return conjugacy_classes(enumerate_group(spec))


@pytest.fixture(scope="module")
def gl32_table():
    return dixon_table(classes_of(GroupSpec.general_linear(3, 2)))


class TestChoosePrime:
    @pytest.mark.parametrize("e, order, expected", [(6, 6, (7, 3)), (1, 1, (3, 1))])
    def test_small(self, e, order, expected):
        assert expected == choose_prime(e, order)

    def test_gl32(self):
        p, omega = choose_prime(84, 168)
        assert 337 == p
        assert 1 == pow(omega, 84, p)
        assert all(pow(omega, 84 // r, p) != 1 for r in (2, 3, 7))

    def test_after(self):
        p, _ = choose_prime(6, 6, after=7)
        assert p > 7 and is_admissible_prime(p, 6, 6)


class TestLift:
    def test_lift(self):
        assert 5 == lift_small(5, 337, 13)
        assert 0 == lift_small(337, 337, 13)

    def test_out_of_range(self):
        with pytest.raises(LiftOutOfRange, match="exceeds"):
            lift_small(-1, 337, 13)


class TestDixon:
    @pytest.mark.parametrize("spec, degrees", [(GroupSpec.general_linear(2, 2), [1, 1, 2]),
                                               (GroupSpec.general_linear(2, 3), [1, 1, 2, 2, 2, 3, 3, 4]),
                                               (GroupSpec.symmetric(4), [1, 1, 2, 3, 3]),
                                               (GroupSpec.levi(3, (1, 1)), [1, 1, 1, 1])],
                             ids=("GL2F2", "GL2F3", "S4", "levi"))
    def test_degrees(self, spec, degrees):
        table = dixon_table(classes_of(spec))
        assert degrees == table.degrees
        assert table.validate()

    def test_gl32_degrees(self, gl32_table):
        assert [1, 3, 3, 6, 7, 8] == gl32_table.degrees
        assert 337 == gl32_table.p

    def test_inner_products(self, gl32_table):
        n = len(gl32_table)
        for i in range(n):
            for j in range(n):
                assert int(i == j) == gl32_table.inner_product(gl32_table.values[i], gl32_table.values[j])
            assert gl32_table.degrees[i] == gl32_table.inner_product(gl32_table.regular_character(),
                                                                     gl32_table.values[i])

    def test_contragredients(self, gl32_table):
        duals = [gl32_table.contragredient(i) for i in range(len(gl32_table))]
        # the two degree-3 characters are complex conjugate
        assert [0, 2, 1, 3, 4, 5] == duals

    def test_two_primes(self):
        classes = classes_of(GroupSpec.general_linear(2, 3))
        first = dixon_table(classes)
        second_prime, _ = choose_prime(exponent(classes), classes.order, after=first.p)
        second = dixon_table(classes, second_prime)
        assert first.degrees == second.degrees
        assert first.p != second.p

    def test_inadmissible_prime(self):
        with pytest.raises(CharacterTableError, match="not admissible"):
            dixon_table(classes_of(GroupSpec.general_linear(2, 2)), prime=11)

    def test_round_trip_through_dict(self, gl32_table):
        restored = type(gl32_table).from_dict(gl32_table.classes, gl32_table.to_dict())
        assert np.array_equal(restored.values, gl32_table.values)

    def test_corrupted_values_rejected(self, gl32_table):
        data = gl32_table.to_dict()
        data['values'][1][1] = (data['values'][1][1] + 1) % data['p']
        with pytest.raises(CharacterTableError):
            type(gl32_table).from_dict(gl32_table.classes, data)


class TestKappa:
    @pytest.mark.parametrize("n, q", [(2, 2), (2, 3), (3, 2), (2, 4)])
    def test_gl(self, n, q):
        assert kappa_selfduality_check(classes_of(GroupSpec.general_linear(n, q)))


class TestProductTable:
    @pytest.mark.parametrize("q, composition", [(3, (1, 1)), (2, (2, 1)), (3, (2, 1))])
    def test_factorisation(self, q, composition):
        classes_M = classes_of(GroupSpec.levi(q, composition))
        prime = dixon_table(classes_M).p
        table_M = dixon_table(classes_M, prime)
        factors = []
        for n in composition:
            classes = classes_of(GroupSpec.general_linear(n, q))
            factors.append(dixon_table(classes, prime))
        built = product_table(factors, classes_M)
        assert sorted(built.degrees) == sorted(table_M.degrees)
        picks = match_product_rows(table_M, factors)
        assert len(set(picks)) == len(table_M)


class TestSmallTables:
    def test_trivial_group(self):
        table = dixon_table(classes_of(GroupSpec.general_linear(1, 2)))
        assert [1] == table.degrees
        assert [[1]] == table.values.tolist()

    def test_lift_examples(self):
        assert 2 == lift_small(2, 337, 13)
        with pytest.raises(LiftOutOfRange):
            lift_small(336, 337, 13)

    @pytest.mark.parametrize("n, q", [(1, 2), (1, 3), (1, 5)])
    def test_kappa_abelian(self, n, q):
        assert kappa_selfduality_check(classes_of(GroupSpec.general_linear(n, q)))

    @pytest.mark.slow
    def test_kappa_gl33(self):
        assert kappa_selfduality_check(classes_of(GroupSpec.general_linear(3, 3)))
