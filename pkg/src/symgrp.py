############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

"""
Symmetric groups S_n, n <= 10: exact integer characters, restriction to Young
subgroups S_{n_1} x ... x S_{n_l}, and the algebra of functions on S_n invariant
under conjugation by the Young subgroup.
"""

import logging
from collections import Counter, namedtuple
from functools import lru_cache
from itertools import product
from math import factorial

import numpy as np

from src.common import DEFAULT_BOUNDS, RepCheckError, block_ranges, compositions, list_to_str, partitions
from src.groups import GroupSpec, enumerate_group
from src.jacquet import AdjointSpace, BasisBoundExceeded, hecke_commutativity, witness_report

logger = logging.getLogger('RepCheck')

MAX_DEGREE = 10


def conjugate(partition):
    if not partition:
        return ()
    return tuple(sum(1 for part in partition if part > i) for i in range(partition[0]))


def hook_degree(partition):
    """Dimension of the irreducible by the hook length formula."""
    n = sum(partition)
    columns = conjugate(partition)
    hooks = 1
    for i, row in enumerate(partition):
        for j in range(row):
            hooks *= (row - j - 1) + (columns[j] - i - 1) + 1
    return factorial(n) // hooks


def centralizer_size(cycle_type):
    """z_mu = prod i^{m_i} m_i!."""
    result = 1
    for length, multiplicity in Counter(cycle_type).items():
        result *= length ** multiplicity * factorial(multiplicity)
    return result


def class_size(cycle_type):
    return factorial(sum(cycle_type)) // centralizer_size(cycle_type)


def _beta_set(partition):
    L = len(partition)
    return tuple(sorted(part + L - 1 - i for i, part in enumerate(partition)))


@lru_cache(maxsize=None)
def _mn_on_beads(beads, cycle_type):
    if not cycle_type:
        return 1
    r = cycle_type[0]
    rest = cycle_type[1:]
    occupied = set(beads)
    total = 0
    for b in beads:
        if b - r < 0 or (b - r) in occupied:
            continue
        # a rim hook of length r; its height is the number of beads jumped over
        height = sum(1 for c in beads if b - r < c < b)
        moved = tuple(sorted((occupied - {b}) | {b - r}))
        total += (-1) ** height * _mn_on_beads(moved, rest)
    return total


def mn_character(partition, cycle_type):
    """chi^lambda(mu) by removing rim hooks of lengths mu_1, mu_2, ... ."""
    if sum(partition) != sum(cycle_type):
        raise ValueError("Partitions (%s) and (%s) have different sizes" %
                         (list_to_str(partition), list_to_str(cycle_type)))
    return _mn_on_beads(_beta_set(tuple(partition)), tuple(sorted(cycle_type, reverse=True)))


class SnCharTable:
    def __init__(self, n):
        if n > MAX_DEGREE:
            raise ValueError("Character tables are built for n <= %d only" % MAX_DEGREE)
        self.n = n
        self.partitions = list(partitions(n))
        self.index = {p: i for i, p in enumerate(self.partitions)}
        self.values = np.array([[mn_character(lam, mu) for mu in self.partitions] for lam in self.partitions],
                               dtype=np.int64).reshape(len(self.partitions), len(self.partitions))
        self.class_sizes = [class_size(mu) for mu in self.partitions]

    def value(self, partition, cycle_type):
        return int(self.values[self.index[tuple(partition)], self.index[tuple(cycle_type)]])

    @property
    def degrees(self):
        identity_column = self.index[(1,) * self.n] if self.n else 0
        return [int(d) for d in self.values[:, identity_column]]

    def validate(self):
        order = factorial(self.n)
        values = self.values.astype(object)
        gram = (values * np.array(self.class_sizes, dtype=object)[None, :]) @ values.T
        if not (gram == np.eye(len(self.partitions), dtype=np.int64) * order).all():
            raise RepCheckError("Character table of S_%d is not orthonormal" % self.n)
        if self.degrees != [hook_degree(p) for p in self.partitions]:
            raise RepCheckError("Degrees of S_%d disagree with the hook length formula" % self.n)
        return True


@lru_cache(maxsize=None)
def sn_table(n):
    table = SnCharTable(n)
    table.validate()
    return table


# == Young subgroups ==
def young_classes(composition):
    """Classes of S_{n_1} x ... x S_{n_l}: (tuple of factor cycle types, size, cycle type in S_n)."""
    result = []
    for parts in product(*[list(partitions(n)) for n in composition]):
        size = 1
        for mu in parts:
            size *= class_size(mu)
        merged = tuple(sorted((x for mu in parts for x in mu), reverse=True))
        result.append((parts, size, merged))
    return result


def young_restriction_mult(partition, targets):
    """<Res chi^lambda, chi^{mu^1} x ... x chi^{mu^l}> over the Young subgroup."""
    composition = tuple(sum(mu) for mu in targets)
    if sum(composition) != sum(partition):
        raise ValueError("Targets do not split %d" % sum(partition))
    table = sn_table(sum(partition))
    factors = [sn_table(n) for n in composition]
    order = 1
    total = 0
    for n in composition:
        order *= factorial(n)
    for parts, size, merged in young_classes(composition):
        term = size * table.value(partition, merged)
        for factor, mu, nu in zip(factors, targets, parts):
            term *= factor.value(mu, nu)
        total += term
    if total % order:
        raise RepCheckError("Restriction inner product is not an integer")
    return total // order


def restriction_matrix(composition):
    """Rows: partitions of n; columns: tuples of target partitions; entries: restriction multiplicities."""
    n = sum(composition)
    table = sn_table(n)
    factors = [sn_table(m) for m in composition]
    classes = young_classes(composition)
    targets = list(product(*[f.partitions for f in factors]))
    restricted = np.array([[table.value(lam, merged) for _, _, merged in classes] for lam in table.partitions],
                          dtype=object).reshape(len(table.partitions), len(classes))
    weighted = restricted * np.array([size for _, size, _ in classes], dtype=object)[None, :]
    target_values = np.ones((len(targets), len(classes)), dtype=object)
    for t, target in enumerate(targets):
        for c, (parts, _, _) in enumerate(classes):
            for factor, mu, nu in zip(factors, target, parts):
                target_values[t, c] *= factor.value(mu, nu)
    order = 1
    for m in composition:
        order *= factorial(m)
    products = weighted @ target_values.T
    if any(x % order for x in products.flat):
        raise RepCheckError("Restriction inner products are not integers")
    return table.partitions, targets, products // order


# == Littlewood-Richardson oracle ==
def lr_coefficient(outer, inner, content):
    """Number of LR tableaux of shape outer/inner and the given content."""
    outer = tuple(outer)
    inner = tuple(inner) + (0,) * (len(outer) - len(inner))
    if len(inner) > len(outer) or any(i > o for i, o in zip(inner, outer)):
        return 0
    if sum(outer) != sum(inner) + sum(content):
        return 0
    # reading order: rows top to bottom, each row right to left
    cells = [(r, c) for r in range(len(outer)) for c in range(outer[r] - 1, inner[r] - 1, -1)]
    filling = {}
    counts = [0] * (len(content) + 1)

    def place(position):
        if position == len(cells):
            return 1
        r, c = cells[position]
        total = 0
        for v in range(1, len(content) + 1):
            if counts[v] >= content[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            if (r, c + 1) in filling and v > filling[(r, c + 1)]:
                continue
            if (r - 1, c) in filling and v <= filling[(r - 1, c)]:
                continue
            filling[(r, c)] = v
            counts[v] += 1
            total += place(position + 1)
            counts[v] -= 1
            del filling[(r, c)]
        return total

    return place(0)


def iterated_lr_coefficient(outer, contents):
    contents = [tuple(c) for c in contents]
    if len(contents) == 1:
        return int(tuple(outer) == contents[0])
    first, second = contents[0], contents[1]
    total = 0
    for kappa in partitions(sum(first) + sum(second)):
        c = lr_coefficient(kappa, first, second)
        if c:
            total += c * iterated_lr_coefficient(outer, [kappa] + contents[2:])
    return total


# == strong Gelfand property ==
StrongGelfandReport = namedtuple('StrongGelfandReport', ('passed', 'max_multiplicity', 'partition', 'targets'))


def classification_predicts_gelfand(composition):
    return len(composition) == 1 or (len(composition) == 2 and min(composition) <= 2)


def strong_gelfand_check(composition):
    if sum(composition) > MAX_DEGREE:
        raise ValueError("Compositions of at most %d are supported" % MAX_DEGREE)
    rows, targets, matrix = restriction_matrix(tuple(composition))
    i, t = np.unravel_index(np.argmax(matrix.astype(np.int64)), matrix.shape)
    best = int(matrix[i, t])
    logger.debug("Young subgroup (%s): maximal restriction multiplicity %d" % (list_to_str(composition), best))
    return StrongGelfandReport(best <= 1, best, rows[i], targets[t])


def inverse_conjugacy_check(composition):
    """Every permutation is conjugate to its inverse under the Young subgroup."""
    group = enumerate_group(GroupSpec.symmetric(sum(composition)))
    labels = AdjointSpace(group, young_generators(composition)).basis_of_point
    inverses = group.index_of(group.inverse(group.elements))
    return bool(np.array_equal(labels[inverses], labels))


# == adjoint Hecke algebra ==
AdjointHeckeResult = namedtuple('AdjointHeckeResult', ('report', 'named', 'notes'))


def young_generators(composition):
    """Adjacent transpositions inside each block, as 0-based image arrays."""
    n = sum(composition)
    generators = []
    for start, end in block_ranges(composition):
        for i in range(start, end - 1):
            perm = np.arange(n, dtype=np.int64)
            perm[i], perm[i + 1] = i + 1, i
            generators.append(perm)
    return generators


def cycle_to_perm(cycle, n):
    """1-based cycle (a_1 ... a_r) as a 0-based image array, a_i -> a_{i+1}."""
    perm = np.arange(n, dtype=np.int64)
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        perm[a - 1] = b - 1
    return perm


def named_witnesses(composition):
    """
    Pairs of permutations whose invariant classes are expected not to commute:
    for three or more blocks (1, n_1+1) and (n_1+1, n_1+n_2+1); for two blocks of
    size at least 3 the cycles (1,2,3,n_1+1,n_1+2,n_1+3) and (1,n_1+1,n_1+2).
    """
    if len(composition) >= 3:
        n1, n2 = composition[0], composition[1]
        return (1, n1 + 1), (n1 + 1, n1 + n2 + 1)
    if len(composition) == 2 and min(composition) >= 3:
        n1 = composition[0]
        return (1, 2, 3, n1 + 1, n1 + 2, n1 + 3), (1, n1 + 1, n1 + 2)
    return None


def misprint_notes(composition):
    """The second transposition as literally printed, (n_1+1, n_2+1), next to the one used."""
    if len(composition) < 3:
        return {}
    n1, n2 = composition[0], composition[1]
    literal = [n1 + 1, n2 + 1]
    return {'literal_second_witness': literal,
            'literal_well_formed': literal[0] != literal[1],
            'used_second_witness': [n1 + 1, n1 + n2 + 1]}


def adjoint_hecke_commute(composition, basis_bound=DEFAULT_BOUNDS.basis):
    composition = tuple(composition)
    n = sum(composition)
    group = enumerate_group(GroupSpec.symmetric(n))
    space = AdjointSpace(group, young_generators(composition), "S(%d) mod S(%s)" % (n, list_to_str(composition)))

    named = None
    cycles = named_witnesses(composition)
    if cycles is not None:
        alpha, beta = (int(space.basis_of_point[group.index_of(cycle_to_perm(c, n)[None])[0]]) for c in cycles)
        named = witness_report(space, alpha, beta, 'named')
        logger.debug("Named witnesses for (%s) %s" % (list_to_str(composition),
                                                      "do not commute" if named is not None else "commute"))

    if space.basis_size <= basis_bound:
        report = hecke_commutativity(space, basis_bound)
    elif named is not None:
        logger.info("%s exceeds the basis bound, verdict taken from the named witnesses" % space.name)
        report = named
    else:
        raise BasisBoundExceeded("%s has %d basis functions, bound is %d" % (space.name, space.basis_size, basis_bound))
    return AdjointHeckeResult(report, named, misprint_notes(composition))


SweepRow = namedtuple('SweepRow', ('composition', 'predicted', 'strong_gelfand', 'max_multiplicity', 'commutative'))


def composition_sweep(max_n, basis_bound=DEFAULT_BOUNDS.basis, with_hecke=True):
    rows = []
    for n in range(1, max_n + 1):
        for composition in compositions(n):
            strong = strong_gelfand_check(composition)
            commutative = adjoint_hecke_commute(composition, basis_bound).report.commutative if with_hecke else None
            rows.append(SweepRow(composition, classification_predicts_gelfand(composition), strong.passed,
                                 strong.max_multiplicity, commutative))
    return rows
