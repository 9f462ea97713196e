############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

"""
Character tables reduced into a prime field F_p, p = 1 mod exp(G), by the
Dixon-Schneider eigenspace method. Every quantity downstream (degrees,
multiplicities, dimensions of invariants) is a small non-negative integer and is
lifted back from its residue.
"""

import logging
from itertools import product

import numpy as np
from sympy import isprime, primitive_root

from src.common import RepCheckError, isqrt_ceil, proper_plural_form
from src.ffalg import batch_rank, identity, nullspace, prime_field, row_reduce
from src.groups import class_matrix, exponent

logger = logging.getLogger('RepCheck')

PRIME_SEARCH_CAP = 10 ** 7


class SearchExhausted(RepCheckError):
    pass


class SplitFailure(RepCheckError):
    pass


class LiftOutOfRange(RepCheckError):
    pass


class CharacterTableError(RepCheckError):
    pass


def prime_lower_bound(order):
    return 2 * isqrt_ceil(order)


def is_admissible_prime(p, e, order):
    return isprime(p) and p % e == 1 and p > prime_lower_bound(order)


def root_of_unity(p, e):
    return pow(int(primitive_root(p)), (p - 1) // e, p)


def choose_prime(e, order, after=0):
    """Smallest prime p = 1 (mod e) with p > 2*ceil(sqrt(order)) and p > after, with omega of order e."""
    bound = max(prime_lower_bound(order), after)
    candidate = (bound // e) * e + 1
    while candidate <= bound:
        candidate += e
    while not isprime(candidate):
        candidate += e
        if candidate > PRIME_SEARCH_CAP:
            raise SearchExhausted("No admissible prime below %d for exponent %d" % (PRIME_SEARCH_CAP, e))
    return candidate, root_of_unity(candidate, e)


def lift_small(x, p, bound):
    value = int(x) % p
    if value > bound:
        raise LiftOutOfRange("Residue %d mod %d exceeds the a-priori bound %d" % (value, p, bound))
    return value


class ModularCharTable:
    def __init__(self, classes, p, omega, e, values, degrees):
        self.classes = classes
        self.p = p
        self.omega = omega
        self.exponent = e
        self.values = np.asarray(values, dtype=np.int64)
        self.degrees = [int(d) for d in degrees]
        self.field = prime_field(p)

    def __len__(self):
        return len(self.degrees)

    @property
    def order(self):
        return self.classes.order

    @property
    def sizes(self):
        return self.classes.sizes % self.p

    def inner_product(self, u, v):
        u = np.asarray(u, dtype=np.int64) % self.p
        v = np.asarray(v, dtype=np.int64)[self.classes.inverse_map] % self.p
        total = int(((self.sizes * u) % self.p) @ v) % self.p
        return total * self.field.sinv(self.order % self.p) % self.p

    def contragredient(self, i):
        row = self.values[i][self.classes.inverse_map]
        for j, other in enumerate(self.values):
            if np.array_equal(other, row):
                return j
        raise CharacterTableError("Contragredient of row %d is missing" % i)

    def regular_character(self):
        row = np.zeros(len(self.classes), dtype=np.int64)
        row[0] = self.order % self.p
        return row

    def validate(self):
        p = self.p
        n = len(self.classes)
        if self.values.shape != (n, n):
            raise CharacterTableError("Character table has %d rows for %d classes" % (self.values.shape[0], n))
        inv_order = self.field.sinv(self.order % p)
        weighted = (self.values * self.sizes[None, :]) % p
        gram = (weighted @ self.values[:, self.classes.inverse_map].T) % p * inv_order % p
        if not np.array_equal(gram, identity(n)):
            raise CharacterTableError("Row orthogonality fails mod %d" % p)
        columns = (self.values.T @ self.values[:, self.classes.inverse_map]) % p
        centralizers = np.array([self.classes.centralizer_order(j) % p for j in range(n)], dtype=np.int64)
        if not np.array_equal(columns, np.diag(centralizers)):
            raise CharacterTableError("Column orthogonality fails mod %d" % p)
        if sum(d * d for d in self.degrees) != self.order:
            raise CharacterTableError("Squared degrees do not sum to the group order")
        for d, row in zip(self.degrees, self.values):
            if self.order % d or row[0] != d % p:
                raise CharacterTableError("Degree %d is inconsistent with the table" % d)
        return True

    def to_dict(self):
        return {'p': self.p, 'omega': self.omega, 'exponent': self.exponent,
                'values': self.values.tolist(), 'degrees': self.degrees}

    @classmethod
    def from_dict(cls, classes, data):
        table = cls(classes, data['p'], data['omega'], data['exponent'], data['values'], data['degrees'])
        table.validate()
        return table


def _restrict(field, matrix, basis):
    """Matrix R with matrix @ basis = basis @ R (basis columns span an invariant subspace)."""
    image = field.matmul(matrix, basis)
    _, pivot_rows = row_reduce(field, basis.T)
    square = basis[pivot_rows]
    augmented = np.concatenate([square, image[pivot_rows]], axis=1)
    reduced, _ = row_reduce(field, augmented)
    return reduced[:, basis.shape[1]:]


def _eigenspaces(field, restricted):
    s = restricted.shape[0]
    shifts = np.arange(field.p, dtype=np.int64)
    stack = (restricted[None] - shifts[:, None, None] * identity(s)[None]) % field.p
    eigenvalues = np.nonzero(batch_rank(field, stack) < s)[0]
    return [nullspace(field, stack[lam]) for lam in eigenvalues]


def dixon_table(classes, prime=None):
    order = classes.order
    e = exponent(classes)
    if prime is None:
        p, omega = choose_prime(e, order)
    else:
        if not is_admissible_prime(prime, e, order):
            raise CharacterTableError("Prime %d is not admissible for exponent %d and order %d" % (prime, e, order))
        p, omega = prime, root_of_unity(prime, e)
    field = prime_field(p)
    n = len(classes)
    logger.info("Computing character table of %s (%s) modulo %d" %
                (classes.group.spec.key(), proper_plural_form("class", n), p))

    spaces = [identity(n)]
    for i in range(n):
        if all(s.shape[1] == 1 for s in spaces):
            break
        matrix = class_matrix(classes, i) % p
        refined = []
        for basis in spaces:
            if basis.shape[1] == 1:
                refined.append(basis)
                continue
            restricted = _restrict(field, matrix, basis)
            if np.array_equal(restricted, restricted[0, 0] * identity(basis.shape[1])):
                refined.append(basis)
                continue
            pieces = _eigenspaces(field, restricted)
            if sum(len(v) for v in pieces) != basis.shape[1]:
                raise SplitFailure("Class matrix %d is not diagonalisable modulo %d" % (i, p))
            refined.extend(field.matmul(basis, v.T) for v in pieces)
        spaces = refined
    if any(s.shape[1] != 1 for s in spaces):
        raise SplitFailure("Common eigenspaces of %s did not split into lines" % classes.group.spec.key())

    sizes = classes.sizes % p
    inv_sizes = np.array([field.sinv(int(c)) for c in sizes], dtype=np.int64)
    rows = []
    for basis in spaces:
        w = basis[:, 0]
        if w[0] == 0:
            raise CharacterTableError("Eigenvector vanishes at the identity class")
        w = (w * field.sinv(int(w[0]))) % p
        norm = int(((w * w[classes.inverse_map]) % p) @ inv_sizes) % p
        square = order % p * field.sinv(norm) % p
        degree = next((d for d in range(1, isqrt_ceil(order) + 1) if d * d % p == square), None)
        if degree is None:
            raise CharacterTableError("No admissible degree for eigenvector modulo %d" % p)
        rows.append((degree, tuple(((degree * w) % p * inv_sizes % p).tolist())))
    rows.sort()
    table = ModularCharTable(classes, p, omega, e, [r[1] for r in rows], [r[0] for r in rows])
    table.validate()
    logger.debug("Degrees of %s: %s" % (classes.group.spec.key(), str(table.degrees)))
    return table


def kappa_selfduality_check(classes):
    """Every class j satisfies identify((rep_j^t)^{-1}) = j*."""
    group = classes.group
    images = group.inverse(np.swapaxes(classes.representatives, -1, -2))
    return bool(np.array_equal(classes.identify_many(images), classes.inverse_map))


def _factor_class_indices(classes_M, factor_tables):
    """For each class of a block-diagonal product group, the factor class indices of its blocks."""
    return [tuple(t.classes.class_of_key(k) for t, k in zip(factor_tables, key)) for key in classes_M.keys]


def product_table(factor_tables, classes_M):
    """Table of a Levi product as the tensor product of factor tables (common prime)."""
    p = factor_tables[0].p
    if any(t.p != p for t in factor_tables):
        raise CharacterTableError("Factor tables use different primes")
    columns = _factor_class_indices(classes_M, factor_tables)
    rows = []
    for picks in product(*[range(len(t)) for t in factor_tables]):
        values = np.ones(len(classes_M), dtype=np.int64)
        degree = 1
        for t, i, block in zip(factor_tables, picks, range(len(factor_tables))):
            values = values * t.values[i][[c[block] for c in columns]] % p
            degree *= t.degrees[i]
        rows.append((degree, tuple(values.tolist())))
    rows.sort()
    e = exponent(classes_M)
    table = ModularCharTable(classes_M, p, root_of_unity(p, e), e, [r[1] for r in rows], [r[0] for r in rows])
    table.validate()
    return table


def match_product_rows(table_M, factor_tables):
    """For each row of the table of a Levi product, the tuple of factor rows it is the tensor product of."""
    columns = _factor_class_indices(table_M.classes, factor_tables)
    p = table_M.p
    lookup = {}
    for picks in product(*[range(len(t)) for t in factor_tables]):
        values = np.ones(len(table_M.classes), dtype=np.int64)
        for block, (t, i) in enumerate(zip(factor_tables, picks)):
            values = values * t.values[i][[c[block] for c in columns]] % p
        lookup[tuple(values.tolist())] = picks
    try:
        return [lookup[tuple(row.tolist())] for row in table_M.values]
    except KeyError:
        raise CharacterTableError("Table of %s is not the product of its factor tables" %
                                  table_M.classes.group.spec.key())
