############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

"""
Exact arithmetic over small finite fields.

Field elements are small non-negative integers. For a prime field F_p the element
is the residue itself; for F_{p^d} the integer sum c_i * p^i encodes the polynomial
sum c_i * x^i modulo the defining polynomial of the field.

Matrices are numpy int64 arrays whose entries are field elements; the field is
always passed alongside. Stacks of matrices (shape (S, N, N)) are used by the
vectorised group kernels.
"""

import logging
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import factorint, isprime

from src.common import RepCheckError

logger = logging.getLogger('RepCheck')

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)
IRREDUCIBLE_DEGREE_LIMIT = 6
# defining polynomials (monic, coefficients low-to-high); x is primitive in each
EXTENSION_MODULI = {4: (1, 1, 1), 8: (1, 1, 0, 1), 9: (2, 2, 1)}


class FieldError(RepCheckError):
    pass


class SingularMatrix(RepCheckError):
    pass


class FieldDesc:
    def __init__(self, p, d=1):
        if not isprime(p) or d < 1:
            raise FieldError("Cannot build a field with characteristic %s and degree %s" % (str(p), str(d)))
        self.p = p
        self.d = d
        self.q = p ** d
        self.is_prime = d == 1
        self.add_table = None
        self.mul_table = None
        self.log_table = None
        self.exp_table = None
        if self.is_prime:
            inverses = [0] * p
            for a in range(1, p):
                inverses[a] = pow(a, p - 2, p)
            self.inv_table = np.array(inverses, dtype=np.int64)
            self._inv = inverses
        else:
            self._build_extension_tables()

    def _build_extension_tables(self):
        if self.q not in EXTENSION_MODULI:
            raise FieldError("Unsupported field order %d, choose one of %s" % (self.q, str(SUPPORTED_ORDERS)))
        p, d, q = self.p, self.d, self.q
        modulus = EXTENSION_MODULI[q]

        def digits(a):
            return [(a // p ** i) % p for i in range(d)]

        def number(coeffs):
            return sum(c * p ** i for i, c in enumerate(coeffs))

        add = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = digits(a)
            for b in range(q):
                add[a, b] = number([(x + y) % p for x, y in zip(da, digits(b))])

        exp = [1]
        current = [1] + [0] * (d - 1)
        for _ in range(q - 2):
            top = current[-1]
            current = [0] + current[:-1]
            current = [(c - top * m) % p for c, m in zip(current, modulus[:d])]
            exp.append(number(current))
        if len(set(exp)) != q - 1:
            raise FieldError("Defining polynomial of GF(%d) is not primitive" % q)
        log = [0] * q
        for k, a in enumerate(exp):
            log[a] = k

        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(1, q):
                mul[a, b] = exp[(log[a] + log[b]) % (q - 1)]
        inverses = [0] * q
        for a in range(1, q):
            inverses[a] = exp[(-log[a]) % (q - 1)]

        self.add_table = add
        self.mul_table = mul
        self.exp_table = np.array(exp, dtype=np.int64)
        self.log_table = np.array(log, dtype=np.int64)
        self.inv_table = np.array(inverses, dtype=np.int64)
        self.neg_table = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inverses

    def __repr__(self):
        return "GF(%d)" % self.q

    def __eq__(self, other):
        return isinstance(other, FieldDesc) and self.p == other.p and self.d == other.d

    def __hash__(self):
        return hash((self.p, self.d))

    # == scalar operations on python ints ==
    def sadd(self, a, b):
        if self.is_prime:
            return (a + b) % self.p
        return self._add[a][b]

    def sneg(self, a):
        if self.is_prime:
            return (-a) % self.p
        return self._neg[a]

    def ssub(self, a, b):
        if self.is_prime:
            return (a - b) % self.p
        return self._add[a][self._neg[b]]

    def smul(self, a, b):
        if self.is_prime:
            return (a * b) % self.p
        return self._mul[a][b]

    def sinv(self, a):
        if a == 0:
            raise ZeroDivisionError("Zero has no inverse in " + repr(self))
        return self._inv[a]

    # == vectorised operations on numpy arrays ==
    def add(self, a, b):
        if self.is_prime:
            return (a + b) % self.p
        return self.add_table[a, b]

    def neg(self, a):
        if self.is_prime:
            return (-a) % self.p
        return self.neg_table[a]

    def sub(self, a, b):
        if self.is_prime:
            return (a - b) % self.p
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        if self.is_prime:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def inv(self, a):
        # zero is mapped to zero
        return self.inv_table[a]

    def matmul(self, a, b):
        if self.is_prime:
            return np.matmul(a, b) % self.p
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        result = np.zeros(shape, dtype=np.int64)
        for k in range(a.shape[-1]):
            result = self.add_table[result, self.mul_table[a[..., :, k, None], b[..., None, k, :]]]
        return result


@lru_cache(maxsize=None)
def field_for_order(q):
    if q not in SUPPORTED_ORDERS:
        raise FieldError("Unsupported field order %s, choose one of %s" % (str(q), str(SUPPORTED_ORDERS)))
    factors = factorint(q)
    (p, d), = factors.items()
    return FieldDesc(p, d)


@lru_cache(maxsize=None)
def prime_field(p):
    return FieldDesc(p, 1)


def matrix(rows):
    return np.array(rows, dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def transpose(m):
    return np.swapaxes(m, -1, -2)


def mat_power(field, m, exponent):
    result = identity(m.shape[-1])
    base = m
    while exponent:
        if exponent & 1:
            result = field.matmul(result, base)
        base = field.matmul(base, base)
        exponent >>= 1
    return result


# == encodings ==
def code_weights(field, size):
    # first entry is the most significant digit, so sorting codes is lexicographic order
    return field.q ** np.arange(size - 1, -1, -1, dtype=np.int64)


def encode(field, stack):
    stack = np.asarray(stack)
    flat = stack.reshape(stack.shape[:-2] + (-1,))
    return flat @ code_weights(field, flat.shape[-1])


def decode(field, codes, n_rows, n_cols):
    codes = np.asarray(codes, dtype=np.int64)
    digits = (codes[..., None] // code_weights(field, n_rows * n_cols)) % field.q
    return digits.reshape(codes.shape + (n_rows, n_cols))


def all_matrices(field, n_rows, n_cols, start=0, stop=None):
    total = field.q ** (n_rows * n_cols)
    stop = total if stop is None else min(stop, total)
    return decode(field, np.arange(start, stop, dtype=np.int64), n_rows, n_cols)


# == scalar row reduction ==
def _rref_rows(field, rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == len(rows):
            break
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        scale = field.sinv(rows[rank][c])
        pivot_row = [field.smul(scale, x) for x in rows[rank]]
        rows[rank] = pivot_row
        for i in range(len(rows)):
            f = rows[i][c]
            if i != rank and f:
                rows[i] = [field.ssub(x, field.smul(f, y)) for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        rank += 1
    return rows[:rank], pivots


def row_reduce(field, m):
    m = np.asarray(m)
    if m.shape[0] == 0:
        return np.zeros((0, m.shape[1]), dtype=np.int64), []
    rows, pivots = _rref_rows(field, m.tolist(), m.shape[1])
    return np.array(rows, dtype=np.int64).reshape(len(rows), m.shape[1]), pivots


def mat_rank(field, m):
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if field.q == 2:
        return rank_packed_f2(pack_rows_f2(m))
    return len(row_reduce(field, m)[1])


def nullity(field, m):
    return np.asarray(m).shape[1] - mat_rank(field, m)


def is_invertible(field, m):
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and mat_rank(field, m) == m.shape[0]


def nullspace(field, m):
    """Basis (as rows) of {x : m x = 0}, one vector per free column in ascending order."""
    m = np.asarray(m)
    ncols = m.shape[1]
    if field.q == 2 and m.shape[0] > 0:
        vectors = nullspace_packed_f2(pack_rows_f2(m), ncols)
        return unpack_rows_f2(vectors, ncols)
    rref, pivots = row_reduce(field, m)
    rref = rref.tolist()
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = field.sneg(rref[r][f])
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), ncols)


def span_basis(field, vectors, dim):
    """Canonical (reduced row echelon) basis of the span of row vectors."""
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, dim)
    if vectors.shape[0] == 0:
        return np.zeros((0, dim), dtype=np.int64)
    return row_reduce(field, vectors)[0]


def mat_inv(field, m):
    m = np.asarray(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise SingularMatrix("Only square matrices can be inverted")
    augmented = np.concatenate([m, identity(n)], axis=1)
    rref, pivots = row_reduce(field, augmented)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrix("Matrix is not invertible over " + repr(field))
    return rref[:n, n:]


def coordinates(field, basis_columns, vectors):
    """Solve basis_columns @ x = v for each column v of vectors (basis has full column rank)."""
    basis_columns = np.asarray(basis_columns)
    dim = basis_columns.shape[1]
    augmented = np.concatenate([basis_columns, vectors], axis=1)
    rref, pivots = row_reduce(field, augmented)
    if pivots[:dim] != list(range(dim)) or any(c >= dim for c in pivots):
        raise SingularMatrix("Vectors do not lie in the span of the basis")
    return rref[:dim, dim:]


# == vectorised kernels on stacks ==
def batch_rank(field, stack):
    stack = np.array(stack, dtype=np.int64)
    n_mats, n_rows, n_cols = stack.shape
    idx = np.arange(n_mats)
    row_ids = np.arange(n_rows)
    rank = np.zeros(n_mats, dtype=np.int64)
    for c in range(n_cols):
        candidates = (stack[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has_pivot = candidates.any(axis=1)
        r = np.minimum(rank, n_rows - 1)
        piv = np.where(has_pivot, candidates.argmax(axis=1), r)
        top = stack[idx, r].copy()
        stack[idx, r] = stack[idx, piv]
        stack[idx, piv] = top
        pivot_row = field.mul(field.inv(stack[idx, r, c])[:, None], stack[idx, r])
        stack[idx, r] = np.where(has_pivot[:, None], pivot_row, stack[idx, r])
        below = (row_ids[None, :] > rank[:, None]) & has_pivot[:, None]
        factors = np.where(below, stack[:, :, c], 0)
        stack = field.sub(stack, field.mul(factors[:, :, None], stack[idx, r][:, None, :]))
        rank += has_pivot
    return rank


def batch_inverse(field, stack):
    stack = np.asarray(stack, dtype=np.int64)
    n_mats, n, _ = stack.shape
    idx = np.arange(n_mats)
    aug = np.concatenate([stack, np.broadcast_to(identity(n), stack.shape)], axis=2)
    for c in range(n):
        nonzero = aug[:, c:, c] != 0
        if not nonzero.any(axis=1).all():
            raise SingularMatrix("Stack contains a singular matrix")
        piv = c + nonzero.argmax(axis=1)
        top = aug[idx, c].copy()
        aug[idx, c] = aug[idx, piv]
        aug[idx, piv] = top
        aug[:, c] = field.mul(field.inv(aug[:, c, c])[:, None], aug[:, c])
        factors = aug[:, :, c].copy()
        factors[:, c] = 0
        aug = field.sub(aug, field.mul(factors[:, :, None], aug[:, c][:, None, :]))
    return aug[:, :, n:]


# == bit-packed F_2 kernels ==
def pack_rows_f2(m):
    m = np.asarray(m)
    ncols = m.shape[-1]
    weights = [1 << (ncols - 1 - j) for j in range(ncols)]
    return [sum(w for w, bit in zip(weights, row) if bit) for row in m.tolist()]


def unpack_rows_f2(rows, ncols):
    return np.array([[(r >> (ncols - 1 - j)) & 1 for j in range(ncols)] for r in rows],
                    dtype=np.int64).reshape(len(rows), ncols)


def rank_packed_f2(rows):
    leading = {}
    for r in rows:
        while r:
            h = r.bit_length()
            if h in leading:
                r ^= leading[h]
            else:
                leading[h] = r
                break
    return len(leading)


def rref_packed_f2(rows, ncols):
    rows = list(rows)
    pivots = []
    rank = 0
    for c in range(ncols):
        bit = 1 << (ncols - 1 - c)
        piv = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
        pivots.append(c)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def nullspace_packed_f2(rows, ncols):
    reduced, pivots = rref_packed_f2(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        fbit = 1 << (ncols - 1 - f)
        v = fbit
        for r, c in zip(reduced, pivots):
            if r & fbit:
                v |= 1 << (ncols - 1 - c)
        basis.append(v)
    return basis


# == linear conditions on an unknown matrix ==
def linear_conjugator_space(field, pairs):
    """Basis of {g : g X = Y g for every (X, Y) in pairs}, as a stack of matrices."""
    n = pairs[0][0].shape[0]
    equations = []
    for x, y in pairs:
        x = x.tolist()
        y = y.tolist()
        for i in range(n):
            for j in range(n):
                coef = [0] * (n * n)
                for k in range(n):
                    coef[i * n + k] = field.sadd(coef[i * n + k], x[k][j])
                    coef[k * n + j] = field.ssub(coef[k * n + j], y[i][k])
                equations.append(coef)
    if not equations:
        return np.eye(n * n, dtype=np.int64).reshape(n * n, n, n)
    basis = nullspace(field, np.array(equations, dtype=np.int64))
    return basis.reshape(-1, n, n)


def solve_intertwiner_space(field, a, b):
    return linear_conjugator_space(field, [(a, transpose(a)), (b, transpose(b))])


def centralizer_space(field, a):
    return linear_conjugator_space(field, [(a, a)])


# == univariate polynomials ==
def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _padd(field, a, b):
    if len(a) < len(b):
        a, b = b, a
    result = list(a)
    for i, c in enumerate(b):
        result[i] = field.sadd(result[i], c)
    return _trim(result)


def _psub(field, a, b):
    return _padd(field, a, tuple(field.sneg(c) for c in b))


def _pmul(field, a, b):
    if not a or not b:
        return ()
    result = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                result[i + j] = field.sadd(result[i + j], field.smul(x, y))
    return _trim(result)


def _pdivmod(field, a, b):
    if not b:
        raise ZeroDivisionError("Polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    inv_lead = field.sinv(b[-1])
    quot = [0] * max(len(rem) - db, 1)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = field.smul(c, inv_lead)
        quot[i - db] = f
        for j, y in enumerate(b):
            rem[i - db + j] = field.ssub(rem[i - db + j], field.smul(f, y))
    return _trim(quot), _trim(rem)


def _pmonic(field, a):
    if not a:
        return a
    inv_lead = field.sinv(a[-1])
    return tuple(field.smul(inv_lead, c) for c in a)


class PolyFq:
    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = _trim(int(c) for c in coeffs)

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.leading == 1

    def monic(self):
        return PolyFq(self.field, _pmonic(self.field, self.coeffs))

    def __add__(self, other):
        return PolyFq(self.field, _padd(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other):
        return PolyFq(self.field, _psub(self.field, self.coeffs, other.coeffs))

    def __neg__(self):
        return PolyFq(self.field, tuple(self.field.sneg(c) for c in self.coeffs))

    def __mul__(self, other):
        return PolyFq(self.field, _pmul(self.field, self.coeffs, other.coeffs))

    def __divmod__(self, other):
        quot, rem = _pdivmod(self.field, self.coeffs, other.coeffs)
        return PolyFq(self.field, quot), PolyFq(self.field, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __pow__(self, exponent):
        result = PolyFq.constant(self.field, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, PolyFq) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __lt__(self, other):
        return (self.degree, self.coeffs) < (other.degree, other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            monomial = "" if k == 0 else ("x" if k == 1 else "x^%d" % k)
            if not monomial:
                terms.append(str(c))
            elif c == 1:
                terms.append(monomial)
            else:
                terms.append("%d*%s" % (c, monomial))
        return " + ".join(terms)


@lru_cache(maxsize=None)
def monic_irreducibles(field, degree):
    if degree < 1:
        return ()
    if degree > IRREDUCIBLE_DEGREE_LIMIT:
        raise FieldError("Irreducible polynomials are tabulated up to degree %d" % IRREDUCIBLE_DEGREE_LIMIT)
    smaller = [f for d in range(1, degree // 2 + 1) for f in monic_irreducibles(field, d)]
    result = []
    for tail in product(range(field.q), repeat=degree):
        coeffs = tail + (1,)
        if all(_pdivmod(field, coeffs, f.coeffs)[1] for f in smaller):
            result.append(PolyFq(field, coeffs))
    return tuple(result)


def poly_factor(f):
    """Factorisation of a nonzero polynomial into monic irreducibles, as sorted (factor, multiplicity) pairs."""
    if f.is_zero():
        raise ValueError("Zero polynomial cannot be factored")
    field = f.field
    rest = f.monic().coeffs
    factors = []
    degree = 1
    while 2 * degree <= len(rest) - 1:
        for irreducible in monic_irreducibles(field, degree):
            multiplicity = 0
            while True:
                quot, rem = _pdivmod(field, rest, irreducible.coeffs)
                if rem:
                    break
                rest = quot
                multiplicity += 1
            if multiplicity:
                factors.append((irreducible, multiplicity))
        degree += 1
    if len(rest) > 1:
        factors.append((PolyFq(field, rest), 1))
    return sorted(factors, key=lambda x: (x[0].degree, x[0].coeffs))


def _characteristic_matrix(field, g):
    g = np.asarray(g).tolist()
    n = len(g)
    return [[_padd(field, (field.sneg(g[i][j]),), (0, 1) if i == j else ()) for j in range(n)] for i in range(n)]


def smith_normal_form(field, poly_matrix):
    """Diagonal of the Smith normal form of a square matrix over F_q[x] (coefficient tuples), made monic."""
    m = [list(row) for row in poly_matrix]
    n = len(m)
    for t in range(n):
        while True:
            pivot = None
            for i in range(t, n):
                for j in range(t, n):
                    if m[i][j] and (pivot is None or len(m[i][j]) < len(m[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return [_pmonic(field, m[i][i]) for i in range(n)]
            i, j = pivot
            m[t], m[i] = m[i], m[t]
            for row in m:
                row[t], row[j] = row[j], row[t]
            p = m[t][t]
            reduced = True
            for i in range(t + 1, n):
                if m[i][t]:
                    quot, _ = _pdivmod(field, m[i][t], p)
                    m[i] = [_psub(field, a, _pmul(field, quot, b)) for a, b in zip(m[i], m[t])]
                    reduced = reduced and not m[i][t]
            for j in range(t + 1, n):
                if m[t][j]:
                    quot, _ = _pdivmod(field, m[t][j], p)
                    for row in m:
                        row[j] = _psub(field, row[j], _pmul(field, quot, row[t]))
                    reduced = reduced and not m[t][j]
            if not reduced:
                continue
            bad_row = next((i for i in range(t + 1, n) for j in range(t + 1, n)
                            if _pdivmod(field, m[i][j], p)[1]), None)
            if bad_row is None:
                break
            m[t] = [_padd(field, a, b) for a, b in zip(m[t], m[bad_row])]
    return [_pmonic(field, m[i][i]) for i in range(n)]


def invariant_factor_key(field, g):
    """Invariant factors of xI - g as a tuple of coefficient tuples (hashable class key)."""
    diagonal = smith_normal_form(field, _characteristic_matrix(field, g))
    return tuple(d for d in diagonal if len(d) > 1)


def invariant_factors(field, g):
    return [PolyFq(field, c) for c in invariant_factor_key(field, g)]


def _poly_det(field, m):
    n = len(m)
    if n == 1:
        return m[0][0]
    result = ()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = _pmul(field, m[0][j], _poly_det(field, minor))
        result = _padd(field, result, term) if j % 2 == 0 else _psub(field, result, term)
    return result


def charpoly_by_expansion(field, g):
    """det(xI - g) by cofactor expansion."""
    if np.asarray(g).shape[0] == 0:
        return PolyFq.constant(field, 1)
    return PolyFq(field, _poly_det(field, _characteristic_matrix(field, g)))
