############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

"""
The weight filtration of a nilpotent operator A: the unique decreasing filtration
D[i] with A D[i] in D[i+2] and A^l an isomorphism from D[-l]/D[-l+1] onto
D[l]/D[l+1]. It is read off a Jordan basis: in a chain v, Av, ..., A^{m-1}v the
vector A^t v has weight 2t - (m - 1).
"""

import logging
from collections import defaultdict, namedtuple
from itertools import combinations

import numpy as np

from src.common import DEFAULT_BOUNDS, RepCheckError, partitions, proper_plural_form
from src.ffalg import (
    all_matrices,
    batch_rank,
    centralizer_space,
    decode,
    encode,
    field_for_order,
    identity,
    mat_inv,
    mat_power,
    mat_rank,
    nullspace,
    span_basis,
    transpose,
)
from src.groups import GroupSpec, OrderBoundExceeded, enumerate_group

logger = logging.getLogger('RepCheck')


class NotNilpotent(RepCheckError):
    pass


class FiltrationError(RepCheckError):
    pass


def nilpotency_index(field, A):
    """Smallest s with A^s = 0."""
    A = np.asarray(A, dtype=np.int64)
    N = A.shape[0]
    power = identity(N)
    for s in range(N + 1):
        if not power.any():
            return s
        power = field.matmul(power, A)
    raise NotNilpotent("Matrix is not nilpotent: A^%d is non-zero" % N)


def _apply(field, A, v):
    return field.matmul(A, v[:, None])[:, 0]


def _rank_of_rows(field, rows, dim):
    if len(rows) == 0:
        return 0
    return mat_rank(field, np.asarray(rows, dtype=np.int64).reshape(-1, dim))


def jordan_chains(field, A):
    """
    Chains [v, Av, ..., A^{m-1}v] forming a basis, longest first. Tops of length j
    are the first vectors of the reduced basis of Ker A^j independent of
    Ker A^{j-1} and of the level-j vectors of longer chains.
    """
    A = np.asarray(A, dtype=np.int64)
    N = A.shape[0]
    s = nilpotency_index(field, A)
    kernels = [np.zeros((0, N), dtype=np.int64)]
    for j in range(1, s + 1):
        kernels.append(span_basis(field, nullspace(field, mat_power(field, A, j)), N))
    tops = []
    for j in range(s, 0, -1):
        current = [row for row in kernels[j - 1]]
        for v, m in tops:
            current.append(_apply(field, mat_power(field, A, m - j), v))
        rank = _rank_of_rows(field, current, N)
        for candidate in kernels[j]:
            extended = current + [candidate]
            extended_rank = _rank_of_rows(field, extended, N)
            if extended_rank > rank:
                tops.append((candidate, j))
                current = extended
                rank = extended_rank
    chains = []
    for v, m in tops:
        chain = [v]
        for _ in range(m - 1):
            chain.append(_apply(field, A, chain[-1]))
        chains.append(chain)
    return chains


def jordan_matrix(partition):
    """Nilpotent matrix with Jordan blocks of the given sizes, A e_{i+1} = e_i inside a block."""
    N = sum(partition)
    A = np.zeros((N, N), dtype=np.int64)
    start = 0
    for m in partition:
        for i in range(start, start + m - 1):
            A[i, i + 1] = 1
        start += m
    return A


def nilpotent_class_representatives(N):
    """One Jordan matrix per nilpotent conjugacy class (partition of N)."""
    return [(p, jordan_matrix(p)) for p in partitions(N)]


class DeligneFiltration:
    def __init__(self, field, A, chains):
        self.field = field
        self.A = np.asarray(A, dtype=np.int64)
        self.N = self.A.shape[0]
        self.lengths = [len(c) for c in chains]
        self.s = max(self.lengths) if self.lengths else 0
        columns = []
        weights = []
        self.tops = []
        self.bottoms = []
        for chain in chains:
            m = len(chain)
            self.tops.append(len(columns))
            self.bottoms.append(len(columns) + m - 1)
            for t, v in enumerate(chain):
                columns.append(v)
                weights.append(2 * t - (m - 1))
        self.basis = transpose(np.array(columns, dtype=np.int64).reshape(-1, self.N))
        self.weights = np.array(weights, dtype=np.int64)

    @property
    def low(self):
        return -(self.s - 1)

    @property
    def high(self):
        return self.s

    def subspace(self, i):
        """Reduced row basis of D[i]."""
        chosen = self.basis[:, self.weights >= i]
        return span_basis(self.field, transpose(chosen), self.N)

    def dimension(self, i):
        return int((self.weights >= i).sum())

    def graded_dimensions(self):
        return {int(w): int((self.weights == w).sum()) for w in np.unique(self.weights)}

    def kernel_filtration(self):
        """Weight w -> chains whose bottom (a basis vector of Ker A) has weight >= w."""
        return {w: [c for c, m in enumerate(self.lengths) if m - 1 >= w] for w in range(self.low, self.high + 1)}

    def cokernel_filtration(self):
        """Weight w -> chains whose top (a basis vector of Coker A) has weight >= w."""
        return {w: [c for c, m in enumerate(self.lengths) if -(m - 1) >= w] for w in range(self.low, self.high + 1)}

    def mu(self):
        """A^{m-1} maps the top of each length-m chain in Coker A onto its bottom in Ker A."""
        groups = defaultdict(list)
        for c, m in enumerate(self.lengths):
            groups[m].append(c)
        return dict(groups)

    def verify(self):
        field = self.field
        N = self.N
        if self.basis.shape != (N, N) or mat_rank(field, self.basis) != N:
            raise FiltrationError("Chains do not form a basis")
        if self.dimension(self.low) != N or self.dimension(self.high) != 0:
            raise FiltrationError("Filtration does not run from V to 0")
        for i in range(self.low - 1, self.high + 1):
            upper = self.subspace(i)
            image = transpose(field.matmul(self.A, transpose(upper))) if len(upper) else upper
            target = self.subspace(i + 2)
            if _rank_of_rows(field, list(target) + list(image), N) != len(target):
                raise FiltrationError("A does not raise the filtration degree by 2 at %d" % i)
        for l in range(1, self.s):
            source = self.subspace(-l)
            power = mat_power(field, self.A, l)
            image = transpose(field.matmul(power, transpose(source)))
            below = self.subspace(l + 1)
            gr_target = self.dimension(l) - self.dimension(l + 1)
            gr_source = self.dimension(-l) - self.dimension(-l + 1)
            reached = _rank_of_rows(field, list(below) + list(image), N) - len(below)
            if gr_source != gr_target or reached != gr_target:
                raise FiltrationError("A^%d is not an isomorphism between graded pieces %d and %d" % (l, -l, l))
        return True

    def as_vector_sets(self, window):
        """D[i] for i in window as frozensets of vector codes."""
        return tuple(subspace_vectors(self.field, self.subspace(i), self.N) for i in window)

    def to_dict(self):
        return {'A': self.A.tolist(), 'basis': self.basis.tolist(), 'weights': self.weights.tolist()}


def deligne_filtration(field, A):
    filtration = DeligneFiltration(field, A, jordan_chains(field, A))
    filtration.verify()
    return filtration


def nilpotent_matrices(q, N, size_bound=DEFAULT_BOUNDS.size):
    field = field_for_order(q)
    total = q ** (N * N)
    if total > size_bound:
        raise OrderBoundExceeded("%d candidate matrices exceed the size bound %d" % (total, size_bound))
    stack = all_matrices(field, N, N)
    power = stack
    for _ in range(N - 1):
        power = field.matmul(power, stack)
    return stack[~power.reshape(len(stack), -1).any(axis=1)]


# == exhaustive uniqueness ==
def subspace_vectors(field, rows, dim):
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, dim)
    if len(rows) == 0:
        return frozenset([0])
    coefficients = decode(field, np.arange(field.q ** len(rows), dtype=np.int64), 1, len(rows)).reshape(-1, len(rows))
    vectors = field.matmul(coefficients, rows)
    return frozenset(encode(field, vectors[:, None, :]).tolist())


def all_subspaces(field, dim):
    vectors = all_matrices(field, 1, dim).reshape(-1, dim)
    found = {frozenset([0])}
    for size in range(1, dim + 1):
        for rows in combinations(range(1, len(vectors)), size):
            basis = vectors[list(rows)]
            if mat_rank(field, basis) == size:
                found.add(subspace_vectors(field, basis, dim))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _operator_on_codes(field, A, dim):
    vectors = all_matrices(field, 1, dim).reshape(-1, dim)
    images = transpose(field.matmul(A, transpose(vectors)))
    return encode(field, images[:, None, :])


def _satisfies_weight_conditions(chain, low, images, powers):
    """chain[i - low] = D[i]; degree 2 and the graded isomorphisms."""
    top = low + len(chain) - 1

    def D(i):
        if i < low:
            return chain[0]
        if i > top:
            return frozenset([0])
        return chain[i - low]

    for i in range(low, top + 1):
        if not all(images[v] in D(i + 2) for v in D(i)):
            return False
    for l in range(1, top + 1):
        power = powers[l]
        source, source_next = D(-l), D(-l + 1)
        target, target_next = D(l), D(l + 1)
        if len(source) * len(target_next) != len(target) * len(source_next):
            return False
        if not all(power[v] in target for v in source):
            return False
        if frozenset(v for v in source if power[v] in target_next) != source_next:
            return False
    return True


def weight_filtrations(field, A):
    """Every decreasing filtration D[-(N-1)] = V, ..., D[N] = 0 with the weight conditions for A."""
    N = A.shape[0]
    subspaces = all_subspaces(field, N)
    whole = subspaces[-1]
    images = dict(zip(range(field.q ** N), _operator_on_codes(field, A, N).tolist()))
    powers = {l: dict(zip(range(field.q ** N), _operator_on_codes(field, mat_power(field, A, l), N).tolist()))
              for l in range(1, N + 1)}
    low = -(N - 1)
    free = 2 * N - 2
    found = []

    def extend(chain):
        if len(chain) == free + 1:
            full = chain + [frozenset([0])]
            if _satisfies_weight_conditions(full, low, images, powers):
                found.append(tuple(full))
            return
        for candidate in subspaces:
            if candidate <= chain[-1]:
                extend(chain + [candidate])

    extend([whole])
    return found


def deligne_uniqueness_check(dim, q=2):
    field = field_for_order(q)
    window = list(range(-(dim - 1), dim + 1))
    checked = 0
    for A in nilpotent_matrices(q, dim):
        candidates = weight_filtrations(field, A)
        expected = deligne_filtration(field, A).as_vector_sets(window)
        if len(candidates) != 1 or candidates[0] != expected:
            logger.warning("Weight filtration of %s is not unique (%d candidates)" % (str(A.tolist()), len(candidates)))
            return False
        checked += 1
    logger.info("Weight filtration is unique for %s of size %d over F_%d" %
                (proper_plural_form("nilpotent matrix", checked), dim, q))
    return True


# == Im(nu_A) = P_A ==
NuImageReport = namedtuple('NuImageReport', ('passed', 'image_size', 'parabolic_size'))


def _invertible_centralizer(field, A, size_bound):
    basis = centralizer_space(field, A)
    d = len(basis)
    N = A.shape[0]
    if field.q ** d > size_bound:
        raise OrderBoundExceeded("Centralizer space has %d elements, bound is %d" % (field.q ** d, size_bound))
    coefficients = decode(field, np.arange(field.q ** d, dtype=np.int64), 1, d).reshape(-1, d)
    combos = np.zeros((len(coefficients), N, N), dtype=np.int64)
    for i in range(d):
        combos = field.add(combos, field.mul(coefficients[:, i, None, None], basis[i][None]))
    return combos[batch_rank(field, combos) == N]


def _preserves(stack, indices, k):
    """Which matrices of the stack map the coordinate subspace on indices into itself."""
    outside = [r for r in range(k) if r not in indices]
    if not indices or not outside:
        return np.ones(len(stack), dtype=bool)
    return ~(stack[:, outside][:, :, indices] != 0).any(axis=(1, 2))


def nu_image(filtration, size_bound=DEFAULT_BOUNDS.size):
    """(g on Ker A, g on Coker A) for invertible g commuting with A, in the chain bottoms and chain tops."""
    field = filtration.field
    centralizer = _invertible_centralizer(field, filtration.A, size_bound)
    basis_inv = mat_inv(field, filtration.basis)
    local = field.matmul(field.matmul(basis_inv, centralizer), filtration.basis)
    on_kernel = local[:, filtration.bottoms][:, :, filtration.bottoms]
    on_cokernel = local[:, filtration.tops][:, :, filtration.tops]
    return set(zip(encode(field, on_kernel).tolist(), encode(field, on_cokernel).tolist()))


def parabolic_pairs(filtration, bounds=DEFAULT_BOUNDS):
    """
    Pairs (x, y) in GL(Ker A) x GL(Coker A) with x preserving the induced filtration
    on Ker A, y the one on Coker A, and equal graded parts under mu.
    """
    field = filtration.field
    k = len(filtration.lengths)
    gl_k = enumerate_group(GroupSpec.general_linear(k, field.q), bounds.order).elements
    x_ok = np.ones(len(gl_k), dtype=bool)
    for indices in filtration.kernel_filtration().values():
        x_ok &= _preserves(gl_k, indices, k)
    y_ok = np.ones(len(gl_k), dtype=bool)
    for indices in filtration.cokernel_filtration().values():
        y_ok &= _preserves(gl_k, indices, k)
    graded = list(filtration.mu().values())

    def signature(g):
        return tuple(g[np.ix_(idx, idx)].tobytes() for idx in graded)

    by_signature = defaultdict(list)
    for x in gl_k[x_ok]:
        by_signature[signature(x)].append(x)
    pairs = set()
    for y in gl_k[y_ok]:
        matching = by_signature.get(signature(y), [])
        if matching:
            y_code = int(encode(field, y))
            for x_code in encode(field, np.array(matching)).tolist():
                pairs.add((x_code, y_code))
    return pairs


def nu_image_check(field, A, bounds=DEFAULT_BOUNDS):
    filtration = deligne_filtration(field, A)
    image = nu_image(filtration, bounds.size)
    expected = parabolic_pairs(filtration, bounds)
    passed = image == expected
    logger.info("nu image for Jordan type %s over F_%d: %d pairs, P_A has %d, %s" %
                (str(sorted(filtration.lengths, reverse=True)), field.q, len(image), len(expected),
                 "equal" if passed else "different"))
    return NuImageReport(passed, len(image), len(expected))
