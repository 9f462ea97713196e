############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

"""
Pairs of matrices (A, B) with AB = BA = 0, rank A = n, rank B = k, and the
simultaneous transposition theta(A, B) = (A^t, B^t). A G-orbit is theta-invariant
exactly when some invertible g has g A g^{-1} = A^t and g B g^{-1} = B^t; such g
form the invertible part of a linear space, which is swept for a witness.

The key lemma and its dual are orbit statements for finite groups acting on
matrices and are decided by labelling orbits of the whole space.
"""

import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from src.common import DEFAULT_BOUNDS, RepCheckError, list_to_str, proper_plural_form
from src.ffalg import (
    all_matrices,
    batch_rank,
    coordinates,
    decode,
    encode,
    field_for_order,
    identity,
    is_invertible,
    linear_conjugator_space,
    mat_inv,
    mat_power,
    nullspace,
    solve_intertwiner_space,
    span_basis,
    transpose,
)
from src.groups import GroupSpec, enumerate_group, orbit_labels, parabolic

logger = logging.getLogger('RepCheck')

SWEEP_CHUNK = 4096

# over F_2 the P''-orbit of this 3-cycle permutation matrix (composition (1,1,1)) misses its transpose
KEY_LEMMA_FIXTURE = np.array([[0, 1, 0],
                              [0, 0, 1],
                              [1, 0, 0]], dtype=np.int64)


class SizeBoundExceeded(RepCheckError):
    pass


class CertificateError(RepCheckError):
    pass


class XPair:
    def __init__(self, field, A, B, n, k):
        self.field = field
        self.A = np.asarray(A, dtype=np.int64)
        self.B = np.asarray(B, dtype=np.int64)
        self.n = n
        self.k = k

    @property
    def N(self):
        return self.A.shape[0]

    def is_valid(self):
        zero = np.zeros_like(self.A)
        return (np.array_equal(self.field.matmul(self.A, self.B), zero) and
                np.array_equal(self.field.matmul(self.B, self.A), zero) and
                int(batch_rank(self.field, self.A[None])[0]) == self.n and
                int(batch_rank(self.field, self.B[None])[0]) == self.k)

    @property
    def nilpotent(self):
        return not mat_power(self.field, self.A, self.N).any()

    def transposed(self):
        return XPair(self.field, transpose(self.A), transpose(self.B), self.n, self.k)

    def swapped(self):
        return XPair(self.field, self.B, self.A, self.k, self.n)

    def to_dict(self):
        return {'A': self.A.tolist(), 'B': self.B.tolist(), 'n': self.n, 'k': self.k}


class CertificateStatus(Enum):
    witnessed = "witnessed"
    refuted_by_exhaustion = "refuted-by-exhaustion"


def is_theta_witness(field, A, B, g):
    g = np.asarray(g, dtype=np.int64)
    return (is_invertible(field, g) and
            np.array_equal(field.matmul(g, A), field.matmul(transpose(A), g)) and
            np.array_equal(field.matmul(g, B), field.matmul(transpose(B), g)))


class OrbitCertificate:
    def __init__(self, pair, witness):
        self.pair = pair
        self.witness = witness
        if witness is None:
            self.status = CertificateStatus.refuted_by_exhaustion
        elif is_theta_witness(pair.field, pair.A, pair.B, witness):
            self.status = CertificateStatus.witnessed
        else:
            raise CertificateError("Claimed witness does not conjugate the pair to its transpose")

    @property
    def witnessed(self):
        return self.status == CertificateStatus.witnessed

    def to_dict(self):
        result = self.pair.to_dict()
        result['status'] = self.status.value
        if self.witness is not None:
            result['witness'] = self.witness.tolist()
        return result


# == enumeration of X_{n,k} ==
def _matrices_of_rank(field, N, rank, size_bound):
    total = field.q ** (N * N)
    if total > size_bound:
        raise SizeBoundExceeded("%d candidate %dx%d matrices exceed the size bound %d" % (total, N, N, size_bound))
    chunks = []
    for start in range(0, total, 1 << 16):
        candidates = all_matrices(field, N, N, start, start + (1 << 16))
        chunks.append(candidates[batch_rank(field, candidates) == rank])
    return np.concatenate(chunks)


def enumerate_X(q, n, k, size_bound=DEFAULT_BOUNDS.size):
    """
    Every pair of X_{n,k}(F_q) exactly once. For A of rank n, B = K h L where the
    columns of K span Ker A, the rows of L span the left kernel of A and h runs
    over GL_k: B kills Im A, lands in Ker A and has rank k exactly when h is invertible.
    """
    if n < 1 or k < 1:
        raise ValueError("Ranks n = %d and k = %d must be positive" % (n, k))
    field = field_for_order(q)
    N = n + k
    gl_k = enumerate_group(GroupSpec.general_linear(k, q)).elements
    for A in _matrices_of_rank(field, N, n, size_bound):
        K = transpose(nullspace(field, A))
        L = nullspace(field, transpose(A))
        stack = field.matmul(field.matmul(K, gl_k), L)
        for B in stack:
            yield XPair(field, A, B, n, k)


def count_X(q, n, k, size_bound=DEFAULT_BOUNDS.size):
    return sum(1 for _ in enumerate_X(q, n, k, size_bound))


# == witnesses ==
def first_invertible(field, basis):
    """First invertible combination sum c_i basis_i, coefficient vectors swept lexicographically."""
    d = len(basis)
    if d == 0:
        return None
    size = basis.shape[-1]
    total = field.q ** d
    for start in range(0, total, SWEEP_CHUNK):
        coefficients = decode(field, np.arange(start, min(total, start + SWEEP_CHUNK), dtype=np.int64), 1, d)
        coefficients = coefficients.reshape(-1, d)
        combos = np.zeros((len(coefficients), size, size), dtype=np.int64)
        for i in range(d):
            combos = field.add(combos, field.mul(coefficients[:, i, None, None], basis[i][None]))
        hits = np.nonzero(batch_rank(field, combos) == size)[0]
        if len(hits):
            return combos[hits[0]]
    return None


def theta_witness(field, A, B):
    if np.array_equal(A, transpose(A)) and np.array_equal(B, transpose(B)):
        return identity(A.shape[0])
    return first_invertible(field, solve_intertwiner_space(field, A, B))


def theta_orbit_witness(pair):
    return OrbitCertificate(pair, theta_witness(pair.field, pair.A, pair.B))


def transpose_conjugator(field, A):
    """An invertible g with g A g^{-1} = A^t."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[0] == 0:
        return identity(0)
    g = first_invertible(field, linear_conjugator_space(field, [(A, transpose(A))]))
    if g is None:
        raise CertificateError("No invertible conjugator between a matrix and its transpose")
    return g


FittingSplit = namedtuple('FittingSplit', ('nilpotent_basis', 'invertible_basis'))


def fitting_decomposition(field, A):
    """F^N = Ker A^N + Im A^N; bases returned as columns."""
    A = np.asarray(A, dtype=np.int64)
    N = A.shape[0]
    power = mat_power(field, A, N)
    kernel = transpose(nullspace(field, power))
    image = transpose(span_basis(field, transpose(power), N))
    if kernel.shape[1] + image.shape[1] != N or not is_invertible(field, np.concatenate([kernel, image], axis=1)):
        raise RepCheckError("Kernel and image of A^N do not split the space")
    return FittingSplit(kernel, image)


def _restrict(field, A, basis):
    if basis.shape[1] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return coordinates(field, basis, field.matmul(A, basis))


def _block_diagonal(field, first, second):
    a, b = first.shape[0], second.shape[0]
    result = np.zeros((a + b, a + b), dtype=np.int64)
    result[:a, :a] = first
    result[a:, a:] = second
    return result


def theta_witness_by_reduction(pair):
    """
    Witness glued from the nilpotent and invertible parts of A. B kills Im A^N and
    lands in Ker A, so in a basis S adapted to the split both matrices are block
    diagonal; with g_S conjugating them to their transposes, g = S^{-t} g_S S^{-1}.
    """
    field = pair.field
    split = fitting_decomposition(field, pair.A)
    S = np.concatenate([split.nilpotent_basis, split.invertible_basis], axis=1)
    A_V = _restrict(field, pair.A, split.nilpotent_basis)
    B_V = _restrict(field, pair.B, split.nilpotent_basis)
    A_W = _restrict(field, pair.A, split.invertible_basis)
    if A_V.shape[0]:
        g_V = theta_witness(field, A_V, B_V)
        if g_V is None:
            return OrbitCertificate(pair, None)
    else:
        g_V = identity(0)
    g_S = _block_diagonal(field, g_V, transpose_conjugator(field, A_W))
    S_inv = mat_inv(field, S)
    g = field.matmul(field.matmul(transpose(S_inv), g_S), S_inv)
    return OrbitCertificate(pair, g)


GeometricReport = namedtuple('GeometricReport', ('passed', 'counts', 'counterexamples'))


def verify_geometric_statement(q, N, size_bound=DEFAULT_BOUNDS.size, max_counterexamples=10):
    """Every pair of X_{n,k}, n + k = N, gets a theta witness; nilpotent A are tallied separately."""
    counts = {}
    counterexamples = []
    for n in range(1, N):
        k = N - n
        total = nilpotent = refuted = 0
        for pair in enumerate_X(q, n, k, size_bound):
            certificate = theta_orbit_witness(pair)
            total += 1
            nilpotent_pair = pair.nilpotent
            nilpotent += nilpotent_pair
            if not certificate.witnessed:
                refuted += 1
                if len(counterexamples) < max_counterexamples:
                    counterexamples.append(certificate.to_dict())
        counts["%d,%d" % (n, k)] = {'pairs': total, 'nilpotent': nilpotent, 'refuted': refuted}
        logger.info("X(%d,%d) over F_%d: %s, %d with nilpotent A, %d refuted" %
                    (n, k, q, proper_plural_form("pair", total), nilpotent, refuted))
    passed = all(c['refuted'] == 0 for c in counts.values())
    return GeometricReport(passed, counts, counterexamples)


# == orbit statements on matrices ==
OrbitReport = namedtuple('OrbitReport', ('passed', 'orbit_count', 'element', 'transpose', 'orbit'))


def _orbit_report(points, labels, transpose_index, max_orbit=64):
    violating = np.nonzero(labels[transpose_index] != labels)[0]
    orbit_count = len(np.unique(labels))
    if len(violating) == 0:
        return OrbitReport(True, orbit_count, None, None, None)
    g = violating[0]
    orbit = np.nonzero(labels == labels[g])[0][:max_orbit]
    return OrbitReport(False, orbit_count, points[g].tolist(), points[transpose_index[g]].tolist(),
                       [points[x].tolist() for x in orbit])


def _key_lemma_labels(q, k, composition, bounds):
    pdata = parabolic(k, q, composition, bounds.order)
    G = enumerate_group(pdata.gl_spec, bounds.order)
    # P'' is generated by (m, m), (u, 1) and (1, v); it acts by g -> p_+ g p_-^{-1}
    perms = []
    for m in pdata.levi.elements:
        perms.append(G.index_of(G.compose(G.compose(m, G.elements), G.inverse(m))))
    for u in pdata.unipotent.elements:
        perms.append(G.index_of(G.compose(u, G.elements)))
    for v in pdata.opposite_unipotent():
        perms.append(G.index_of(G.compose(G.elements, G.inverse(v))))
    return G, orbit_labels(len(G), perms)


def key_lemma_check(q, k, composition, bounds=DEFAULT_BOUNDS):
    """Every P''-orbit on GL_k under g -> p_+ g p_-^{-1} is closed under transposition."""
    G, labels = _key_lemma_labels(q, k, composition, bounds)
    transposes = G.index_of(transpose(G.elements))
    report = _orbit_report(G.elements, labels, transposes)
    logger.info("Key lemma for GL(%d,%d), composition (%s): %s, %s" %
                (k, q, list_to_str(composition), proper_plural_form("orbit", report.orbit_count),
                 "holds" if report.passed else "fails"))
    return report


def key_lemma_fixture_check(q=2, fixture=KEY_LEMMA_FIXTURE, bounds=DEFAULT_BOUNDS):
    """Re-verify the stored violating element: its transpose lies outside its orbit."""
    fixture = np.asarray(fixture, dtype=np.int64)
    k = fixture.shape[0]
    G, labels = _key_lemma_labels(q, k, (1,) * k, bounds)
    g = G.index_of(fixture[None])[0]
    t = G.index_of(transpose(fixture)[None])[0]
    return bool(labels[g] != labels[t])


def dual_key_lemma_check(q, k, composition, bounds=DEFAULT_BOUNDS):
    """
    V = W = F^k paired by the standard form; the filtration on V is given by the
    composition and the dual one on W by its transpose. P = {(m u, m v)} acts on
    Hom(V, W) by phi -> (m v) phi (m u)^{-1} with the graded parts identified by the
    identity. Passes iff every orbit is closed under transposition.
    """
    field = field_for_order(q)
    total = q ** (k * k)
    if total > bounds.size:
        raise SizeBoundExceeded("Hom(V, W) has %d elements, bound is %d" % (total, bounds.size))
    pdata = parabolic(k, q, composition, bounds.order)
    points = all_matrices(field, k, k)
    levi = pdata.levi
    perms = []
    for m in levi.elements:
        perms.append(encode(field, field.matmul(field.matmul(m, points), levi.inverse(m))))
    for u in pdata.unipotent.elements:
        perms.append(encode(field, field.matmul(points, pdata.unipotent.inverse(u))))
    for v in pdata.opposite_unipotent():
        perms.append(encode(field, field.matmul(v, points)))
    labels = orbit_labels(total, perms)
    report = _orbit_report(points, labels, encode(field, transpose(points)))
    logger.info("Dual key lemma for k = %d over F_%d, composition (%s): %s" %
                (k, q, list_to_str(composition), "holds" if report.passed else "fails"))
    return report
