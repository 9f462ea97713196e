############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

"""
Multiplicities of Jacquet modules of GL_N(F_q) at a standard parabolic P = MU.

For a finite group the U-coinvariants of a representation are its U-invariants,
so dim Hom_M(J(pi_i), rho_j) is a character sum over the products m*u. The same
number is computed three ways (Jacquet sum, P-invariants of pi x rho, the
permutation module on G/U) and compared, and the Hecke algebra of the pair
(G x M, P) is checked for commutativity directly on the coset space G/U.
"""

import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from src.chartab import LiftOutOfRange, choose_prime, match_product_rows
from src.common import DEFAULT_BOUNDS, RepCheckError, compositions, isqrt_ceil, list_to_str, proper_plural_form
from src.ffalg import prime_field
from src.groups import (
    GroupSpec,
    OrderBoundExceeded,
    conjugation_orbits,
    enumerate_group,
    exponent,
    gl_order,
    orbit_labels,
    parabolic,
)
from src.table_storage import TransientStorage

logger = logging.getLogger('RepCheck')

PAIR_CHUNK = 1 << 16

# fixed sweep: q = 2 up to N = 4, q = 3 up to N = 3, every composition
CONFIGURATION_MATRIX = [(2, c) for N in range(2, 5) for c in compositions(N)] + \
                       [(3, c) for N in range(2, 4) for c in compositions(N)]


class BasisBoundExceeded(RepCheckError):
    pass


class MultiplicityMethod(Enum):
    jacquet_sum = "jacquet-sum"
    hom_P = "hom-P"
    perm_module = "perm-module"


class ParabolicSetting:
    """G = GL_N(F_q), a standard parabolic P = MU and the character tables of G and M over one prime."""

    def __init__(self, q, composition, prime=None, storage=None, bounds=DEFAULT_BOUNDS):
        self.q = q
        self.composition = tuple(composition)
        self.N = sum(self.composition)
        self.bounds = bounds
        self.storage = storage if storage is not None else TransientStorage()
        self.pdata = parabolic(self.N, q, self.composition, bounds.order)
        self.G = enumerate_group(self.pdata.gl_spec, bounds.order)
        self.classes_G = self.storage.class_table(self.G)
        self.classes_M = self.storage.class_table(self.pdata.levi)
        if prime is None:
            prime, _ = choose_prime(exponent(self.classes_G), self.classes_G.order)
        self.prime = prime
        self.table_G = self.storage.char_table(self.classes_G, prime)
        self.table_M = self.storage.char_table(self.classes_M, prime)
        logger.info("Parabolic setting GL(%d,%d) with composition (%s), prime %d" %
                    (self.N, q, list_to_str(self.composition), prime))

    @property
    def field(self):
        return prime_field(self.prime)

    @property
    def lift_bound(self):
        return isqrt_ceil(self.classes_G.order)

    def params(self):
        return {'q': self.q, 'N': self.N, 'composition': list(self.composition), 'prime': self.prime}


class MultiplicityReport:
    def __init__(self, params, matrix, method):
        self.params = params
        self.matrix = np.asarray(matrix, dtype=np.int64)
        self.method = method
        # auxiliary identities evaluated alongside (mass identity, restriction identity)
        self.checks = {}

    @property
    def max_multiplicity(self):
        return int(self.matrix.max()) if self.matrix.size else 0

    def first_entry_at_least(self, value):
        hits = np.argwhere(self.matrix >= value)
        if len(hits) == 0:
            return None
        i, j = hits[0]
        return int(i), int(j), int(self.matrix[i, j])

    def to_dict(self):
        return {'params': self.params,
                'method': self.method.value,
                'matrix': self.matrix.tolist(),
                'max_multiplicity': self.max_multiplicity,
                'checks': dict(self.checks)}


def _lift_matrix(values, p, bound, what):
    values = np.asarray(values, dtype=np.int64) % p
    if (values > bound).any():
        i, j = np.argwhere(values > bound)[0]
        raise LiftOutOfRange("%s entry (%d, %d) = %d mod %d exceeds the bound %d" %
                             (what, i, j, values[i, j], p, bound))
    return values


def _character_sum(left, weights, right, scale, p):
    """(left @ weights @ right^T) * scale over F_p."""
    partial = (left % p) @ (weights % p) % p
    return (partial @ (right % p).T) % p * scale % p


# == class distributions ==
def _class_distribution(classes_G, n_m_classes, m_elements, m_class_ids, unipotent, field, pair_bound):
    n_pairs = len(m_elements) * len(unipotent)
    if n_pairs > pair_bound:
        raise OrderBoundExceeded("%d products m*u exceed the pair bound %d" % (n_pairs, pair_bound))
    n_G = len(classes_G)
    N = m_elements.shape[-1]
    counts = np.zeros(n_G * n_m_classes, dtype=np.int64)
    chunk = max(1, PAIR_CHUNK // len(unipotent))
    for start in range(0, len(m_elements), chunk):
        block = m_elements[start:start + chunk]
        products = field.matmul(block[:, None], unipotent[None]).reshape(-1, N, N)
        a = classes_G.identify_many(products)
        b = np.repeat(m_class_ids[start:start + chunk], len(unipotent))
        counts += np.bincount(a * n_m_classes + b, minlength=n_G * n_m_classes)
    return counts.reshape(n_G, n_m_classes)


def class_distribution_MU(classes_G, classes_M, pdata, pair_bound=DEFAULT_BOUNDS.pairs):
    """Ncount[a][b] = #{(m, u) in M x U : class_G(m u) = a, class_M(m) = b}."""
    key = ('ncount', classes_G.group.spec.key())
    if key not in pdata.cache:
        counts = _class_distribution(classes_G, len(classes_M), pdata.levi.elements, classes_M.element_classes,
                                     pdata.unipotent.elements, pdata.field, pair_bound)
        if counts.sum() != len(pdata.levi) * len(pdata.unipotent):
            raise RepCheckError("Class distribution of M x U lost products")
        pdata.cache[key] = counts
    return pdata.cache[key]


def class_distribution(setting):
    return class_distribution_MU(setting.classes_G, setting.classes_M, setting.pdata, setting.bounds.pairs)


# == the three multiplicity formulas ==
def jacquet_multiplicities(setting):
    p = setting.prime
    pdata = setting.pdata
    counts = class_distribution(setting)
    scale = setting.field.sinv(len(pdata.levi) * len(pdata.unipotent) % p)
    right = setting.table_M.values[:, setting.classes_M.inverse_map]
    raw = _character_sum(setting.table_G.values, counts, right, scale, p)
    matrix = _lift_matrix(raw, p, setting.lift_bound, "Jacquet multiplicity")
    report = MultiplicityReport(setting.params(), matrix, MultiplicityMethod.jacquet_sum)
    logger.info("Jacquet multiplicities for (%s): maximum %d" %
                (list_to_str(setting.composition), report.max_multiplicity))
    return report


def invariant_dimensions(setting):
    """dim pi_i^U = |U|^{-1} sum_u chi_i(u) for every irreducible of G."""
    p = setting.prime
    unipotent = setting.pdata.unipotent.elements
    counts = np.bincount(setting.classes_G.identify_many(unipotent), minlength=len(setting.classes_G)) % p
    scale = setting.field.sinv(len(unipotent) % p)
    raw = (setting.table_G.values @ counts) % p * scale % p
    return _lift_matrix(raw[:, None], p, setting.lift_bound, "Invariant dimension")[:, 0]


def mass_identity_check(setting, report):
    """sum_j m[i][j] d_j = dim pi_i^U for every row."""
    degrees = np.array(setting.table_M.degrees, dtype=np.int64)
    return bool(np.array_equal(report.matrix @ degrees, invariant_dimensions(setting)))


def hom_P_matrix(setting):
    """dim (pi_i x rho_j)^P for P diagonal in G x M, acting on rho_j through levi_part."""
    p = setting.prime
    counts = class_distribution(setting)
    scale = setting.field.sinv(len(setting.pdata.parabolic) % p)
    raw = _character_sum(setting.table_G.values, counts, setting.table_M.values, scale, p)
    matrix = _lift_matrix(raw, p, setting.lift_bound, "P-invariant dimension")
    return MultiplicityReport(setting.params(), matrix, MultiplicityMethod.hom_P)


def hom_P_dimension(setting, i, j):
    return int(hom_P_matrix(setting).matrix[i, j])


def fixed_point_counts(setting):
    """fix[a][c] = #{xU in G/U : g_a x m_c^{-1} in xU} for class representatives g_a of G and m_c of M."""
    pdata = setting.pdata
    key = ('fix', setting.classes_G.group.spec.key())
    if key in pdata.cache:
        return pdata.cache[key]
    G = setting.G
    field = pdata.field
    inverses = G.inverse(G.elements)
    rep_positions = setting.classes_M.representative_indices
    fix = np.zeros((len(setting.classes_G), len(setting.classes_M)), dtype=np.int64)
    for a, g in enumerate(setting.classes_G.representatives):
        # g x m^{-1} in xU  <=>  x^{-1} g x in mU  <=>  levi_part(x^{-1} g x) = m with x^{-1} g x in P
        conjugates = field.matmul(field.matmul(inverses, g), G.elements)
        inside = conjugates[pdata.in_parabolic(conjugates)]
        if len(inside) == 0:
            continue
        positions = pdata.levi.index_of(pdata.levi_part(inside))
        hits = np.bincount(positions, minlength=len(pdata.levi))[rep_positions]
        if (hits % len(pdata.unipotent)).any():
            raise RepCheckError("Fixed cosets of class %d are not a union of U-cosets" % a)
        fix[a] = hits // len(pdata.unipotent)
    pdata.cache[key] = fix
    return fix


def perm_module_matrix(setting):
    """Multiplicities of pi_i x rho_j in the permutation module on G/U, (g, m)[x] = [g x m^{-1}]."""
    p = setting.prime
    fix = fixed_point_counts(setting)
    weights = (setting.classes_G.sizes[:, None] % p) * (setting.classes_M.sizes[None, :] % p) % p * (fix % p) % p
    scale = setting.field.sinv(setting.classes_G.order * setting.classes_M.order % p)
    left = setting.table_G.values[:, setting.classes_G.inverse_map]
    right = setting.table_M.values[:, setting.classes_M.inverse_map]
    raw = _character_sum(left, weights, right, scale, p)
    matrix = _lift_matrix(raw, p, setting.lift_bound, "Permutation module multiplicity")
    return MultiplicityReport(setting.params(), matrix, MultiplicityMethod.perm_module)


def perm_module_multiplicity(setting, i, j):
    return int(perm_module_matrix(setting).matrix[i, j])


def contragredient_columns(setting):
    return [setting.table_M.contragredient(j) for j in range(len(setting.table_M))]


def equivalence_check(setting, jacquet_report=None):
    """Jacquet sum at (i, j) equals P-invariants and the permutation module at (i, j*)."""
    jacquet_report = jacquet_report or jacquet_multiplicities(setting)
    dual = contragredient_columns(setting)
    hom_P = hom_P_matrix(setting).matrix[:, dual]
    perm = perm_module_matrix(setting).matrix[:, dual]
    agree = np.array_equal(jacquet_report.matrix, hom_P) and np.array_equal(jacquet_report.matrix, perm)
    if not agree:
        logger.warning("Multiplicity formulas disagree for (%s)" % list_to_str(setting.composition))
    return bool(agree)


# == theorems ==
def verify_theorem_A(q, n, k, storage=None, prime=None, bounds=DEFAULT_BOUNDS):
    if n < 1 or k < 1:
        raise ValueError("Both blocks of the composition (%d,%d) must be non-empty" % (n, k))
    setting = ParabolicSetting(q, (n, k), prime, storage, bounds)
    report = jacquet_multiplicities(setting)
    report.checks['mass_identity'] = mass_identity_check(setting, report)
    passed = report.max_multiplicity <= 1
    logger.info("Multiplicity bound for GL(%d,%d) at (%d,%d): %s" % (n + k, q, n, k, "holds" if passed else "fails"))
    return passed, report


def counterexample_search(q, N, composition, storage=None, prime=None, bounds=DEFAULT_BOUNDS):
    if sum(composition) != N:
        raise ValueError("Composition (%s) does not split %d" % (list_to_str(composition), N))
    setting = ParabolicSetting(q, composition, prime, storage, bounds)
    return jacquet_multiplicities(setting).first_entry_at_least(2)


class LeviFactorSetting:
    """k = 1: H = GL_n(F_q) embedded as the first Levi block, with the tables of H and GL_1 over the prime of G."""

    def __init__(self, q, n, prime=None, storage=None, bounds=DEFAULT_BOUNDS):
        self.parabolic_setting = ParabolicSetting(q, (n, 1), prime, storage, bounds)
        storage = self.parabolic_setting.storage
        prime = self.parabolic_setting.prime
        self.n = n
        self.H = enumerate_group(GroupSpec.general_linear(n, q), bounds.order)
        self.classes_H = storage.class_table(self.H)
        self.table_H = storage.char_table(self.classes_H, prime)
        self.GL1 = enumerate_group(GroupSpec.general_linear(1, q), bounds.order)
        self.classes_GL1 = storage.class_table(self.GL1)
        self.table_GL1 = storage.char_table(self.classes_GL1, prime)

    def embedded_H(self):
        N = self.n + 1
        elements = np.zeros((len(self.H), N, N), dtype=np.int64)
        elements[:, :self.n, :self.n] = self.H.elements
        elements[:, self.n, self.n] = 1
        return elements


def restriction_to_H(levi_setting):
    """m_H[i][s] = (|H||U|)^{-1} sum_{h, u} chi_i(h u) sigma_s(h^{-1})."""
    setting = levi_setting.parabolic_setting
    p = setting.prime
    unipotent = setting.pdata.unipotent.elements
    counts = _class_distribution(setting.classes_G, len(levi_setting.classes_H), levi_setting.embedded_H(),
                                 levi_setting.classes_H.element_classes, unipotent, setting.pdata.field,
                                 setting.bounds.pairs)
    scale = setting.field.sinv(len(levi_setting.H) * len(unipotent) % p)
    right = levi_setting.table_H.values[:, levi_setting.classes_H.inverse_map]
    raw = _character_sum(setting.table_G.values, counts, right, scale, p)
    params = dict(setting.params())
    params['subgroup'] = levi_setting.H.spec.key()
    return MultiplicityReport(params, _lift_matrix(raw, p, setting.lift_bound, "Restriction multiplicity"),
                              MultiplicityMethod.jacquet_sum)


def restriction_identity_check(levi_setting, report_M, report_H):
    """m_H(pi, sigma) equals the sum over characters chi of GL_1 of m(pi, sigma x chi)."""
    factors = match_product_rows(levi_setting.parabolic_setting.table_M, [levi_setting.table_H, levi_setting.table_GL1])
    summed = np.zeros_like(report_H.matrix)
    for column, (s, _) in enumerate(factors):
        summed[:, s] += report_M.matrix[:, column]
    return bool(np.array_equal(summed, report_H.matrix))


def verify_theorem_GL(q, n, storage=None, prime=None, bounds=DEFAULT_BOUNDS):
    levi_setting = LeviFactorSetting(q, n, prime, storage, bounds)
    report = restriction_to_H(levi_setting)
    report_M = jacquet_multiplicities(levi_setting.parabolic_setting)
    report.checks['restriction_identity'] = restriction_identity_check(levi_setting, report_M, report)
    passed = report.max_multiplicity <= 1
    logger.info("Multiplicity bound for GL(%d,%d) restricted to GL(%d,%d): %s" %
                (n + 1, q, n, q, "holds" if passed else "fails"))
    return passed, report


LeviSplitting = namedtuple('LeviSplitting', ('center_order', 'factor_order', 'levi_order', 'holds'))


def levi_component_identity(q, n, storage=None, bounds=DEFAULT_BOUNDS):
    """For M = GL_n x GL_1: the centre Z of G lies in M and M = Z * H with Z and H meeting trivially."""
    setting = ParabolicSetting(q, (n, 1), None, storage, bounds)
    pdata = setting.pdata
    field = pdata.field
    classes = setting.classes_G
    central = np.concatenate([classes.members(j) for j in range(len(classes)) if classes.sizes[j] == 1])
    center = setting.G.elements[central]
    holds = bool(pdata.in_levi(center).all())

    levi = pdata.levi.elements
    scalars = levi[:, -1, -1]
    factor_part = field.mul(field.inv(scalars)[:, None, None], levi)
    holds = holds and bool((factor_part[:, -1, -1] == 1).all())
    holds = holds and bool(np.array_equal(field.mul(scalars[:, None, None], factor_part), levi))
    # a scalar matrix with last entry 1 is the identity
    holds = holds and int(((center[:, -1, -1]) == 1).sum()) == 1
    factor_order = gl_order(n, q)
    holds = holds and len(levi) == len(center) * factor_order
    return LeviSplitting(len(center), factor_order, len(levi), holds)


# == Hecke algebras of homogeneous spaces ==
class HomogeneousSpace:
    """
    A transitive K-set with a base point. Points are labelled by the orbit of the
    base point stabiliser S containing them; these orbits index the basis of the
    algebra of S-biinvariant functions on K. Subclasses supply the transporters:
    compose_points(y, w) is the point k_y . w and relative_positions(z) the points
    k_y^{-1} . z for every y, where k_y maps the base point to y.
    """

    def __init__(self, name, orbit_ids):
        self.name = name
        _, first, self.basis_of_point = np.unique(orbit_ids, return_index=True, return_inverse=True)
        self.basis_representatives = first
        self.n_points = len(self.basis_of_point)

    @property
    def basis_size(self):
        return len(self.basis_representatives)

    def relative_positions(self, z):
        raise NotImplementedError()

    def compose_points(self, y, w):
        raise NotImplementedError()

    def basis_members(self, alpha):
        return np.nonzero(self.basis_of_point == alpha)[0]

    def convolve(self, alpha, beta):
        """Coefficients of e_alpha * e_beta in the basis."""
        ys = self.basis_members(alpha)
        ws = self.basis_members(beta)
        totals = np.zeros(self.n_points, dtype=np.int64)
        for y in ys:
            totals += np.bincount(self.compose_points(np.full(len(ws), y), ws), minlength=self.n_points)
        return totals[self.basis_representatives]


class ParabolicCosetSpace(HomogeneousSpace):
    """G/U under G x M, (g, m)[x] = [g x m^{-1}]; the stabiliser of [1] is P embedded diagonally."""

    def __init__(self, G, pdata):
        self.G = G
        unipotent = pdata.unipotent.elements
        right = [G.index_of(G.compose(G.elements, u)) for u in unipotent]
        labels = orbit_labels(len(G), right)
        base = labels[G.identity_index]
        distinct = np.unique(labels)
        order = np.concatenate([[base], distinct[distinct != base]])
        remap = np.full(len(G), -1, dtype=np.int64)
        remap[order] = np.arange(len(order))
        self.coset_of = remap[labels]
        self.coset_elements = G.elements[order]
        self._inverses = G.inverse(self.coset_elements)

        # p [x] = [p x levi(p)^{-1}] is generated by M acting by conjugation and U acting on the left
        perms = []
        for m in pdata.levi.elements:
            moved = G.compose(G.compose(m, self.coset_elements), G.inverse(m))
            perms.append(self.coset_of[G.index_of(moved)])
        for u in unipotent:
            perms.append(self.coset_of[G.index_of(G.compose(u, self.coset_elements))])
        name = "%s x %s / %s" % (G.spec.key(), pdata.levi_spec.key(), pdata.parabolic.spec.key())
        HomogeneousSpace.__init__(self, name, orbit_labels(len(order), perms))
        logger.debug("%s: %s, %s" % (name, proper_plural_form("coset", self.n_points),
                                     proper_plural_form("double coset", self.basis_size)))

    def relative_positions(self, z):
        return self.coset_of[self.G.index_of(self.G.compose(self._inverses, self.coset_elements[z]))]

    def compose_points(self, y, w):
        return self.coset_of[self.G.index_of(self.G.compose(self.coset_elements[y], self.coset_elements[w]))]


class AdjointSpace(HomogeneousSpace):
    """A group under K x S', (g, m) x = g x m^{-1}; basis = S'-conjugacy classes of K."""

    def __init__(self, group, generators, name=None):
        self.group = group
        self._inverses = group.inverse(group.elements)
        HomogeneousSpace.__init__(self, name or group.spec.key(),
                                  conjugation_orbits(group, [np.asarray(h) for h in generators]))

    def relative_positions(self, z):
        return self.group.index_of(self.group.compose(self._inverses, self.group.elements[z]))

    def compose_points(self, y, w):
        return self.group.index_of(self.group.compose(self.group.elements[y], self.group.elements[w]))


class HeckeCheckReport:
    def __init__(self, space_name, basis_size, commutative, witness=None, products=None, source=None):
        self.space_name = space_name
        self.basis_size = basis_size
        self.commutative = commutative
        self.witness = witness
        self.products = products
        # 'search' for the first violating pair, 'named' for a prescribed pair
        self.source = source
        if not commutative and (products is None or np.array_equal(products[0], products[1])):
            raise RepCheckError("Non-commutativity witness for %s does not separate the products" % space_name)

    def to_dict(self):
        result = {'space': self.space_name, 'basis_size': self.basis_size, 'commutative': self.commutative}
        if not self.commutative:
            result['witness'] = [int(x) for x in self.witness]
            result['products'] = [np.asarray(v).tolist() for v in self.products]
            result['source'] = self.source
        return result


def witness_report(space, alpha, beta, source):
    forward = space.convolve(alpha, beta)
    backward = space.convolve(beta, alpha)
    if np.array_equal(forward, backward):
        return None
    return HeckeCheckReport(space.name, space.basis_size, False, (alpha, beta), (forward, backward), source)


def hecke_commutativity(space, basis_bound=DEFAULT_BOUNDS.basis):
    """
    c[alpha][beta][gamma] = #{y : y in alpha, k_y^{-1} z_gamma in beta} are the structure constants
    of the basis e_alpha; the algebra is commutative iff every slice c[:, :, gamma] is symmetric.
    """
    B = space.basis_size
    if B > basis_bound:
        raise BasisBoundExceeded("%s has %d basis functions, bound is %d" % (space.name, B, basis_bound))
    first = None
    for z in space.basis_representatives:
        rel = space.relative_positions(z)
        slice_counts = np.bincount(space.basis_of_point * B + space.basis_of_point[rel], minlength=B * B)
        slice_counts = slice_counts.reshape(B, B)
        asymmetric = np.argwhere(slice_counts != slice_counts.T)
        if len(asymmetric):
            candidate = tuple(int(x) for x in asymmetric[0])
            first = candidate if first is None else min(first, candidate)
    if first is None:
        logger.info("Hecke algebra of %s is commutative (%s)" % (space.name, proper_plural_form("basis function", B)))
        return HeckeCheckReport(space.name, B, True)
    logger.info("Hecke algebra of %s is not commutative, witness %s" % (space.name, str(first)))
    return witness_report(space, first[0], first[1], 'search')


def gelfand_pair_check(q, composition, bounds=DEFAULT_BOUNDS):
    """Commutativity of the Hecke algebra of (G x M, P) with P diagonal."""
    N = sum(composition)
    pdata = parabolic(N, q, composition, bounds.order)
    G = enumerate_group(pdata.gl_spec, bounds.order)
    return hecke_commutativity(ParabolicCosetSpace(G, pdata), bounds.basis)
