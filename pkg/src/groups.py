############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import logging
from collections import deque
from enum import Enum
from itertools import permutations
from math import factorial

import numpy as np

from src.common import RepCheckError, block_ranges, lcm_list, list_to_str, proper_plural_form
from src.ffalg import (
    all_matrices,
    batch_inverse,
    batch_rank,
    decode,
    encode,
    field_for_order,
    identity,
    invariant_factor_key,
    transpose,
)

logger = logging.getLogger('RepCheck')

DEFAULT_ORDER_BOUND = 300000
CANDIDATE_CHUNK = 1 << 18


class OrderBoundExceeded(RepCheckError):
    pass


class ClassAlgebraError(RepCheckError):
    pass


class GroupKind(Enum):
    general_linear = 1
    levi_product = 2
    symmetric = 3
    explicit_subgroup = 4


def gl_order(n, q):
    order = 1
    for i in range(n):
        order *= q ** n - q ** i
    return order


class GroupSpec:
    def __init__(self, kind, q=None, composition=None, parent=None, name=None, predicate=None, generators=None):
        self.kind = kind
        self.q = q
        self.composition = tuple(composition) if composition is not None else None
        self.parent = parent
        self.name = name
        self.predicate = predicate
        self.generators = generators

    @classmethod
    def general_linear(cls, n, q):
        return cls(GroupKind.general_linear, q=q, composition=(n,))

    @classmethod
    def levi(cls, q, composition):
        return cls(GroupKind.levi_product, q=q, composition=composition)

    @classmethod
    def symmetric(cls, n):
        return cls(GroupKind.symmetric, composition=(n,))

    @classmethod
    def subgroup(cls, parent, name, predicate=None, generators=None):
        if predicate is None and generators is None:
            raise ValueError("Explicit subgroup needs a membership predicate or generators")
        return cls(GroupKind.explicit_subgroup, q=parent.q, composition=parent.composition, parent=parent,
                   name=name, predicate=predicate, generators=generators)

    @property
    def degree(self):
        return sum(self.composition)

    def is_matrix_group(self):
        if self.kind == GroupKind.explicit_subgroup:
            return self.parent.is_matrix_group()
        return self.kind != GroupKind.symmetric

    def order(self):
        if self.kind == GroupKind.general_linear:
            return gl_order(self.degree, self.q)
        if self.kind == GroupKind.levi_product:
            order = 1
            for n in self.composition:
                order *= gl_order(n, self.q)
            return order
        if self.kind == GroupKind.symmetric:
            return factorial(self.degree)
        return None

    def key(self):
        if self.kind == GroupKind.general_linear:
            return "GL(%d,%d)" % (self.degree, self.q)
        if self.kind == GroupKind.levi_product:
            return "GL(%s;%d)" % (list_to_str(self.composition), self.q)
        if self.kind == GroupKind.symmetric:
            return "S(%d)" % self.degree
        return "%s/%s" % (self.parent.key(), self.name)

    def __repr__(self):
        return self.key()


class EnumeratedGroup:
    """All elements of a finite group in a fixed enumeration order, with code-based lookup."""

    def __init__(self, spec, elements):
        self.spec = spec
        self.elements = elements
        self.codes = self.encode(elements)
        self._sort_order = np.argsort(self.codes, kind='stable')
        self._sorted_codes = self.codes[self._sort_order]
        if len(self._sorted_codes) > 1 and (np.diff(self._sorted_codes) == 0).any():
            raise RepCheckError("Enumeration of %s contains repeated elements" % spec.key())

    def __len__(self):
        return len(self.codes)

    @property
    def order(self):
        return len(self.codes)

    def identity_element(self):
        raise NotImplementedError()

    def encode(self, stack):
        raise NotImplementedError()

    def compose(self, a, b):
        raise NotImplementedError()

    def inverse(self, stack):
        raise NotImplementedError()

    def locate(self, stack):
        """Indices of elements (−1 for elements outside the group)."""
        codes = np.atleast_1d(self.encode(stack))
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, len(self._sorted_codes) - 1)
        found = self._sorted_codes[pos] == codes
        return np.where(found, self._sort_order[pos], -1)

    def index_of(self, stack):
        indices = self.locate(stack)
        if (indices < 0).any():
            raise KeyError("Element does not belong to " + self.spec.key())
        return indices

    def contains(self, stack):
        return self.locate(stack) >= 0

    @property
    def identity_index(self):
        return int(self.index_of(self.identity_element()[None])[0])

    def element_order(self, g):
        e = self.identity_element()
        power = g
        order = 1
        while not np.array_equal(power, e):
            power = self.compose(power, g)
            order += 1
        return order


class MatrixGroup(EnumeratedGroup):
    def __init__(self, spec, elements):
        self.field = field_for_order(spec.q)
        self.n = elements.shape[-1]
        EnumeratedGroup.__init__(self, spec, elements)

    def identity_element(self):
        return identity(self.n)

    def encode(self, stack):
        return encode(self.field, stack)

    def compose(self, a, b):
        return self.field.matmul(a, b)

    def inverse(self, stack):
        if stack.ndim == 2:
            return batch_inverse(self.field, stack[None])[0]
        return batch_inverse(self.field, stack)


class PermutationGroup(EnumeratedGroup):
    """Permutations of {0..n-1} stored as image arrays; (a*b)(i) = a(b(i))."""

    def __init__(self, spec, elements):
        self.n = elements.shape[-1]
        EnumeratedGroup.__init__(self, spec, elements)

    def identity_element(self):
        return np.arange(self.n, dtype=np.int64)

    def encode(self, stack):
        stack = np.asarray(stack)
        return stack @ (self.n ** np.arange(self.n - 1, -1, -1, dtype=np.int64))

    def compose(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        shape = np.broadcast_shapes(a.shape, b.shape)
        return np.take_along_axis(np.broadcast_to(a, shape), np.broadcast_to(b, shape), axis=-1)

    def inverse(self, stack):
        return np.argsort(stack, axis=-1)


def make_group(spec, elements):
    if spec.is_matrix_group():
        return MatrixGroup(spec, elements)
    return PermutationGroup(spec, elements)


def _enumerate_gl(n, q):
    field = field_for_order(q)
    total = q ** (n * n)
    chunks = []
    for start in range(0, total, CANDIDATE_CHUNK):
        candidates = all_matrices(field, n, n, start, start + CANDIDATE_CHUNK)
        chunks.append(candidates[batch_rank(field, candidates) == n])
    return np.concatenate(chunks)


def _block_diagonal(blocks_list, composition):
    n = sum(composition)
    result = np.zeros((len(blocks_list[0]), n, n), dtype=np.int64)
    for blocks, (start, end) in zip(blocks_list, block_ranges(composition)):
        result[:, start:end, start:end] = blocks
    return result


def _enumerate_levi(q, composition):
    factors = [_enumerate_gl(n, q) for n in composition]
    sizes = [len(f) for f in factors]
    # first factor is the most significant index, which keeps the lexicographic order
    grids = np.meshgrid(*[np.arange(s) for s in sizes], indexing='ij')
    picks = [g.reshape(-1) for g in grids]
    return _block_diagonal([f[p] for f, p in zip(factors, picks)], composition)


def _closure(group_ops, generators):
    elements = [group_ops.identity_element()]
    seen = {group_ops.encode(elements[0]).item()}
    queue = deque(elements)
    while queue:
        x = queue.popleft()
        for g in generators:
            y = group_ops.compose(x, g)
            code = group_ops.encode(y).item()
            if code not in seen:
                seen.add(code)
                elements.append(y)
                queue.append(y)
    stack = np.array(elements, dtype=np.int64)
    return stack[np.argsort(group_ops.encode(stack), kind='stable')]


def enumerate_group(spec, order_bound=DEFAULT_ORDER_BOUND):
    predicted = spec.order()
    if predicted is not None and predicted > order_bound:
        raise OrderBoundExceeded("Group %s has order %d exceeding the bound %d" % (spec.key(), predicted, order_bound))
    if spec.kind == GroupKind.general_linear:
        elements = _enumerate_gl(spec.degree, spec.q)
    elif spec.kind == GroupKind.levi_product:
        elements = _enumerate_levi(spec.q, spec.composition)
    elif spec.kind == GroupKind.symmetric:
        elements = np.array(list(permutations(range(spec.degree))), dtype=np.int64).reshape(-1, spec.degree)
    else:
        parent = enumerate_group(spec.parent, order_bound)
        if spec.predicate is not None:
            elements = parent.elements[spec.predicate(parent.elements)]
        else:
            elements = _closure(parent, [np.asarray(g) for g in spec.generators])
    group = make_group(spec, elements)
    if predicted is not None and len(group) != predicted:
        raise RepCheckError("Enumerated %d elements of %s, expected %d" % (len(group), spec.key(), predicted))
    logger.debug("Enumerated %s: %s" % (spec.key(), proper_plural_form("element", len(group))))
    return group


# == conjugacy classes ==
def cycle_type(perm):
    perm = list(perm)
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def orbit_labels(n_points, perms):
    """Smallest point index of the orbit of every point under the group generated by perms."""
    labels = np.arange(n_points)
    all_perms = list(perms) + [np.argsort(p) for p in perms]
    while True:
        updated = labels
        for perm in all_perms:
            updated = np.minimum(updated, updated[perm])
        if np.array_equal(updated, labels):
            return labels
        labels = updated


def conjugation_orbits(group, generators):
    perms = []
    for h in generators:
        conjugated = group.compose(group.compose(h, group.elements), group.inverse(h))
        perms.append(group.index_of(conjugated))
    return orbit_labels(len(group), perms)


def _freeze(obj):
    if isinstance(obj, list):
        return tuple(_freeze(x) for x in obj)
    return obj


class ConjClassTable:
    def __init__(self, group, keys, element_classes):
        self.group = group
        self.keys = [_freeze(k) for k in keys]
        self.element_classes = np.asarray(element_classes, dtype=np.int64)
        self._key_to_class = {k: j for j, k in enumerate(self.keys)}
        n_classes = len(self.keys)
        self.sizes = np.bincount(self.element_classes, minlength=n_classes).astype(np.int64)
        _, first = np.unique(self.element_classes, return_index=True)
        if len(first) != n_classes:
            raise RepCheckError("Empty conjugacy class in " + group.spec.key())
        self.representative_indices = first
        self.representatives = group.elements[first]
        self.inverse_map = self.identify_many(group.inverse(self.representatives))
        self._class_matrices = {}

    def __len__(self):
        return len(self.keys)

    @property
    def order(self):
        return len(self.group)

    def centralizer_order(self, j):
        return self.order // int(self.sizes[j])

    def members(self, j):
        return np.nonzero(self.element_classes == j)[0]

    def class_of_key(self, key):
        # a one-block Levi key and the plain GL key name the same class
        if key in self._key_to_class:
            return self._key_to_class[key]
        return self._key_to_class[(key,)]

    def identify_many(self, stack):
        return self.element_classes[self.group.index_of(stack)]

    def identify(self, g):
        g = np.asarray(g)
        key = class_key(self.group.spec, g)
        if key is None:
            return int(self.identify_many(g[None])[0])
        return self._key_to_class[key]

    def to_dict(self):
        return {'spec': self.group.spec.key(),
                'keys': [_thaw(k) for k in self.keys],
                'element_classes': self.element_classes.tolist()}

    @classmethod
    def from_dict(cls, group, data):
        if data['spec'] != group.spec.key() or len(data['element_classes']) != len(group):
            raise ValueError("Stored class table does not match " + group.spec.key())
        return cls(group, data['keys'], data['element_classes'])


def _thaw(obj):
    if isinstance(obj, tuple):
        return [_thaw(x) for x in obj]
    return obj


def class_key(spec, g):
    """Canonical conjugacy invariant of g, or None when classes are found by orbit search."""
    if spec.kind == GroupKind.general_linear:
        return invariant_factor_key(field_for_order(spec.q), g)
    if spec.kind == GroupKind.levi_product:
        field = field_for_order(spec.q)
        return tuple(invariant_factor_key(field, g[s:e, s:e]) for s, e in block_ranges(spec.composition))
    if spec.kind == GroupKind.symmetric:
        return cycle_type(g)
    return None


def conjugacy_classes(group):
    spec = group.spec
    identity_idx = group.identity_index
    if spec.kind == GroupKind.explicit_subgroup:
        generators = spec.generators if spec.generators is not None else group.elements
        raw = conjugation_orbits(group, [np.asarray(h) for h in generators]).tolist()
    else:
        raw = [class_key(spec, g) for g in group.elements]
    # class 0 is the identity, the rest in order of first appearance
    keys = [raw[identity_idx]]
    index = {raw[identity_idx]: 0}
    element_classes = np.empty(len(raw), dtype=np.int64)
    for i, key in enumerate(raw):
        if key not in index:
            index[key] = len(keys)
            keys.append(key)
        element_classes[i] = index[key]
    if spec.kind == GroupKind.explicit_subgroup:
        keys = list(range(len(keys)))
    table = ConjClassTable(group, keys, element_classes)
    logger.info("%s has %s" % (spec.key(), proper_plural_form("conjugacy class", len(table))))
    return table


def class_matrix(table, i):
    """Matrix (a_{ijk})_{jk}: a_{ijk} = #{x in C_i : x^{-1} z_k in C_j}."""
    if i in table._class_matrices:
        return table._class_matrices[i]
    group = table.group
    n_classes = len(table)
    members = group.elements[table.members(i)]
    inverses = group.inverse(members)
    result = np.zeros((n_classes, n_classes), dtype=np.int64)
    for k in range(n_classes):
        products = group.compose(inverses, table.representatives[k])
        result[:, k] = np.bincount(table.identify_many(products), minlength=n_classes)
    if not np.array_equal(result @ table.sizes, table.sizes[i] * table.sizes):
        raise ClassAlgebraError("Class algebra counting identity failed for class %d of %s" % (i, group.spec.key()))
    table._class_matrices[i] = result
    return result


def class_constants(table, i, j, k):
    return int(class_matrix(table, i)[j, k])


def exponent(table):
    return lcm_list(table.group.element_order(g) for g in table.representatives)


# == parabolic subgroups ==
class ParabolicData:
    def __init__(self, q, composition, order_bound=DEFAULT_ORDER_BOUND):
        self.q = q
        self.composition = tuple(composition)
        self.N = sum(self.composition)
        self.field = field_for_order(q)
        self.ranges = block_ranges(self.composition)
        self.block_of = np.concatenate([np.full(e - s, b) for b, (s, e) in enumerate(self.ranges)])
        self.gl_spec = GroupSpec.general_linear(self.N, q)
        self.levi_spec = GroupSpec.levi(q, self.composition)
        # derived data (class distributions, fixed-point counts) keyed by the class tables used
        self.cache = {}

        upper = self.block_of[:, None] < self.block_of[None, :]
        self.unipotent_positions = list(zip(*np.nonzero(upper)))
        u_size = q ** len(self.unipotent_positions)
        m_size = self.levi_spec.order()
        if m_size * u_size > order_bound:
            raise OrderBoundExceeded("Parabolic subgroup of type (%s) has order %d exceeding the bound %d" %
                                     (list_to_str(self.composition), m_size * u_size, order_bound))

        self.levi = enumerate_group(self.levi_spec, order_bound)
        self.unipotent = make_group(GroupSpec.subgroup(self.gl_spec, "U(%s)" % list_to_str(self.composition),
                                                       predicate=self.in_unipotent),
                                    self._unipotent_elements())
        products = self.field.matmul(self.levi.elements[:, None], self.unipotent.elements[None, :])
        products = products.reshape(-1, self.N, self.N)
        products = products[np.argsort(encode(self.field, products), kind='stable')]
        self.parabolic = make_group(GroupSpec.subgroup(self.gl_spec, "P(%s)" % list_to_str(self.composition),
                                                       predicate=self.in_parabolic), products)
        logger.debug("Parabolic of type (%s): |M| = %d, |U| = %d, |P| = %d" %
                     (list_to_str(self.composition), len(self.levi), len(self.unipotent), len(self.parabolic)))

    def _unipotent_elements(self):
        k = len(self.unipotent_positions)
        if k == 0:
            return identity(self.N)[None].copy()
        values = decode(self.field, np.arange(self.q ** k, dtype=np.int64), 1, k).reshape(-1, k)
        elements = np.broadcast_to(identity(self.N), (len(values), self.N, self.N)).copy()
        for t, (i, j) in enumerate(self.unipotent_positions):
            elements[:, i, j] = values[:, t]
        return elements

    def _lower_mask(self):
        return self.block_of[:, None] > self.block_of[None, :]

    def _offdiag_mask(self):
        return self.block_of[:, None] != self.block_of[None, :]

    def in_parabolic(self, stack):
        return ~(stack[..., self._lower_mask()] != 0).any(axis=-1)

    def in_levi(self, stack):
        return ~(stack[..., self._offdiag_mask()] != 0).any(axis=-1)

    def in_unipotent(self, stack):
        diagonal_blocks = np.where(self._offdiag_mask(), 0, stack)
        return self.in_parabolic(stack) & (diagonal_blocks == identity(self.N)).all(axis=(-1, -2))

    def levi_part(self, stack):
        return np.where(self._offdiag_mask(), 0, stack)

    def unipotent_part(self, stack):
        levi = self.levi_part(stack)
        inverse = self.levi.inverse(levi)
        return self.field.matmul(inverse, stack)

    def opposite_unipotent(self):
        return transpose(self.unipotent.elements)

    def levi_generators(self):
        """Block GL generators: scalings diag(a, 1, ..) and transvections 1 + c e_ij inside each block."""
        generators = []
        for s, e in self.ranges:
            for a in range(1, self.q):
                g = identity(self.N)
                g[s, s] = a
                generators.append(g)
            for i in range(s, e):
                for j in range(s, e):
                    if i == j:
                        continue
                    for c in range(1, self.q):
                        g = identity(self.N)
                        g[i, j] = c
                        generators.append(g)
        return np.array(generators, dtype=np.int64)

    def validate(self):
        """Factorisation invariants: |P| = |M||U|, p = levi(p) u uniquely, M normalises U."""
        if len(self.parabolic) != len(self.levi) * len(self.unipotent):
            return False
        if len(self.unipotent) != self.q ** sum(a * b for i, a in enumerate(self.composition)
                                                 for b in self.composition[i + 1:]):
            return False
        elements = self.parabolic.elements
        if not (self.in_levi(self.levi_part(elements)).all() and
                self.in_unipotent(self.unipotent_part(elements)).all()):
            return False
        generators = self.levi_generators()
        if not self.levi.contains(generators).all():
            return False
        for m in generators:
            conjugated = self.field.matmul(self.field.matmul(m, self.unipotent.elements), self.levi.inverse(m))
            if not self.in_unipotent(conjugated).all():
                return False
        return True


def parabolic(N, q, composition, order_bound=DEFAULT_ORDER_BOUND):
    if sum(composition) != N or any(n <= 0 for n in composition):
        raise ValueError("Composition (%s) does not split %d" % (list_to_str(composition), N))
    return ParabolicData(q, composition, order_bound)
