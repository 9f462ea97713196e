############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import logging
from collections import namedtuple
from functools import reduce
from math import gcd, isqrt

logger = logging.getLogger('RepCheck')


class RepCheckError(Exception):
    """Base class of every error raised by the verification engine."""


class ConfigError(RepCheckError):
    pass


def list_to_str(element_list, element_delim=','):
    if len(element_list) == 0:
        return "."
    return element_delim.join(list(map(str, element_list)))


def str_to_list(value, element_delim=','):
    if value is None or value == "" or value == ".":
        return []
    return [int(x) for x in value.split(element_delim)]


def proper_plural_form(name, count):
    return str(count) + " " + name + ("" if count == 1 else "s")


def lcm(a, b):
    return a * b // gcd(a, b)


def lcm_list(values):
    return reduce(lcm, values, 1)


def isqrt_ceil(x):
    r = isqrt(x)
    return r if r * r == x else r + 1


# composition (n_1, ..., n_l) -> list of (start, end) coordinate ranges
def block_ranges(composition):
    ranges = []
    start = 0
    for size in composition:
        ranges.append((start, start + size))
        start += size
    return ranges


def compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in compositions(n - first):
            yield (first,) + rest


# order: elements of any enumerated group; size: candidate matrices of a sweep;
# basis: Hecke algebra dimension; pairs: (m, u) products in class distributions
Bounds = namedtuple('Bounds', ('order', 'size', 'basis', 'pairs'))

DEFAULT_BOUNDS = Bounds(order=300000, size=1 << 16, basis=500, pairs=10 ** 6)


def partitions(n, largest=None):
    """Partitions of n as weakly decreasing tuples, in reverse lexicographic order."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest
