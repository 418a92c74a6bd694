import random
from fractions import Fraction

import pytest

from arrangeval.affine import AffineArrangement
from arrangeval.chains import ChainSpaces
from arrangeval.toric import ToricArrangement


def grid():
    return ToricArrangement.from_pairs(2, [((1, 0), 0), ((1, 0), Fraction(1, 2)),
                                           ((0, 1), 0), ((0, 1), Fraction(1, 2))])


def tri():
    return ToricArrangement.from_pairs(2, [((1, 0), 0), ((0, 1), 0), ((1, -1), 0)])


def fix_1d(n_points):
    return ToricArrangement.from_pairs(1, [((1,), Fraction(i, n_points)) for i in range(n_points)])


def aff_tri():
    return AffineArrangement.from_pairs(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 1)])


def toric_3d():
    return ToricArrangement.from_pairs(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0),
                                           ((1, 1, 0), Fraction(1, 2)), ((0, 1, 1), 0)])


FIXTURES = {
    "1d3": lambda: fix_1d(3),
    "grid": grid,
    "tri": tri,
    "t2_three": lambda: ToricArrangement.from_pairs(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), Fraction(1, 2))]),
    "3d": toric_3d,
}

_cache = {}


def spaces(name):
    if name not in _cache:
        _cache[name] = ChainSpaces(FIXTURES[name]().complex())
    return _cache[name]


@pytest.fixture
def rng():
    return random.Random(20261018)
