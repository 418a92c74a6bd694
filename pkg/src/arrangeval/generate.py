"""Seeded random arrangements for property suites."""

from __future__ import annotations

import random
from fractions import Fraction

from .affine import AffineArrangement
from .linalg import gcd_list, rank
from .toric import ToricArrangement, normalize_hyperplane


def _primitive(rng, n, bound):
    while True:
        v = [rng.randint(-bound, bound) for _ in range(n)]
        if any(v) and gcd_list(v) == 1:
            return normalize_hyperplane(v, Fraction(0))[0]


def random_toric(rng: random.Random, n: int, count: int, bound: int = 1, denominators=(1, 2, 3, 4)):
    """A valid toric arrangement with ``count`` hyperplanes in T^n."""
    if count < n:
        raise ValueError("need at least n hyperplanes")
    while True:
        pairs = set()
        normals = []
        while rank(normals, n) < n if normals else True:
            a = _primitive(rng, n, bound)
            if not normals or rank(normals + [list(a)], n) > rank(normals, n):
                normals.append(list(a))
                pairs.add((a, Fraction(0)))
        stale = 0
        while len(pairs) < count:
            a = _primitive(rng, n, bound)
            d = rng.choice(denominators)
            size = len(pairs)
            pairs.add((a, Fraction(rng.randrange(d), d)))
            stale = 0 if len(pairs) > size else stale + 1
            if stale > 1000:
                raise ValueError(f"cannot draw {count} distinct hyperplanes with these bounds")
        arr = ToricArrangement.from_pairs(n, sorted(pairs))
        if arr.validate().valid:
            return arr


def random_affine(rng: random.Random, n: int, count: int, bound: int = 2, no_parallel: bool = True):
    """An affine arrangement in R^n; for the sphere model parallel hyperplanes are avoided.

    On the line every pair of points is parallel, so ``no_parallel`` only applies for n >= 2.
    """
    while True:
        pairs = []
        normals = set()
        tries = 0
        while len(pairs) < count and tries < 200:
            tries += 1
            a = _primitive(rng, n, bound)
            if no_parallel and n > 1 and a in normals:
                continue
            normals.add(a)
            pairs.append((a, Fraction(rng.randint(-4, 4), rng.choice((1, 2)))))
        arr = AffineArrangement.from_pairs(n, pairs)
        if len(pairs) == count and arr.validate().valid:
            return arr
