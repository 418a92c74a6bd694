import random
from fractions import Fraction
from itertools import product

import pytest

from arrangeval.generate import random_affine, random_toric
from arrangeval.linalg import det, matvec
from arrangeval.toric import (
    LoopClass,
    ToricArrangement,
    ToricFlat,
    congruence_components,
    flag_enumerate,
    h1_basis,
    intersection_index,
    relative_sign,
    restrict_to_flat,
    toric_cells,
    toric_flats,
    validate_toric,
)

from conftest import fix_1d, grid, tri


def _by_label(arr):
    return {arr.flat_label(i): i for i in range(len(arr.flats))}


def test_validation():
    assert validate_toric(grid()).valid
    assert validate_toric(tri()).valid
    rep = validate_toric(ToricArrangement.from_pairs(2, [((1, 0), 0)]))
    assert not rep.valid and rep.violations
    assert not validate_toric(ToricArrangement.from_pairs(2, [((2, 0), 0), ((0, 1), 0)])).valid


def test_flat_counts():
    g = toric_flats(grid())
    assert len(g) == 9 and [f.codim for f in g].count(1) == 4 and [f.codim for f in g].count(2) == 4
    t = toric_flats(tri())
    assert len(t) == 5 and [f.codim for f in t].count(2) == 1


def test_disconnected_intersection():
    arr = ToricArrangement.from_pairs(2, [((1, 1), 0), ((1, -1), 0)])
    points = [f for f in arr.flats if f.dim == 0]
    assert len(points) == 2
    bases = sorted(f.base_point for f in points)
    assert bases == [(0, 0), (Fraction(1, 2), Fraction(1, 2))]
    for f in points:
        for h in arr.hyperplanes:
            assert h.contains(f.base_point)


def test_component_count_matches_brute_force(rng):
    for _ in range(60):
        while True:
            A = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
            d = abs(det(A))
            if d and d <= 8:
                break
        c = [Fraction(rng.randrange(4), 4) for _ in range(2)]
        _, pts = congruence_components(A, c, 2)
        grid_den = int(d) * 4
        brute = 0
        for x in product(range(grid_den), repeat=2):
            y = [Fraction(v, grid_den) for v in x]
            if all((sum(a * t for a, t in zip(row, y)) - ci) % 1 == 0 for row, ci in zip(A, c)):
                brute += 1
        assert brute == len(pts) == d


def test_restrict():
    t = tri()
    lab = _by_label(t)
    r = restrict_to_flat(t, lab["{[1, 0]=0}"])
    assert r.n == 1 and len(r.hyperplanes) == 1
    g = grid()
    r = restrict_to_flat(g, _by_label(g)["{[1, 0]=0}"])
    assert sorted(h.offset for h in r.hyperplanes) == [0, Fraction(1, 2)]
    same = restrict_to_flat(g, 0)
    assert len(toric_cells(same)) == len(toric_cells(g))
    pt = next(i for i, f in enumerate(g.flats) if f.dim == 0)
    with pytest.raises(ValueError):
        restrict_to_flat(g, pt)


def test_cells():
    assert len(toric_cells(grid())) == 4
    assert len(toric_cells(tri())) == 2
    assert len(toric_cells(fix_1d(3))) == 3


def test_restrict_commutes_with_cells():
    rng = random.Random(3)
    for _ in range(10):
        a = random_toric(rng, 2, rng.randint(2, 5))
        for i, F in enumerate(a.flats):
            if F.dim:
                assert len(restrict_to_flat(a, i).cells(0)) == len(a.cells(i))


def test_euler_characteristic_vanishes():
    rng = random.Random(4)
    arrs = [grid(), tri(), fix_1d(4)] + [random_toric(rng, n, rng.randint(n, n + 3)) for n in (1, 2, 2, 3)]
    for a in arrs:
        for i, F in enumerate(a.flats):
            if F.dim == 0:
                continue
            chi = sum((-1) ** G.dim * len(a.cells(j)) for j, G in enumerate(a.flats) if F.contains_flat(G))
            assert chi == 0


def test_h1_basis():
    g = grid()
    loops = h1_basis(g, 0)
    assert [l.direction for l in loops] == [(1, 0), (0, 1)]
    lab = _by_label(g)
    (loop,) = h1_basis(g, lab["{[1, 0]=0}"])
    assert loop.ambient_direction == (0, 1)
    a = ToricArrangement.from_pairs(2, [((1, 0), 0), ((0, 1), 0), ((1, -1), 0)])
    (loop,) = h1_basis(a, _by_label(a)["{[1, -1]=0}"])
    assert loop.ambient_direction in ((1, 1), (-1, -1))
    pt = next(i for i, f in enumerate(g.flats) if f.dim == 0)
    with pytest.raises(ValueError):
        h1_basis(g, pt)


def test_intersection_index():
    g = grid()
    lab = _by_label(g)
    lx, ly = h1_basis(g, 0)
    assert abs(intersection_index(g, ly, lab["{[0, 1]=0}"])) == 1
    assert intersection_index(g, ly, lab["{[1, 0]=0}"]) == 0
    a = ToricArrangement.from_pairs(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 0)])
    diag = LoopClass(0, (1, 1), (Fraction(1, 7), Fraction(2, 7)))
    assert abs(intersection_index(a, diag, _by_label(a)["{[1, 0]=0}"])) == 1
    assert intersection_index(a, diag, _by_label(a)["{[1, 1]=0}"]) == 2


def test_intersection_index_base_point_independent(rng):
    for _ in range(20):
        a = random_toric(rng, 2, rng.randint(2, 5))
        for loop in h1_basis(a, 0):
            ref = {M: a.intersection_index(loop, M) for M in a.children[0]}
            for _ in range(3):
                y0 = tuple(Fraction(rng.randrange(1, 997), 997) for _ in range(2))
                other = LoopClass(0, loop.direction, y0)
                try:
                    got = {M: a.intersection_index(other, M) for M in a.children[0]}
                except ValueError:
                    continue
                assert got == ref


def test_flag_enumerate():
    assert len(flag_enumerate(tri(), 2)) == 3
    assert len(flag_enumerate(grid(), 2)) == 8
    assert flag_enumerate(grid(), 0) == [(0,)]


def test_flag_counts_match_poset_paths(rng):
    for _ in range(10):
        a = random_toric(rng, 2, rng.randint(2, 5))
        paths = {0: 1}
        for i in sorted(range(len(a.flats)), key=lambda i: a.flats[i].codim):
            for j in a.children[i]:
                paths[j] = paths.get(j, 0) + paths.get(i, 0)
        for k in range(3):
            assert len(flag_enumerate(a, k)) == sum(paths.get(i, 0) for i in a.flats_of_codim(k))


def test_relative_sign():
    F = ToricFlat(2, [[1, 0], [0, 1]], [0, 0])
    frame = [list(v) for v in F.reference_frame]
    assert relative_sign(None, F, frame) == 1
    assert relative_sign(None, F, frame[::-1]) == -1
    # barycenter frame of the unit triangle at the vertex (0,0) along the edge y = 0
    bary_T = [Fraction(1, 3), Fraction(1, 3)]
    bary_E = [Fraction(1, 2), Fraction(0)]
    frame = [[e - 0 for e in bary_E], [t - 0 for t in bary_T]]
    # oracle: orientation of (v1, v0) by the plain 2x2 determinant
    oracle = 1 if det([[frame[0][0], frame[1][0]], [frame[0][1], frame[1][1]]]) > 0 else -1
    assert relative_sign(None, F, frame) == oracle


def test_coordinates_round_trip(rng):
    for _ in range(10):
        a = random_toric(rng, 3, rng.randint(3, 5))
        for F in a.flats:
            y = [Fraction(rng.randint(-9, 9), 7) for _ in range(F.dim)]
            x = F.from_coords(y)
            assert F.contains_point(x)
            assert F.to_coords(x) == y


def test_random_generators():
    rng = random.Random(9)
    for n in (1, 2, 3):
        arr = random_toric(rng, n, n + 2)
        assert arr.validate().valid and len(arr.hyperplanes) == n + 2
    with pytest.raises(ValueError):
        random_toric(rng, 1, 7)
    line = random_affine(rng, 1, 4)
    assert len({h.offset for h in line.hyperplanes}) == 4
