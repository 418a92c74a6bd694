import random
from dataclasses import replace
from fractions import Fraction

import pytest

from arrangeval.affine import AffineArrangement
from arrangeval.chains import ChainSpaces
from arrangeval.complex import Jump
from arrangeval.constraints import solution_space
from arrangeval.generate import random_affine
from arrangeval.linalg import rank, subspace_equal
from arrangeval.pseudoaffine import (
    bounded_chain_space,
    check_pseudoaffine,
    pseudoaffine_complex,
    verify_pseudoaffine,
)
from arrangeval.toric import InvalidArrangement

from conftest import aff_tri


def _euler(cx):
    return sum((-1) ** cx.dims[i] * cx.ncells[i] for i in range(len(cx.dims)))


def test_aff_tri_compact_report():
    rep = verify_pseudoaffine(aff_tri(), compact=True)
    assert rep.ok
    assert [lv.dim_V for lv in rep.levels] == [1, 3, 3]
    assert [lv.description for lv in rep.levels[:2]] == ["reciprocity only"] * 2
    assert rep.extra["dim_V_cb"] == 1 == rep.extra["bounded_cells"]
    assert rep.extra["V_cb_description_holds"] and rep.extra["V_cb_in_reciprocity_holds"]


def test_bounded_triangle_oracle():
    """D^2 of the bounded triangle, computed on the plain plane complex."""
    arr = aff_tri()
    cs = ChainSpaces(pseudoaffine_complex(arr, compactify=False))
    tri_cell = next(c.index for c in arr.cells(0) if c.bounded)
    img = cs.apply_Dk(2, cs.chain_from_cells({tri_cell: 1}))
    f = cs.flag_values(2, img)
    # three corners, two edges through each
    assert len(f) == 6 and all(abs(v) == 1 for v in f.values())
    # images of all bounded cells span a space of dimension = number of bounded cells
    mat = [[cs.flag_values(2, cs.apply_Dk(2, cs.chain_from_cells({c.index: 1}))).get(fl, 0)
            for fl in cs.flags(2)] for c in arr.cells(0) if c.bounded]
    assert rank(mat) == 1
    ccs = ChainSpaces(pseudoaffine_complex(arr))
    vcb = bounded_chain_space(ccs)
    assert vcb.dim == 1
    # no corner of a bounded cell sits at infinity
    inf = len(arr.flats)
    (row,) = vcb.basis
    flags = ccs.flags(2)
    assert all(not v for j, v in enumerate(row) if inf in flags[j])


def test_euler_characteristic_of_sphere():
    rng = random.Random(4)
    for n in (1, 2):
        for _ in range(10):
            arr = random_affine(rng, n, rng.randint(1, 4))
            assert _euler(pseudoaffine_complex(arr)) == 1 + (-1) ** n
            assert _euler(pseudoaffine_complex(arr, compactify=False)) == (-1) ** n


@pytest.mark.parametrize("seed", range(6))
def test_random_pseudoaffine(seed):
    rng = random.Random(100 + seed)
    n = 1 if seed < 2 else 2
    arr = random_affine(rng, n, rng.randint(2, 5))
    assert verify_pseudoaffine(arr, compact=True).ok
    assert verify_pseudoaffine(arr).ok


def test_1d_compact():
    arr = AffineArrangement.from_pairs(1, [((1,), 0), ((1,), 1), ((1,), 3)])
    rep = verify_pseudoaffine(arr, compact=True)
    assert rep.ok and rep.extra["bounded_cells"] == 2 == rep.extra["dim_V_cb"]


def test_swapped_ends_at_infinity_are_detected():
    arr = aff_tri()
    cx = pseudoaffine_complex(arr)
    inf = len(arr.flats)
    jumps = dict(cx.jumps)
    line = next(g for g in range(len(arr.flats)) if (g, inf) in jumps)
    (p, m), = jumps[(line, inf)].pairs
    jumps[(line, inf)] = Jump(jumps[(line, inf)].eps, ((m, p),))
    cs = ChainSpaces(replace(cx, jumps=jumps, _links={}))
    assert not subspace_equal(solution_space(cs, 2), cs.filtration.bases[2])


def test_rejections():
    with pytest.raises(InvalidArrangement):
        check_pseudoaffine(AffineArrangement.from_pairs(2, [((1, 0), 0), ((1, 0), 1)]))
    three = AffineArrangement.from_pairs(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)])
    with pytest.raises(InvalidArrangement):
        check_pseudoaffine(three)
    assert _euler(pseudoaffine_complex(three, compactify=False)) == -1
    par = AffineArrangement.from_pairs(2, [((1, 0), 0), ((1, 0), Fraction(1, 2))])
    assert _euler(pseudoaffine_complex(par, compactify=False)) == 1
