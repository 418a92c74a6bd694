"""Affine arrangements on the one-point compactification S^n (n <= 2).

Every line (or, for n = 1, the ambient line) is closed up by the point at
infinity, which becomes an extra 0-dimensional flat.  The resulting data is a
:class:`FlatComplex`, so the chain, constraint and integration layers apply
unchanged.  Parallel lines are excluded for n = 2: they would meet only at
infinity and the sphere would not be a pseudoaffine space in the required
sense.
"""

from __future__ import annotations

from fractions import Fraction

from .affine import AffineArrangement
from .chains import ChainSpaces
from .complex import FlatComplex, Jump, local_cycle
from .constraints import (
    LevelVerdict,
    VerificationReport,
    period_system,
    reciprocity_system,
    rows_to_sparse,
    solution_space,
)
from .linalg import det, rank, sign, sparse_kernel, subspace_equal, subspace_from_sparse
from .toric import InvalidArrangement, dot, relative_sign

INFINITY = "inf"


def check_pseudoaffine(arr: AffineArrangement):
    arr.require_valid()
    if arr.n > 2:
        raise InvalidArrangement("the sphere model is implemented for n <= 2")
    if arr.n == 2:
        for i, h in enumerate(arr.hyperplanes):
            for g in arr.hyperplanes[i + 1:]:
                if rank([list(h.normal), list(g.normal)], 2) < 2:
                    raise InvalidArrangement("parallel lines meet only at infinity")


def pseudoaffine_complex(arr: AffineArrangement, compactify: bool = True) -> FlatComplex:
    """Flat complex of the arrangement on S^n, or on R^n when not compactifying."""
    if compactify:
        check_pseudoaffine(arr)
    else:
        arr.require_valid()
    flats = arr.flats
    n = arr.n
    inf = len(flats)
    extra = 1 if compactify else 0
    labels = [F.label() for F in flats] + [INFINITY] * extra
    dims = [F.dim for F in flats] + [0] * extra
    ncells = [len(arr.cells(i)) for i in range(len(flats))] + [1] * extra
    children = [list(c) for c in arr.children] + [[]] * extra
    lines = [i for i, F in enumerate(flats) if F.dim == 1] if compactify else []
    for g in lines:
        children[g].append(inf)

    jumps = {}
    for g, F in enumerate(flats):
        if F.dim == 0:
            continue
        sub = arr.subdivision(g)
        for h in arr.induced(g):
            M = h.subflat
            w_y = list(h.normal)
            w = F.vector_from_coords(w_y)
            eps = relative_sign(F, flats[M], [w] + [list(v) for v in F.reference_frame])
            neg = [-x for x in w_y]
            pairs = []
            for cell in arr.cells(M):
                y = F.to_coords(flats[M].from_coords(cell.interior))
                pairs.append((sub.locate(y, w_y), sub.locate(y, neg)))
            jumps[(g, M)] = Jump(eps, tuple(pairs))
    for g in lines:
        F = flats[g]
        d = list(F.direction_basis[0])
        frame = [[-x for x in d]] + [list(v) for v in F.reference_frame]
        eps = sign(det([[v[i] for v in frame] for i in range(n)]))
        jumps[(g, inf)] = Jump(eps, ((_end_cell(arr, g, -1), _end_cell(arr, g, 1)),))

    loops = {}
    for g in lines:
        cr = [(h.subflat, 0, 1) for h in arr.induced(g)]
        loops[g] = [cr + [(inf, 0, 1)]]

    def links(b, g):
        B = flats[b]
        if g == inf:
            hyps = arr.induced(b)
            cyc = []
            for i, ray, s in local_cycle([h.normal for h in hyps], B.dim):
                L = hyps[i].subflat
                d = flats[L].direction_basis[0]
                t = dot(d, ray) / dot(d, d)
                cyc.append((L, _end_cell(arr, L, sign(t)), s))
            return [cyc]
        G = flats[g]
        hyps = arr.induced(b)
        out = []
        for cell in arr.cells(g):
            x = G.from_coords(cell.interior)
            q = B.to_coords(x)
            through = [h for h in hyps if dot(h.normal, q) == h.offset]
            cyc = []
            for i, ray, s in local_cycle([h.normal for h in through], B.dim):
                M = through[i].subflat
                Mf = flats[M]
                v = Mf.vector_to_coords(B.vector_from_coords(ray))
                cyc.append((M, arr.subdivision(M).locate(Mf.to_coords(x), v), s))
            out.append(cyc)
        return out

    return FlatComplex(
        n=n,
        kind="pseudoaffine" if compactify else "affine",
        labels=labels,
        dims=dims,
        ncells=ncells,
        children=children,
        jumps=jumps,
        loops=loops,
        cell_points=[[c.interior for c in arr.cells(i)] for i in range(len(flats))] + [[()]] * extra,
        bounded=[[c.bounded for c in arr.cells(i)] for i in range(len(flats))] + [[False]] * extra,
        at_infinity=frozenset([inf] * extra),
        link_provider=links,
    )


def _end_cell(arr, line: int, end: int) -> int:
    """Cell of a 1-dimensional flat containing t -> end * infinity."""
    sub = arr.subdivision(line)
    return sub.locate([Fraction(end) * (sub.box + 1)])


def bounded_chain_space(cs: ChainSpaces):
    """V_cb: span of D^n of the bounded-cell indicators, in F_n coordinates."""
    cx, n = cs.cx, cs.n
    images = cs.power_images()[n]
    fidx = cs.flag_index(n)
    vecs = []
    for c, img in enumerate(images):
        if cx.bounded[cx.root][c]:
            vals = cs.flag_values(n, img)
            if vals is None:
                raise AssertionError("D^n of a cell is not flagwise constant")
            vecs.append({fidx[f]: v for f, v in vals.items()})
    return subspace_from_sparse(vecs, len(cs.flags(n)))


def _kernel(cs, k, rows, extra=()):
    nF = len(cs.flags(k))
    sparse = rows_to_sparse(cs, k, rows) + list(extra)
    return subspace_from_sparse(sparse_kernel(sparse, nF), nF)


def verify_pseudoaffine(arr: AffineArrangement, compact: bool = False) -> VerificationReport:
    cx = pseudoaffine_complex(arr)
    cs = ChainSpaces(cx)
    filt = cs.filtration
    n = cs.n
    levels = []
    for k in range(n + 1):
        with_periods = k == n
        sol = solution_space(cs, k, include_periods=with_periods)
        levels.append(LevelVerdict(
            k, len(cs.flags(k)), sol.dim, filt.dims[k], subspace_equal(sol, filt.bases[k]),
            len(reciprocity_system(cs, k)), len(period_system(cs, k)) if with_periods else 0,
            "reciprocity + periods" if with_periods else "reciprocity only"))
    extra = {}

    # second description: restriction to finite flags, reciprocity at finite anchors
    flags = cs.flags(n)
    finite = [j for j, f in enumerate(flags) if not any(x in cx.at_infinity for x in f)]
    pos = {j: i for i, j in enumerate(finite)}
    restricted = subspace_from_sparse(
        [{pos[j]: v for j, v in enumerate(row) if v and j in pos} for row in filt.bases[n].basis],
        len(finite))
    fin_rows = []
    for r in reciprocity_system(cs, n):
        if any(x in cx.at_infinity for x in r.anchor if x is not None):
            continue
        idx = cs.flag_index(n)
        fin_rows.append({pos[idx[f]]: c for f, c in r.coefficients if idx[f] in pos})
    second = subspace_from_sparse(sparse_kernel(fin_rows, len(finite)), len(finite))
    extra["second_description_dim"] = second.dim
    extra["second_description_holds"] = subspace_equal(restricted, second)

    if compact:
        vcb = bounded_chain_space(cs)
        inf_rows = [{j: Fraction(1)} for j, f in enumerate(flags)
                    if any(x in cx.at_infinity for x in f)]
        target = _kernel(cs, n, reciprocity_system(cs, n) + period_system(cs, n), inf_rows)
        rec_only = _kernel(cs, n, reciprocity_system(cs, n))
        nb = sum(cx.bounded[cx.root])
        extra["bounded_cells"] = nb
        extra["dim_V_cb"] = vcb.dim
        extra["V_cb_dim_holds"] = vcb.dim == nb
        extra["V_cb_description_holds"] = subspace_equal(vcb, target)
        extra["V_cb_in_reciprocity_holds"] = vcb.is_subspace_of(rec_only)
    return VerificationReport("affine-compact" if compact else "pseudoaffine", levels, extra)
