"""Combinatorial data shared by the chain, constraint and integration layers.

A :class:`FlatComplex` records, for every flat, its top cells, its
codimension-one subflats, and for each such pair (G, M) a jump table: for
every top cell of M the cells of G on its positive and negative sides and the
sign eps(G, M) comparing the composed coorientation of M with its reference.
Loops (for flats with first homology) are stored as their crossing sequences.
Both toric and pseudoaffine arrangements are reduced to this form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .linalg import sign, solve


@dataclass(frozen=True)
class Jump:
    eps: int
    pairs: tuple  # (plus cell, minus cell) per top cell of the subflat


@dataclass
class FlatComplex:
    n: int
    kind: str
    labels: list
    dims: list
    ncells: list
    children: list
    jumps: dict
    loops: dict  # flat -> list of crossing lists [(subflat, cell, sign), ...]
    cell_points: list  # canonical interior points, per flat per cell
    bounded: list | None = None
    at_infinity: frozenset = frozenset()
    link_provider: Callable | None = None
    _links: dict = field(default_factory=dict)

    @property
    def root(self) -> int:
        return 0

    def grandchildren(self, b: int) -> list[int]:
        return sorted({g for m in self.children[b] for g in self.children[m]})

    def links(self, b: int, g: int) -> list[list[tuple[int, int, int]]]:
        """Cyclic wall sequences around each top cell of g inside b."""
        key = (b, g)
        if key not in self._links:
            self._links[key] = self.link_provider(b, g)
        return self._links[key]

    def period_coefficients(self, b: int) -> list[dict]:
        """Per loop of flat b: subflat -> (loop . M) * eps(b, M)."""
        out = []
        for crossings in self.loops.get(b, []):
            coeffs: dict[int, int] = {}
            for m, _, s in crossings:
                coeffs[m] = coeffs.get(m, 0) + s
            out.append({m: c * self.jumps[(b, m)].eps for m, c in coeffs.items()})
        return out


# ---------------------------------------------------------------------------
# local pictures around codimension-two cells

def _angle_key(v):
    """Sort key for exact angular order of a nonzero 2D vector."""
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, v


def _angle_sorted(vs):
    import functools

    def cmp(a, b):
        ha, hb = _angle_key(a)[0], _angle_key(b)[0]
        if ha != hb:
            return ha - hb
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(vs, key=functools.cmp_to_key(cmp))


def local_cycle(normals: Sequence[Sequence], m: int):
    """Sectors around a codimension-two point in R^m.

    ``normals`` are the normals (in the coordinates of the ambient flat) of
    the walls through the point; they span a 2-dimensional space.  Returns a
    list of (wall index, ray vector, crossing sign) in cyclic order, where the
    ray vector is a tangent direction along the wall and the sign records
    whether the cycle crosses the wall towards its positive side.
    """
    normals = [list(a) for a in normals]
    p = 0
    q = next(i for i in range(1, len(normals))
             if any(normals[0][r] * normals[i][s] - normals[0][s] * normals[i][r]
                    for r in range(m) for s in range(m)))
    ap, aq = normals[p], normals[q]
    # express each normal as lam*ap + mu*aq
    coeffs = []
    for a in normals:
        sol = solve([[ap[j], aq[j]] for j in range(m)], a)
        coeffs.append((sol[0], sol[1]))
    gram = [[sum(x * y for x, y in zip(u, v)) for v in (ap, aq)] for u in (ap, aq)]

    def lift(s):
        # tangent vector v in span(ap, aq) with ap.v = s1, aq.v = s2
        ab = solve(gram, list(s))
        return [ab[0] * x + ab[1] * y for x, y in zip(ap, aq)]

    rays = []
    for i, (lam, mu) in enumerate(coeffs):
        r = (mu, -lam)
        rays.append((r, i))
        rays.append(((-mu, lam), i))
    order = _angle_sorted([r for r, _ in rays])
    wall_of = {r: i for r, i in rays}
    k = len(order)
    sector = [(order[j][0] + order[(j + 1) % k][0], order[j][1] + order[(j + 1) % k][1])
              for j in range(k)]
    out = []
    for j in range(k):
        r = order[j]
        i = wall_of[r]
        lam, mu = coeffs[i]
        before, after = sector[j - 1], sector[j]
        s = sign(lam * (after[0] - before[0]) + mu * (after[1] - before[1]))
        out.append((i, lift(r), s))
    return out


# ---------------------------------------------------------------------------
# toric arrangements

def toric_complex(arr) -> FlatComplex:
    from .toric import relative_sign

    flats = arr.flats
    jumps = {}
    children = [list(c) for c in arr.children]
    for g, F in enumerate(flats):
        if F.dim == 0:
            continue
        sub = arr.subdivision(g)
        seen = set()
        for h in arr.induced(g):
            M = h.subflat
            assert M not in seen, "two induced hyperplanes give the same subflat"
            seen.add(M)
            w_y = list(h.normal)
            w = F.vector_from_coords(w_y)
            eps = relative_sign(F, flats[M], [w] + [list(v) for v in F.reference_frame])
            neg = [-x for x in w_y]
            pairs = []
            for cell in arr.cells(M):
                y = F.to_coords(flats[M].from_coords(cell.interior))
                pairs.append((sub.locate(y, w_y), sub.locate(y, neg)))
            jumps[(g, M)] = Jump(eps, tuple(pairs))
        assert seen == set(children[g])
    loops = {}
    for b, F in enumerate(flats):
        if F.dim:
            loops[b] = [arr.crossings(lp) for lp in arr.h1_basis(b)]

    def links(b, g):
        B, G = flats[b], flats[g]
        hyps = arr.induced(b)
        out = []
        for cell in arr.cells(g):
            x = G.from_coords(cell.interior)
            q = B.to_coords(x)
            through = [h for h in hyps if (sum(a * y for a, y in zip(h.normal, q)) - h.offset).denominator == 1]
            cyc = []
            for i, ray, s in local_cycle([h.normal for h in through], B.dim):
                M = through[i].subflat
                Mf = flats[M]
                v = Mf.vector_to_coords(B.vector_from_coords(ray))
                cm = arr.subdivision(M).locate(Mf.to_coords(x), v)
                cyc.append((M, cm, s))
            out.append(cyc)
        return out

    return FlatComplex(
        n=arr.n,
        kind="toric",
        labels=[F.label() for F in flats],
        dims=[F.dim for F in flats],
        ncells=[len(arr.cells(i)) for i in range(len(flats))],
        children=children,
        jumps=jumps,
        loops=loops,
        cell_points=[[c.interior for c in arr.cells(i)] for i in range(len(flats))],
        link_provider=links,
    )
