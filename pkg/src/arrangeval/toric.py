"""Toric arrangements on T^n = R^n / Z^n.

A flat is stored by the Hermite normal form N of its (saturated) conormal
lattice together with the values N x mod 1; saturation makes the solution
set of N x = t mod 1 connected, so this pair identifies the flat.  Each flat
carries a unimodular coordinate system x = base + C z + B y in which the flat
is {z = 0} and y are torus coordinates on it.

Top cells of a flat are found by walking the periodic lift of its induced
arrangement: a lifted region is labelled by its floor vector
J_i = floor(alpha_i . y - beta_i), and two lifted regions are the same torus
cell iff their floor vectors differ by an element of A Z^m.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import floor, ceil
from typing import Sequence

from .linalg import (
    LinalgError,
    det,
    format_rational,
    gcd_list,
    hermite_normal_form,
    int_inverse,
    inverse,
    lcm_list,
    matvec,
    rank,
    sign,
    smith_normal_form,
)


class InvalidArrangement(ValueError):
    """The arrangement violates a standing hypothesis."""


class GenericityError(ValueError):
    """A point expected to be generic lies on a hyperplane."""


def frac_mod1(x: Fraction) -> Fraction:
    x = Fraction(x)
    return x - floor(x)


def vec_mod1(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(frac_mod1(x) for x in v)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _fmt_vec(v) -> str:
    return "(" + ",".join(format_rational(x) for x in v) + ")"


# ---------------------------------------------------------------------------
# hyperplanes and flats

@dataclass(frozen=True)
class ToricHyperplane:
    normal: tuple
    offset: Fraction

    def __post_init__(self):
        normal = tuple(int(x) for x in self.normal)
        if not any(normal):
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", frac_mod1(Fraction(self.offset)))

    @property
    def is_primitive(self) -> bool:
        return gcd_list(self.normal) == 1

    def contains(self, x: Sequence[Fraction]) -> bool:
        return frac_mod1(dot(self.normal, x) - self.offset) == 0


def normalize_hyperplane(alpha: Sequence[int], beta: Fraction) -> tuple[tuple[int, ...], Fraction]:
    """Primitive hyperplane with first nonzero normal entry positive."""
    alpha = [int(x) for x in alpha]
    first = next(x for x in alpha if x)
    if first < 0:
        alpha = [-x for x in alpha]
        beta = -beta
    return tuple(alpha), frac_mod1(beta)


def split_hyperplane(alpha: Sequence[int], beta: Fraction) -> list[tuple[tuple[int, ...], Fraction]]:
    """Components of {alpha . y = beta mod 1} as primitive hyperplanes."""
    g = gcd_list(alpha)
    prim = [int(x) // g for x in alpha]
    return [normalize_hyperplane(prim, (Fraction(beta) + t) / g) for t in range(g)]


def congruence_components(rows: Sequence[Sequence[int]], rhs: Sequence[Fraction], n: int):
    """Connected components of {x in T^n : rows . x = rhs mod 1}.

    Returns ``(conormal_hnf, points)``: the common saturated conormal lattice
    and one base point per component.  The number of components is the
    product of the nonzero elementary divisors.
    """
    if not rows:
        return [], [tuple(Fraction(0) for _ in range(n))]
    U, D, V = smith_normal_form(rows)
    Ub = matvec(U, [Fraction(x) for x in rhs])
    diag = [D[i][i] for i in range(min(len(D), n))]
    r = sum(1 for d in diag if d)
    for i in range(r, len(rows)):
        if Ub[i].denominator != 1:
            return None, []
    Vinv = int_inverse(V)
    conormal = hermite_normal_form(Vinv[:r])
    points = []
    for ks in product(*(range(diag[i]) for i in range(r))):
        z = [(Ub[i] + ks[i]) / diag[i] for i in range(r)] + [Fraction(0)] * (n - r)
        points.append(vec_mod1(matvec(V, z)))
    return conormal, points


class ToricFlat:
    """A connected flat {x : N x = t mod 1} of T^n with coordinates."""

    periodic = True

    def __init__(self, n: int, conormals: Sequence[Sequence[int]], offsets: Sequence[Fraction]):
        self.n = n
        self.conormals = tuple(tuple(int(x) for x in r) for r in conormals)
        self.offsets = tuple(self._reduce(Fraction(x)) for x in offsets)
        self.codim = len(self.conormals)
        self.dim = n - self.codim
        self._build_coordinates()

    def _reduce(self, x: Fraction) -> Fraction:
        return frac_mod1(x) if self.periodic else x

    @property
    def key(self) -> tuple:
        return (self.conormals, self.offsets)

    def _build_coordinates(self):
        n, c = self.n, self.codim
        if c == 0:
            self.direction_basis = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
            self.reference_frame = ()
            self.base_point = tuple(Fraction(0) for _ in range(n))
            P = [[int(i == j) for j in range(n)] for i in range(n)]
        else:
            U, D, V = smith_normal_form(self.conormals)
            if any(D[i][i] != 1 for i in range(c)):
                raise LinalgError("conormal lattice is not saturated")
            kernel_rows = [[V[i][j] for i in range(n)] for j in range(c, n)]
            B = hermite_normal_form(kernel_rows) if kernel_rows else []
            C0 = [[sum(V[i][k] * U[k][j] for k in range(c)) for j in range(c)] for i in range(n)]
            self.direction_basis = tuple(tuple(col) for col in B)
            self.reference_frame = tuple(tuple(C0[i][j] for i in range(n)) for j in range(c))
            base = [sum(C0[i][j] * self.offsets[j] for j in range(c)) for i in range(n)]
            self.base_point = tuple(self._reduce(x) for x in base)
            P = [[C0[i][j] for j in range(c)] + [B[j][i] for j in range(len(B))] for i in range(n)]
        self._P = P
        Pinv = int_inverse(P)
        self._Qz = Pinv[:c]
        self._Qy = Pinv[c:]
        assert [list(r) for r in self._Qz] == [list(r) for r in self.conormals]

    # coordinates -----------------------------------------------------------
    def to_coords(self, x: Sequence[Fraction]) -> list[Fraction]:
        """Flat coordinates y of an ambient point (not reduced mod 1)."""
        d = [Fraction(a) - b for a, b in zip(x, self.base_point)]
        return matvec(self._Qy, d)

    def vector_to_coords(self, v: Sequence) -> list:
        return matvec(self._Qy, v)

    def from_coords(self, y: Sequence[Fraction]) -> list[Fraction]:
        return [b + sum(col[i] * t for col, t in zip(self.direction_basis, y))
                for i, b in enumerate(self.base_point)]

    def vector_from_coords(self, y: Sequence) -> list:
        return [sum(col[i] * t for col, t in zip(self.direction_basis, y)) for i in range(self.n)]

    def contains_point(self, x: Sequence[Fraction]) -> bool:
        return all(self._reduce(dot(r, x) - t) == 0 for r, t in zip(self.conormals, self.offsets))

    def contains_flat(self, other: "ToricFlat") -> bool:
        if other.codim < self.codim:
            return False
        for r in self.conormals:
            if any(dot(r, col) for col in other.direction_basis):
                return False
        return self.contains_point(other.base_point)

    def pullback(self, alpha: Sequence[int]) -> list[int]:
        """Ambient integer form restricting to alpha . y on the flat."""
        return [sum(a * self._Qy[k][j] for k, a in enumerate(alpha)) for j in range(self.n)]

    def label(self) -> str:
        if self.codim == 0:
            return f"T{self.n}"
        eqs = []
        for r, t in zip(self.conormals, self.offsets):
            eqs.append(f"{list(r)}={format_rational(t)}")
        return "{" + ";".join(eqs) + "}"

    def __repr__(self):
        return f"ToricFlat({self.label()})"


def relative_sign(outer, inner, composed_frame: Sequence[Sequence]) -> int:
    """Sign of a composed coorientation frame of ``inner`` against its reference.

    ``composed_frame`` lists codim(inner) ambient vectors.  The sign is that
    of det(N_inner . frame), which only sees the frame modulo the tangent
    space of ``inner``.
    """
    if outer is not None and not outer.contains_flat(inner):
        raise ValueError("inner flat must lie in outer flat")
    if len(composed_frame) != inner.codim:
        raise ValueError("frame must have codim(inner) vectors")
    if inner.codim == 0:
        return 1
    m = [[dot(r, v) for v in composed_frame] for r in inner.conormals]
    s = sign(det(m))
    if s == 0:
        raise ValueError("frame is not transversal to the flat")
    return s


# ---------------------------------------------------------------------------
# cells of an arrangement on T^m

@dataclass(frozen=True)
class ToricCell:
    """A top cell of a flat; coordinates are the flat's torus coordinates."""

    flat: int
    index: int
    key: tuple
    floor_vector: tuple
    interior: tuple
    vertices: tuple


class TorusSubdivision:
    """Top cells of a finite arrangement of primitive hyperplanes on T^m."""

    def __init__(self, m: int, hyperplanes: Sequence[tuple[Sequence[int], Fraction]], flat_index: int = 0):
        self.m = m
        self.flat_index = flat_index
        self.hyperplanes = [(tuple(int(x) for x in a), frac_mod1(Fraction(b))) for a, b in hyperplanes]
        if m == 0:
            self.cells = [ToricCell(flat_index, 0, (), (), (), ((),))]
            self._key_to_index = {(): 0}
            return
        A = [list(a) for a, _ in self.hyperplanes]
        if not A or rank(A, m) < m:
            raise InvalidArrangement("normals do not span: lifted cells are unbounded")
        self._A = A
        self._beta = [b for _, b in self.hyperplanes]
        U, D, _ = smith_normal_form(A)
        self._snf_U = U
        self._snf_d = [D[i][i] for i in range(m)]
        basis_rows = []
        for i, a in enumerate(A):
            if rank([A[j] for j in basis_rows] + [a], m) > len(basis_rows):
                basis_rows.append(i)
            if len(basis_rows) == m:
                break
        self._I = basis_rows
        self._AIinv = inverse([A[i] for i in basis_rows])
        self.vertices = self._torus_vertices()
        self._enumerate()

    # canonical labels --------------------------------------------------------
    def canonical_key(self, J: Sequence[int]) -> tuple:
        UJ = [sum(u * j for u, j in zip(row, J)) for row in self._snf_U]
        m = self.m
        return tuple(UJ[i] % self._snf_d[i] for i in range(m)) + tuple(UJ[m:])

    def floor_vector(self, y: Sequence[Fraction], w: Sequence | None = None) -> tuple:
        J = []
        for a, b in self.hyperplanes:
            v = dot(a, y) - b
            f = floor(v)
            if f == v:
                s = sign(dot(a, w)) if w is not None else 0
                if s == 0:
                    raise GenericityError(f"point {_fmt_vec(y)} lies on a hyperplane")
                if s < 0:
                    f -= 1
            J.append(int(f))
        return tuple(J)

    def locate(self, y: Sequence[Fraction], w: Sequence | None = None) -> int:
        """Index of the cell containing y (or y + eps*w when y is on walls)."""
        if self.m == 0:
            return 0
        return self._key_to_index[self.canonical_key(self.floor_vector(y, w))]

    # geometry ----------------------------------------------------------------
    def _torus_vertices(self) -> list[tuple]:
        pts = set()
        for sub in combinations(range(len(self._A)), self.m):
            rows = [self._A[i] for i in sub]
            if rank(rows, self.m) < self.m:
                continue
            _, comps = congruence_components(rows, [self._beta[i] for i in sub], self.m)
            pts.update(comps)
        return sorted(pts)

    def region_vertices(self, J: Sequence[int]) -> list[tuple]:
        m = self.m
        rhs = [self._beta[i] + J[i] for i in self._I]
        corner = matvec(self._AIinv, rhs)
        lo = [corner[j] + sum(min(0, x) for x in self._AIinv[j]) for j in range(m)]
        hi = [corner[j] + sum(max(0, x) for x in self._AIinv[j]) for j in range(m)]
        Q, scaled = self._scaled_vertices
        lows = [j * Q for j in J]
        out = []
        for p, vals in zip(self.vertices, scaled):
            ranges = [range(ceil(lo[j] - p[j]), floor(hi[j] - p[j]) + 1) for j in range(m)]
            for u in product(*ranges):
                ok = True
                for a, v, low in zip(self._A, vals, lows):
                    val = v + Q * sum(x * y for x, y in zip(a, u)) - low
                    if val < 0 or val > Q:
                        ok = False
                        break
                if ok:
                    out.append(tuple(p[j] + u[j] for j in range(m)))
        return sorted(out)

    @cached_property
    def _scaled_vertices(self):
        """Common denominator Q and the integers Q * (a . p - b) per vertex p and hyperplane."""
        Q = lcm_list([x.denominator for p in self.vertices for x in p] + [b.denominator for b in self._beta])
        scaled = [[int((dot(a, p) - b) * Q) for a, b in self.hyperplanes] for p in self.vertices]
        return Q, scaled

    def _facets(self, J, verts):
        """Yield (hyperplane index, step) for each facet of the region J."""
        m = self.m
        for i, ((a, b), j) in enumerate(zip(self.hyperplanes, J)):
            vals = [dot(a, v) - b for v in verts]
            for level, step in ((j, -1), (j + 1, 1)):
                tight = [v for v, x in zip(verts, vals) if x == level]
                if len(tight) < m:
                    continue
                diffs = [[x - y for x, y in zip(v, tight[0])] for v in tight[1:]]
                if (rank(diffs, m) if diffs else 0) == m - 1:
                    yield i, step

    def _start_floor_vector(self) -> tuple:
        p = self.vertices[0]
        big = 2 * max(abs(x) for a in self._A for x in a) + 1
        d = [big ** j for j in range(self.m)]
        return self.floor_vector(p, d)

    def _enumerate(self):
        start = self._start_floor_vector()
        seen = {self.canonical_key(start): start}
        queue = deque([start])
        regions = {}
        while queue:
            J = queue.popleft()
            verts = self.region_vertices(J)
            if len(verts) <= self.m:
                raise InvalidArrangement("lifted region is not a bounded full-dimensional polytope")
            regions[self.canonical_key(J)] = (J, verts)
            for i, step in self._facets(J, verts):
                J2 = list(J)
                J2[i] += step
                J2 = tuple(J2)
                k2 = self.canonical_key(J2)
                if k2 not in seen:
                    seen[k2] = J2
                    queue.append(J2)
        cells = []
        for key, (J, verts) in regions.items():
            cen = [sum(v[j] for v in verts) / len(verts) for j in range(self.m)]
            u = [floor(x) for x in cen]
            Au = [dot(a, u) for a in self._A]
            J0 = tuple(j - s for j, s in zip(J, Au))
            verts0 = tuple(tuple(v[j] - u[j] for j in range(self.m)) for v in verts)
            cells.append((tuple(c - s for c, s in zip(cen, u)), key, J0, verts0))
        cells.sort()
        self.cells = [ToricCell(self.flat_index, i, key, J0, cen, verts)
                      for i, (cen, key, J0, verts) in enumerate(cells)]
        self._key_to_index = {c.key: c.index for c in self.cells}


# ---------------------------------------------------------------------------
# loops

@dataclass(frozen=True)
class LoopClass:
    """A straight loop y0 + t * direction, t in [0, 1], on a flat."""

    flat: int
    direction: tuple
    base_point: tuple
    ambient_direction: tuple = ()


@dataclass(frozen=True)
class Crossing:
    hyperplane: int
    t: Fraction
    point: tuple
    sign: int


def loop_crossings(hyps, y0: Sequence[Fraction], direction: Sequence[int]) -> list[Crossing] | None:
    """Transverse crossings of the loop with the hyperplanes, or None if degenerate."""
    events = []
    for h, (a, b) in enumerate(hyps):
        v = dot(a, y0) - b
        s = dot(a, direction)
        if s == 0:
            if frac_mod1(v) == 0:
                return None
            continue
        # a.(y0 + t d) - b = v + t s must hit an integer, t in [0, 1)
        lo, hi = sorted((v, v + s))
        for j in range(ceil(lo), floor(hi) + 1):
            t = (j - v) / s
            if 0 <= t < 1:
                events.append((t, h, s))
    events.sort()
    for (t1, h1, _), (t2, h2, _) in zip(events, events[1:]):
        if t1 == t2:
            return None
    if any(t == 0 for t, _, _ in events):
        return None
    return [Crossing(h, t, tuple(y + t * d for y, d in zip(y0, direction)), sign(s))
            for t, h, s in events]


def generic_loop_base(hyps, m: int) -> tuple:
    """Lexicographically first grid point whose coordinate loops are transverse."""
    den = lcm_list([b.denominator for _, b in hyps] or [1])
    q = 2 * den
    for _ in range(64):
        for cand in product(range(q), repeat=m):
            y0 = tuple(Fraction(c, q) for c in cand)
            dirs = [tuple(int(i == j) for j in range(m)) for i in range(m)]
            if all(loop_crossings(hyps, y0, d) is not None for d in dirs):
                return y0
        q += 1
    raise GenericityError("no generic loop base point found")


# ---------------------------------------------------------------------------
# arrangements

@dataclass
class ValidationReport:
    valid: bool
    violations: list

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": list(self.violations)}


@dataclass(frozen=True)
class InducedHyperplane:
    normal: tuple
    offset: Fraction
    subflat: int


class ToricArrangement:
    """A finite arrangement of rational hyperplanes in T^n."""

    kind = "toric"

    def __init__(self, dim: int, hyperplanes: Sequence[ToricHyperplane | tuple]):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.n = dim
        hs = []
        for h in hyperplanes:
            if not isinstance(h, ToricHyperplane):
                h = ToricHyperplane(tuple(h[0]), Fraction(h[1]))
            if len(h.normal) != dim:
                raise ValueError("hyperplane normal has the wrong length")
            hs.append(h)
        self.hyperplanes = hs

    @classmethod
    def from_pairs(cls, dim: int, pairs) -> "ToricArrangement":
        return cls(dim, [ToricHyperplane(tuple(a), Fraction(b)) for a, b in pairs])

    # validation -------------------------------------------------------------
    def validate(self) -> ValidationReport:
        issues = []
        if not self.hyperplanes:
            issues.append("arrangement has no hyperplanes")
        for i, h in enumerate(self.hyperplanes):
            if not h.is_primitive:
                issues.append(f"hyperplane {i} has a non-primitive normal {list(h.normal)}")
        if self.hyperplanes and rank([list(h.normal) for h in self.hyperplanes], self.n) < self.n:
            issues.append("no 0-dimensional flat: normals do not span, lifted cells are unbounded")
        return ValidationReport(not issues, issues)

    def require_valid(self):
        rep = self.validate()
        if not rep.valid:
            raise InvalidArrangement("; ".join(rep.violations))

    # flats --------------------------------------------------------------------
    @cached_property
    def flats(self) -> list[ToricFlat]:
        self.require_valid()
        n = self.n
        ambient = ToricFlat(n, [], [])
        found = {ambient.key: ambient}
        queue = deque([ambient])
        while queue:
            F = queue.popleft()
            for h in self.hyperplanes:
                rows = [list(r) for r in F.conormals]
                if rank(rows + [list(h.normal)], n) == len(rows):
                    continue
                conormal, pts = congruence_components(rows + [list(h.normal)],
                                                      list(F.offsets) + [h.offset], n)
                for p in pts:
                    t = tuple(frac_mod1(dot(r, p)) for r in conormal)
                    key = (tuple(tuple(r) for r in conormal), t)
                    if key not in found:
                        G = ToricFlat(n, conormal, t)
                        found[key] = G
                        queue.append(G)
        return sorted(found.values(), key=lambda f: (f.codim, f.conormals, f.offsets))

    @cached_property
    def flat_index(self) -> dict:
        return {f.key: i for i, f in enumerate(self.flats)}

    @cached_property
    def children(self) -> list[list[int]]:
        flats = self.flats
        out = [[] for _ in flats]
        for i, F in enumerate(flats):
            for j, G in enumerate(flats):
                if G.codim == F.codim + 1 and F.contains_flat(G):
                    out[i].append(j)
        return out

    def contains(self, i: int, j: int) -> bool:
        return self.flats[i].contains_flat(self.flats[j])

    def flats_of_codim(self, c: int) -> list[int]:
        return [i for i, f in enumerate(self.flats) if f.codim == c]

    # induced arrangements -----------------------------------------------------
    def induced(self, i: int) -> list[InducedHyperplane]:
        return self._induced[i]

    @cached_property
    def _induced(self) -> list[list[InducedHyperplane]]:
        out = []
        for F in self.flats:
            if F.dim == 0:
                out.append([])
                continue
            hyps = set()
            for h in self.hyperplanes:
                alpha = [dot(h.normal, col) for col in F.direction_basis]
                if not any(alpha):
                    continue
                beta = h.offset - dot(h.normal, F.base_point)
                hyps.update(split_hyperplane(alpha, beta))
            rec = []
            for alpha, beta in sorted(hyps):
                rec.append(InducedHyperplane(alpha, beta, self._subflat_of(F, alpha, beta)))
            out.append(rec)
        return out

    def _subflat_of(self, F: ToricFlat, alpha, beta) -> int:
        rows = [list(r) for r in F.conormals] + [F.pullback(alpha)]
        conormal = hermite_normal_form(rows)
        U1, _, V1 = smith_normal_form([list(alpha)])
        u = [U1[0][0] * V1[j][0] for j in range(len(alpha))]
        y0 = [beta * x for x in u]
        x0 = F.from_coords(y0)
        key = (tuple(tuple(r) for r in conormal), tuple(frac_mod1(dot(r, x0)) for r in conormal))
        return self.flat_index[key]

    def restrict_to_flat(self, i: int) -> "ToricArrangement":
        F = self.flats[i]
        if F.dim == 0:
            raise ValueError("cannot restrict to a 0-dimensional flat")
        return ToricArrangement(F.dim, [ToricHyperplane(h.normal, h.offset) for h in self.induced(i)])

    # cells --------------------------------------------------------------------
    @cached_property
    def _subdivisions(self) -> list[TorusSubdivision]:
        return [TorusSubdivision(F.dim, [(h.normal, h.offset) for h in self.induced(i)], i)
                for i, F in enumerate(self.flats)]

    def subdivision(self, i: int) -> TorusSubdivision:
        return self._subdivisions[i]

    def cells(self, i: int = 0) -> list[ToricCell]:
        return self._subdivisions[i].cells

    def cell_point(self, i: int, c: int) -> list[Fraction]:
        """Ambient representative of the interior point of cell c of flat i."""
        return self.flats[i].from_coords(self.cells(i)[c].interior)

    # loops --------------------------------------------------------------------
    @cached_property
    def _loop_bases(self) -> dict:
        out = {}
        for i, F in enumerate(self.flats):
            if F.dim:
                hyps = [(h.normal, h.offset) for h in self.induced(i)]
                out[i] = generic_loop_base(hyps, F.dim)
        return out

    def h1_basis(self, i: int) -> list[LoopClass]:
        F = self.flats[i]
        if F.dim == 0:
            raise ValueError("a 0-dimensional flat has no loops")
        y0 = self._loop_bases[i]
        loops = []
        for j in range(F.dim):
            d = tuple(int(j == k) for k in range(F.dim))
            loops.append(LoopClass(i, d, y0, tuple(F.vector_from_coords(d))))
        return loops

    def crossings(self, loop: LoopClass) -> list[tuple[int, int, int]]:
        """(subflat, cell of subflat, sign) for each crossing of a loop."""
        hyps = self.induced(loop.flat)
        cr = loop_crossings([(h.normal, h.offset) for h in hyps], loop.base_point, loop.direction)
        if cr is None:
            raise GenericityError("loop is not transverse to the arrangement")
        F = self.flats[loop.flat]
        out = []
        for c in cr:
            M = hyps[c.hyperplane].subflat
            x = F.from_coords(c.point)
            cellM = self.subdivision(M).locate(self.flats[M].to_coords(x))
            out.append((M, cellM, c.sign))
        return out

    def intersection_index(self, loop: LoopClass, M: int) -> int:
        if loop.flat == M or M not in self.children[loop.flat]:
            raise ValueError("M must be a codimension-one subflat of the loop's flat")
        return sum(s for sub, _, s in self.crossings(loop) if sub == M)

    # flags ---------------------------------------------------------------------
    def flag_enumerate(self, k: int) -> list[tuple[int, ...]]:
        if k < 0 or k > self.n:
            raise ValueError("flag rank out of range")
        flags = [(0,)]
        for _ in range(k):
            flags = [f + (c,) for f in flags for c in self.children[f[-1]]]
        return sorted(flags)

    def flat_label(self, i: int) -> str:
        return self.flats[i].label()

    def complex(self):
        from .complex import toric_complex
        return toric_complex(self)


def validate_toric(a: ToricArrangement) -> ValidationReport:
    return a.validate()


def toric_flats(a: ToricArrangement) -> list[ToricFlat]:
    return a.flats


def toric_cells(a: ToricArrangement, i: int = 0) -> list[ToricCell]:
    return a.cells(i)


def restrict_to_flat(a: ToricArrangement, i: int) -> ToricArrangement:
    return a.restrict_to_flat(i)


def h1_basis(a: ToricArrangement, i: int) -> list[LoopClass]:
    return a.h1_basis(i)


def intersection_index(a: ToricArrangement, loop: LoopClass, M: int) -> int:
    return a.intersection_index(loop, M)


def flag_enumerate(a: ToricArrangement, k: int) -> list[tuple[int, ...]]:
    return a.flag_enumerate(k)
