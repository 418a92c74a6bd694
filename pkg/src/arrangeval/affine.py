"""Rational affine arrangements in R^n: flats, regions, polytopes and volumes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial
from typing import Sequence

from .linalg import (
    det,
    gcd_list,
    hermite_normal_form,
    int_inverse,
    kernel_basis,
    lcm_list,
    rank,
    sign,
    smith_normal_form,
    solve,
)
from .toric import GenericityError, InvalidArrangement, ToricFlat, ValidationReport, dot


@dataclass(frozen=True)
class AffineHyperplane:
    """The hyperplane {x : normal . x = offset}; positive side normal . x > offset."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        normal = tuple(int(x) for x in self.normal)
        if not any(normal):
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", Fraction(self.offset))

    @property
    def is_primitive(self) -> bool:
        return gcd_list(self.normal) == 1

    def value(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.offset


class AffineFlat(ToricFlat):
    """An affine flat {x : N x = t}, with N the HNF of its saturated conormal lattice."""

    periodic = False

    def label(self) -> str:
        if self.codim == 0:
            return f"R{self.n}"
        return "{" + ";".join(f"{list(r)}={t}" for r, t in zip(self.conormals, self.offsets)) + "}"

    def __repr__(self):
        return f"AffineFlat({self.label()})"


def affine_intersection(rows, rhs, n):
    """(saturated conormal HNF, point) of {rows . x = rhs}, or None if empty."""
    if not rows:
        return [], tuple(Fraction(0) for _ in range(n))
    x = solve(rows, rhs)
    if x is None:
        return None
    U, D, V = smith_normal_form(rows)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    conormal = hermite_normal_form(int_inverse(V)[:r])
    return conormal, tuple(x)


def normalize_affine(alpha, beta):
    g = gcd_list(alpha)
    alpha = [int(a) // g for a in alpha]
    beta = Fraction(beta) / g
    if next(a for a in alpha if a) < 0:
        alpha = [-a for a in alpha]
        beta = -beta
    return tuple(alpha), beta


# ---------------------------------------------------------------------------
# polytopes

class Polytope:
    """Convex hull of finitely many rational points, with its face lattice."""

    def __init__(self, vertices: Sequence[Sequence]):
        pts = sorted({tuple(Fraction(x) for x in v) for v in vertices})
        if not pts:
            raise ValueError("a polytope needs at least one vertex")
        self.ambient_dim = len(pts[0])
        hull = _extreme_points(pts)
        self.vertices = tuple(hull)
        diffs = [[a - b for a, b in zip(v, self.vertices[0])] for v in self.vertices[1:]]
        self.dim = rank(diffs, self.ambient_dim) if diffs else 0

    def __repr__(self):
        return f"Polytope({[[str(x) for x in v] for v in self.vertices]})"

    @cached_property
    def faces(self) -> list[list[frozenset]]:
        """faces[c] = faces of codimension c, as sets of vertex indices."""
        d = self.dim
        whole = frozenset(range(len(self.vertices)))
        out = [[whole]]
        if d == 0:
            return out
        facets = [frozenset(f) for f in _facet_sets(list(self.vertices))]
        out.append(sorted(facets, key=sorted))
        for c in range(2, d + 1):
            nxt = set()
            for F in out[-1]:
                for G in facets:
                    H = F & G
                    if H and H != F and self.face_dim(H) == d - c:
                        nxt.add(H)
            out.append(sorted(nxt, key=sorted))
        return out

    def face_dim(self, face) -> int:
        pts = [self.vertices[i] for i in sorted(face)]
        diffs = [[a - b for a, b in zip(v, pts[0])] for v in pts[1:]]
        return rank(diffs, self.ambient_dim) if diffs else 0

    def barycenter(self, face) -> tuple:
        pts = [self.vertices[i] for i in face]
        return tuple(sum(p[j] for p in pts) / len(pts) for j in range(self.ambient_dim))

    def facet_halfspaces(self) -> list[tuple[tuple, Fraction]]:
        """Outward primitive normals and offsets (normal . x <= offset) of a full-dimensional polytope."""
        if self.dim != self.ambient_dim:
            raise ValueError("facet halfspaces need a full-dimensional polytope")
        out = []
        for F in self.faces[1]:
            pts = [self.vertices[i] for i in sorted(F)]
            normal = _hyperplane_normal(pts, self.ambient_dim)
            off = dot(normal, pts[0])
            other = next(v for i, v in enumerate(self.vertices) if i not in F)
            if dot(normal, other) > off:
                normal = [-a for a in normal]
                off = -off
            out.append((tuple(normal), off))
        return out

    def affine_span(self, face) -> tuple[list, list]:
        """(conormal rows, offsets) of the affine span of a face."""
        pts = [self.vertices[i] for i in sorted(face)]
        diffs = [[a - b for a, b in zip(v, pts[0])] for v in pts[1:]]
        n = self.ambient_dim
        if diffs:
            ker = kernel_basis(diffs, n).basis
        else:
            ker = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        rows = [_integral(r) for r in ker]
        U, D, V = smith_normal_form(rows) if rows else (None, None, None)
        if rows:
            r = len(rows)
            conormal = hermite_normal_form(int_inverse(V)[:r])
        else:
            conormal = []
        return conormal, [dot(r, pts[0]) for r in conormal]

    def triangulation(self, face=None) -> list[tuple]:
        """Pulling triangulation of a face into simplices (tuples of vertex indices)."""
        if face is None:
            face = self.faces[0][0]
        d = self.face_dim(face)
        if d == 0:
            return [tuple(face)]
        v0 = min(face, key=lambda i: self.vertices[i])
        codim = self.dim - d
        out = []
        for G in self.faces[codim + 1]:
            if G <= face and v0 not in G:
                for simplex in self.triangulation(G):
                    out.append((v0,) + simplex)
        return out

    def translate(self, v: Sequence) -> "Polytope":
        return Polytope([[a + Fraction(b) for a, b in zip(p, v)] for p in self.vertices])

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        if self.dim != self.ambient_dim:
            raise ValueError("containment test needs a full-dimensional polytope")
        for normal, off in self.facet_halfspaces_cached:
            val = dot(normal, x)
            if val > off or (strict and val == off):
                return False
        return True

    @cached_property
    def facet_halfspaces_cached(self):
        return self.facet_halfspaces()


def _integral(row) -> list[int]:
    den = lcm_list([Fraction(x).denominator for x in row])
    ints = [int(Fraction(x) * den) for x in row]
    g = gcd_list(ints)
    return [x // g for x in ints]


def _hyperplane_normal(pts, n) -> list[int]:
    diffs = [[a - b for a, b in zip(v, pts[0])] for v in pts[1:]]
    if diffs:
        ker = kernel_basis(diffs, n).basis
    else:
        # a single point is a hyperplane only on the line
        ker = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if len(ker) != 1:
        raise ValueError("points do not span a hyperplane")
    return _integral(ker[0])


def _local_coords(pts):
    """Affine coordinates of points in their affine hull."""
    n = len(pts[0])
    diffs = [[a - b for a, b in zip(v, pts[0])] for v in pts]
    basis = []
    for d in diffs:
        if any(d) and rank(basis + [d], n) > len(basis):
            basis.append(d)
    if not basis:
        return [() for _ in pts], 0
    cols = [[basis[j][i] for j in range(len(basis))] for i in range(n)]
    return [tuple(solve(cols, d)) for d in diffs], len(basis)


def _facet_sets(pts) -> list[set]:
    coords, d = _local_coords(pts)
    if d == 0:
        return []
    if d == 1:
        vals = [c[0] for c in coords]
        lo, hi = min(vals), max(vals)
        return [{i for i, v in enumerate(vals) if v == lo}, {i for i, v in enumerate(vals) if v == hi}]
    found = set()
    for sub in combinations(range(len(pts)), d):
        sub_pts = [coords[i] for i in sub]
        diffs = [[a - b for a, b in zip(v, sub_pts[0])] for v in sub_pts[1:]]
        if rank(diffs, d) < d - 1:
            continue
        normal = kernel_basis(diffs, d).basis[0]
        off = dot(normal, sub_pts[0])
        vals = [dot(normal, c) - off for c in coords]
        if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
            found.add(frozenset(i for i, v in enumerate(vals) if v == 0))
    return [set(f) for f in found]


def _extreme_points(pts):
    if len(pts) <= 1:
        return pts
    coords, d = _local_coords(pts)
    if d == 0:
        return pts[:1]
    facets = _facet_sets(pts)
    out = []
    for i, p in enumerate(pts):
        inc = [f for f in facets if i in f]
        if not inc:
            continue
        common = set.intersection(*inc)
        # p is extreme iff the incident facets cut out p alone
        if all(coords[j] == coords[i] for j in common):
            out.append(p)
    # drop duplicates created by coincident points
    return sorted(set(out))


def normalized_volume(p: Polytope, flat) -> Fraction:
    """Volume of p in the lattice-normalized coordinates of ``flat``."""
    if p.dim != flat.dim:
        raise ValueError("polytope dimension does not match the flat")
    m = flat.dim
    if m == 0:
        return Fraction(1)
    v0 = p.vertices[0]
    ys = [flat.vector_to_coords([a - b for a, b in zip(v, v0)]) for v in p.vertices]
    return _simplex_sum(p, ys, m)


def coordinate_volume(points: Sequence[Sequence]) -> Fraction:
    """Volume of the convex hull of full-dimensional points in their own coordinates."""
    p = Polytope(points)
    m = p.ambient_dim
    if m == 0:
        return Fraction(1)
    if p.dim < m:
        return Fraction(0)
    return _simplex_sum(p, p.vertices, m)


def _simplex_sum(p, ys, m):
    total = Fraction(0)
    for simplex in p.triangulation():
        y0 = ys[simplex[0]]
        mat = [[ys[i][j] - y0[j] for j in range(m)] for i in simplex[1:]]
        total += abs(det(mat))
    return total / factorial(m)


# ---------------------------------------------------------------------------
# regions of an affine arrangement in R^m

@dataclass(frozen=True)
class AffCell:
    flat: int
    index: int
    sign_vector: tuple  # per induced hyperplane of the flat
    interior: tuple  # flat coordinates
    bounded: bool
    vertices: tuple  # closure vertices inside the bounding box
    recession: tuple  # normals v with v . d >= 0 on the recession cone


class AffineSubdivision:
    """Top cells of an arrangement of hyperplanes alpha . y = beta in R^m."""

    def __init__(self, m: int, hyperplanes, flat_index: int = 0):
        self.m = m
        self.flat_index = flat_index
        self.hyperplanes = [(tuple(a), Fraction(b)) for a, b in hyperplanes]
        if m == 0:
            self.cells = [AffCell(flat_index, 0, (), (), True, ((),), ())]
            self._sv_to_index = {(): 0}
            self.box = Fraction(0)
            return
        self.box = self._box_radius()
        self._candidates = self._candidate_points()
        self._enumerate()

    def _box_radius(self) -> Fraction:
        m = self.m
        A = [list(a) for a, _ in self.hyperplanes]
        r = rank(A, m) if A else 0
        big = Fraction(0)
        for sub in combinations(range(len(A)), r):
            rows = [A[i] for i in sub]
            if r and rank(rows, m) == r:
                x = solve(rows, [self.hyperplanes[i][1] for i in sub])
                big = max([big] + [abs(c) for c in x])
        return big + 1

    def _candidate_points(self):
        m, R = self.m, self.box
        planes = [(list(a), b) for a, b in self.hyperplanes]
        for j in range(m):
            e = [int(i == j) for i in range(m)]
            planes.append((e, R))
            planes.append((e, -R))
        pts = set()
        for sub in combinations(range(len(planes)), m):
            rows = [planes[i][0] for i in sub]
            if rank(rows, m) < m:
                continue
            x = tuple(solve(rows, [planes[i][1] for i in sub]))
            if all(-R <= c <= R for c in x):
                pts.add(x)
        return sorted(pts)

    def sign_vector(self, y, w=None) -> tuple:
        out = []
        for a, b in self.hyperplanes:
            s = sign(dot(a, y) - b)
            if s == 0:
                s = sign(dot(a, w)) if w is not None else 0
                if s == 0:
                    raise GenericityError("point lies on a hyperplane")
            out.append(s)
        return tuple(out)

    def locate(self, y, w=None) -> int:
        if self.m == 0:
            return 0
        return self._sv_to_index[self.sign_vector(y, w)]

    def _closure(self, sv):
        out = []
        for p in self._candidates:
            if all(s * (dot(a, p) - b) >= 0 for s, (a, b) in zip(sv, self.hyperplanes)):
                out.append(p)
        return out

    def _enumerate(self):
        m = self.m
        big = 2 * max([abs(x) for a, _ in self.hyperplanes for x in a] + [1]) + 1
        start = self.sign_vector([Fraction(0)] * m, [big ** j for j in range(m)])
        seen = {start}
        queue = deque([start])
        found = []
        while queue:
            sv = queue.popleft()
            verts = self._closure(sv)
            if len(verts) <= m:
                raise InvalidArrangement("empty region reached during enumeration")
            found.append((sv, verts))
            for i, (a, b) in enumerate(self.hyperplanes):
                tight = [v for v in verts if dot(a, v) == b]
                if len(tight) < m:
                    continue
                diffs = [[x - y for x, y in zip(v, tight[0])] for v in tight[1:]]
                if (rank(diffs, m) if diffs else 0) != m - 1:
                    continue
                nb = list(sv)
                nb[i] = -nb[i]
                nb = tuple(nb)
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        cells = []
        R = self.box
        for sv, verts in found:
            cen = tuple(sum(v[j] for v in verts) / len(verts) for j in range(m))
            bounded = not any(abs(c) == R for v in verts for c in v)
            rec = () if bounded else tuple(tuple(s * x for x in a) for s, (a, _) in zip(sv, self.hyperplanes))
            cells.append((cen, sv, bounded, tuple(verts), rec))
        cells.sort()
        self.cells = [AffCell(self.flat_index, i, sv, cen, bd, verts, rec)
                      for i, (cen, sv, bd, verts, rec) in enumerate(cells)]
        self._sv_to_index = {c.sign_vector: c.index for c in self.cells}


@dataclass(frozen=True)
class AffInduced:
    normal: tuple
    offset: Fraction
    subflat: int


class AffineArrangement:
    """A finite arrangement of rational affine hyperplanes in R^n."""

    kind = "affine"

    def __init__(self, dim: int, hyperplanes):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.n = dim
        hs = []
        for h in hyperplanes:
            if not isinstance(h, AffineHyperplane):
                h = AffineHyperplane(tuple(h[0]), Fraction(h[1]))
            if len(h.normal) != dim:
                raise ValueError("hyperplane normal has the wrong length")
            hs.append(h)
        self.hyperplanes = hs

    @classmethod
    def from_pairs(cls, dim, pairs) -> "AffineArrangement":
        return cls(dim, [AffineHyperplane(tuple(a), Fraction(b)) for a, b in pairs])

    def validate(self) -> ValidationReport:
        issues = []
        if not self.hyperplanes:
            issues.append("arrangement has no hyperplanes")
        for i, h in enumerate(self.hyperplanes):
            if not h.is_primitive:
                issues.append(f"hyperplane {i} has a non-primitive normal {list(h.normal)}")
        keys = [normalize_affine(h.normal, h.offset) for h in self.hyperplanes]
        if len(set(keys)) != len(keys):
            issues.append("repeated hyperplane")
        return ValidationReport(not issues, issues)

    def require_valid(self):
        rep = self.validate()
        if not rep.valid:
            raise InvalidArrangement("; ".join(rep.violations))

    @cached_property
    def flats(self) -> list[AffineFlat]:
        self.require_valid()
        n = self.n
        ambient = AffineFlat(n, [], [])
        found = {ambient.key: ambient}
        queue = deque([ambient])
        while queue:
            F = queue.popleft()
            rows = [list(r) for r in F.conormals]
            for h in self.hyperplanes:
                if rank(rows + [list(h.normal)], n) == len(rows):
                    continue
                res = affine_intersection(rows + [list(h.normal)], list(F.offsets) + [h.offset], n)
                if res is None:
                    continue
                conormal, x = res
                key = (tuple(tuple(r) for r in conormal), tuple(dot(r, x) for r in conormal))
                if key not in found:
                    G = AffineFlat(n, conormal, key[1])
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

    def induced(self, i: int) -> list[AffInduced]:
        return self._induced[i]

    @cached_property
    def _induced(self):
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
                hyps.add(normalize_affine(alpha, h.offset - dot(h.normal, F.base_point)))
            rec = []
            for alpha, beta in sorted(hyps):
                rows = [list(r) for r in F.conormals] + [F.pullback(alpha)]
                conormal = hermite_normal_form(rows)
                # a point of the induced hyperplane: beta * u with alpha . u = 1
                U1, _, V1 = smith_normal_form([list(alpha)])
                u = [U1[0][0] * V1[j][0] for j in range(len(alpha))]
                x0 = F.from_coords([beta * c for c in u])
                key = (tuple(tuple(r) for r in conormal), tuple(dot(r, x0) for r in conormal))
                rec.append(AffInduced(alpha, beta, self.flat_index[key]))
            out.append(rec)
        return out

    @cached_property
    def _subdivisions(self):
        return [AffineSubdivision(F.dim, [(h.normal, h.offset) for h in self.induced(i)], i)
                for i, F in enumerate(self.flats)]

    def subdivision(self, i: int) -> AffineSubdivision:
        return self._subdivisions[i]

    def cells(self, i: int = 0) -> list[AffCell]:
        return self._subdivisions[i].cells

    def cell_point(self, i: int, c: int) -> list[Fraction]:
        return self.flats[i].from_coords(self.cells(i)[c].interior)

    def ambient_sign_vector(self, i: int, c: int) -> tuple:
        x = self.cell_point(i, c)
        return tuple(sign(h.value(x)) for h in self.hyperplanes)

    def flat_label(self, i: int) -> str:
        return self.flats[i].label()

    def complex(self, compactify: bool = False):
        from .pseudoaffine import pseudoaffine_complex
        return pseudoaffine_complex(self, compactify)


def aff_flats(hyperplanes, dim: int | None = None) -> list[AffineFlat]:
    hyperplanes = list(hyperplanes)
    dim = dim if dim is not None else len(hyperplanes[0].normal)
    return AffineArrangement(dim, hyperplanes).flats


def aff_cells(arr: AffineArrangement, restrict_to: int = 0) -> list[AffCell]:
    return arr.cells(restrict_to)


def polytope_flags(p: Polytope, flat_lookup, k: int, periodic: bool = False) -> list[dict]:
    """Complete face chains of length k with their span flags and barycenter frames.

    ``flat_lookup`` maps an affine span key (conormals, offsets) to a flat
    index (reduce offsets mod 1 first when ``periodic``); a missing span is
    reported as an error.
    """
    from .toric import frac_mod1

    if k > p.dim:
        return []
    chains = [[p.faces[0][0]]]
    for c in range(1, k + 1):
        chains = [ch + [G] for ch in chains for G in p.faces[c] if G < ch[-1]]
    out = []
    for ch in chains:
        flag = []
        for face in ch:
            N, t = p.affine_span(face)
            if periodic:
                t = [frac_mod1(x) for x in t]
            key = (tuple(tuple(r) for r in N), tuple(t))
            if key not in flat_lookup:
                raise InvalidArrangement(f"face span {key} is not a flat of the arrangement")
            flag.append(flat_lookup[key])
        bk = p.barycenter(ch[-1])
        frame = [[a - b for a, b in zip(p.barycenter(ch[i]), bk)] for i in range(k - 1, -1, -1)]
        out.append({"faces": ch, "flag": tuple(flag), "frame": frame})
    return out
