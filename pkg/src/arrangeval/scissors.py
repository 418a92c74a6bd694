"""Translation scissors congruence: the lattice case and the planar criterion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .affine import Polytope, coordinate_volume
from .hadwiger import indicator_chain
from .linalg import format_rational, gcd_list
from .toric import ToricArrangement, dot, frac_mod1, normalize_hyperplane


class NonConvexPolygon(ValueError):
    pass


@dataclass(frozen=True)
class Polygon:
    """Convex polygon with counterclockwise vertices and no three collinear."""

    vertices: tuple

    @classmethod
    def from_points(cls, points: Sequence[Sequence]) -> "Polygon":
        pts = [tuple(Fraction(x) for x in p) for p in points]
        if len(pts) < 3 or any(len(p) != 2 for p in pts):
            raise NonConvexPolygon("a polygon needs at least three planar vertices")
        hull = Polytope(pts)
        if hull.dim < 2:
            raise NonConvexPolygon("degenerate polygon")
        if len(hull.vertices) != len(set(pts)) or len(set(pts)) != len(pts):
            raise NonConvexPolygon("input is not a convex polygon in general position")
        n = len(pts)
        turns = [_cross(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) for i in range(n)]
        if all(t < 0 for t in turns):
            pts = pts[::-1]
        elif not all(t > 0 for t in turns):
            raise NonConvexPolygon("vertices are not in convex cyclic order")
        return cls(tuple(pts))

    @classmethod
    def from_polytope(cls, p: Polytope) -> "Polygon":
        return cls.from_points(_ccw(p.vertices))

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def area(self) -> Fraction:
        return coordinate_volume(self.vertices)


def _cross(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _as_polygon(p) -> Polygon:
    if isinstance(p, Polygon):
        return p
    if isinstance(p, Polytope):
        return Polygon.from_polytope(p)
    return Polygon.from_points(p)


def _ccw(pts):
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    from .complex import _angle_sorted
    order = _angle_sorted([(p[0] - cx, p[1] - cy) for p in pts])
    return [(v[0] + cx, v[1] + cy) for v in order]


def primitive_direction(v: Sequence) -> tuple[int, int]:
    """Primitive integer direction of a rational vector, first nonzero entry positive."""
    from .linalg import lcm_list
    v = [Fraction(x) for x in v]
    if not any(v):
        raise ValueError("zero direction")
    den = lcm_list([x.denominator for x in v])
    ints = [int(x * den) for x in v]
    g = gcd_list(ints)
    d = [x // g for x in ints]
    if next(x for x in d if x) < 0:
        d = [-x for x in d]
    return tuple(d)


def upsilon_line(p, direction: Sequence[int], coorientation: int = 1) -> Fraction:
    """Length of the support edge on the positive side minus that on the negative side.

    Lengths are in units of the primitive direction vector; the positive side
    is the one the rotated vector coorientation * (-d_y, d_x) points to.
    """
    poly = _as_polygon(p)
    d = tuple(int(x) for x in direction)
    if not any(d):
        raise ValueError("zero direction")
    if gcd_list(d) != 1:
        raise ValueError("direction must be primitive")
    if coorientation not in (1, -1):
        raise ValueError("coorientation must be +1 or -1")
    u = (-coorientation * d[1], coorientation * d[0])
    vals = [dot(u, v) for v in poly.vertices]
    top, bot = max(vals), min(vals)
    return _support_length(poly, d, u, top) - _support_length(poly, d, u, bot)


def _support_length(poly, d, u, level) -> Fraction:
    on = [v for v in poly.vertices if dot(u, v) == level]
    if len(on) < 2:
        return Fraction(0)
    ts = [dot(d, v) / dot(d, d) for v in on]
    return max(ts) - min(ts)


@dataclass
class InvariantTable:
    area: Fraction
    upsilon: dict  # primitive direction -> value for coorientation +1

    def to_dict(self) -> dict:
        return {"area": format_rational(self.area),
                "upsilon": [{"direction": list(d), "value": format_rational(v)}
                            for d, v in sorted(self.upsilon.items())]}

    def to_csv(self) -> str:
        lines = ["invariant,direction,value", f"area,,{format_rational(self.area)}"]
        for d, v in sorted(self.upsilon.items()):
            lines.append(f'upsilon,"{d[0]} {d[1]}",{format_rational(v)}')
        return "\n".join(lines) + "\n"


@dataclass
class CongruenceVerdict:
    congruent: bool
    witness: dict | None = None
    tables: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = {"congruent": self.congruent, "witness": self.witness}
        if self.tables:
            out["tables"] = [t.to_dict() for t in self.tables]
        return out


def invariant_table(p, directions) -> InvariantTable:
    poly = _as_polygon(p)
    return InvariantTable(poly.area(), {d: upsilon_line(poly, d, 1) for d in directions})


def edge_directions(p) -> set:
    return {primitive_direction([b[0] - a[0], b[1] - a[1]]) for a, b in _as_polygon(p).edges()}


def hadwiger_glur_2d(p, q) -> CongruenceVerdict:
    """Translation scissors congruence of convex polygons via area and line invariants."""
    P, Q = _as_polygon(p), _as_polygon(q)
    dirs = sorted(edge_directions(P) | edge_directions(Q))
    tp, tq = invariant_table(P, dirs), invariant_table(Q, dirs)
    if tp.area != tq.area:
        return CongruenceVerdict(False, {"invariant": "area", "values": [format_rational(tp.area),
                                                                        format_rational(tq.area)]},
                                 (tp, tq))
    for d in dirs:
        if tp.upsilon[d] != tq.upsilon[d]:
            return CongruenceVerdict(False, {"invariant": "upsilon", "direction": list(d),
                                             "values": [format_rational(tp.upsilon[d]),
                                                        format_rational(tq.upsilon[d])]},
                                     (tp, tq))
    return CongruenceVerdict(True, None, (tp, tq))


# ---------------------------------------------------------------------------
# lattice translations

def joint_arrangement(polytopes: Sequence[Polytope]) -> ToricArrangement:
    """Toric arrangement of all facet hyperplanes, closed up by coordinate hyperplanes if needed."""
    n = polytopes[0].ambient_dim
    hyps = set()
    for p in polytopes:
        if p.ambient_dim != n:
            raise ValueError("polytopes live in different dimensions")
        if p.dim < n:
            continue
        for normal, off in p.facet_halfspaces():
            a, b = normalize_hyperplane(normal, off)
            hyps.add((a, frac_mod1(b)))
    pairs = sorted(hyps)
    arr = ToricArrangement.from_pairs(n, pairs) if pairs else None
    if arr is None or not arr.validate().valid:
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            hyps.add((e, Fraction(0)))
        arr = ToricArrangement.from_pairs(n, sorted(hyps))
        arr.require_valid()
    return arr


def zn_congruent(p: Polytope, q: Polytope) -> CongruenceVerdict:
    """Compare the torus pushforwards of the indicator functions of p and q."""
    arr = joint_arrangement([p, q])
    a, b = indicator_chain(p, arr), indicator_chain(q, arr)
    for c in range(len(arr.cells(0))):
        if a.get(c, 0) != b.get(c, 0):
            pt = arr.cell_point(0, c)
            return CongruenceVerdict(False, {
                "cell": c, "point": [format_rational(x) for x in pt],
                "multiplicities": [format_rational(a.get(c, Fraction(0))),
                                   format_rational(b.get(c, Fraction(0)))]})
    return CongruenceVerdict(True, None)
