"""Hadwiger invariants of arrangement polytopes and decompositions of valuations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Mapping, Sequence

from .affine import AffineArrangement, AffineFlat, Polytope, coordinate_volume, normalized_volume, polytope_flags
from .chains import ChainSpaces, OrientedFlag
from .linalg import format_rational, smith_normal_form, sparse_solve, int_inverse, matvec
from .toric import InvalidArrangement, ToricArrangement, ToricFlat, relative_sign, vec_mod1, dot


@dataclass(frozen=True)
class HadwigerLabel:
    flag: tuple
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")

    @property
    def rank(self) -> int:
        return len(self.flag) - 1

    def flipped(self) -> "HadwigerLabel":
        return HadwigerLabel(self.flag, -self.sign)

    @property
    def oriented_flag(self) -> OrientedFlag:
        return OrientedFlag(self.flag, self.sign)


def _periodic(arr) -> bool:
    return isinstance(arr, ToricArrangement)


class HadwigerContext:
    """Chain spaces plus cell volumes of an arrangement, cached for evaluation."""

    def __init__(self, arr):
        self.arr = arr
        self.cs = ChainSpaces(arr.complex())
        self.periodic = _periodic(arr)

    def cell_volume(self, flat: int, cell: int):
        c = self.arr.cells(flat)[cell]
        if self.arr.flats[flat].dim == 0:
            return Fraction(1)
        if not self.periodic and not c.bounded:
            return None
        return coordinate_volume(c.vertices)

    def face_chains(self, p: Polytope, k: int) -> list[dict]:
        return polytope_flags(p, self.arr.flat_index, k, periodic=self.periodic)

    def upsilon_on_cells(self, flag: tuple) -> list[Fraction]:
        """Values of the reference-oriented invariant on every ambient cell indicator."""
        k = len(flag) - 1
        images = self.cs.power_images()[k]
        out = []
        for img in images:
            out.append(self._vol_of_component(img, flag))
        return out

    def _vol_of_component(self, chain: Mapping, flag: tuple) -> Fraction:
        total = Fraction(0)
        for (f, c), v in chain.items():
            if f == flag and v:
                vol = self.cell_volume(flag[-1], c)
                if vol is None:
                    raise ValueError("chain has support on an unbounded cell")
                total += v * vol
        return total


def _context(arr, ctx):
    return ctx if ctx is not None else HadwigerContext(arr)


def flag_signs(p: Polytope, flag: tuple, arr, ctx: HadwigerContext | None = None) -> list[tuple]:
    """(face chain, sign) for every face chain of p whose spans give ``flag``."""
    ctx = _context(arr, ctx)
    k = len(flag) - 1
    out = []
    for rec in ctx.face_chains(p, k):
        if rec["flag"] == tuple(flag):
            base = arr.flats[flag[-1]]
            out.append((rec["faces"], relative_sign(None, base, rec["frame"])))
    return out


def flag_of_polytope(p: Polytope, flag: tuple, arr, ctx: HadwigerContext | None = None):
    """Orientation sign of the first face chain of p realizing ``flag``, or None."""
    found = flag_signs(p, flag, arr, ctx)
    return found[0][1] if found else None


def hadwiger_eval(label: HadwigerLabel, p: Polytope, arr, ctx: HadwigerContext | None = None) -> Fraction:
    """Signed normalized volume of the faces of p along the label's flag."""
    ctx = _context(arr, ctx)
    base = arr.flats[label.flag[-1]]
    total = Fraction(0)
    for faces, s in flag_signs(p, label.flag, arr, ctx):
        face = Polytope([p.vertices[i] for i in sorted(faces[-1])])
        total += s * normalized_volume(face, base)
    return label.sign * total


def indicator_chain(p: Polytope, arr) -> dict:
    """Multiplicity of p (pushed to the torus in the toric case) on each ambient cell."""
    n = arr.n
    out = {}
    if p.dim < n:
        return out
    lo = [min(v[j] for v in p.vertices) for j in range(n)]
    hi = [max(v[j] for v in p.vertices) for j in range(n)]
    periodic = _periodic(arr)
    for c in range(len(arr.cells(0))):
        x = arr.cell_point(0, c)
        if periodic:
            ranges = [range(ceil(lo[j] - x[j]), floor(hi[j] - x[j]) + 1) for j in range(n)]
            count = sum(1 for z in product(*ranges)
                        if p.contains([a + b for a, b in zip(x, z)], strict=True))
        else:
            count = int(p.contains(x, strict=True))
        if count:
            out[c] = Fraction(count)
    return out


def hadwiger_eval_via_chains(label: HadwigerLabel, p: Polytope, arr,
                             ctx: HadwigerContext | None = None) -> Fraction:
    """Volume of the flag component of D^k applied to the indicator chain of p."""
    ctx = _context(arr, ctx)
    k = label.rank
    chain = ctx.cs.apply_Dk(k, ctx.cs.chain_from_cells(indicator_chain(p, arr)))
    return label.sign * ctx._vol_of_component(chain, label.flag)


def one_flag_chain(label: HadwigerLabel) -> dict:
    """1_L as a flag function stored under reference orientations."""
    return {label.flag: Fraction(label.sign)}


def upsilon_tilde(label: HadwigerLabel, f: Mapping) -> Fraction:
    """The functional on F_k dual to 1_L."""
    return label.sign * Fraction(f.get(label.flag, 0))


def reconstruct_functional(nu: Mapping, f: Mapping, flags) -> Fraction:
    """Half the sum over oriented labels of nu(1_L) * upsilon_tilde_L(f).

    ``nu`` maps each reference-oriented flag to nu(1_L); nu(1_{-L}) = -nu(1_L).
    """
    total = Fraction(0)
    for flag in flags:
        for s in (1, -1):
            lab = HadwigerLabel(flag, s)
            total += s * Fraction(nu.get(flag, 0)) * upsilon_tilde(lab, f)
    return total / 2


@dataclass
class DecompositionTable:
    coefficients: list  # per rank: {flag: coefficient of the reference-oriented invariant}
    labels: list = field(default_factory=list)  # flat labels, for export

    def unfolded(self) -> list[tuple]:
        """(rank, flag, orientation, coefficient) with the coefficient split over orientations."""
        rows = []
        for k, table in enumerate(self.coefficients):
            for flag in sorted(table):
                c = table[flag]
                rows.append((k, flag, 1, c / 2))
                rows.append((k, flag, -1, -c / 2))
        return rows

    def to_csv(self) -> str:
        lines = ["rank,flag,orientation,coefficient"]
        for k, flag, s, c in self.unfolded():
            fid = "/".join(self.labels[i] for i in flag) if self.labels else "/".join(map(str, flag))
            lines.append(f'{k},"{fid}",{s},{format_rational(c)}')
        return "\n".join(lines) + "\n"


def valuation_decompose(mu: Sequence, arr, ctx: HadwigerContext | None = None) -> DecompositionTable:
    """Write a functional on ambient cells as a combination of Hadwiger invariants.

    The result is canonical only up to the linear relations among the
    invariants; coefficients come from a pivoted elimination with free
    variables set to zero.
    """
    if not _periodic(arr):
        raise ValueError("valuation decomposition needs a toric arrangement")
    ctx = _context(arr, ctx)
    cs = ctx.cs
    resid = [Fraction(x) for x in mu]
    if len(resid) != cs.v_dim:
        raise ValueError("one value per ambient cell is required")
    tables = []
    for k in range(cs.n + 1):
        flags = cs.flags(k)
        ups = [ctx.upsilon_on_cells(f) for f in flags]
        rows, rhs = [], []
        for g in cs.v_le_basis(k):
            rows.append({j: sum((c * ups[j][cell] for cell, c in g.items()), Fraction(0))
                         for j in range(len(flags))})
            rhs.append(sum((c * resid[cell] for cell, c in g.items()), Fraction(0)))
        rows = [{j: v for j, v in r.items() if v} for r in rows]
        sol = sparse_solve(rows, rhs, len(flags))
        if sol is None:
            raise ArithmeticError(f"rank {k} invariants do not span the residual functional")
        table = {flags[j]: v for j, v in sol.items() if v}
        for j, v in sol.items():
            for cell in range(cs.v_dim):
                resid[cell] -= v * ups[j][cell]
        tables.append(table)
    if any(resid):
        raise ArithmeticError("residual functional does not vanish on V")
    return DecompositionTable(tables, [arr.flat_label(i) for i in range(len(arr.flats))])


def evaluate_table(table: DecompositionTable, arr, ctx: HadwigerContext | None = None) -> list[Fraction]:
    """Values of sum_k sum_L coefficient * Upsilon_L on every ambient cell indicator."""
    ctx = _context(arr, ctx)
    out = [Fraction(0)] * ctx.cs.v_dim
    for tab in table.coefficients:
        for flag, c in tab.items():
            for cell, v in enumerate(ctx.upsilon_on_cells(flag)):
                out[cell] += c * v
    return out


# ---------------------------------------------------------------------------
# functoriality

@dataclass
class LabelMap:
    source: object
    target: object
    flat_map: list  # source flat index -> target flat index

    def apply(self, labels):
        return [HadwigerLabel(tuple(self.flat_map[i] for i in lab.flag), lab.sign) for lab in labels]

    def compose(self, other: "LabelMap") -> "LabelMap":
        """self after other."""
        if other.target is not self.source:
            raise ValueError("maps are not composable")
        return LabelMap(other.source, self.target, [self.flat_map[i] for i in other.flat_map])


def induced_label_map(arr, images: Sequence, labels=None):
    """Push flats and labels forward along a parallelism-preserving map of hyperplanes.

    ``images[i]`` is (normal, offset) of the image of hyperplane i.  Returns
    the :class:`LabelMap` (and mapped labels when ``labels`` is given).
    """
    periodic = _periodic(arr)
    n = arr.n
    new = []
    for h, (a, b) in zip(arr.hyperplanes, images):
        a = tuple(int(x) for x in a)
        b = Fraction(b)
        if a == h.normal:
            new.append((a, b))
        elif a == tuple(-x for x in h.normal):
            new.append((h.normal, -b))
        else:
            raise InvalidArrangement("hyperplane map does not preserve parallelism")
    if len(new) != len(arr.hyperplanes):
        raise ValueError("one image per hyperplane is required")
    seen, pairs = set(), []
    for a, b in new:
        key = (a, b % 1 if periodic else b)
        if key not in seen:
            seen.add(key)
            pairs.append((a, b))
    target = (ToricArrangement if periodic else AffineArrangement).from_pairs(n, pairs)
    flat_map = []
    for F in arr.flats:
        idx = [i for i, h in enumerate(arr.hyperplanes)
               if F.codim and _hyperplane_contains(h, F, periodic)]
        rows = [list(arr.hyperplanes[i].normal) for i in idx]
        if not rows:
            flat_map.append(0)
            continue
        src_b = [arr.hyperplanes[i].offset for i in idx]
        dst_b = [new[i][1] for i in idx]
        x = _component_image(rows, src_b, dst_b, list(F.base_point), n, periodic)
        G = (ToricFlat if periodic else AffineFlat)(n, F.conormals, [dot(r, x) for r in F.conormals])
        if G.key not in target.flat_index:
            raise InvalidArrangement("image flat is missing; lattice-translate classes not preserved")
        flat_map.append(target.flat_index[G.key])
    lm = LabelMap(arr, target, flat_map)
    if labels is None:
        return lm
    return lm, lm.apply(labels)


def _hyperplane_contains(h, F, periodic) -> bool:
    if any(dot(h.normal, col) for col in F.direction_basis):
        return False
    v = dot(h.normal, F.base_point) - h.offset
    return (v % 1 == 0) if periodic else v == 0


def _component_image(rows, src_b, dst_b, x, n, periodic):
    """Point of the image component with the same Smith index as the component of x."""
    U, D, V = smith_normal_form(rows)
    Vinv = int_inverse(V)
    y = matvec(Vinv, x)
    Ub_src = matvec(U, src_b)
    Ub_dst = matvec(U, dst_b)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    z = []
    for i in range(n):
        if i < r:
            d = D[i][i]
            j = d * y[i] - Ub_src[i]
            if periodic:
                j = j % d
            z.append((Ub_dst[i] + j) / d)
        else:
            z.append(y[i])
    out = matvec(V, z)
    return vec_mod1(out) if periodic else out


# ---------------------------------------------------------------------------
# scaling experiment

def scaling_experiment(p: Polytope, k: int, factors: Sequence[int]) -> list[dict]:
    """Compare invariants of lambda * p with those of p along corresponding face chains.

    Each face chain is evaluated with the lattice-normalized volume of its
    last face inside its affine span; the record reports the observed ratio
    and whether it equals lambda^(n-k) or lambda^k.
    """
    n = p.ambient_dim
    out = []
    base = _chain_values(p, k)
    for lam in factors:
        scaled = Polytope([[lam * x for x in v] for v in p.vertices])
        vals = _chain_values(scaled, k)
        for i, (v0, v1) in enumerate(zip(base, vals)):
            ratio = v1 / v0 if v0 else None
            out.append({"lambda": lam, "chain": i, "value": v0, "scaled_value": v1, "ratio": ratio,
                        "fits_n_minus_k": ratio == Fraction(lam) ** (n - k),
                        "fits_k": ratio == Fraction(lam) ** k})
    return out


def _chain_values(p: Polytope, k: int) -> list[Fraction]:
    chains = [[p.faces[0][0]]]
    for c in range(1, k + 1):
        chains = [ch + [G] for ch in chains for G in p.faces[c] if G < ch[-1]]
    vals = []
    for ch in sorted(chains, key=lambda ch: [sorted(f) for f in ch]):
        N, t = p.affine_span(ch[-1])
        flat = AffineFlat(p.ambient_dim, N, t)
        bk = p.barycenter(ch[-1])
        frame = [[a - b for a, b in zip(p.barycenter(ch[i]), bk)] for i in range(k - 1, -1, -1)]
        s = relative_sign(None, flat, frame)
        face = Polytope([p.vertices[i] for i in sorted(ch[-1])])
        vals.append(s * normalized_volume(face, flat))
    return vals
