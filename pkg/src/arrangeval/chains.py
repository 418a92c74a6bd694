"""Convex chains, elementary chains, flag functions and the Leray operator.

Coordinates of E^k are pairs (flag, cell of the flag's base flat); values
are always stored under the reference coorientation of the base flat, so an
alternating function on oriented flags becomes a plain function on flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .complex import FlatComplex
from .linalg import Subspace, sparse_kernel, subspace_from_sparse


Flag = tuple  # tuple of flat indices, codims 0..k


@dataclass(frozen=True)
class ConvexChain:
    flat: int
    coefficients: Mapping  # cell -> Fraction


@dataclass(frozen=True)
class OrientedFlag:
    flag: Flag
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")

    @property
    def rank(self) -> int:
        return len(self.flag) - 1

    def flipped(self) -> "OrientedFlag":
        return OrientedFlag(self.flag, -self.sign)


@dataclass(frozen=True)
class ElementaryChain:
    rank: int
    values: Mapping  # (flag, cell) -> Fraction, zeros omitted

    def component(self, flag: Flag) -> ConvexChain:
        return ConvexChain(flag[-1], {c: v for (f, c), v in self.values.items() if f == flag})


@dataclass(frozen=True)
class FlagFunction:
    rank: int
    values: Mapping  # flag -> Fraction, zeros omitted


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


@dataclass
class FiltrationReport:
    dims_le: list
    dims: list
    bases: list  # Subspace of the F_k coordinate space per k
    dim_V: int

    def to_dict(self, flags) -> dict:
        from .linalg import format_rational
        return {
            "dims": self.dims,
            "dims_le": self.dims_le,
            "dim_V": self.dim_V,
            "bases": [
                {
                    "flags": [list(f) for f in flags[k]],
                    "basis": [[format_rational(x) for x in row] for row in self.bases[k].basis],
                }
                for k in range(len(self.dims))
            ],
        }


class ChainSpaces:
    """E^k, F_k and D for a flat complex."""

    def __init__(self, cx: FlatComplex):
        self.cx = cx
        self.n = cx.n
        self._flags = {}
        self._D = {}

    # flags ------------------------------------------------------------------
    def flags(self, k: int) -> list[Flag]:
        if k not in self._flags:
            if k < 0 or k > self.n:
                self._flags[k] = []
            elif k == 0:
                self._flags[k] = [(self.cx.root,)]
            else:
                self._flags[k] = sorted(f + (c,) for f in self.flags(k - 1) for c in self.cx.children[f[-1]])
        return self._flags[k]

    def flag_index(self, k: int) -> dict:
        return {f: i for i, f in enumerate(self.flags(k))}

    def e_dim(self, k: int) -> int:
        return sum(self.cx.ncells[f[-1]] for f in self.flags(k))

    @property
    def v_dim(self) -> int:
        return self.cx.ncells[self.cx.root]

    # the Leray operator ----------------------------------------------------
    def leray_rows(self, k: int) -> dict:
        """Sparse matrix of D: E^k -> E^{k+1} as {(flag', cell): {(flag, cell): coef}}."""
        if k not in self._D:
            rows = {}
            for f2 in self.flags(k + 1):
                flag, M = f2[:-1], f2[-1]
                jump = self.cx.jumps[(flag[-1], M)]
                for c, (cp, cm) in enumerate(jump.pairs):
                    row = {}
                    if cp != cm:
                        row[(flag, cp)] = Fraction(jump.eps)
                        row[(flag, cm)] = Fraction(-jump.eps)
                    rows[(f2, c)] = row
            self._D[k] = rows
        return self._D[k]

    def apply_D(self, k: int, x: Mapping) -> dict:
        out = {}
        for key, row in self.leray_rows(k).items():
            v = sum((coef * x.get(col, 0) for col, coef in row.items()), Fraction(0))
            if v:
                out[key] = v
        return out

    def leray_D(self, x: ElementaryChain) -> ElementaryChain:
        return ElementaryChain(x.rank + 1, self.apply_D(x.rank, x.values))

    def apply_Dk(self, k: int, g: Mapping, start: int = 0) -> dict:
        x = dict(g)
        for j in range(start, start + k):
            x = self.apply_D(j, x)
        return x

    # flag functions --------------------------------------------------------
    def flag_embed(self, k: int, f: Mapping) -> dict:
        out = {}
        for flag, v in f.items():
            if v:
                for c in range(self.cx.ncells[flag[-1]]):
                    out[(flag, c)] = Fraction(v)
        return out

    def flag_values(self, k: int, x: Mapping) -> dict | None:
        """The flag function represented by x, or None if x is not flagwise constant."""
        out = {}
        for flag in self.flags(k):
            vals = {x.get((flag, c), Fraction(0)) for c in range(self.cx.ncells[flag[-1]])}
            if len(vals) != 1:
                return None
            v = vals.pop()
            if v:
                out[flag] = v
        return out

    def f_vector(self, k: int, f: Mapping) -> list[Fraction]:
        return [Fraction(f.get(flag, 0)) for flag in self.flags(k)]

    def f_dict(self, k: int, vec) -> dict:
        return {flag: Fraction(v) for flag, v in zip(self.flags(k), vec) if v}

    def constant_chain(self, value=1) -> dict:
        root = (self.cx.root,)
        return {(root, c): Fraction(value) for c in range(self.v_dim)}

    # iota ----------------------------------------------------------------------
    def iota_regroup(self, data: Mapping, direction: str = "forward") -> dict:
        """Relabel wall data between (flag, (subflat, cell)) and (extended flag, cell)."""
        out = {}
        if direction == "forward":
            for (flag, (M, c)), v in data.items():
                if M not in self.cx.children[flag[-1]]:
                    raise ValueError("wall does not refine the flag's base flat")
                out[(flag + (M,), c)] = v
        elif direction == "backward":
            for (flag, c), v in data.items():
                if len(flag) < 2:
                    raise ValueError("cannot truncate a rank-0 flag")
                out[(flag[:-1], (flag[-1], c))] = v
        else:
            raise ValueError("direction must be 'forward' or 'backward'")
        return out

    # degree filtration -----------------------------------------------------
    def power_images(self) -> list[list[dict]]:
        """images[j][c] = D^j applied to the indicator of ambient cell c."""
        root = (self.cx.root,)
        cur = [{(root, c): Fraction(1)} for c in range(self.v_dim)]
        images = [cur]
        for j in range(self.n + 1):
            cur = [self.apply_D(j, x) for x in cur]
            images.append(cur)
        return images

    @cached_property
    def filtration(self) -> FiltrationReport:
        images = self.power_images()
        nV = self.v_dim
        dims_le, dims, bases = [], [], []
        for k in range(self.n + 1):
            rows: dict = {}
            for c, img in enumerate(images[k + 1]):
                for key, v in img.items():
                    rows.setdefault(key, {})[c] = v
            ker = sparse_kernel(rows.values(), nV)
            dims_le.append(len(ker))
            fidx = self.flag_index(k)
            vecs = []
            for g in ker:
                img = {}
                for c, coef in g.items():
                    for key, v in images[k][c].items():
                        img[key] = img.get(key, 0) + coef * v
                vals = self.flag_values(k, _clean(img))
                if vals is None:
                    raise AssertionError("D^k of an element of V_{<=k} is not flagwise constant")
                vecs.append({fidx[f]: v for f, v in vals.items()})
            sub = subspace_from_sparse(vecs, len(self.flags(k)))
            bases.append(sub)
            dims.append(sub.dim)
        return FiltrationReport(dims_le, dims, bases, nV)

    def v_le_basis(self, k: int) -> list[dict]:
        """Basis of V_{<=k} = ker D^{k+1} as sparse vectors over ambient cells."""
        if k < 0:
            return []
        images = self.power_images()
        rows: dict = {}
        for c, img in enumerate(images[k + 1]):
            for key, v in img.items():
                rows.setdefault(key, {})[c] = v
        return sparse_kernel(rows.values(), self.v_dim)

    def chain_from_cells(self, coeffs: Mapping) -> dict:
        root = (self.cx.root,)
        return {(root, c): Fraction(v) for c, v in coeffs.items() if v}


def product_experiment(cs: ChainSpaces) -> dict:
    """Test whether cellwise products satisfy V_{<=k} * V_{<=l} in V_{<=k+l}.

    This is an experiment, not a known invariant. Returns the verdict per
    (k, l) with k <= l and k + l < n, plus the first failing pair of basis
    vectors if there is one.
    """
    n = cs.n
    bases = [cs.v_le_basis(k) for k in range(n + 1)]
    verdicts = {}
    witness = None
    for k in range(n + 1):
        for l in range(k, n + 1):
            if k + l >= n:
                continue
            ok = True
            for g in bases[k]:
                for h in bases[l]:
                    prod = {c: g[c] * h[c] for c in g if c in h and g[c] * h[c]}
                    if cs.apply_Dk(k + l + 1, cs.chain_from_cells(prod)):
                        ok = False
                        if witness is None:
                            witness = {"k": k, "l": l, "g": dict(g), "h": dict(h)}
                        break
                if not ok:
                    break
            verdicts[(k, l)] = ok
    return {"verdicts": verdicts, "holds": all(verdicts.values()), "witness": witness}


def degree_filtration(arr) -> FiltrationReport:
    return ChainSpaces(arr.complex()).filtration
