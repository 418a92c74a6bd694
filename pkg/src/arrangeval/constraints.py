"""Reciprocity laws, period vanishing conditions and the description checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .chains import ChainSpaces
from .linalg import Subspace, sparse_kernel, subspace_equal, subspace_from_sparse


@dataclass(frozen=True)
class ConstraintRow:
    kind: str  # "reciprocity" or "period"
    anchor: tuple  # partial flag (reciprocity: entry None at the missing level)
    detail: int  # reciprocity: missing codim m; period: loop index
    coefficients: tuple  # ((flag, coefficient), ...)

    def as_dict(self) -> dict:
        return dict(self.coefficients)

    def evaluate(self, f: Mapping) -> Fraction:
        return sum((Fraction(c) * f.get(flag, 0) for flag, c in self.coefficients), Fraction(0))


def reciprocity_system(cs: ChainSpaces, k: int, flags=None) -> list[ConstraintRow]:
    """One row per partial flag missing a level m with 0 < m < k."""
    flags = cs.flags(k) if flags is None else flags
    groups: dict = {}
    for flag in flags:
        for m in range(1, k):
            anchor = flag[:m] + (None,) + flag[m + 1:]
            groups.setdefault((m, anchor), []).append(flag)
    rows = []
    for (m, anchor), members in sorted(groups.items(), key=lambda kv: (kv[0][0], _anchor_key(kv[0][1]))):
        rows.append(ConstraintRow("reciprocity", anchor, m, tuple((f, Fraction(1)) for f in sorted(members))))
    return rows


def _anchor_key(anchor):
    return tuple(-1 if a is None else a for a in anchor)


def period_system(cs: ChainSpaces, k: int) -> list[ConstraintRow]:
    """One row per (flag of rank k-1, loop of its base flat)."""
    rows = []
    if k < 1:
        return rows
    for lam in cs.flags(k - 1):
        b = lam[-1]
        for i, coeffs in enumerate(cs.cx.period_coefficients(b)):
            co = tuple(sorted(((lam + (M,), Fraction(c)) for M, c in coeffs.items() if c)))
            rows.append(ConstraintRow("period", lam, i, co))
    return rows


def rows_to_sparse(cs: ChainSpaces, k: int, rows) -> list[dict]:
    idx = cs.flag_index(k)
    return [{idx[f]: c for f, c in r.coefficients if f in idx} for r in rows]


def solution_space(cs: ChainSpaces, k: int, include_periods: bool = True) -> Subspace:
    rows = reciprocity_system(cs, k)
    if include_periods:
        rows = rows + period_system(cs, k)
    nF = len(cs.flags(k))
    return subspace_from_sparse(sparse_kernel(rows_to_sparse(cs, k, rows), nF), nF)


def period_values(cs: ChainSpaces, s: int, x: Mapping) -> dict:
    """Periods of a rank-s elementary chain around the loops of rank s-1 flags."""
    out = {}
    cx = cs.cx
    for lam in cs.flags(s - 1):
        b = lam[-1]
        for i, crossings in enumerate(cx.loops.get(b, [])):
            total = Fraction(0)
            for M, c, sg in crossings:
                total += sg * cx.jumps[(b, M)].eps * x.get((lam + (M,), c), 0)
            out[(lam, i)] = total
    return out


def cocycle_witness(cs: ChainSpaces, k: int, x: Mapping):
    """First (flag, codim-2 subflat, cell) where the local cocycle sum fails, or None."""
    cx = cs.cx
    if k < 1:
        return None
    for lam in cs.flags(k - 1):
        b = lam[-1]
        if cx.dims[b] < 2:
            continue
        for g in cx.grandchildren(b):
            for e, cyc in enumerate(cx.links(b, g)):
                total = Fraction(0)
                for M, c, s in cyc:
                    total += s * cx.jumps[(b, M)].eps * x.get((lam + (M,), c), 0)
                if total:
                    return lam, g, e, total
    return None


def cocycle_check(cs: ChainSpaces, k: int, x: Mapping) -> bool:
    return cocycle_witness(cs, k, x) is None


@dataclass
class LevelVerdict:
    k: int
    dim_F: int
    dim_solutions: int
    dim_V: int
    equal: bool
    n_reciprocity: int
    n_period: int
    description: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class VerificationReport:
    mode: str
    levels: list
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(lv.equal for lv in self.levels) and all(
            v for k, v in self.extra.items() if k.endswith("_holds"))

    def to_dict(self) -> dict:
        return {"mode": self.mode, "ok": self.ok,
                "levels": [lv.to_dict() for lv in self.levels], "extra": self.extra}


def verify_toric(cs: ChainSpaces) -> VerificationReport:
    filt = cs.filtration
    levels = []
    for k in range(cs.n + 1):
        sol = solution_space(cs, k, include_periods=True)
        levels.append(LevelVerdict(
            k, len(cs.flags(k)), sol.dim, filt.dims[k], subspace_equal(sol, filt.bases[k]),
            len(reciprocity_system(cs, k)), len(period_system(cs, k)),
            "reciprocity + periods"))
    return VerificationReport("toric", levels)


def verify_descriptions(arr, mode: str = "toric") -> VerificationReport:
    if mode == "toric":
        return verify_toric(ChainSpaces(arr.complex()))
    from .pseudoaffine import verify_pseudoaffine
    return verify_pseudoaffine(arr, compact=(mode == "affine-compact"))
