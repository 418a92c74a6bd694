"""Discrete integration: choice functions, the single step I_phi and full lifts."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .chains import ChainSpaces
from .constraints import period_system, period_values, reciprocity_system, rows_to_sparse
from .linalg import sparse_solve


class IntegrationError(ValueError):
    """The input is not a coboundary (a nonzero period or cocycle defect)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ChoiceFunction:
    """Anchor cell per flag of rank ``level``; depends only on the base flat."""

    level: int
    assignment: Mapping  # flag -> cell index of its base flat
    strategy: str

    def __call__(self, flag) -> int:
        return self.assignment[flag]


def make_choice(cs: ChainSpaces, level: int, strategy: str = "lexmin") -> ChoiceFunction:
    cx = cs.cx
    anchor_of = {}
    for flag in cs.flags(level):
        b = flag[-1]
        if b in anchor_of:
            continue
        cells = range(cx.ncells[b])
        if strategy == "lexmin":
            anchor_of[b] = min(cells, key=lambda c: cx.cell_points[b][c])
        elif strategy == "unbounded":
            if cx.bounded is None:
                raise ValueError("the unbounded strategy needs an affine arrangement")
            unb = [c for c in cells if not cx.bounded[b][c]]
            if not unb:
                raise ValueError(f"flat {cx.labels[b]} has no unbounded cell")
            anchor_of[b] = min(unb, key=lambda c: cx.cell_points[b][c])
        else:
            raise ValueError(f"unknown choice strategy {strategy!r}")
    return ChoiceFunction(level, {f: anchor_of[f[-1]] for f in cs.flags(level)}, strategy)


@dataclass
class IntegrationResult:
    chain: dict  # rank k-1 elementary chain
    path_log: dict  # flag -> {cell: parent cell} of the traversal


def integrate_step(cs: ChainSpaces, k: int, x: Mapping, phi: ChoiceFunction | None = None,
                   order_seed: int | None = None) -> IntegrationResult:
    """Return eta of rank k-1 with D eta = x, vanishing at the anchor cells.

    ``order_seed`` shuffles the traversal order; the result must not change.
    """
    if k < 1:
        raise ValueError("cannot integrate a rank-0 chain")
    if phi is None:
        phi = make_choice(cs, k - 1)
    cx = cs.cx
    rng = None
    if order_seed is not None:
        import random
        rng = random.Random(order_seed)
    eta = {}
    log = {}
    for lam in cs.flags(k - 1):
        b = lam[-1]
        adj = [[] for _ in range(cx.ncells[b])]
        edges = []
        for M in cx.children[b]:
            jump = cx.jumps[(b, M)]
            for c, (cp, cm) in enumerate(jump.pairs):
                delta = jump.eps * Fraction(x.get((lam + (M,), c), 0))
                edges.append((cp, cm, delta, M, c))
                adj[cm].append((cp, delta))
                adj[cp].append((cm, -delta))
        start = phi(lam)
        val = {start: Fraction(0)}
        parent = {start: None}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            nbrs = list(adj[u])
            if rng is not None:
                rng.shuffle(nbrs)
            for v, d in nbrs:
                if v not in val:
                    val[v] = val[u] + d
                    parent[v] = u
                    queue.append(v)
        if len(val) != cx.ncells[b]:
            raise IntegrationError("dual graph of the flat is disconnected", lam)
        for cp, cm, delta, M, c in edges:
            if val[cp] - val[cm] != delta:
                raise IntegrationError(
                    f"nonzero period at flag {lam} across wall {cx.labels[M]} cell {c}",
                    (lam, M, c))
        for c, v in val.items():
            if v:
                eta[(lam, c)] = v
        log[lam] = parent
    return IntegrationResult(eta, log)


def _correction(cs: ChainSpaces, s: int, eta: Mapping) -> dict:
    """c in F_s with the rank-s reciprocity laws and the periods of eta."""
    rec = reciprocity_system(cs, s)
    per = period_system(cs, s)
    pv = period_values(cs, s, eta)
    rows = rows_to_sparse(cs, s, rec) + rows_to_sparse(cs, s, per)
    rhs = [Fraction(0)] * len(rec) + [pv[(r.anchor, r.detail)] for r in per]
    sol = sparse_solve(rows, rhs, len(cs.flags(s)))
    if sol is None:
        raise IntegrationError(f"no period correction exists at rank {s}")
    flags = cs.flags(s)
    return {flags[j]: v for j, v in sol.items() if v}


def lift_to_chain(cs: ChainSpaces, k: int, f: Mapping, strategy: str = "lexmin",
                  method: str = "integrate", check: bool = True) -> dict:
    """g in V with D^k g = flag_embed(f), as a map ambient cell -> value.

    ``method="solve"`` solves D^k g = flag_embed(f) directly instead; it is the
    oracle for the structured integration.
    """
    target = cs.flag_embed(k, f)
    if method == "solve":
        g = _direct_lift(cs, k, target)
    elif method == "integrate":
        xi = target
        for s in range(k, 0, -1):
            eta = integrate_step(cs, s, xi, make_choice(cs, s - 1, strategy)).chain
            if s - 1 >= 1:
                c = _correction(cs, s - 1, eta)
                emb = cs.flag_embed(s - 1, c)
                for key, v in emb.items():
                    nv = eta.get(key, 0) - v
                    if nv:
                        eta[key] = nv
                    else:
                        eta.pop(key, None)
            xi = eta
        root = (cs.cx.root,)
        g = {c: v for (flag, c), v in xi.items() if flag == root and v}
    else:
        raise ValueError(f"unknown lift method {method!r}")
    if check:
        image = cs.apply_Dk(k, cs.chain_from_cells(g))
        if image != {key: v for key, v in target.items() if v}:
            raise IntegrationError("lift does not reproduce the flag function")
    return g


def _direct_lift(cs: ChainSpaces, k: int, target: Mapping) -> dict:
    images = cs.power_images()[k]
    rows: dict = {}
    for c, img in enumerate(images):
        for key, v in img.items():
            rows.setdefault(key, {})[c] = v
    keys = sorted(set(rows) | set(target), key=repr)
    sol = sparse_solve([rows.get(key, {}) for key in keys], [target.get(key, 0) for key in keys], cs.v_dim)
    if sol is None:
        raise IntegrationError("flag function is not in the image of D^k")
    return {c: v for c, v in sol.items() if v}
