"""Exact rational linear algebra and integer lattice normal forms.

Everything here works over :class:`fractions.Fraction` or plain Python ints.
Matrices are passed around as sequences of rows; :class:`Matrix` is a small
immutable wrapper used where a value type is more convenient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction


class LinalgError(ValueError):
    """Raised for dimension mismatches and infeasible systems."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` (or an int, or a Fraction) into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise LinalgError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise LinalgError("ragged matrix")
        flat = tuple(Fraction(x) for r in rows for x in r)
        return cls(len(rows), cols, flat)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]


def _as_rows(m) -> list[list]:
    if isinstance(m, Matrix):
        return m.to_rows()
    return [list(r) for r in m]


# ---------------------------------------------------------------------------
# sparse row reduction

def _axpy(row: dict, coef, other: dict) -> None:
    """row += coef * other, in place, dropping zeros."""
    for c, x in other.items():
        v = row.get(c, 0) + coef * x
        if v:
            row[c] = v
        else:
            row.pop(c, None)


def _to_sparse(vec: Sequence) -> dict:
    return {j: Fraction(x) for j, x in enumerate(vec) if x}


class EchelonBasis:
    """Incrementally maintained row-echelon basis of a row space.

    Rows are sparse dicts keyed by column.  Each stored row has leading
    coefficient 1 at its pivot column.  Reduction of a new vector only ever
    touches stored rows whose pivots occur in it.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        row = dict(vec)
        done = set()
        while True:
            cands = [c for c in row if c in self.rows and c not in done]
            if not cands:
                return row
            c = min(cands)
            done.add(c)
            coef = row.get(c)
            if coef:
                _axpy(row, -coef, self.rows[c])

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it was independent."""
        row = self.reduce(vec)
        if not row:
            return False
        p = min(row)
        inv = 1 / Fraction(row[p])
        self.rows[p] = {c: x * inv for c, x in row.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def rref_rows(self) -> list[tuple[int, dict]]:
        """Fully reduced rows sorted by pivot."""
        pivots = sorted(self.rows)
        out: dict[int, dict] = {}
        for p in reversed(pivots):
            row = dict(self.rows[p])
            for q in [c for c in row if c in out and c != p]:
                coef = row.get(q)
                if coef:
                    _axpy(row, -coef, out[q])
            out[p] = row
        return [(p, out[p]) for p in pivots]


def _sparse_rref(rows: Iterable[dict], ncols: int) -> list[tuple[int, dict]]:
    eb = EchelonBasis(ncols)
    for r in rows:
        eb.add(r)
    return eb.rref_rows()


def rref(m) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form (zero rows kept at the bottom) and pivots."""
    rows = _as_rows(m)
    ncols = m.cols if isinstance(m, Matrix) else (len(rows[0]) if rows else 0)
    red = _sparse_rref((_to_sparse(r) for r in rows), ncols)
    out = []
    for _, r in red:
        out.append([r.get(j, Fraction(0)) for j in range(ncols)])
    while len(out) < len(rows):
        out.append([Fraction(0)] * ncols)
    return Matrix.from_rows(out, ncols), [p for p, _ in red]


def rank(m, ncols: int | None = None) -> int:
    rows = _as_rows(m)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    eb = EchelonBasis(ncols)
    for r in rows:
        eb.add(_to_sparse(r))
    return len(eb)


def sparse_rank(rows: Iterable[dict], ncols: int) -> int:
    eb = EchelonBasis(ncols)
    for r in rows:
        eb.add(r)
    return len(eb)


# ---------------------------------------------------------------------------
# subspaces

@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim stored by its unique RREF basis."""

    ambient_dim: int
    basis: tuple  # tuple of tuples of Fraction, RREF, no zero rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> Matrix:
        return Matrix.from_rows(self.basis, self.ambient_dim)

    def sparse_basis(self) -> list[dict]:
        return [_to_sparse(b) for b in self.basis]

    def contains(self, vec: Sequence) -> bool:
        if len(vec) != self.ambient_dim:
            raise LinalgError("dimension mismatch")
        eb = EchelonBasis(self.ambient_dim)
        for b in self.basis:
            eb.add(_to_sparse(b))
        return eb.contains(_to_sparse(vec))

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError("dimension mismatch")
        eb = EchelonBasis(other.ambient_dim)
        for b in other.basis:
            eb.add(_to_sparse(b))
        return all(eb.contains(_to_sparse(b)) for b in self.basis)


def subspace_from_sparse(rows: Iterable[dict], ambient_dim: int) -> Subspace:
    red = _sparse_rref(rows, ambient_dim)
    basis = tuple(tuple(r.get(j, Fraction(0)) for j in range(ambient_dim)) for _, r in red)
    return Subspace(ambient_dim, basis)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    vecs = []
    for v in vectors:
        if len(v) != ambient_dim:
            raise LinalgError("dimension mismatch")
        vecs.append(_to_sparse(v))
    return subspace_from_sparse(vecs, ambient_dim)


def zero_subspace(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, ())


def full_subspace(ambient_dim: int) -> Subspace:
    return span(([1 if i == j else 0 for j in range(ambient_dim)] for i in range(ambient_dim)),
                ambient_dim)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError("ambient dimension mismatch")
    return a.basis == b.basis


def sparse_kernel(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Basis of {x : r.x = 0 for all rows}, one vector per free column."""
    red = _sparse_rref(rows, ncols)
    pivots = {p for p, _ in red}
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = {f: Fraction(1)}
        for p, r in red:
            x = r.get(f)
            if x:
                vec[p] = -x
        basis.append(vec)
    return basis


def kernel_basis(m, ncols: int | None = None) -> Subspace:
    """{x : m x = 0} as a canonical Subspace."""
    rows = _as_rows(m)
    if ncols is None:
        ncols = m.cols if isinstance(m, Matrix) else (len(rows[0]) if rows else 0)
    return subspace_from_sparse(sparse_kernel((_to_sparse(r) for r in rows), ncols), ncols)


def annihilator(u: Subspace) -> Subspace:
    return kernel_basis([list(b) for b in u.basis], u.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError("ambient dimension mismatch")
    eqs = [list(r) for r in annihilator(a).basis] + [list(r) for r in annihilator(b).basis]
    return kernel_basis(eqs, a.ambient_dim)


def sparse_solve(rows: Sequence[dict], rhs: Sequence, ncols: int) -> dict | None:
    """A solution of rows.x = rhs with free coordinates zero, or None."""
    eb = EchelonBasis(ncols + 1)
    for r, b in zip(rows, rhs):
        aug = dict(r)
        if b:
            aug[ncols] = Fraction(b)
        eb.add(aug)
    if ncols in eb.rows:
        return None
    sol = {}
    for p, r in eb.rref_rows():
        v = r.get(ncols)
        if v:
            sol[p] = v
    return sol


def solve(m, rhs: Sequence) -> list[Fraction] | None:
    rows = _as_rows(m)
    ncols = m.cols if isinstance(m, Matrix) else (len(rows[0]) if rows else 0)
    sol = sparse_solve([_to_sparse(r) for r in rows], rhs, ncols)
    if sol is None:
        return None
    return [sol.get(j, Fraction(0)) for j in range(ncols)]


# ---------------------------------------------------------------------------
# dense helpers

def matmul(a, b) -> list[list]:
    a = _as_rows(a)
    b = _as_rows(b)
    if not a:
        return []
    inner = len(b)
    if len(a[0]) != inner:
        raise LinalgError("dimension mismatch in matmul")
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def matvec(a, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in _as_rows(a)]


def transpose(a, ncols: int | None = None) -> list[list]:
    a = _as_rows(a)
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det(a) -> Fraction:
    """Determinant by fraction elimination."""
    m = [[Fraction(x) for x in r] for r in _as_rows(a)]
    n = len(m)
    if any(len(r) != n for r in m):
        raise LinalgError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = m[r][c] / piv
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return sign * result


def sign(x) -> int:
    return (x > 0) - (x < 0)


def inverse(a) -> list[list[Fraction]]:
    m = [[Fraction(x) for x in r] for r in _as_rows(a)]
    n = len(m)
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise LinalgError("singular matrix")
    rows = red.to_rows()
    return [rows[i][n:] for i in range(n)]


def int_inverse(a) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    inv = inverse(a)
    out = []
    for r in inv:
        if any(x.denominator != 1 for x in r):
            raise LinalgError("matrix is not unimodular")
        out.append([int(x) for x in r])
    return out


# ---------------------------------------------------------------------------
# integer normal forms

def smith_normal_form(a) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U a V = D, U and V unimodular, D diagonal.

    The diagonal is nonnegative and each entry divides the next.
    """
    A = [[int(x) for x in r] for r in _as_rows(a)]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q*row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def snf_diagonal(a) -> list[int]:
    _, D, _ = smith_normal_form(a)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def hermite_normal_form(a) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by the rows of ``a``.

    Zero rows are dropped, pivots are positive and entries above a pivot lie
    in [0, pivot).  Two matrices span the same lattice iff their HNFs agree.
    """
    A = [[int(x) for x in r] for r in _as_rows(a)]
    A = [r for r in A if any(r)]
    if not A:
        return []
    n = len(A[0])
    out: list[list[int]] = []
    rows = A
    for c in range(n):
        with_c = [r for r in rows if r[c]]
        rest = [r for r in rows if not r[c]]
        if not with_c:
            continue
        while len(with_c) > 1:
            with_c.sort(key=lambda r: abs(r[c]))
            piv = with_c[0]
            nxt = [piv]
            for r in with_c[1:]:
                q = r[c] // piv[c]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[c]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            with_c = nxt
        piv = with_c[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = rest
    for i, r in enumerate(out):
        c = next(j for j, x in enumerate(r) if x)
        for k in range(i):
            q = out[k][c] // r[c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], r)]
    return out


def primitive(vec: Sequence[int]) -> list[int]:
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    if g == 0:
        raise LinalgError("zero vector has no primitive form")
    return [int(x) // g for x in vec]


def gcd_list(vec: Iterable[int]) -> int:
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    return g


def lcm_list(vals: Iterable[int]) -> int:
    out = 1
    for v in vals:
        out = out * v // gcd(out, v)
    return out


def unimodular_completion(n_rows) -> tuple[list[list[int]], list[list[int]]]:
    """For a saturated integer matrix N (c x n) return (P, Pinv).

    P is n x n unimodular with N P = [L | 0] for an invertible c x c block
    L, so the last n - c columns of P form a basis of the kernel lattice.
    """
    N = [[int(x) for x in r] for r in _as_rows(n_rows)]
    if not N:
        raise LinalgError("empty conormal matrix")
    U, D, V = smith_normal_form(N)
    c = len(N)
    for i in range(c):
        if D[i][i] != 1:
            raise LinalgError("conormal lattice is not saturated")
    return V, int_inverse(V)


# ---------------------------------------------------------------------------
# lifting along a map that is diagonal over a lattice Lambda

def lambda_diagonal_lift(blocks: Sequence[tuple], v: Sequence[Sequence], relations) -> list[list[Fraction]]:
    """Solve f(u) = v blockwise while keeping the Lambda-relations of v.

    ``blocks[l]`` is ``(u_dim, v_dim, f_l)`` with ``f_l`` a v_dim x u_dim
    matrix.  ``relations`` has one column per block; a row (c_l) stands for
    the relation sum_l c_l x_l = 0, applied coordinatewise, so all blocks must
    share their dimensions when relations are present.

    Free blocks (non-pivot columns of the reduced relation matrix) receive the
    particular solution of f_l u_l = v_l with non-pivot coordinates zero;
    pivot blocks are recovered from the relations.
    """
    nblocks = len(blocks)
    if len(v) != nblocks:
        raise LinalgError("v must have one component per block")
    rel_rows = [r for r in _as_rows(relations) if any(r)] if relations is not None else []
    if rel_rows:
        dims = {(b[0], b[1]) for b in blocks}
        if len(dims) != 1:
            raise LinalgError("relations require blocks of equal shape")
        if any(len(r) != nblocks for r in rel_rows):
            raise LinalgError("relation rows must have one entry per block")
    red = _sparse_rref((_to_sparse(r) for r in rel_rows), nblocks)
    pivot_of = {p: r for p, r in red}
    u: list[list[Fraction] | None] = [None] * nblocks
    for lam, (u_dim, v_dim, f) in enumerate(blocks):
        if lam in pivot_of:
            continue
        f_rows = _as_rows(f)
        if len(v[lam]) != v_dim:
            raise LinalgError("component of v has the wrong dimension")
        if not f_rows:
            f_rows = [[0] * u_dim for _ in range(v_dim)]
        sol = sparse_solve([_to_sparse(r) for r in f_rows], v[lam], u_dim)
        if sol is None:
            raise LinalgError(f"block {lam}: f is not onto the requested value")
        u[lam] = [sol.get(j, Fraction(0)) for j in range(u_dim)]
    for p, r in red:
        u_dim = blocks[p][0]
        acc = [Fraction(0)] * u_dim
        for lam, c in r.items():
            if lam == p:
                continue
            acc = [a - c * x for a, x in zip(acc, u[lam])]
        u[p] = acc
    for lam, (u_dim, v_dim, f) in enumerate(blocks):
        f_rows = _as_rows(f) or [[0] * u_dim for _ in range(v_dim)]
        if matvec(f_rows, u[lam]) != [Fraction(x) for x in v[lam]]:
            raise LinalgError("infeasible: v violates the given relations or f is not onto")
    return u
