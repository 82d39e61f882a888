"""Exact dense/sparse linear algebra over the rationals.

Entries are stored as Python ``int`` when integral and as a reduced
``fractions.Fraction`` otherwise, so every stored scalar is canonical.
Matrices keep one ``{column: value}`` dict per row and never store zeros;
elimination runs on integer rows (content-normalised, fraction free) and
only divides when reading off kernels and solutions.

Tensor index convention (used by every other module): ``e_i (x) e_j`` has
index ``i * dim_b + j``, which is exactly what :func:`kron` produces.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

Scalar = int | Fraction


def Q(x) -> Scalar:
    """Parse/coerce to a canonical rational (``'3/4'``, ``2``, ``Fraction``)."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        f = Fraction(x.strip())
    elif isinstance(x, Rational):
        f = Fraction(x.numerator, x.denominator)
    else:
        raise TypeError(f"not an exact rational: {x!r}")
    return f.numerator if f.denominator == 1 else f


def _canon(x: Scalar) -> Scalar:
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def fmt(x: Scalar) -> str:
    x = _canon(x)
    return str(x)


class Mat:
    """Immutable rational matrix with sparse row storage."""

    __slots__ = ("nrows", "ncols", "_rows", "_hash")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[dict] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix shape")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = tuple({} for _ in range(nrows))
        elif len(rows) != nrows:
            raise ValueError("row count mismatch")
        self._rows = tuple(rows)
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        out = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            d = {}
            for j, v in enumerate(r):
                v = Q(v)
                if v:
                    d[j] = v
            out.append(d)
        return cls(len(rows), ncols, out)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Mat":
        cols = [list(c) for c in cols]
        if nrows is None:
            if not cols:
                raise ValueError("need nrows for an empty column list")
            nrows = len(cols[0])
        out = [{} for _ in range(nrows)]
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("ragged columns")
            for i, v in enumerate(c):
                v = Q(v)
                if v:
                    out[i][j] = v
        return cls(nrows, len(cols), out)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def column(cls, vec: Sequence) -> "Mat":
        return cls.from_columns([vec], nrows=len(vec))

    @classmethod
    def row_vector(cls, vec: Sequence) -> "Mat":
        return cls.from_rows([vec], ncols=len(vec))

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict) -> "Mat":
        out = [{} for _ in range(nrows)]
        for (i, j), v in entries.items():
            v = Q(v)
            if v:
                out[i][j] = v
        return cls(nrows, ncols, out)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self._rows[i].get(j, 0)

    def row(self, i: int) -> tuple:
        r = self._rows[i]
        return tuple(r.get(j, 0) for j in range(self.ncols))

    def row_dict(self, i: int) -> dict:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r.get(j, 0) for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def to_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.nrows)]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all(r == {i: 1} for i, r in enumerate(self._rows))

    def items(self):
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                yield i, j, v

    # -- arithmetic ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols,
                               tuple(tuple(sorted(r.items())) for r in self._rows)))
        return self._hash

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            body = "; ".join(" ".join(fmt(v) for v in self.row(i)) for i in range(self.nrows))
            return f"Mat({self.nrows}x{self.ncols}: {body})"
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        out = []
        for a, b in zip(self._rows, other._rows):
            d = dict(a)
            for j, v in b.items():
                s = d.get(j, 0) + v
                if s:
                    d[j] = _canon(s)
                else:
                    d.pop(j, None)
            out.append(d)
        return Mat(self.nrows, self.ncols, out)

    def __neg__(self) -> "Mat":
        return Mat(self.nrows, self.ncols, [{j: -v for j, v in r.items()} for r in self._rows])

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = Q(c)
        if not c:
            return Mat.zeros(self.nrows, self.ncols)
        return Mat(self.nrows, self.ncols,
                   [{j: _canon(v * c) for j, v in r.items()} for r in self._rows])

    def __mul__(self, c) -> "Mat":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            brows = other._rows
            out = []
            for r in self._rows:
                acc: dict = {}
                for k, a in r.items():
                    for j, b in brows[k].items():
                        acc[j] = acc.get(j, 0) + a * b
                out.append({j: _canon(v) for j, v in acc.items() if v})
            return Mat(self.nrows, other.ncols, out)
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_canon(sum((a * vec[k] for k, a in r.items()), 0)) for r in self._rows)

    @property
    def T(self) -> "Mat":
        out = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                out[j][i] = v
        return Mat(self.ncols, self.nrows, out)

    def select_columns(self, cols: Sequence[int]) -> "Mat":
        pos = {c: k for k, c in enumerate(cols)}
        out = [{pos[j]: v for j, v in r.items() if j in pos} for r in self._rows]
        return Mat(self.nrows, len(cols), out)

    def select_rows(self, rows: Sequence[int]) -> "Mat":
        return Mat(len(rows), self.ncols, [dict(self._rows[i]) for i in rows])

    def reshape_rows(self, nrows: int, ncols: int) -> "Mat":
        """Row-major reshape of a single column vector into a matrix."""
        if self.ncols != 1 or self.nrows != nrows * ncols:
            raise ValueError("reshape expects a column vector of matching size")
        return unvec(self.col(0), nrows, ncols)


def vec(m: Mat) -> tuple:
    """Row-major flattening."""
    out = [0] * (m.nrows * m.ncols)
    for i, j, v in m.items():
        out[i * m.ncols + j] = v
    return tuple(out)


def unvec(v: Sequence, nrows: int, ncols: int) -> Mat:
    if len(v) != nrows * ncols:
        raise ValueError("unvec size mismatch")
    out = [{} for _ in range(nrows)]
    for k, x in enumerate(v):
        if x:
            out[k // ncols][k % ncols] = Q(x)
    return Mat(nrows, ncols, out)


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; ``e_i (x) e_j`` sits at index ``i * dim_b + j``."""
    out = []
    for ra in a._rows:
        for rb in b._rows:
            d = {}
            for ja, va in ra.items():
                off = ja * b.ncols
                for jb, vb in rb.items():
                    d[off + jb] = _canon(va * vb)
            out.append(d)
    return Mat(a.nrows * b.nrows, a.ncols * b.ncols, out)


def kron_vec(u: Sequence, v: Sequence) -> tuple:
    return tuple(_canon(x * y) for x in u for y in v)


def hstack(mats: Sequence[Mat]) -> Mat:
    mats = list(mats)
    nrows = mats[0].nrows
    out = [{} for _ in range(nrows)]
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("hstack row mismatch")
        for i, r in enumerate(m._rows):
            for j, v in r.items():
                out[i][off + j] = v
        off += m.ncols
    return Mat(nrows, off, out)


def vstack(mats: Sequence[Mat], ncols: int | None = None) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat(0, ncols or 0)
    ncols = mats[0].ncols if ncols is None else ncols
    rows = []
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("vstack column mismatch")
        rows.extend(m._rows)
    return Mat(len(rows), ncols, rows)


def block_diag(mats: Sequence[Mat]) -> Mat:
    nr = sum(m.nrows for m in mats)
    nc = sum(m.ncols for m in mats)
    out = []
    off = 0
    for m in mats:
        for r in m._rows:
            out.append({off + j: v for j, v in r.items()})
        off += m.ncols
    return Mat(nr, nc, out)


def lincomb(coeffs: Sequence, mats: Sequence[Mat], shape: tuple[int, int] | None = None) -> Mat:
    if shape is None:
        shape = mats[0].shape
    acc = [dict() for _ in range(shape[0])]
    for c, m in zip(coeffs, mats):
        if not c:
            continue
        for i, j, v in m.items():
            acc[i][j] = acc[i].get(j, 0) + c * v
    return Mat(shape[0], shape[1], [{j: _canon(v) for j, v in r.items() if v} for r in acc])


# -- elimination ------------------------------------------------------

def _int_row(d: dict) -> dict:
    """Scale a rational row to a primitive integer row."""
    if not d:
        return {}
    dens = [v.denominator for v in d.values() if type(v) is Fraction]
    m = reduce(lcm, dens, 1)
    if m != 1:
        r = {j: int(v * m) for j, v in d.items()}
    else:
        r = dict(d)
    g = reduce(gcd, r.values())
    if g != 1:
        r = {j: v // g for j, v in r.items()}
    return r


def _primitive(r: dict) -> dict:
    g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            return r
    if g > 1:
        return {j: v // g for j, v in r.items()}
    return r


def _eliminate(r: dict, p: dict, c: int) -> dict:
    """Return a primitive multiple of ``r`` with column ``c`` cleared by pivot row ``p``."""
    a = p[c]
    b = r[c]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {j: v * a for j, v in r.items()} if a != 1 else dict(r)
    for j, v in p.items():
        s = out.get(j, 0) - b * v
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return _primitive(out)


class Echelon:
    """Reduced row echelon form of a rational row space (integer rows).

    ``pivots`` maps pivot column -> primitive integer row whose only
    pivot-column entry is its own pivot (positive).
    """

    def __init__(self, ncols: int, rows: Iterable[dict] = ()):
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}
        self._order: dict[int, int] = {}
        self._reduced = True
        for r in rows:
            self.add(r)

    def _reduce(self, r: dict) -> dict:
        piv = self.pivots
        order = self._order
        heap = [(order[j], j) for j in r if j in piv]
        heapq.heapify(heap)
        while heap and r:
            _, c = heapq.heappop(heap)
            if c not in r:
                continue
            p = piv[c]
            before = r
            r = _eliminate(r, p, c)
            for j in p:
                if j != c and j in piv and j in r and j not in before:
                    heapq.heappush(heap, (order[j], j))
        return r

    def add(self, row: dict) -> bool:
        """Insert a (rational) row; returns True if the rank grew."""
        r = _int_row(row)
        if not r:
            return False
        r = self._reduce(r)
        if not r:
            return False
        c = min(r)
        if r[c] < 0:
            r = {j: -v for j, v in r.items()}
        self._order[c] = len(self._order)
        self.pivots[c] = r
        self._reduced = False
        return True

    def contains(self, row: dict) -> bool:
        r = _int_row(row)
        return not r or not self._reduce(r)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce_fully(self) -> None:
        if self._reduced:
            return
        piv = self.pivots
        for c in sorted(piv, key=self._order.__getitem__, reverse=True):
            r = piv[c]
            for j in [j for j in r if j != c and j in piv]:
                if j in r:
                    r = _eliminate(r, piv[j], j)
            if r[c] < 0:
                r = {j: -v for j, v in r.items()}
            piv[c] = r
        self._reduced = True

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivots)

    def free_columns(self) -> list[int]:
        return [j for j in range(self.ncols) if j not in self.pivots]

    def normalized_rows(self) -> list[tuple[int, dict]]:
        """RREF rows as (pivot, {col: Fraction}) with pivot entry 1."""
        self.reduce_fully()
        out = []
        for c in sorted(self.pivots):
            r = self.pivots[c]
            a = r[c]
            out.append((c, {j: Q(Fraction(v, a)) for j, v in r.items()}))
        return out


def _rows_of(m: Mat) -> list[dict]:
    return [r for r in m._rows if r]


def rank(m: Mat) -> int:
    return Echelon(m.ncols, _rows_of(m)).rank


def rref(m: Mat) -> tuple[Mat, list[int]]:
    e = Echelon(m.ncols, _rows_of(m))
    rows = e.normalized_rows()
    return Mat(len(rows), m.ncols, [r for _, r in rows]), [c for c, _ in rows]


class Subspace:
    """Subspace of ``Q^ambient_dim`` spanned by the independent columns of ``basis``."""

    __slots__ = ("ambient_dim", "basis", "_ech")

    def __init__(self, ambient_dim: int, basis: Mat | None = None, *, check: bool = True):
        if basis is None:
            basis = Mat(ambient_dim, 0)
        if basis.nrows != ambient_dim:
            raise ValueError("basis rows must equal ambient dimension")
        if check and basis.ncols and rank(basis) != basis.ncols:
            raise ValueError("basis columns are linearly dependent")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._ech = None

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        """Canonical (RREF) basis of the span of arbitrary vectors."""
        e = Echelon(ambient_dim)
        for v in vectors:
            e.add({j: Q(x) for j, x in enumerate(v) if x})
        rows = e.normalized_rows()
        cols = [[r.get(j, 0) for j in range(ambient_dim)] for _, r in rows]
        if not cols:
            return cls(ambient_dim)
        return cls(ambient_dim, Mat.from_columns(cols, nrows=ambient_dim), check=False)

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, Mat.identity(n), check=False)

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def vectors(self) -> list[tuple]:
        return self.basis.columns()

    def _echelon(self) -> Echelon:
        if self._ech is None:
            self._ech = Echelon(self.ambient_dim, _rows_of(self.basis.T))
        return self._ech

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("vector length mismatch")
        return self._echelon().contains({j: Q(x) for j, x in enumerate(v) if x})

    def coordinates(self, v: Sequence) -> tuple | None:
        return solve_linear(self.basis, v)

    def element(self, coords: Sequence) -> tuple:
        return self.basis @ coords

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def kernel_basis(m: Mat) -> Subspace:
    """Basis of ``{v : m v = 0}``; one vector per free column, 1 at that column."""
    e = Echelon(m.ncols, _rows_of(m))
    rows = e.normalized_rows()
    free = e.free_columns()
    if not free:
        return Subspace(m.ncols)
    fpos = {f: k for k, f in enumerate(free)}
    out = [{} for _ in range(m.ncols)]
    for k, f in enumerate(free):
        out[f][k] = 1
    for c, r in rows:
        for j, v in r.items():
            if j != c:
                out[c][fpos[j]] = -v
    return Subspace(m.ncols, Mat(m.ncols, len(free), out), check=False)


def solve_linear(m: Mat, target: Sequence) -> tuple | None:
    """Some ``v`` with ``m v = target`` (free variables zero), or None."""
    if len(target) != m.nrows:
        raise ValueError("target length must equal row count")
    n = m.ncols
    rows = []
    for i, r in enumerate(m._rows):
        t = Q(target[i])
        if r or t:
            d = dict(r)
            if t:
                d[n] = t
            rows.append(d)
    e = Echelon(n + 1, rows)
    if n in e.pivots:
        return None
    sol = [0] * n
    for c, r in e.normalized_rows():
        sol[c] = r.get(n, 0)
    return tuple(sol)


def solve_matrix(m: Mat, rhs: Mat) -> Mat | None:
    """Some ``X`` with ``m X = rhs``, column by column, or None."""
    cols = []
    for j in range(rhs.ncols):
        x = solve_linear(m, rhs.col(j))
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return Mat(m.ncols, 0)
    return Mat.from_columns(cols, nrows=m.ncols)


def inverse(m: Mat) -> Mat | None:
    if m.nrows != m.ncols:
        return None
    n = m.nrows
    rows = [dict(r) for r in m._rows]
    for i in range(n):
        rows[i][n + i] = 1
    e = Echelon(2 * n, rows)
    rr = e.normalized_rows()
    if len(rr) < n or any(c >= n for c, _ in rr):
        return None
    return Mat(n, n, [{j - n: v for j, v in r.items() if j >= n} for _, r in rr])


def det(m: Mat) -> Scalar:
    """Determinant by fraction-free (Bareiss) elimination."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return 1
    den = reduce(lcm, (v.denominator for _, _, v in m.items() if type(v) is Fraction), 1)
    a = [[int(m[i, j] * den) for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return Q(Fraction(sign * a[n - 1][n - 1], den ** n))


def is_invertible(m: Mat) -> bool:
    return m.nrows == m.ncols and rank(m) == m.nrows


def column_space(m: Mat) -> Subspace:
    return Subspace.span(m.nrows, m.columns())


def left_inverse(m: Mat) -> Mat:
    """A left inverse of a full-column-rank matrix."""
    if rank(m) != m.ncols:
        raise ValueError("matrix does not have full column rank")
    # rows of the left inverse solve m^T y = e_k
    mt = m.T
    rows = []
    for k in range(m.ncols):
        e = [0] * m.ncols
        e[k] = 1
        rows.append(solve_linear(mt, e))
    return Mat.from_rows(rows, ncols=m.nrows)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"malformed query: ambient dimensions differ ({a.ambient_dim} vs {b.ambient_dim})")
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.ambient_dim)
    # x in a∩b  iff  x = A u = B w  iff  [A | -B] (u, w) = 0
    k = kernel_basis(hstack([a.basis, -b.basis]))
    vecs = [a.basis @ v[: a.dim] for v in k.vectors()]
    return Subspace.span(a.ambient_dim, vecs)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return Subspace.span(a.ambient_dim, a.vectors() + b.vectors())


def joint_kernel(blocks: Iterable[Mat], ncols: int) -> Subspace:
    """Kernel of the vertical stack of ``blocks`` without materialising it."""
    e = Echelon(ncols)
    for b in blocks:
        if b.ncols != ncols:
            raise ValueError("block column mismatch")
        for r in b._rows:
            if r:
                e.add(r)
    if e.rank == ncols:
        return Subspace(ncols)
    rows = e.normalized_rows()
    free = e.free_columns()
    fpos = {f: k for k, f in enumerate(free)}
    out = [{} for _ in range(ncols)]
    for k, f in enumerate(free):
        out[f][k] = 1
    for c, r in rows:
        for j, v in r.items():
            if j != c:
                out[c][fpos[j]] = -v
    return Subspace(ncols, Mat(ncols, len(free), out), check=False)


def vec_is_zero(v: Sequence) -> bool:
    return all(not x for x in v)
