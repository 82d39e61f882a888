"""Finite-dimensional unital associative algebras over Q via structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .exactla import Mat, Q, inverse, is_invertible, kron_vec, lincomb, rank


class AlgebraError(ValueError):
    """Raised when a table fails the associative unital algebra axioms."""

    def __init__(self, report: "Report"):
        super().__init__("; ".join(report.failures) or "invalid algebra")
        self.report = report


@dataclass
class Report:
    """Outcome of an axiom check: ``ok`` plus one line per failing instance."""

    name: str
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"{self.name}: pass"
        return f"{self.name}: FAIL\n" + "\n".join("  " + f for f in self.failures)


@dataclass(frozen=True, eq=False)
class FDAlgebra:
    """Algebra with basis ``basis_names``.

    ``mul`` is the ``dim x dim^2`` structure-constant matrix: column
    ``a*dim + b`` holds the coordinates of ``e_a e_b``.  Construction
    validates associativity and the unit.
    """

    dim: int
    basis_names: tuple[str, ...]
    mul: Mat
    unit: tuple
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        object.__setattr__(self, "unit", tuple(Q(x) for x in self.unit))
        if len(self.basis_names) != self.dim or len(self.unit) != self.dim:
            raise ValueError("basis_names/unit length must equal dim")
        if self.mul.shape != (self.dim, self.dim * self.dim):
            raise ValueError("mul must be dim x dim^2")
        if self.validate:
            rep = check_algebra(self)
            if not rep.ok:
                raise AlgebraError(rep)

    # value semantics: two algebras are the same iff tables agree
    def _key(self):
        return (self.dim, self.mul, self.unit)

    def __eq__(self, other):
        if not isinstance(other, FDAlgebra):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @classmethod
    def from_table(cls, names: Sequence[str], table: dict, unit: Sequence, **kw) -> "FDAlgebra":
        """``table[(a, b)]`` is the coordinate vector of ``e_a e_b`` (missing pairs are 0)."""
        n = len(names)
        entries = {}
        for (a, b), v in table.items():
            for c, x in enumerate(v):
                if x:
                    entries[(c, a * n + b)] = x
        return cls(n, tuple(names), Mat.from_entries(n, n * n, entries), tuple(unit), **kw)

    def product(self, x: Sequence, y: Sequence) -> tuple:
        return self.mul @ kron_vec(x, y)

    def basis_vector(self, i: int) -> tuple:
        v = [0] * self.dim
        v[i] = 1
        return tuple(v)

    def basis_index(self, name: str) -> int:
        return self.basis_names.index(name)

    @cached_property
    def left_mult(self) -> tuple[Mat, ...]:
        """``left_mult[a]`` is the matrix of ``x -> e_a x``."""
        n = self.dim
        return tuple(
            Mat.from_entries(n, n, {(c, b): self.mul[c, a * n + b] for b in range(n) for c in range(n)})
            for a in range(n))

    @cached_property
    def right_mult(self) -> tuple[Mat, ...]:
        """``right_mult[a]`` is the matrix of ``x -> x e_a``."""
        n = self.dim
        return tuple(
            Mat.from_entries(n, n, {(c, b): self.mul[c, b * n + a] for b in range(n) for c in range(n)})
            for a in range(n))

    def left_mult_by(self, x: Sequence) -> Mat:
        return lincomb(x, self.left_mult, (self.dim, self.dim))

    def right_mult_by(self, x: Sequence) -> Mat:
        return lincomb(x, self.right_mult, (self.dim, self.dim))

    def is_unit_element(self, x: Sequence) -> bool:
        return is_invertible(self.left_mult_by(x))

    def inverse_element(self, x: Sequence) -> tuple | None:
        inv = inverse(self.left_mult_by(x))
        if inv is None:
            return None
        return inv @ self.unit

    def __repr__(self) -> str:
        return f"FDAlgebra(dim={self.dim}, basis={' '.join(self.basis_names)})"


def check_algebra(a: FDAlgebra) -> Report:
    rep = Report("algebra")
    n = a.dim
    e = [a.basis_vector(i) for i in range(n)]
    prods = {(i, j): a.mul.col(i * n + j) for i in range(n) for j in range(n)}
    for i in range(n):
        for j in range(n):
            ij = prods[(i, j)]
            for k in range(n):
                lhs = a.product(ij, e[k])
                rhs = a.product(e[i], prods[(j, k)])
                if lhs != rhs:
                    nm = a.basis_names
                    rep.fail(f"associativity fails on ({nm[i]}, {nm[j]}, {nm[k]})")
    for i in range(n):
        if a.product(a.unit, e[i]) != e[i] or a.product(e[i], a.unit) != e[i]:
            rep.fail(f"unit violation at basis element {a.basis_names[i]}")
    return rep


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """Linear map given by ``matrix`` (dim_target x dim_source)."""

    source: FDAlgebra
    target: FDAlgebra
    matrix: Mat

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError("algebra map matrix must be dim_target x dim_source")

    def __call__(self, x: Sequence) -> tuple:
        return self.matrix @ x

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """``self o other``."""
        return AlgebraMap(other.source, self.target, self.matrix @ other.matrix)

    def is_invertible(self) -> bool:
        return self.source.dim == self.target.dim and rank(self.matrix) == self.source.dim

    def inverse(self) -> "AlgebraMap":
        inv = inverse(self.matrix)
        if inv is None:
            raise ValueError("algebra map is not invertible")
        return AlgebraMap(self.target, self.source, inv)


def check_algebra_map(f: AlgebraMap) -> Report:
    rep = Report("algebra map")
    s, t = f.source, f.target
    if f(s.unit) != t.unit:
        rep.fail("unit not preserved")
    n = s.dim
    for i in range(n):
        for j in range(n):
            lhs = f(s.mul.col(i * n + j))
            rhs = t.product(f(s.basis_vector(i)), f(s.basis_vector(j)))
            if lhs != rhs:
                rep.fail(f"not multiplicative on ({s.basis_names[i]}, {s.basis_names[j]})")
    return rep


def identity_map(a: FDAlgebra) -> AlgebraMap:
    return AlgebraMap(a, a, Mat.identity(a.dim))


def unit_map(a: FDAlgebra) -> AlgebraMap:
    """The structure map Q -> A."""
    return AlgebraMap(field_algebra(), a, Mat.column(a.unit))


def inner_automorphism(a: FDAlgebra, u: Sequence) -> AlgebraMap:
    """``x -> u x u^-1``."""
    uinv = a.inverse_element(u)
    if uinv is None:
        raise ValueError("element is not invertible")
    m = a.left_mult_by(u) @ a.right_mult_by(uinv)
    return AlgebraMap(a, a, m)


# -- standard constructors ---------------------------------------------

def field_algebra() -> FDAlgebra:
    return FDAlgebra(1, ("e",), Mat.from_rows([[1]]), (1,))


def matrix_algebra(n: int) -> FDAlgebra:
    """M_n(Q), basis e11, e12, ..., enn (row-major); e_ij e_kl = delta_jk e_il."""
    if n < 1:
        raise ValueError("invalid spec: matrix size must be >= 1")
    idx = [(i, j) for i in range(n) for j in range(n)]
    pos = {p: k for k, p in enumerate(idx)}
    d = n * n
    entries = {}
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if j == k:
                entries[(pos[(i, l)], a * d + b)] = 1
    unit = [1 if i == j else 0 for (i, j) in idx]
    names = tuple(f"e{i + 1}{j + 1}" for (i, j) in idx)
    return FDAlgebra(d, names, Mat.from_entries(d, d * d, entries), tuple(unit))


def cyclic_group_algebra(n: int) -> FDAlgebra:
    """Q[C_n], basis 1, g, g^2, ... named e, g, g2, ..."""
    if n < 1:
        raise ValueError("invalid spec: group order must be >= 1")
    entries = {(((a + b) % n), a * n + b): 1 for a in range(n) for b in range(n)}
    names = tuple(["e"] + ["g" if k == 1 else f"g{k}" for k in range(1, n)])
    unit = [1] + [0] * (n - 1)
    return FDAlgebra(n, names, Mat.from_entries(n, n * n, entries), tuple(unit))


def upper_triangular_algebra(n: int) -> FDAlgebra:
    """T_n(Q), basis e_ij (i <= j) in lexicographic order."""
    if n < 1:
        raise ValueError("invalid spec: matrix size must be >= 1")
    idx = [(i, j) for i in range(n) for j in range(n) if i <= j]
    pos = {p: k for k, p in enumerate(idx)}
    d = len(idx)
    entries = {}
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if j == k:
                entries[(pos[(i, l)], a * d + b)] = 1
    unit = [1 if i == j else 0 for (i, j) in idx]
    names = tuple(f"e{i + 1}{j + 1}" for (i, j) in idx)
    return FDAlgebra(d, names, Mat.from_entries(d, d * d, entries), tuple(unit))


def dual_numbers() -> FDAlgebra:
    """Q[x]/(x^2), basis 1, x."""
    return FDAlgebra.from_table(("e", "x"), {
        (0, 0): (1, 0), (0, 1): (0, 1), (1, 0): (0, 1), (1, 1): (0, 0)}, (1, 0))


def product_algebra(a: FDAlgebra, b: FDAlgebra) -> FDAlgebra:
    """A x B with basis (a-basis, then b-basis)."""
    n, m = a.dim, b.dim
    d = n + m
    entries = {}
    for i in range(n):
        for j in range(n):
            for c, v in enumerate(a.mul.col(i * n + j)):
                if v:
                    entries[(c, i * d + j)] = v
    for i in range(m):
        for j in range(m):
            for c, v in enumerate(b.mul.col(i * m + j)):
                if v:
                    entries[(n + c, (n + i) * d + (n + j))] = v
    names = tuple(f"a.{x}" for x in a.basis_names) + tuple(f"b.{x}" for x in b.basis_names)
    return FDAlgebra(d, names, Mat.from_entries(d, d * d, entries), a.unit + b.unit)


def opposite_algebra(a: FDAlgebra) -> FDAlgebra:
    n = a.dim
    entries = {}
    for i in range(n):
        for j in range(n):
            for c, v in enumerate(a.mul.col(j * n + i)):
                if v:
                    entries[(c, i * n + j)] = v
    return FDAlgebra(n, a.basis_names, Mat.from_entries(n, n * n, entries), a.unit)


def build_standard(kind: str, *args) -> FDAlgebra:
    """Named constructors: matrix n, cyclic n, upper_triangular n, product A B, opposite A, field, dual_numbers."""
    kinds = {
        "field": lambda: field_algebra(),
        "matrix": lambda n: matrix_algebra(int(n)),
        "cyclic": lambda n: cyclic_group_algebra(int(n)),
        "group": lambda n: cyclic_group_algebra(int(n)),
        "upper_triangular": lambda n: upper_triangular_algebra(int(n)),
        "product": lambda x, y: product_algebra(x, y),
        "opposite": lambda x: opposite_algebra(x),
        "dual_numbers": lambda: dual_numbers(),
    }
    if kind not in kinds:
        raise ValueError(f"invalid spec: unknown standard algebra {kind!r}")
    return kinds[kind](*args)
