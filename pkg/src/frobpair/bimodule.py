"""(R, S)-bimodules given by action matrices.

Left actions are representations ``L(ab) = L(a) L(b)``; right actions are
anti-representations ``Rt(ab) = Rt(b) Rt(a)`` (``Rt(s) v`` is ``v . s``).
Linear maps ``M -> N`` are ``dim N x dim M`` matrices and are flattened
row-major when they are unknowns of a linear system.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import Sequence

from .algebra import AlgebraMap, FDAlgebra, Report, opposite_algebra
from .exactla import (Echelon, Mat, Q, Subspace, joint_kernel, kron, lincomb,
                      rank, solve_linear, unvec, vec)
from . import verdict as V

GRID_THRESHOLD = 6
MAX_RANDOM_TRIES = 64


class MalformedQuery(ValueError):
    """Inputs live over incompatible algebras or have inconsistent shapes."""


@dataclass(frozen=True, eq=False)
class Bimodule:
    left_alg: FDAlgebra
    right_alg: FDAlgebra
    dim: int
    left_action: tuple[Mat, ...]
    right_action: tuple[Mat, ...]

    def __post_init__(self):
        object.__setattr__(self, "left_action", tuple(self.left_action))
        object.__setattr__(self, "right_action", tuple(self.right_action))
        if len(self.left_action) != self.left_alg.dim or len(self.right_action) != self.right_alg.dim:
            raise ValueError("one action matrix per algebra basis element is required")
        for m in self.left_action + self.right_action:
            if m.shape != (self.dim, self.dim):
                raise ValueError("action matrices must be dim x dim")

    def left_by(self, r: Sequence) -> Mat:
        return lincomb(r, self.left_action, (self.dim, self.dim))

    def right_by(self, s: Sequence) -> Mat:
        return lincomb(s, self.right_action, (self.dim, self.dim))

    def same_structure(self, other: "Bimodule") -> bool:
        return (self.left_alg == other.left_alg and self.right_alg == other.right_alg
                and self.left_action == other.left_action
                and self.right_action == other.right_action)

    def __repr__(self) -> str:
        return f"Bimodule(dim={self.dim}, left={self.left_alg!r}, right={self.right_alg!r})"


def check_bimodule(m: Bimodule) -> Report:
    rep = Report("bimodule")
    R, S = m.left_alg, m.right_alg
    n = m.dim
    ident = Mat.identity(n)
    if m.left_by(R.unit) != ident:
        rep.fail("left action is not unital")
    if m.right_by(S.unit) != ident:
        rep.fail("right action is not unital")
    for a in range(R.dim):
        for b in range(R.dim):
            if m.left_action[a] @ m.left_action[b] != m.left_by(R.mul.col(a * R.dim + b)):
                rep.fail(f"left action not multiplicative on ({R.basis_names[a]}, {R.basis_names[b]})")
    for a in range(S.dim):
        for b in range(S.dim):
            if m.right_action[b] @ m.right_action[a] != m.right_by(S.mul.col(a * S.dim + b)):
                rep.fail(f"right action not multiplicative on ({S.basis_names[a]}, {S.basis_names[b]})")
    for a in range(R.dim):
        for b in range(S.dim):
            if m.left_action[a] @ m.right_action[b] != m.right_action[b] @ m.left_action[a]:
                rep.fail(f"commutation failure: left {R.basis_names[a]} vs right {S.basis_names[b]}")
    return rep


# -- constructors ------------------------------------------------------

def regular_bimodule(a: FDAlgebra) -> Bimodule:
    return Bimodule(a, a, a.dim, a.left_mult, a.right_mult)


def regular_bimodules(i: AlgebraMap) -> tuple[Bimodule, Bimodule]:
    """``(Lambda, X)``: S as an (S, R)-bimodule and as an (R, S)-bimodule via ``i``."""
    R, S = i.source, i.target
    via = [S.right_mult_by(i(R.basis_vector(k))) for k in range(R.dim)]
    lam = Bimodule(S, R, S.dim, S.left_mult, via)
    via_l = [S.left_mult_by(i(R.basis_vector(k))) for k in range(R.dim)]
    x = Bimodule(R, S, S.dim, via_l, S.right_mult)
    return lam, x


def trivial_actions(alg: FDAlgebra, n: int) -> tuple[Mat, ...]:
    """Scalar action of the one-dimensional field algebra on Q^n."""
    if alg.dim != 1:
        raise ValueError("scalar actions need the one-dimensional field algebra")
    return (Mat.identity(n).scale(1 / Fraction(alg.unit[0])),)


def vector_space(k: FDAlgebra, n: int) -> Bimodule:
    """Q^n as a (k, k)-bimodule for the one-dimensional field algebra k."""
    return Bimodule(k, k, n, trivial_actions(k, n), trivial_actions(k, n))


def left_module(alg: FDAlgebra, k: FDAlgebra, mats: Sequence[Mat]) -> Bimodule:
    n = mats[0].nrows if mats else 0
    return Bimodule(alg, k, n, tuple(mats), trivial_actions(k, n))


def right_module(k: FDAlgebra, alg: FDAlgebra, mats: Sequence[Mat]) -> Bimodule:
    n = mats[0].nrows if mats else 0
    return Bimodule(k, alg, n, trivial_actions(k, n), tuple(mats))


def restrict(m: Bimodule, mu: AlgebraMap | None = None, phi: AlgebraMap | None = None) -> Bimodule:
    """Pull actions back along algebra maps ``mu: R' -> R`` and ``phi: S' -> S``."""
    left, lalg = m.left_action, m.left_alg
    if mu is not None:
        if mu.target != m.left_alg:
            raise MalformedQuery("mu must land in the left algebra")
        lalg = mu.source
        left = tuple(m.left_by(mu(lalg.basis_vector(k))) for k in range(lalg.dim))
    right, ralg = m.right_action, m.right_alg
    if phi is not None:
        if phi.target != m.right_alg:
            raise MalformedQuery("phi must land in the right algebra")
        ralg = phi.source
        right = tuple(m.right_by(phi(ralg.basis_vector(k))) for k in range(ralg.dim))
    return Bimodule(lalg, ralg, m.dim, left, right)


def twist(m: Bimodule, mu: AlgebraMap, phi: AlgebraMap) -> Bimodule:
    """The bimodule with ``r . m . r' = mu(r) m phi(r')``."""
    for f, alg, side in ((mu, m.left_alg, "mu"), (phi, m.right_alg, "phi")):
        if f.source != alg or f.target != alg:
            raise ValueError(f"invalid twist: {side} must be an endomorphism of the acting algebra")
        if not f.is_invertible():
            raise ValueError(f"invalid twist: {side} is not invertible")
    return restrict(m, mu, phi)


def direct_sum(m: Bimodule, n: Bimodule) -> Bimodule:
    if m.left_alg != n.left_alg or m.right_alg != n.right_alg:
        raise MalformedQuery("direct sum of bimodules over different algebras")
    from .exactla import block_diag
    return Bimodule(m.left_alg, m.right_alg, m.dim + n.dim,
                    tuple(block_diag([a, b]) for a, b in zip(m.left_action, n.left_action)),
                    tuple(block_diag([a, b]) for a, b in zip(m.right_action, n.right_action)))


def linear_dual(m: Bimodule) -> Bimodule:
    """``Hom_Q(M, Q)`` as an (S, R)-bimodule: ``(s f r)(x) = f(r x s)``."""
    return Bimodule(m.right_alg, m.left_alg, m.dim,
                    tuple(a.T for a in m.right_action), tuple(a.T for a in m.left_action))


def opposite(m: Bimodule) -> Bimodule:
    """M viewed as an (S^op, R^op)-bimodule."""
    return Bimodule(opposite_algebra(m.right_alg), opposite_algebra(m.left_alg), m.dim,
                    m.right_action, m.left_action)


# -- map spaces ----------------------------------------------------------

class MapSpace:
    """A subspace of linear maps ``Q^src -> Q^tgt`` (vectors are row-major flattenings)."""

    def __init__(self, space: Subspace, tgt_dim: int, src_dim: int):
        if space.ambient_dim != tgt_dim * src_dim:
            raise ValueError("map space ambient dimension mismatch")
        self.space = space
        self.tgt_dim = tgt_dim
        self.src_dim = src_dim

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def matrices(self) -> list[Mat]:
        return [unvec(v, self.tgt_dim, self.src_dim) for v in self.space.vectors()]

    def element(self, coords: Sequence) -> Mat:
        return lincomb(coords, self.matrices, (self.tgt_dim, self.src_dim)) if self.dim else \
            Mat.zeros(self.tgt_dim, self.src_dim)

    @cached_property
    def _coord_map(self) -> tuple[list[int], Mat]:
        # rows of the basis on which it is invertible, and that inverse
        from .exactla import inverse
        b = self.space.basis
        e = Echelon(b.ncols)
        rows = []
        for i in range(b.nrows):
            r = b.row_dict(i)
            if r and e.add(r):
                rows.append(i)
                if len(rows) == b.ncols:
                    break
        sub = b.select_rows(rows)
        return rows, inverse(sub)

    def coordinates(self, m: Mat) -> tuple:
        """Coordinates of a member (membership is not re-checked here)."""
        if self.dim == 0:
            return ()
        rows, inv = self._coord_map
        v = vec(m)
        return inv @ [v[i] for i in rows]

    def contains(self, m: Mat) -> bool:
        return m.shape == (self.tgt_dim, self.src_dim) and self.space.contains(vec(m))

    def __repr__(self) -> str:
        return f"MapSpace(dim={self.dim}, {self.src_dim} -> {self.tgt_dim})"


def commuting_constraint(tgt_op: Mat, src_op: Mat) -> Mat:
    """Rows of ``vec(T F - F S) = 0`` for unknown ``F`` (row-major)."""
    n, m = tgt_op.nrows, src_op.nrows
    return kron(tgt_op, Mat.identity(m)) - kron(Mat.identity(n), src_op.T)


def maps_commuting(pairs: Sequence[tuple[Mat, Mat]], tgt_dim: int, src_dim: int) -> MapSpace:
    """All ``F`` with ``T F = F S`` for every ``(T, S)`` in ``pairs``."""
    ncols = tgt_dim * src_dim
    if not pairs:
        return MapSpace(Subspace.whole(ncols), tgt_dim, src_dim)
    blocks = (commuting_constraint(t, s) for t, s in pairs)
    return MapSpace(joint_kernel(blocks, ncols), tgt_dim, src_dim)


def bimodule_hom_space(m: Bimodule, n: Bimodule) -> MapSpace:
    """Bimodule maps ``m -> n``."""
    if m.left_alg != n.left_alg or m.right_alg != n.right_alg:
        raise MalformedQuery("hom space between bimodules over different algebras")
    pairs = list(zip(n.left_action, m.left_action)) + list(zip(n.right_action, m.right_action))
    return maps_commuting(pairs, n.dim, m.dim)


def is_bimodule_map(f: Mat, m: Bimodule, n: Bimodule) -> bool:
    if f.shape != (n.dim, m.dim):
        return False
    return all(t @ f == f @ s for t, s in zip(n.left_action, m.left_action)) and \
        all(t @ f == f @ s for t, s in zip(n.right_action, m.right_action))


def centralizer(m: Bimodule) -> Subspace:
    """``{v : r v = v r for all r}`` for an (R, R)-bimodule."""
    if m.left_alg != m.right_alg:
        raise MalformedQuery("centralizer needs an (R, R)-bimodule")
    blocks = (a - b for a, b in zip(m.left_action, m.right_action))
    return joint_kernel(blocks, m.dim)


# -- tensor products over an algebra ---------------------------------------

@dataclass(frozen=True, eq=False)
class TensorProduct:
    """``M (x)_S N`` as a quotient of ``M (x)_Q N`` with a stored section.

    ``proj`` maps kron coordinates onto the canonical quotient coordinates
    (the non-pivot coordinates of the RREF relation space) and ``section``
    sends each quotient basis vector to the matching unit vector.
    """

    left: Bimodule
    right: Bimodule
    module: Bimodule
    proj: Mat
    section: Mat
    relation_rank: int

    @property
    def dim(self) -> int:
        return self.module.dim

    def pure(self, u: Sequence, v: Sequence) -> tuple:
        from .exactla import kron_vec
        return self.proj @ kron_vec(u, v)

    def lift(self, q: Sequence) -> tuple:
        return self.section @ q


def tensor_over(m: Bimodule, n: Bimodule) -> TensorProduct:
    if m.right_alg != n.left_alg:
        raise MalformedQuery("tensor product needs m.right_alg == n.left_alg")
    S = m.right_alg
    dm, dn = m.dim, n.dim
    N = dm * dn
    e = Echelon(N)
    im, inn = Mat.identity(dm), Mat.identity(dn)
    # relation vectors m s (x) n - m (x) s n, as rows
    for s in range(S.dim):
        rel = kron(m.right_action[s].T, inn) - kron(im, n.left_action[s].T)
        for i in range(rel.nrows):
            r = rel.row_dict(i)
            if r:
                e.add(r)
    rows = e.normalized_rows()
    free = e.free_columns()
    q = len(free)
    fpos = {f: k for k, f in enumerate(free)}
    prow = [{} for _ in range(q)]
    for f in free:
        prow[fpos[f]][f] = 1
    for c, r in rows:
        for j, v in r.items():
            if j != c:
                prow[fpos[j]][c] = -v
    proj = Mat(q, N, prow)
    sec_rows = [{} for _ in range(N)]
    for f in free:
        sec_rows[f][fpos[f]] = 1
    section = Mat(N, q, sec_rows)
    left = tuple(proj @ kron(a, inn) @ section for a in m.left_action)
    right = tuple(proj @ kron(im, b) @ section for b in n.right_action)
    mod = Bimodule(m.left_alg, n.right_alg, q, left, right)
    return TensorProduct(m, n, mod, proj, section, len(rows))


def tensor_map(src: TensorProduct, tgt: TensorProduct, f: Mat, g: Mat) -> Mat:
    """``f (x) g`` between balanced tensor products (f, g bimodule maps)."""
    return tgt.proj @ kron(f, g) @ src.section


# -- projectivity --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DualBasis:
    """``lambda = sum_i functionals[i](lambda) . elements[i]`` for a left S-module."""

    elements: tuple[tuple, ...]
    functionals: tuple[Mat, ...]

    def __len__(self):
        return len(self.elements)

    def verify(self, m: Bimodule) -> bool:
        S = m.left_alg
        for j in range(m.dim):
            ej = [0] * m.dim
            ej[j] = 1
            acc = [0] * m.dim
            for lam, f in zip(self.elements, self.functionals):
                if f.shape != (S.dim, m.dim):
                    return False
                s = f.col(j)
                w = m.left_by(s) @ lam
                acc = [a + b for a, b in zip(acc, w)]
            if [Q(x) for x in acc] != ej:
                return False
        return all(is_left_linear_functional(f, m) for f in self.functionals)


def is_left_linear_functional(f: Mat, m: Bimodule) -> bool:
    S = m.left_alg
    return all(S.left_mult[s] @ f == f @ m.left_action[s] for s in range(S.dim))


def left_hom_to_regular(m: Bimodule) -> MapSpace:
    """``_S Hom(M, S)``: left S-linear maps from M into the regular module."""
    S = m.left_alg
    return maps_commuting(list(zip(S.left_mult, m.left_action)), S.dim, m.dim)


@dataclass(frozen=True, eq=False)
class LeftDual:
    """``_S Hom(Lambda, S)`` as an (R, S)-bimodule in coordinates over ``space``."""

    source: Bimodule
    space: MapSpace
    module: Bimodule

    def functional(self, coords: Sequence) -> Mat:
        return self.space.element(coords)


def left_dual(lam: Bimodule) -> LeftDual:
    """``(r f)(l) = f(l r)`` and ``(f s)(l) = f(l) s``."""
    S, R = lam.left_alg, lam.right_alg
    sp = left_hom_to_regular(lam)
    mats = sp.matrices
    d = sp.dim
    left = []
    for r in range(R.dim):
        cols = [sp.coordinates(h @ lam.right_action[r]) for h in mats]
        left.append(Mat.from_columns(cols, nrows=d) if d else Mat(0, 0))
    right = []
    for s in range(S.dim):
        cols = [sp.coordinates(S.right_mult[s] @ h) for h in mats]
        right.append(Mat.from_columns(cols, nrows=d) if d else Mat(0, 0))
    return LeftDual(lam, sp, Bimodule(R, S, d, left, right))


def _free_basis_attempt(m: Bimodule, rng: random.Random, tries: int = 4) -> DualBasis | None:
    """Try to exhibit M as free over S with a few deterministic candidate bases."""
    S = m.left_alg
    if S.dim == 0 or m.dim == 0 or m.dim % S.dim:
        return None
    k = m.dim // S.dim
    from .exactla import hstack, inverse
    cands = []
    if k == 1:
        cands = [[tuple(1 if i == j else 0 for i in range(m.dim))] for j in range(m.dim)]
    for _ in range(tries):
        cands.append([tuple(rng.randint(-2, 2) for _ in range(m.dim)) for _ in range(k)])
    for gens in cands:
        # columns: s_b acting on generator g_t, i.e. the map S^k -> M
        blocks = [Mat.from_columns([m.left_action[b] @ g for b in range(S.dim)], nrows=m.dim)
                  for g in gens]
        phi = hstack(blocks)
        inv = inverse(phi)
        if inv is None:
            continue
        funcs = tuple(inv.select_rows(list(range(t * S.dim, (t + 1) * S.dim))) for t in range(k))
        db = DualBasis(tuple(tuple(g) for g in gens), funcs)
        if db.verify(m):
            return db
    return None


def dual_basis_left(m: Bimodule) -> DualBasis | None:
    """A finite dual basis of M as a left S-module, or None if M is not projective.

    First looks for a free basis; otherwise splits the canonical cover
    ``S^n -> M`` (generators = basis of M) by solving one linear system for
    the coordinates of the splitting in ``_S Hom(M, S)``.  Inconsistency of
    that system certifies non-projectivity.
    """
    free = _free_basis_attempt(m, random.Random(0))
    if free is not None:
        return free
    S = m.left_alg
    n = m.dim
    if n == 0:
        return DualBasis((), ())
    sp = left_hom_to_regular(m)
    d = sp.dim
    if d == 0:
        return None
    hs = sp.matrices
    # unknown c[i, k]: f_i = sum_k c[i,k] h_k; equations sum_i f_i(e_j) . e_i = e_j
    cols = []
    for i in range(n):
        for k in range(d):
            col = []
            for j in range(n):
                w = m.left_by(hs[k].col(j))
                col.extend(w.col(i))
            cols.append(col)
    A = Mat.from_columns(cols, nrows=n * n)
    target = []
    for j in range(n):
        target.extend(1 if t == j else 0 for t in range(n))
    sol = solve_linear(A, target)
    if sol is None:
        return None
    elements, funcs = [], []
    for i in range(n):
        f = sp.element(sol[i * d:(i + 1) * d])
        if f.is_zero():
            continue
        elements.append(tuple(1 if t == i else 0 for t in range(n)))
        funcs.append(f)
    return DualBasis(tuple(elements), tuple(funcs))


# -- isomorphism search ----------------------------------------------------

def _int_scaled(mats: Sequence[Mat]) -> list[list[list[int]]]:
    out = []
    for m in mats:
        den = reduce(lcm, (v.denominator for _, _, v in m.items() if type(v) is Fraction), 1)
        out.append([[int(m[i, j] * den) for j in range(m.ncols)] for i in range(m.nrows)])
    return out


def _int_det_nonzero(a: list[list[int]]) -> bool:
    n = len(a)
    a = [row[:] for row in a]
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                return False
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return True


def _combo(ints, coeffs, n):
    out = [[0] * n for _ in range(n)]
    for c, m in zip(coeffs, ints):
        if c:
            for i in range(n):
                ri, mi = out[i], m[i]
                for j in range(n):
                    if mi[j]:
                        ri[j] += c * mi[j]
    return out


def grid_points(d: int, side: int):
    """All points of ``{0..side-1}^d``, unit vectors and the all-ones vector first."""
    first = [tuple(1 if i == k else 0 for i in range(d)) for k in range(d)]
    if side > 1:
        first.append(tuple([1] * d))
    seen = set(first)
    yield from first
    for p in itertools.product(range(side), repeat=d):
        if p not in seen:
            yield p


def iso_search(m: Bimodule, n: Bimodule, seed: int = 0, *,
               max_random_tries: int = MAX_RANDOM_TRIES,
               grid_threshold: int = GRID_THRESHOLD) -> V.Verdict:
    """Decide whether ``m`` and ``n`` are isomorphic bimodules.

    CertifiedYes carries an invertible bimodule map ``m -> n``.  CertifiedNo
    is only returned for a dimension mismatch, a zero hom space, or a
    determinant that vanishes on a full interpolation grid.
    """
    if m.left_alg != n.left_alg or m.right_alg != n.right_alg:
        raise MalformedQuery("isomorphism search between bimodules over different algebras")
    if m.dim != n.dim:
        return V.no("dimension-mismatch", dims=(m.dim, n.dim))
    N = m.dim
    if N == 0 or m.same_structure(n):
        return V.yes(Mat.identity(N), "identity", hom_dim=None)
    hom = bimodule_hom_space(m, n)
    d = hom.dim
    if d == 0:
        return V.no("hom-space-zero", hom_dim=0)
    mats = hom.matrices
    ints = _int_scaled(mats)

    def witness(coeffs, how):
        f = hom.element(coeffs)
        if rank(f) == N and is_bimodule_map(f, m, n):
            return V.yes(f, how, hom_dim=d, coefficients=tuple(coeffs))
        return None

    if d <= grid_threshold:
        for p in grid_points(d, N + 1):
            if _int_det_nonzero(_combo(ints, p, N)):
                w = witness(p, "grid")
                if w is not None:
                    return w
        return V.no("determinant-identically-zero", hom_dim=d, grid_side=N + 1)
    rng = random.Random(seed)
    for _ in range(max_random_tries):
        p = [rng.randint(-N, N) for _ in range(d)]
        if _int_det_nonzero(_combo(ints, p, N)):
            w = witness(p, "random")
            if w is not None:
                return w
    return V.inconclusive("random-search-exhausted", hom_dim=d, tries=max_random_tries)


def verify_iso(f: Mat, m: Bimodule, n: Bimodule) -> bool:
    return f.shape == (n.dim, m.dim) and rank(f) == m.dim == n.dim and is_bimodule_map(f, m, n)
