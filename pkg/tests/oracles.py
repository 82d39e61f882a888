"""Independent reference computations used by the tests.

Nothing here goes through the package's quotient coordinates or its
elimination code: inputs are turned into plain lists of Fractions and
solved with a separate Gaussian elimination (or sympy).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from frobpair.algebra import (dual_numbers, field_algebra, product_algebra, unit_map,
                              upper_triangular_algebra, cyclic_group_algebra)
from frobpair.bimodule import Bimodule, direct_sum, regular_bimodule, regular_bimodules
from frobpair.exactla import Mat


# -- plain elimination ---------------------------------------------------------

def lists(m: Mat) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in m.to_lists()]


def rref(rows: list[list[Fraction]], ncols: int):
    a = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], piv


def nullspace(rows, ncols) -> list[list[Fraction]]:
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        out.append(v)
    return out


def rank_of(vectors, ncols) -> int:
    return len(rref(vectors, ncols)[1]) if vectors else 0


def solve(rows, rhs, ncols):
    """Some solution of rows * v = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        v[p] = row[ncols]
    return v


def matvec(m, v):
    return [sum(a * b for a, b in zip(row, v)) for row in m]


def unit(n, i):
    return [Fraction(1 if j == i else 0) for j in range(n)]


# -- the brute-force Frobenius-system oracle --------------------------------------

class FrobeniusOracle:
    """Search for (z, omega) directly in un-quotiented tensor coordinates.

    ``z`` ranges over representatives in X (x)_k lam whose commutator with R
    lies in the balancing relations; ``omega`` over balanced bimodule maps
    lam (x)_k X -> S.  For a fixed z, both normalization identities are
    linear in omega.
    """

    def __init__(self, lam: Bimodule, x: Bimodule):
        self.S, self.R = lam.left_alg, lam.right_alg
        self.dl, self.dx = lam.dim, x.dim
        self.Ls = [lists(a) for a in lam.left_action]
        self.Lr = [lists(a) for a in lam.right_action]
        self.Xl = [lists(a) for a in x.left_action]
        self.Xs = [lists(a) for a in x.right_action]
        self.smul = lists(self.S.mul)
        self._z_space()
        self._omega_space()

    def _z_space(self):
        dl, dx = self.dl, self.dx
        n = dx * dl
        rels = []
        for a in range(self.S.dim):
            for i in range(dx):
                for j in range(dl):
                    v = [Fraction(0)] * n
                    xi = [row[i] for row in self.Xs[a]]
                    lj = [row[j] for row in self.Ls[a]]
                    for p in range(dx):
                        v[p * dl + j] += xi[p]
                    for q in range(dl):
                        v[i * dl + q] -= lj[q]
                    rels.append(v)
        self.rel_rank = rank_of(rels, n)
        rel_basis = rref(rels, n)[0] if rels else []
        # unknowns: z (n) then coefficients on rel_basis, once per R basis element
        k = len(rel_basis)
        nb = self.R.dim
        total = n + nb * k
        eqs = []
        for b in range(nb):
            comm = [[Fraction(0)] * n for _ in range(n)]
            for p in range(dx):
                for q in range(dl):
                    col = p * dl + q
                    for p2 in range(dx):
                        comm[p2 * dl + q][col] += self.Xl[b][p2][p]
                    for q2 in range(dl):
                        comm[p * dl + q2][col] -= self.Lr[b][q2][q]
            for row in range(n):
                e = comm[row] + [Fraction(0)] * (nb * k)
                for t, rv in enumerate(rel_basis):
                    e[n + b * k + t] = -rv[row]
                eqs.append(e)
        sols = nullspace(eqs, total) if eqs else [unit(total, i) for i in range(total)]
        zs = [s[:n] for s in sols]
        # complement of the relations inside the span of admissible z
        basis = list(rel_basis)
        comp = []
        for v in zs:
            if rank_of(basis + [v], n) > len(basis):
                basis.append(v)
                comp.append(v)
        self.z_basis = comp
        self.n = n

    def _omega_space(self):
        S, dl, dx = self.S, self.dl, self.dx
        s = S.dim
        m = dl * dx
        nv = s * m          # W[c][col] at index c * m + col

        def idx(c, col):
            return c * m + col

        eqs = []
        # balanced over R: W(lam r (x) x) = W(lam (x) r x)
        for b in range(self.R.dim):
            for j in range(dl):
                for i in range(dx):
                    for c in range(s):
                        e = [Fraction(0)] * nv
                        for q in range(dl):
                            e[idx(c, q * dx + i)] += self.Lr[b][q][j]
                        for p in range(dx):
                            e[idx(c, j * dx + p)] -= self.Xl[b][p][i]
                        eqs.append(e)
        # S-bimodule map into S
        for a in range(s):
            for j in range(dl):
                for i in range(dx):
                    for c in range(s):
                        e = [Fraction(0)] * nv
                        for q in range(dl):
                            e[idx(c, q * dx + i)] += self.Ls[a][q][j]
                        for c2 in range(s):
                            e[idx(c2, j * dx + i)] -= self.smul[c][a * s + c2]
                        eqs.append(e)
                        e = [Fraction(0)] * nv
                        for p in range(dx):
                            e[idx(c, j * dx + p)] += self.Xs[a][p][i]
                        for c2 in range(s):
                            e[idx(c2, j * dx + i)] -= self.smul[c][c2 * s + a]
                        eqs.append(e)
        self.w_basis = nullspace(eqs, nv)
        self.m = m

    def _identity_system(self, z):
        """Rows (in the coordinates of w_basis) and right-hand side for both identities."""
        dl, dx, s, m = self.dl, self.dx, self.S.dim, self.m
        cols = []
        for w in self.w_basis:
            W = [w[c * m:(c + 1) * m] for c in range(s)]
            out = []
            # lam side: sum_ij z_ij * Ls(W(e_t (x) x_i)) lam_j
            for t in range(dl):
                acc = [Fraction(0)] * dl
                for i in range(dx):
                    for j in range(dl):
                        zij = z[i * dl + j]
                        if not zij:
                            continue
                        sv = [W[c][t * dx + i] for c in range(s)]
                        for a in range(s):
                            if sv[a]:
                                for q in range(dl):
                                    acc[q] += zij * sv[a] * self.Ls[a][q][j]
                out.extend(acc)
            # x side: sum_ij z_ij * Xs(W(lam_j (x) e_t)) x_i
            for t in range(dx):
                acc = [Fraction(0)] * dx
                for i in range(dx):
                    for j in range(dl):
                        zij = z[i * dl + j]
                        if not zij:
                            continue
                        sv = [W[c][j * dx + t] for c in range(s)]
                        for a in range(s):
                            if sv[a]:
                                for p in range(dx):
                                    acc[p] += zij * sv[a] * self.Xs[a][p][i]
                out.extend(acc)
            cols.append(out)
        rhs = []
        for t in range(dl):
            rhs.extend(unit(dl, t))
        for t in range(dx):
            rhs.extend(unit(dx, t))
        rows = [[c[r] for c in cols] for r in range(len(rhs))]
        return rows, rhs

    def try_z(self, z) -> bool:
        if not self.w_basis:
            return False
        rows, rhs = self._identity_system(z)
        return solve(rows, rhs, len(self.w_basis)) is not None

    def grid_search(self, bound: int = 2):
        d = len(self.z_basis)
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=d):
            if not any(coeffs):
                continue
            z = [sum(c * v[k] for c, v in zip(coeffs, self.z_basis)) for k in range(self.n)]
            if self.try_z(z):
                return coeffs
        return None

    def groebner_consistent(self) -> bool:
        """Does the bilinear system in (z, omega) have a solution over C?"""
        d, h = len(self.z_basis), len(self.w_basis)
        if d == 0 or h == 0:
            return False
        zs = sympy.symbols(f"z0:{d}")
        ws = sympy.symbols(f"w0:{h}")
        eqs = set()
        # rows are linear in z: evaluate on each z basis direction and recombine
        per_dir = [self._identity_system(v)[0] for v in self.z_basis]
        rhs = self._identity_system(self.z_basis[0])[1]
        for r in range(len(rhs)):
            expr = -sympy.Rational(rhs[r].numerator, rhs[r].denominator)
            for k in range(d):
                for j in range(h):
                    c = per_dir[k][r][j]
                    if c:
                        expr += sympy.Rational(c.numerator, c.denominator) * zs[k] * ws[j]
            expr = sympy.expand(expr)
            if expr != 0:
                eqs.add(expr)
        if not eqs:
            return True
        gb = sympy.groebner(sorted(eqs, key=str), *zs, *ws, order="grevlex")
        return not (len(gb.exprs) == 1 and gb.exprs[0] == 1)

    def decide(self, bound: int = 2) -> tuple[str, str]:
        if not self.z_basis or not self.w_basis:
            return "no", "empty-space"
        if self.grid_search(bound) is not None:
            return "yes", "grid"
        if self.groebner_consistent():
            return "yes", "groebner"
        return "no", "groebner"


# -- generated instance family -----------------------------------------------------

def base_algebras():
    k = field_algebra()
    return {"Q": k, "QxQ": product_algebra(k, k), "C2": cyclic_group_algebra(2),
            "D": dual_numbers(), "T2": upper_triangular_algebra(2)}


CHARACTERS = {"Q": [(1,)], "QxQ": [(1, 0), (0, 1)], "C2": [(1, 1), (1, -1)], "D": [(1, 0)],
              "T2": [(1, 0, 0), (0, 0, 1)]}


def character_bimodule(L, lc, R, rc) -> Bimodule:
    one = Mat.identity(1)
    return Bimodule(L, R, 1, tuple(one.scale(c) for c in lc), tuple(one.scale(c) for c in rc))


def bimodules_between(L, ln, R, rn) -> list[tuple[str, Bimodule]]:
    """(L, R)-bimodules of dimension at most 3: characters, sums, regular, extension."""
    cs = [(f"chr{a}{b}", character_bimodule(L, ca, R, cb))
          for a, ca in enumerate(CHARACTERS[ln]) for b, cb in enumerate(CHARACTERS[rn])]
    out = list(cs)
    for (na, a), (nb, b) in itertools.combinations_with_replacement(cs, 2):
        out.append((f"{na}+{nb}", direct_sum(a, b)))
    if L == R:
        out.append(("reg", regular_bimodule(L)))
    if R.dim == 1:
        out.append(("ext", regular_bimodules(unit_map(L))[0]))
    elif L.dim == 1:
        out.append(("ext", regular_bimodules(unit_map(R))[1]))
    return out


def all_pairs():
    algs = base_algebras()
    for rn, sn in itertools.product(algs, repeat=2):
        R, S = algs[rn], algs[sn]
        for (lk, lam), (xk, x) in itertools.product(bimodules_between(S, sn, R, rn),
                                                     bimodules_between(R, rn, S, sn)):
            yield f"R={rn} S={sn} lam={lk} x={xk}", lam, x


def stratified_sample(per_class: int = 4):
    """Deterministic sample covering every (algebra pair, verdict) class."""
    from frobpair.frobenius import decide_adjoint_pair
    seen: dict[tuple, int] = {}
    out = []
    for label, lam, x in all_pairs():
        key = (label.split(" lam=")[0], decide_adjoint_pair(lam, x).outcome)
        if seen.get(key, 0) < per_class:
            seen[key] = seen.get(key, 0) + 1
            out.append((label, lam, x))
    return out


# -- small sympy oracles ---------------------------------------------------------------

def sym(m: Mat) -> sympy.Matrix:
    return sympy.Matrix(m.to_lists())


def sympy_centralizer_dim(mod: Bimodule) -> int:
    blocks = [sym(a) - sym(b) for a, b in zip(mod.left_action, mod.right_action)]
    if not blocks:
        return mod.dim
    return mod.dim - sympy.Matrix.vstack(*blocks).rank()


def sympy_hom_dim(m: Bimodule, n: Bimodule) -> int:
    """dim of linear maps f: M -> N with f a = b f for all action pairs."""
    eqs = []
    dm, dn = m.dim, n.dim
    for a, b in list(zip(m.left_action, n.left_action)) + list(zip(m.right_action, n.right_action)):
        A, B = sym(a), sym(b)
        # vec_row(f A - B f) = (I (x) A^T - B (x) I) vec_row(f)
        eqs.append(sympy.kronecker_product(sympy.eye(dn), A.T) - sympy.kronecker_product(B, sympy.eye(dm)))
    if not eqs:
        return dm * dn
    return dm * dn - sympy.Matrix.vstack(*eqs).rank()


def sympy_tensor_dim(m: Bimodule, n: Bimodule) -> int:
    """dim of M (x)_S N as dim(M)dim(N) minus the rank of the balancing relations."""
    rows = []
    for a, b in zip(m.right_action, n.left_action):
        A, B = sym(a), sym(b)
        rows.append(sympy.kronecker_product(A, sympy.eye(n.dim)) - sympy.kronecker_product(sympy.eye(m.dim), B))
    if not rows:
        return m.dim * n.dim
    return m.dim * n.dim - sympy.Matrix.hstack(*rows).rank()


def sympy_isomorphic(m: Bimodule, n: Bimodule) -> bool:
    """Isomorphic iff a generic element of Hom(M, N) has nonzero determinant."""
    if m.dim != n.dim:
        return False
    d = m.dim
    eqs = []
    for a, b in list(zip(m.left_action, n.left_action)) + list(zip(m.right_action, n.right_action)):
        A, B = sym(a), sym(b)
        eqs.append(sympy.kronecker_product(sympy.eye(d), A.T) - sympy.kronecker_product(B, sympy.eye(d)))
    basis = sympy.Matrix.vstack(*eqs).nullspace() if eqs else [sympy.eye(d * d)[:, i] for i in range(d * d)]
    if not basis:
        return False
    ts = sympy.symbols(f"t0:{len(basis)}")
    generic = sum((t * v for t, v in zip(ts, basis)), sympy.zeros(d * d, 1))
    f = sympy.Matrix(d, d, list(generic))
    return sympy.expand(f.det()) != 0
