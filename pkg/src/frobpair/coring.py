"""A-corings, their comodules, and the Frobenius question for the forgetful functor.

A coring is an (A, A)-bimodule ``C`` with bimodule maps ``Delta: C -> C (x)_A C``
and ``eps: C -> A``.  Right A-modules are (Q, A)-bimodules over the field
algebra.  Iterated tensor products are always bracketed to the left,
``((M (x)_A Q) (x)_A C) (x)_A Q``, and compared through kron lifts.

Given an invertible-ish (A, A)-bimodule ``Q``, the forgetful functor ``F``
from comodules to modules and ``G = - (x)_A C`` form a Frobenius pair of the
second kind with twist ``- (x)_A Q`` when ``G`` is also left adjoint to
``F(-) (x)_A Q``.  Candidate counits come from ``theta`` in ``V2`` and
candidate units from central ``z`` in ``W2``; a pair is accepted only when
both triangle composites are identities.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

from .algebra import AlgebraMap, FDAlgebra, Report, field_algebra
from .bimodule import (Bimodule, MapSpace, TensorProduct, bimodule_hom_space, centralizer,
                       is_bimodule_map, maps_commuting, regular_bimodule, regular_bimodules,
                       tensor_map, tensor_over)
from .exactla import (Mat, Q, Subspace, hstack, joint_kernel, kron, kron_vec, lincomb,
                      solve_linear, vec, unvec)
from . import verdict as V


def right_module(alg: FDAlgebra, actions) -> Bimodule:
    n = actions[0].nrows
    return Bimodule(field_algebra(), alg, n, (Mat.identity(n),), tuple(actions))


def as_right_module(m: Bimodule) -> Bimodule:
    """Forget the left action of a bimodule."""
    return right_module(m.right_alg, m.right_action)


def act_right_matrix(m: Bimodule) -> Mat:
    """``M (x) A -> M``, ``m (x) a -> m a`` in kron coordinates."""
    dA = m.right_alg.dim
    cols = []
    for i in range(m.dim):
        for a in range(dA):
            cols.append(m.right_action[a].col(i))
    return Mat.from_columns(cols, nrows=m.dim)


def act_left_matrix(m: Bimodule) -> Mat:
    """``A (x) M -> M`` in kron coordinates."""
    return hstack(list(m.left_action))


def associator(a: Bimodule, b: Bimodule, c: Bimodule):
    """``(a b) c -> a (b c)`` together with the four tensor products involved."""
    ab = tensor_over(a, b)
    bc = tensor_over(b, c)
    ab_c = tensor_over(ab.module, c)
    a_bc = tensor_over(a, bc.module)
    lift = kron(ab.section, Mat.identity(c.dim)) @ ab_c.section
    fwd = a_bc.proj @ kron(Mat.identity(a.dim), bc.proj) @ lift
    return fwd, ab, bc, ab_c, a_bc


@dataclass(frozen=True, eq=False)
class Coring:
    base: FDAlgebra
    carrier: Bimodule
    comul: Mat
    counit: Mat

    @cached_property
    def cc(self) -> TensorProduct:
        return tensor_over(self.carrier, self.carrier)

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def __repr__(self):
        return f"Coring(dim={self.dim}, base={self.base!r})"


def check_coring(c: Coring) -> Report:
    rep = Report("coring")
    C, A = c.carrier, c.base
    if C.left_alg != A or C.right_alg != A:
        rep.fail("carrier must be an (A, A)-bimodule")
        return rep
    cc = c.cc
    if c.comul.shape != (cc.dim, C.dim) or c.counit.shape != (A.dim, C.dim):
        rep.fail("comultiplication or counit has the wrong shape")
        return rep
    if not is_bimodule_map(c.comul, C, cc.module):
        rep.fail("comultiplication is not an (A, A)-bimodule map")
    if not is_bimodule_map(c.counit, C, regular_bimodule(A)):
        rep.fail("counit is not an (A, A)-bimodule map")
    fwd, _, _, ab_c, a_bc = associator(C, C, C)
    I = Mat.identity(C.dim)
    left = fwd @ tensor_map(cc, ab_c, c.comul, I) @ c.comul
    right = tensor_map(cc, a_bc, I, c.comul) @ c.comul
    if left != right:
        rep.fail("coassociativity")
    low = kron(c.counit, I) @ cc.section @ c.comul
    if act_left_matrix(C) @ low != I:
        rep.fail("counit law (left)")
    high = kron(I, c.counit) @ cc.section @ c.comul
    if act_right_matrix(C) @ high != I:
        rep.fail("counit law (right)")
    return rep


def trivial_coring(A: FDAlgebra) -> Coring:
    """``C = A`` with ``Delta(a) = a (x) 1`` and ``eps = id``."""
    reg = regular_bimodule(A)
    t = tensor_over(reg, reg)
    cols = [t.pure(A.basis_vector(a), A.unit) for a in range(A.dim)]
    return Coring(A, reg, Mat.from_columns(cols, nrows=t.dim), Mat.identity(A.dim))


def sweedler_coring(i: AlgebraMap) -> Coring:
    """``S (x)_R S`` with ``Delta(s (x) s') = (s (x) 1) (x) (1 (x) s')`` and ``eps = mult``."""
    S = i.target
    lam, x = regular_bimodules(i)
    t = tensor_over(lam, x)
    C = t.module
    cc = tensor_over(C, C)
    cols = []
    for a in range(S.dim):
        for b in range(S.dim):
            left = t.pure(S.basis_vector(a), S.unit)
            right = t.pure(S.unit, S.basis_vector(b))
            cols.append(cc.proj @ kron_vec(left, right))
    comul = Mat.from_columns(cols, nrows=cc.dim) @ t.section
    counit = S.mul @ t.section
    return Coring(S, C, comul, counit)


# -- comodules ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoringComodule:
    coring: Coring
    module: Bimodule        # right A-module
    coaction: Mat           # M -> M (x)_A C

    @property
    def dim(self) -> int:
        return self.module.dim

    @cached_property
    def mc(self) -> TensorProduct:
        return tensor_over(self.module, self.coring.carrier)


def check_comodule(m: CoringComodule) -> Report:
    rep = Report("coring comodule")
    c = m.coring
    mc = m.mc
    if m.coaction.shape != (mc.dim, m.dim):
        rep.fail("coaction has the wrong shape")
        return rep
    if not is_bimodule_map(m.coaction, m.module, mc.module):
        rep.fail("coaction is not right A-linear")
    C = c.carrier
    fwd, _, _, ab_c, a_bc = associator(m.module, C, C)
    I = Mat.identity(m.dim)
    left = fwd @ tensor_map(mc, ab_c, m.coaction, Mat.identity(C.dim)) @ m.coaction
    right = tensor_map(mc, a_bc, I, c.comul) @ m.coaction
    if left != right:
        rep.fail("coaction is not coassociative")
    if counit_contraction(m) @ m.coaction != I:
        rep.fail("counit law")
    return rep


def counit_contraction(m: CoringComodule) -> Mat:
    """``M (x)_A C -> M``, ``m (x) c -> m eps(c)``."""
    return act_right_matrix(m.module) @ kron(Mat.identity(m.dim), m.coring.counit) @ m.mc.section


def regular_comodule(c: Coring) -> CoringComodule:
    return CoringComodule(c, as_right_module(c.carrier), c.comul)


def induced_comodule(c: Coring, n: Bimodule) -> CoringComodule:
    """``N (x)_A C`` with coaction ``1 (x) Delta``."""
    C = c.carrier
    nc = tensor_over(n, C)
    fwd, _, _, ab_c, a_bc = associator(n, C, C)
    back = ab_c.proj @ kron(nc.proj, Mat.identity(C.dim)) @ kron(Mat.identity(n.dim), c.cc.section) @ a_bc.section
    coaction = back @ tensor_map(nc, a_bc, Mat.identity(n.dim), c.comul)
    return CoringComodule(c, as_right_module(nc.module), coaction)


# -- the forgetful / induction adjunction -----------------------------------

@dataclass
class AdjunctionReport:
    unit: Mat
    counit: Mat
    first: Mat
    second: Mat
    report: Report = field(default_factory=lambda: Report("forgetful adjunction"))

    @property
    def ok(self) -> bool:
        return self.report.ok


def forgetful_adjunction(c: Coring, m: CoringComodule, n: Bimodule) -> AdjunctionReport:
    """Unit ``rho: M -> M (x)_A C`` and counit ``1 (x) eps: N (x)_A C -> N``.

    First triangle at ``M``: ``(1 (x) eps) o rho = 1``; second at ``N``:
    ``(eps_N (x) 1) o (coaction of N (x)_A C) = 1``.
    """
    unit = m.coaction
    first = counit_contraction(m) @ unit
    gn = induced_comodule(c, n)
    nc = tensor_over(n, c.carrier)
    counit_n = act_right_matrix(n) @ kron(Mat.identity(n.dim), c.counit) @ nc.section
    ncc = tensor_over(nc.module, c.carrier)
    second = tensor_map(ncc, nc, counit_n, Mat.identity(c.dim)) @ gn.coaction
    out = AdjunctionReport(unit, counit_n, first, second)
    if not first.is_identity():
        out.report.fail("first triangle identity fails at the comodule")
    if not second.is_identity():
        out.report.fail("second triangle identity fails at the module")
    return out


# -- natural transformation spaces ------------------------------------------

class FrobeniusData:
    """Tensor products and linear pieces shared by V2, W2 and the triangle checks."""

    def __init__(self, c: Coring, q: Bimodule):
        if q.left_alg != c.base or q.right_alg != c.base:
            raise ValueError("mismatch: Q must be an (A, A)-bimodule over the coring base")
        self.coring = c
        self.q = q
        C = c.carrier
        self.cq = tensor_over(C, q)
        self.cqc = tensor_over(self.cq.module, C)
        # kron (c, q, d) -> CQC coordinates
        self.p_cqc = self.cqc.proj @ kron(self.cq.proj, Mat.identity(C.dim))
        self.s_cqc = kron(self.cq.section, Mat.identity(C.dim)) @ self.cqc.section
        self.delta_lift = c.cc.section @ c.comul    # columns: Delta(e_c) in kron(C, C)

    @cached_property
    def v2_hom(self) -> MapSpace:
        return bimodule_hom_space(self.cqc.module, regular_bimodule(self.coring.base))

    def centrality_residual(self, theta: Mat) -> tuple:
        """``c_1 theta(c_2 q d) - theta(c q d_1) d_2`` on a basis of ``C (x)_A Q (x)_A C``."""
        C = self.coring.carrier
        dC, dq = C.dim, self.q.dim
        tf = theta @ self.p_cqc
        dl = self.delta_lift
        out = []
        for k in range(self.cqc.dim):
            trip = self.s_cqc.col(k)
            acc = [0] * dC
            for idx, coef in enumerate(trip):
                if not coef:
                    continue
                cd, d = divmod(idx, dC)
                cidx, qi = divmod(cd, dq)
                for uv, a in enumerate(dl.col(cidx)):
                    if a:
                        u, v = divmod(uv, dC)
                        s = tf.col((v * dq + qi) * dC + d)
                        w = C.right_by(s).col(u)
                        acc = [x + coef * a * y for x, y in zip(acc, w)]
                for uv, b in enumerate(dl.col(d)):
                    if b:
                        u, v = divmod(uv, dC)
                        s = tf.col((cidx * dq + qi) * dC + u)
                        w = C.left_by(s).col(v)
                        acc = [x - coef * b * y for x, y in zip(acc, w)]
            out.extend(acc)
        return tuple(Q(v) for v in out)

    @cached_property
    def v2(self) -> MapSpace:
        hom = self.v2_hom
        dA = self.coring.base.dim
        if hom.dim == 0:
            return hom
        cols = [self.centrality_residual(t) for t in hom.matrices]
        from .exactla import kernel_basis
        ker = kernel_basis(Mat.from_columns(cols))
        vecs = [vec(hom.element(v)) for v in ker.vectors()]
        sp = Subspace.span(dA * self.cqc.dim, vecs)
        return MapSpace(sp, dA, self.cqc.dim)

    @cached_property
    def w2(self) -> Subspace:
        return centralizer(self.cq.module)


def v2_space(c: Coring, q: Bimodule) -> MapSpace:
    return FrobeniusData(c, q).v2


def w2_space(c: Coring, q: Bimodule) -> Subspace:
    return FrobeniusData(c, q).w2


def v1_space(c: Coring, q: Bimodule) -> MapSpace:
    """Bicolinear (A, A)-bimodule maps ``C (x)_A Q (x)_A C -> C``.

    Left coaction on the source comes from the first leg, right coaction
    from the last leg.  Composing with the counit identifies this space
    with :func:`v2_space`.
    """
    fd = FrobeniusData(c, q)
    C = c.carrier
    dC = C.dim
    src = fd.cqc
    hom = bimodule_hom_space(src.module, C)
    if hom.dim == 0:
        return hom
    # right colinearity: Delta o nu == (nu (x) 1) o (1 (x) Delta) on kron lifts
    s_trip = fd.s_cqc
    n_trip = s_trip.nrows
    rows_right = kron(fd.p_cqc, Mat.identity(dC))       # kron(c,q,d,e) -> CQC (x) C
    right_in = kron(Mat.identity(n_trip // dC), fd.delta_lift) @ s_trip
    # left colinearity: Delta o nu == (1 (x) nu) o (Delta (x) 1 (x) 1)
    left_in = kron(fd.delta_lift, Mat.identity(n_trip // dC)) @ s_trip
    cc = c.cc
    cqc_tp = tensor_over(C, src.module)   # C (x) (CQC)
    left_proj = cqc_tp.proj @ kron(Mat.identity(dC), fd.p_cqc)
    cqc_c = tensor_over(src.module, C)
    right_proj = cqc_c.proj @ rows_right
    cols = []
    for nu in hom.matrices:
        lhs = cc.section @ c.comul @ nu
        r = cc.section @ tensor_map(cqc_c, cc, nu, Mat.identity(dC)) @ right_proj @ right_in
        l = cc.section @ tensor_map(cqc_tp, cc, Mat.identity(dC), nu) @ left_proj @ left_in
        cols.append(vec(lhs - r) + vec(lhs - l))
    from .exactla import kernel_basis
    ker = kernel_basis(Mat.from_columns(cols))
    vecs = [vec(hom.element(v)) for v in ker.vectors()]
    return MapSpace(Subspace.span(dC * src.dim, vecs), dC, src.dim)


# -- triangle identities for G left adjoint to F (-) (x)_A Q ---------------------

class TriangleSite:
    """Precomputed pieces for checking both triangles at a module N and comodule M."""

    def __init__(self, fd: FrobeniusData, n: Bimodule, m: CoringComodule):
        self.fd = fd
        c = fd.coring
        C, q = c.carrier, fd.q
        self.n = n
        self.m = m
        # unit side at N: N -> (N C) Q, then (N C Q) C
        self.nc = tensor_over(n, C)
        self.ncq = tensor_over(self.nc.module, q)
        self.ncqc = tensor_over(self.ncq.module, C)
        self.gn = induced_comodule(c, n)
        # counit side at M: (M Q) C -> M, then ((M Q) C) Q
        self.mq = tensor_over(m.module, q)
        self.mqc = tensor_over(self.mq.module, C)
        self.mqcq = tensor_over(self.mqc.module, q)

    def zeta(self, z: tuple, n: Bimodule, nc: TensorProduct, ncq: TensorProduct) -> Mat:
        """``N -> (N (x) C) (x) Q``, ``n -> n (x) z``."""
        zl = self.fd.cq.section @ z
        proj = ncq.proj @ kron(nc.proj, Mat.identity(self.fd.q.dim))
        cols = [proj @ kron_vec([1 if t == j else 0 for t in range(n.dim)], zl) for j in range(n.dim)]
        return Mat.from_columns(cols, nrows=ncq.dim) if cols else Mat(ncq.dim, 0)

    def nu(self, theta: Mat, m: CoringComodule, mq: TensorProduct, mqc: TensorProduct) -> Mat:
        """``(M (x) Q) (x) C -> M``, ``m (x) q (x) d -> m_0 theta(m_1 (x) q (x) d)``."""
        fd = self.fd
        C, q = fd.coring.carrier, fd.q
        dC, dq, dM = C.dim, q.dim, m.dim
        tf = theta @ fd.p_cqc
        rho = m.mc.section @ m.coaction
        lift = kron(mq.section, Mat.identity(dC)) @ mqc.section
        cols = []
        for k in range(mqc.dim):
            trip = lift.col(k)
            acc = [0] * dM
            for idx, coef in enumerate(trip):
                if not coef:
                    continue
                mqi, d = divmod(idx, dC)
                mi, qi = divmod(mqi, dq)
                for uc, b in enumerate(rho.col(mi)):
                    if b:
                        u, cc = divmod(uc, dC)
                        s = tf.col((cc * dq + qi) * dC + d)
                        if any(s):
                            w = m.module.right_by(s).col(u)
                            acc = [x + coef * b * y for x, y in zip(acc, w)]
            cols.append(acc)
        return Mat.from_columns(cols, nrows=dM) if cols else Mat(dM, 0)

    def first(self, theta: Mat, z: tuple) -> Mat:
        """``nu_{G N} o G(zeta_N)`` on ``N (x)_A C``."""
        C = self.fd.coring.carrier
        zeta_n = self.zeta(z, self.n, self.nc, self.ncq)
        g_zeta = tensor_map(self.nc, self.ncqc, zeta_n, Mat.identity(C.dim))
        nu_gn = self.nu(theta, self.gn, self.ncq, self.ncqc)
        return nu_gn @ g_zeta

    def second(self, theta: Mat, z: tuple) -> Mat:
        """``(nu_M (x) Q) o zeta_{M (x) Q}`` on ``M (x)_A Q``."""
        q = self.fd.q
        zeta_mq = self.zeta(z, self.mq.module, self.mqc, self.mqcq)
        nu_m = self.nu(theta, self.m, self.mq, self.mqc)
        return tensor_map(self.mqcq, self.mq, nu_m, Mat.identity(q.dim)) @ zeta_mq

    def residual(self, theta: Mat, z: tuple) -> tuple:
        return vec(self.first(theta, z)) + vec(self.second(theta, z))

    def target(self) -> tuple:
        return vec(Mat.identity(self.nc.dim)) + vec(Mat.identity(self.mq.dim))

    def check(self, theta: Mat, z: tuple) -> Report:
        rep = Report("coring triangles")
        if not self.first(theta, z).is_identity():
            rep.fail("first triangle (at the module) is not the identity")
        if not self.second(theta, z).is_identity():
            rep.fail("second triangle (at the comodule) is not the identity")
        return rep


@dataclass(frozen=True, eq=False)
class CoringFrobeniusWitness:
    theta: Mat      # C (x)_A Q (x)_A C -> A, canonical coordinates
    z: tuple        # element of C (x)_A Q, canonical coordinates


def representing_site(fd: FrobeniusData) -> TriangleSite:
    c = fd.coring
    return TriangleSite(fd, right_module(c.base, c.base.right_mult), regular_comodule(c))


def guard_site(fd: FrobeniusData, seed: int = 0) -> TriangleSite:
    """Non-representing test objects for the triangle checks.

    The module is ``Q`` with its left action forgotten; the comodule is
    ``G(N)`` for ``N`` the right ideal generated by a seeded random element.
    """
    c = fd.coring
    A = c.base
    rng = random.Random(seed)
    e = [rng.randint(-1, 1) for _ in range(A.dim)]
    ideal = Subspace.span(A.dim, [A.product(e, A.basis_vector(b)) for b in range(A.dim)])
    if ideal.dim == 0:
        ideal = Subspace.whole(A.dim)
    basis = ideal.basis
    from .exactla import left_inverse
    li = left_inverse(basis)
    acts = [li @ A.right_mult[a] @ basis for a in range(A.dim)]
    n = right_module(A, acts)
    return TriangleSite(fd, as_right_module(fd.q), induced_comodule(c, n))


def verify_coring_witness(c: Coring, q: Bimodule, w: CoringFrobeniusWitness, seed: int = 0,
                          guard: bool = True) -> Report:
    fd = FrobeniusData(c, q)
    rep = Report("coring frobenius witness")
    if w.theta.shape != (c.base.dim, fd.cqc.dim) or len(w.z) != fd.cq.dim:
        rep.fail("witness has the wrong shape")
        return rep
    if not fd.v2.contains(w.theta):
        rep.fail("theta is not in V2")
    if not fd.w2.contains(w.z):
        rep.fail("z is not central")
    if rep.ok:
        rep.failures.extend(representing_site(fd).check(w.theta, w.z).failures)
    if rep.ok and guard:
        rep.failures.extend("guard: " + f for f in guard_site(fd, seed).check(w.theta, w.z).failures)
    return rep


def _solve_z(site: TriangleSite, theta: Mat, zbasis: list) -> tuple | None:
    cols = [site.residual(theta, z) for z in zbasis]
    sol = solve_linear(Mat.from_columns(cols), site.target())
    if sol is None:
        return None
    return tuple(Q(sum(s * z[i] for s, z in zip(sol, zbasis))) for i in range(len(zbasis[0])))


def _solve_theta(site: TriangleSite, z: tuple, thetas: list[Mat]) -> Mat | None:
    cols = [site.residual(t, z) for t in thetas]
    sol = solve_linear(Mat.from_columns(cols), site.target())
    if sol is None:
        return None
    return lincomb(sol, thetas, thetas[0].shape)


def decide_coring_frobenius(c: Coring, q: Bimodule, seed: int = 0, grid_bound: int = 2,
                            max_grid_points: int = 3125) -> V.Verdict:
    """Search ``(theta, z)`` in ``V2 x W2`` satisfying both triangle identities.

    Basis directions of V2 are tried with a linear solve for z, then basis
    directions of W2 with a linear solve for theta, then an integer grid
    over V2 coordinates.  CertifiedNo when V2 or W2 is zero, or when one of
    them is a line and the resulting linear system has no solution.
    """
    fd = FrobeniusData(c, q)
    v2, w2 = fd.v2, fd.w2
    if v2.dim == 0:
        return V.no("v2-trivial", w2_dim=w2.dim)
    if w2.dim == 0:
        return V.no("w2-trivial", v2_dim=v2.dim)
    site = representing_site(fd)
    thetas = v2.matrices
    zs = w2.vectors()

    def accept(theta, z, how):
        w = CoringFrobeniusWitness(theta, z)
        rep = verify_coring_witness(c, q, w, seed)
        if rep.ok:
            return V.yes(w, how, v2_dim=v2.dim, w2_dim=w2.dim)
        return None

    solvable = False
    for t in thetas:
        z = _solve_z(site, t, zs)
        if z is not None:
            solvable = True
            out = accept(t, z, "v2-basis-scan")
            if out is not None:
                return out
    for z in zs:
        t = _solve_theta(site, z, thetas)
        if t is not None:
            solvable = True
            out = accept(t, z, "w2-basis-scan")
            if out is not None:
                return out
    if not solvable and min(v2.dim, w2.dim) == 1:
        # with a one-dimensional factor the bilinear system is linear up to scaling
        return V.no("triangle-system-inconsistent", v2_dim=v2.dim, w2_dim=w2.dim)
    side = 2 * grid_bound + 1
    if side ** v2.dim <= max_grid_points:
        for coeffs in itertools.product(range(-grid_bound, grid_bound + 1), repeat=v2.dim):
            if sum(1 for x in coeffs if x) < 2:
                continue
            t = lincomb(coeffs, thetas, thetas[0].shape)
            z = _solve_z(site, t, zs)
            if z is not None:
                out = accept(t, z, "v2-grid")
                if out is not None:
                    return out
    return V.inconclusive("coring-search-exhausted", v2_dim=v2.dim, w2_dim=w2.dim)
