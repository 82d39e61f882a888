"""Adjoint pairs and Frobenius pairs between module categories.

An (S, R)-bimodule ``lam`` and an (R, S)-bimodule ``x`` give the functors
``F = lam (x)_R -`` and ``G = x (x)_S -``.  ``G`` is right adjoint to ``F``
exactly when there is a Frobenius system: a central element
``z = sum x_i (x) lam_i`` of ``x (x)_S lam`` and a bimodule map
``omega: lam (x)_R x -> S`` with

    lam = sum_i omega(lam (x) x_i) lam_i      x = sum_i x_i omega(lam_i (x) x)

The decision goes through projectivity of ``lam`` plus an isomorphism
``x ~ Hom_S(lam, S)``; the system is then assembled and checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import AlgebraMap, FDAlgebra, Report, identity_map
from .bimodule import (Bimodule, MalformedQuery, MapSpace, TensorProduct,
                       bimodule_hom_space, centralizer, dual_basis_left,
                       is_bimodule_map, iso_search, left_dual, regular_bimodule,
                       regular_bimodules, tensor_map, tensor_over, twist,
                       GRID_THRESHOLD, MAX_RANDOM_TRIES)
from .exactla import Mat, Q, Subspace, hstack, inverse, kron, kron_vec, rank, solve_linear
from . import verdict as V


def _check_pair(lam: Bimodule, x: Bimodule) -> None:
    if lam.left_alg != x.right_alg or lam.right_alg != x.left_alg:
        raise MalformedQuery("expected lam as an (S, R)-bimodule and x as an (R, S)-bimodule")


def nat_unit_space(x: Bimodule, lam: Bimodule) -> Subspace:
    """Candidate units: the R-centralizer of ``x (x)_S lam``."""
    _check_pair(lam, x)
    return centralizer(tensor_over(x, lam).module)


def nat_counit_space(lam: Bimodule, x: Bimodule) -> MapSpace:
    """Candidate counits: bimodule maps ``lam (x)_R x -> S``."""
    _check_pair(lam, x)
    return bimodule_hom_space(tensor_over(lam, x).module, regular_bimodule(lam.left_alg))


@dataclass(frozen=True, eq=False)
class FrobeniusSystem:
    """``z`` in canonical coordinates of ``x (x)_S lam``; ``omega`` on ``lam (x)_R x``."""

    z: tuple
    omega: Mat

    def __eq__(self, other):
        return isinstance(other, FrobeniusSystem) and self.z == other.z and self.omega == other.omega

    def __hash__(self):
        return hash((self.z, self.omega))


def normalization_terms(c: Sequence, omega_full: Mat, x: Bimodule, lam: Bimodule) -> tuple[list, list]:
    """Left-hand sides of the two normalization identities on every basis vector.

    ``c`` is ``z`` lifted to kron coordinates of ``x (x) lam`` and
    ``omega_full`` is omega precomposed with the projection from kron
    coordinates of ``lam (x) x``.  Both arguments enter linearly.
    """
    dl, dx = lam.dim, x.dim
    lam_side = []
    for j in range(dl):
        acc = [0] * dl
        for a in range(dx):
            row = c[a * dl:(a + 1) * dl]
            if not any(row):
                continue
            s = omega_full.col(j * dx + a)
            if not any(s):
                continue
            w = lam.left_by(s) @ row
            acc = [u + v for u, v in zip(acc, w)]
        lam_side.append([Q(v) for v in acc])
    x_side = []
    for j in range(dx):
        acc = [0] * dx
        for b in range(dl):
            colb = [c[a * dl + b] for a in range(dx)]
            if not any(colb):
                continue
            s = omega_full.col(b * dx + j)
            if not any(s):
                continue
            w = x.right_by(s) @ colb
            acc = [u + v for u, v in zip(acc, w)]
        x_side.append([Q(v) for v in acc])
    return lam_side, x_side


def _flat_terms(c, omega_full, x, lam) -> list:
    ls, xs = normalization_terms(c, omega_full, x, lam)
    return [v for r in ls for v in r] + [v for r in xs for v in r]


def _flat_targets(x: Bimodule, lam: Bimodule) -> list:
    out = []
    for n in (lam.dim, x.dim):
        for j in range(n):
            out.extend(1 if t == j else 0 for t in range(n))
    return out


def verify_frobenius_system(sys: FrobeniusSystem, x: Bimodule, lam: Bimodule) -> Report:
    """Exact check of membership and both normalization identities."""
    _check_pair(lam, x)
    rep = Report("frobenius system")
    S = lam.left_alg
    txl = tensor_over(x, lam)
    tlx = tensor_over(lam, x)
    if len(sys.z) != txl.dim:
        rep.fail(f"z has {len(sys.z)} coordinates, expected {txl.dim}")
        return rep
    if sys.omega.shape != (S.dim, tlx.dim):
        rep.fail(f"omega has shape {sys.omega.shape}, expected {(S.dim, tlx.dim)}")
        return rep
    mod = txl.module
    for r in range(x.left_alg.dim):
        if mod.left_action[r] @ sys.z != mod.right_action[r] @ sys.z:
            rep.fail(f"z is not central (basis element {x.left_alg.basis_names[r]})")
    if not is_bimodule_map(sys.omega, tlx.module, regular_bimodule(S)):
        rep.fail("omega is not an (S, S)-bimodule map")
    c = txl.lift(sys.z)
    ls, xs = normalization_terms(c, sys.omega @ tlx.proj, x, lam)
    for j, v in enumerate(ls):
        if v != [1 if t == j else 0 for t in range(lam.dim)]:
            rep.fail(f"lambda-side identity fails at basis vector {j}")
    for j, v in enumerate(xs):
        if v != [1 if t == j else 0 for t in range(x.dim)]:
            rep.fail(f"x-side identity fails at basis vector {j}")
    return rep


def solve_counit(z: Sequence, x: Bimodule, lam: Bimodule) -> Mat | None:
    """An omega completing ``z`` to a Frobenius system, or None (a linear solve)."""
    _check_pair(lam, x)
    txl = tensor_over(x, lam)
    tlx = tensor_over(lam, x)
    space = bimodule_hom_space(tlx.module, regular_bimodule(lam.left_alg))
    if space.dim == 0:
        return None
    c = txl.lift(z)
    cols = [_flat_terms(c, w @ tlx.proj, x, lam) for w in space.matrices]
    sol = solve_linear(Mat.from_columns(cols), _flat_targets(x, lam))
    if sol is None:
        return None
    return space.element(sol)


def solve_unit(omega: Mat, x: Bimodule, lam: Bimodule) -> tuple | None:
    """A central ``z`` completing ``omega`` to a Frobenius system, or None."""
    _check_pair(lam, x)
    txl = tensor_over(x, lam)
    tlx = tensor_over(lam, x)
    cent = centralizer(txl.module)
    if cent.dim == 0:
        return None
    of = omega @ tlx.proj
    cols = [_flat_terms(txl.lift(v), of, x, lam) for v in cent.vectors()]
    sol = solve_linear(Mat.from_columns(cols), _flat_targets(x, lam))
    if sol is None:
        return None
    return cent.element(sol)


def decide_adjoint_pair(lam: Bimodule, x: Bimodule, seed: int = 0, *,
                        max_random_tries: int = MAX_RANDOM_TRIES,
                        grid_threshold: int = GRID_THRESHOLD) -> V.Verdict:
    """Is ``x (x)_S -`` right adjoint to ``lam (x)_R -``?

    CertifiedYes carries a verified :class:`FrobeniusSystem`.
    """
    _check_pair(lam, x)
    db = dual_basis_left(lam)
    if db is None:
        return V.no("not-projective")
    dual = left_dual(lam)
    iso = iso_search(x, dual.module, seed, max_random_tries=max_random_tries,
                     grid_threshold=grid_threshold)
    if iso.no:
        return V.no("not-isomorphic-to-dual", iso_reason=iso.reason, **iso.details)
    if iso.inconclusive:
        return V.inconclusive(iso.reason, **iso.details)
    gamma = iso.certificate
    ginv = inverse(gamma)
    txl = tensor_over(x, lam)
    tlx = tensor_over(lam, x)
    z = [0] * txl.dim
    for elem, f in zip(db.elements, db.functionals):
        xi = ginv @ dual.space.coordinates(f)
        z = [a + b for a, b in zip(z, txl.pure(xi, elem))]
    z = tuple(Q(v) for v in z)
    # omega(e_a (x) e_b) = gamma(e_b)(e_a)
    S = lam.left_alg
    hs = dual.space.matrices
    cols = []
    for a in range(lam.dim):
        for b in range(x.dim):
            g = gamma.col(b)
            col = [0] * S.dim
            for k, coef in enumerate(g):
                if coef:
                    col = [u + coef * v for u, v in zip(col, hs[k].col(a))]
            cols.append(col)
    omega_full = Mat.from_columns(cols, nrows=S.dim)
    sysm = FrobeniusSystem(z, omega_full @ tlx.section)
    rep = verify_frobenius_system(sysm, x, lam)
    if not rep.ok:
        # would mean a construction bug, never a mathematical answer
        raise AssertionError(str(rep))
    return V.yes(sysm, "frobenius-system", iso_method=iso.reason, hom_dim=iso.details.get("hom_dim"),
                 dual_basis_size=len(db))


# -- adjunction triangles ---------------------------------------------------

def unit_component(z: Sequence, x: Bimodule, lam: Bimodule, m: Bimodule):
    """``eta_M: M -> x (x)_S (lam (x)_R M)``, ``m -> sum x_i (x) lam_i (x) m``."""
    txl = tensor_over(x, lam)
    fm = tensor_over(lam, m)
    gfm = tensor_over(x, fm.module)
    c = txl.lift(z)
    lift = kron(Mat.identity(x.dim), fm.proj)
    cols = []
    for j in range(m.dim):
        ej = [1 if t == j else 0 for t in range(m.dim)]
        cols.append(gfm.proj @ (lift @ kron_vec(c, ej)))
    return Mat.from_columns(cols, nrows=gfm.dim) if cols else Mat(gfm.dim, 0), fm, gfm


def counit_component(omega: Mat, x: Bimodule, lam: Bimodule, n: Bimodule):
    """``eps_N: lam (x)_R (x (x)_S N) -> N``, ``l (x) x (x) n -> omega(l (x) x) n``."""
    tlx = tensor_over(lam, x)
    gn = tensor_over(x, n)
    fgn = tensor_over(lam, gn.module)
    of = omega @ tlx.proj
    blocks = [n.left_by(of.col(ab)) for ab in range(lam.dim * x.dim)]
    e_full = hstack(blocks) if blocks else Mat(n.dim, 0)
    lift = kron(Mat.identity(lam.dim), gn.section) @ fgn.section
    return e_full @ lift, gn, fgn


@dataclass
class TriangleReport:
    first: Mat
    second: Mat
    report: Report = field(default_factory=lambda: Report("triangle identities"))

    @property
    def ok(self) -> bool:
        return self.report.ok


def adjunction_triangles(sys: FrobeniusSystem, x: Bimodule, lam: Bimodule,
                         m: Bimodule | None = None, n: Bimodule | None = None) -> TriangleReport:
    """Both triangle composites, at ``M`` (default regular R) and ``N`` (default regular S).

    First: ``eps_{F M} o F(eta_M)`` on ``lam (x)_R M``.
    Second: ``G(eps_N) o eta_{G N}`` on ``x (x)_S N``.
    """
    _check_pair(lam, x)
    R, S = x.left_alg, lam.left_alg
    m = regular_bimodule(R) if m is None else m
    n = regular_bimodule(S) if n is None else n
    eta_m, fm, gfm = unit_component(sys.z, x, lam, m)
    fgfm = tensor_over(lam, gfm.module)
    f_eta = tensor_map(fm, fgfm, Mat.identity(lam.dim), eta_m)
    eps_fm, _, fg_fm = counit_component(sys.omega, x, lam, fm.module)
    first = eps_fm @ f_eta
    gn = tensor_over(x, n)
    eta_gn, _, gfgn = unit_component(sys.z, x, lam, gn.module)
    eps_n, _, fgn = counit_component(sys.omega, x, lam, n)
    g_eps = tensor_map(gfgn, gn, Mat.identity(x.dim), eps_n)
    second = g_eps @ eta_gn
    tr = TriangleReport(first, second)
    if not first.is_identity():
        tr.report.fail("first triangle composite is not the identity")
    if not second.is_identity():
        tr.report.fail("second triangle composite is not the identity")
    return tr


# -- Morita contexts --------------------------------------------------------

class ContextError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MoritaContext:
    """``(R, S, P, Q, f, g)`` with ``f: P (x)_S Q -> R`` and ``g: Q (x)_R P -> S``.

    Maps are given on canonical tensor coordinates.  Compatibility laws
    ``f(p q) p' = p g(q p')`` and ``g(q p) q' = q f(p q')`` are checked at
    construction.
    """

    R: FDAlgebra
    S: FDAlgebra
    P: Bimodule
    Q: Bimodule
    f: Mat
    g: Mat

    def __post_init__(self):
        rep = check_morita_context(self)
        if not rep.ok:
            raise ContextError(str(rep))

    @property
    def pq(self) -> TensorProduct:
        return tensor_over(self.P, self.Q)

    @property
    def qp(self) -> TensorProduct:
        return tensor_over(self.Q, self.P)


def check_morita_context(ctx: MoritaContext) -> Report:
    rep = Report("morita context")
    P, Qm = ctx.P, ctx.Q
    if (P.left_alg, P.right_alg, Qm.left_alg, Qm.right_alg) != (ctx.R, ctx.S, ctx.S, ctx.R):
        rep.fail("P must be an (R, S)-bimodule and Q an (S, R)-bimodule")
        return rep
    pq, qp = tensor_over(P, Qm), tensor_over(Qm, P)
    if ctx.f.shape != (ctx.R.dim, pq.dim) or ctx.g.shape != (ctx.S.dim, qp.dim):
        rep.fail("pairing maps have the wrong shape")
        return rep
    if not is_bimodule_map(ctx.f, pq.module, regular_bimodule(ctx.R)):
        rep.fail("f is not an (R, R)-bimodule map")
    if not is_bimodule_map(ctx.g, qp.module, regular_bimodule(ctx.S)):
        rep.fail("g is not an (S, S)-bimodule map")
    ff = ctx.f @ pq.proj
    gf = ctx.g @ qp.proj
    dp, dq = P.dim, Qm.dim
    for a in range(dp):
        for b in range(dq):
            left = P.left_by(ff.col(a * dq + b))
            for c in range(dp):
                lhs = left.col(c)
                rhs = P.right_by(gf.col(b * dp + c)).col(a)
                if lhs != rhs:
                    rep.fail(f"f/g compatibility fails on P-Q-P basis triple ({a}, {b}, {c})")
    for a in range(dq):
        for b in range(dp):
            left = Qm.left_by(gf.col(a * dp + b))
            for c in range(dq):
                if left.col(c) != Qm.right_by(ff.col(b * dq + c)).col(a):
                    rep.fail(f"g/f compatibility fails on Q-P-Q basis triple ({a}, {b}, {c})")
    return rep


def check_strict_morita(ctx: MoritaContext) -> bool:
    f, g = ctx.f, ctx.g
    return (f.nrows == f.ncols and rank(f) == f.nrows
            and g.nrows == g.ncols and rank(g) == g.nrows)


def _mult_map(P: Bimodule, Qm: Bimodule, alg: FDAlgebra, fn) -> Mat:
    """Pairing ``P (x) Q -> alg`` from a bilinear function on basis indices."""
    t = tensor_over(P, Qm)
    cols = [fn(a, b) for a in range(P.dim) for b in range(Qm.dim)]
    full = Mat.from_columns(cols, nrows=alg.dim) if cols else Mat(alg.dim, 0)
    return full @ t.section


def trivial_context(R: FDAlgebra) -> MoritaContext:
    """``(R, R, R, R, mult, mult)``."""
    reg = regular_bimodule(R)
    mul = lambda a, b: R.mul.col(a * R.dim + b)
    return MoritaContext(R, R, reg, reg, _mult_map(reg, reg, R, mul), _mult_map(reg, reg, R, mul))


def twist_context(R: FDAlgebra, mu: AlgebraMap) -> MoritaContext:
    """``(R, R, R_mu, R_{mu^-1}, ...)`` where ``R_mu`` has left action through ``mu``.

    ``f(a (x) b) = mu^-1(a) b`` and ``g(b (x) a) = mu(b) a``.
    """
    muinv = mu.inverse()
    ident = identity_map(R)
    P = twist(regular_bimodule(R), mu, ident)
    Qm = twist(regular_bimodule(R), muinv, ident)
    e = R.basis_vector
    f = _mult_map(P, Qm, R, lambda a, b: R.product(muinv(e(a)), e(b)))
    g = _mult_map(Qm, P, R, lambda b, a: R.product(mu(e(b)), e(a)))
    return MoritaContext(R, R, P, Qm, f, g)


def matrix_context(n: int) -> MoritaContext:
    """``(Q, M_n, row vectors, column vectors, p q, q p)``."""
    from .algebra import field_algebra, matrix_algebra
    k, Mn = field_algebra(), matrix_algebra(n)
    idx = [(i, j) for i in range(n) for j in range(n)]
    # row vector e_j: right action of e_ab sends e_a to e_b
    right_rows = tuple(Mat.from_entries(n, n, {(b, a): 1}) for a, b in idx)
    left_cols = tuple(Mat.from_entries(n, n, {(a, b): 1}) for a, b in idx)
    scal = (Mat.identity(n),)
    P = Bimodule(k, Mn, n, scal, right_rows)
    Qm = Bimodule(Mn, k, n, left_cols, scal)
    f = _mult_map(P, Qm, k, lambda a, b: (1 if a == b else 0,))
    g = _mult_map(Qm, P, Mn, lambda a, b: tuple(1 if (i, j) == (a, b) else 0 for i, j in idx))
    return MoritaContext(k, Mn, P, Qm, f, g)


# -- second kind ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SecondKindCertificate:
    """Frobenius systems for ``(lam, x)`` and for ``(x, V lam U)``."""

    first: FrobeniusSystem
    second: FrobeniusSystem
    twisted: Bimodule


def twisted_partner(lam: Bimodule, u_ctx: MoritaContext, v_ctx: MoritaContext) -> Bimodule:
    """``V (x)_S lam (x)_R U`` as an (S, R)-bimodule."""
    inner = tensor_over(lam, u_ctx.P).module
    return tensor_over(v_ctx.P, inner).module


def decide_second_kind(x: Bimodule, lam: Bimodule, u_ctx: MoritaContext, v_ctx: MoritaContext,
                       seed: int = 0, **search) -> V.Verdict:
    """Is ``(lam (x)_R -, x (x)_S -)`` a Frobenius pair of the second kind for (U, V)?"""
    _check_pair(lam, x)
    R, S = x.left_alg, lam.left_alg
    if u_ctx.R != R or u_ctx.S != R or v_ctx.R != S or v_ctx.S != S:
        raise MalformedQuery("U must be a context on R and V a context on S")
    for name, ctx in (("U", u_ctx), ("V", v_ctx)):
        if not check_strict_morita(ctx):
            return V.no("non-strict-context", context=name)
    first = decide_adjoint_pair(lam, x, seed, **search)
    if first.no:
        return V.no("first-adjunction:" + first.reason, **first.details)
    if first.inconclusive:
        return first
    partner = twisted_partner(lam, u_ctx, v_ctx)
    second = decide_adjoint_pair(x, partner, seed, **search)
    if not second.yes:
        if second.inconclusive:
            return second
        return V.no("second-adjunction:" + second.reason, **second.details)
    cert = SecondKindCertificate(first.certificate, second.certificate, partner)
    return V.yes(cert, "second-kind")


def context_transport(lam: Bimodule, u_ctx: MoritaContext, u_tilde: MoritaContext,
                      seed: int = 0, **search) -> V.Verdict:
    """Compare ``lam (x)_R U`` with ``lam (x)_R U~``."""
    if u_ctx.R != u_tilde.R or u_ctx.R != lam.right_alg:
        raise MalformedQuery("contexts must live on the right algebra of lam")
    for ctx in (u_ctx, u_tilde):
        if not check_strict_morita(ctx):
            return V.no("non-strict-context")
    a = tensor_over(lam, u_ctx.P).module
    b = tensor_over(lam, u_tilde.P).module
    return iso_search(a, b, seed, **search)


def ring_extension_frobenius(i: AlgebraMap, u_ctx: MoritaContext | None = None,
                             v_ctx: MoritaContext | None = None, seed: int = 0,
                             **search) -> V.Verdict:
    """Frobenius verdict for the extension ``i: R -> S`` (first kind with trivial contexts)."""
    from .algebra import check_algebra_map
    rep = check_algebra_map(i)
    if not rep.ok:
        raise ValueError("invalid map: " + "; ".join(rep.failures))
    lam, x = regular_bimodules(i)
    u_ctx = trivial_context(i.source) if u_ctx is None else u_ctx
    v_ctx = trivial_context(i.target) if v_ctx is None else v_ctx
    return decide_second_kind(x, lam, u_ctx, v_ctx, seed, **search)
