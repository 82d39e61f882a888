import pytest
from hypothesis import given, settings, strategies as st

from frobpair.algebra import (AlgebraMap, cyclic_group_algebra, field_algebra, identity_map,
                              matrix_algebra, unit_map, upper_triangular_algebra)
from frobpair.bimodule import MalformedQuery, regular_bimodule, regular_bimodules, tensor_over, twist
from frobpair.exactla import Mat, kron_vec
from frobpair.frobenius import (ContextError, FrobeniusSystem, MoritaContext, adjunction_triangles,
                                check_morita_context, check_strict_morita, decide_adjoint_pair,
                                decide_second_kind, matrix_context, nat_counit_space, nat_unit_space,
                                ring_extension_frobenius, solve_counit, solve_unit, trivial_context,
                                twist_context, verify_frobenius_system)

from oracles import all_pairs

YES_PAIRS = [(lbl, lam, x) for lbl, lam, x in all_pairs() if decide_adjoint_pair(lam, x).yes][::7]


def _m2_swapped():
    m2 = matrix_algebra(2)
    lam_ext, x_ext = regular_bimodules(unit_map(m2))
    # x = M2 as (M2, Q), lam = M2 as (Q, M2): units live in M2 (x)_Q M2
    return m2, lam_ext, x_ext


def test_casimir_element_is_the_unit():
    m2, x, lam = _m2_swapped()
    units = nat_unit_space(x, lam)
    # M2 (x)_Q M2 is four copies of M2 as a bimodule
    assert units.dim == 4
    names = m2.basis_names
    e = lambda n: m2.basis_vector(names.index(n))
    casimir = [0] * 16
    for i in "12":
        for j in "12":
            casimir = [a + b for a, b in zip(casimir, kron_vec(e(f"e{i}{j}"), e(f"e{j}{i}")))]
    t = tensor_over(x, lam)
    z = t.proj @ casimir
    assert units.contains(z)


def test_trace_form_is_the_counit():
    m2, x, lam = _m2_swapped()
    t = tensor_over(lam, x)
    trace = lambda v: v[0] + v[3]
    full = Mat.row_vector([trace(m2.product(m2.basis_vector(a), m2.basis_vector(b)))
                           for a in range(4) for b in range(4)])
    omega = full @ t.section
    assert omega @ t.proj == full          # balanced: factors through the product
    assert nat_counit_space(lam, x).contains(omega)
    z = solve_unit(omega, x, lam)
    assert z is not None
    sysm = FrobeniusSystem(z, omega)
    assert verify_frobenius_system(sysm, x, lam).ok
    assert adjunction_triangles(sysm, x, lam).ok
    # the completing unit is the Casimir element itself
    tx = tensor_over(x, lam)
    assert tx.lift(z)[1 * 4 + 2] == 1 and tx.lift(z)[0] == 1


def test_extension_pairs():
    for n in (1, 2, 3):
        lam, x = regular_bimodules(unit_map(matrix_algebra(n)))
        v = decide_adjoint_pair(lam, x)
        assert v.yes and verify_frobenius_system(v.certificate, x, lam).ok
    # induction is always left adjoint to restriction; for T2 it is not also right adjoint
    lam, x = regular_bimodules(unit_map(upper_triangular_algebra(2)))
    assert decide_adjoint_pair(lam, x).yes
    assert decide_adjoint_pair(x, lam).no


def test_perturbed_system_fails():
    lam, x = regular_bimodules(unit_map(matrix_algebra(2)))
    sysm = decide_adjoint_pair(lam, x).certificate
    bad_z = (sysm.z[0] + 1,) + tuple(sysm.z[1:])
    assert not verify_frobenius_system(FrobeniusSystem(bad_z, sysm.omega), x, lam).ok
    bad_w = sysm.omega + Mat.from_entries(*sysm.omega.shape, {(0, 0): 1})
    assert not verify_frobenius_system(FrobeniusSystem(sysm.z, bad_w), x, lam).ok


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(YES_PAIRS))
def test_unit_and_counit_determine_each_other(item):
    _, lam, x = item
    sysm = decide_adjoint_pair(lam, x).certificate
    w = solve_counit(sysm.z, x, lam)
    assert w is not None and verify_frobenius_system(FrobeniusSystem(sysm.z, w), x, lam).ok
    z = solve_unit(sysm.omega, x, lam)
    assert z is not None and verify_frobenius_system(FrobeniusSystem(z, sysm.omega), x, lam).ok


@pytest.mark.parametrize("seed", range(4))
def test_verdicts_do_not_depend_on_seed(seed):
    lam, x = regular_bimodules(unit_map(matrix_algebra(3)))
    assert decide_adjoint_pair(lam, x, seed).yes
    lam, x = regular_bimodules(unit_map(upper_triangular_algebra(2)))
    assert decide_adjoint_pair(x, lam, seed).no


def test_mismatched_pair_rejected():
    lam, _ = regular_bimodules(unit_map(matrix_algebra(2)))
    with pytest.raises(MalformedQuery):
        decide_adjoint_pair(lam, lam)


def test_morita_contexts():
    c2 = cyclic_group_algebra(2)
    sigma = AlgebraMap(c2, c2, Mat.from_rows([[1, 0], [0, -1]]))
    for ctx in (trivial_context(c2), twist_context(c2, sigma), matrix_context(2), matrix_context(3)):
        assert check_morita_context(ctx).ok
        assert check_strict_morita(ctx)


def test_zero_pairings_form_a_non_strict_context():
    c2 = cyclic_group_algebra(2)
    reg = regular_bimodule(c2)
    dim = tensor_over(reg, reg).dim
    ctx = MoritaContext(c2, c2, reg, reg, Mat.zeros(2, dim), Mat.zeros(2, dim))
    assert not check_strict_morita(ctx)
    v = decide_second_kind(reg, reg, ctx, trivial_context(c2))
    assert v.no and v.reason == "non-strict-context"


def test_incompatible_pairings_rejected():
    c2 = cyclic_group_algebra(2)
    reg = regular_bimodule(c2)
    good = trivial_context(c2)
    with pytest.raises(ContextError):
        MoritaContext(c2, c2, reg, reg, good.f, Mat.zeros(2, good.g.ncols))


def test_c2_second_kind_table():
    c2 = cyclic_group_algebra(2)
    sigma = AlgebraMap(c2, c2, Mat.from_rows([[1, 0], [0, -1]]))
    triv, tw = trivial_context(c2), twist_context(c2, sigma)
    reg = regular_bimodule(c2)
    table = {(u, w): decide_second_kind(reg, reg, cu, cw).outcome
             for u, cu in (("triv", triv), ("tw", tw)) for w, cw in (("triv", triv), ("tw", tw))}
    assert table == {("triv", "triv"): "CertifiedYes", ("triv", "tw"): "CertifiedNo",
                     ("tw", "triv"): "CertifiedNo", ("tw", "tw"): "CertifiedYes"}
    rtw = twist(reg, sigma, identity_map(c2))
    v = decide_second_kind(rtw, rtw, tw, tw)
    assert v.yes
    assert decide_second_kind(reg, rtw, triv, triv).reason.startswith("first-adjunction")


def test_ring_extension_verdicts():
    assert ring_extension_frobenius(unit_map(cyclic_group_algebra(3))).yes
    assert ring_extension_frobenius(unit_map(field_algebra())).yes
    v = ring_extension_frobenius(unit_map(upper_triangular_algebra(3)))
    assert v.no


def test_ring_extension_rejects_non_homomorphism():
    c2 = cyclic_group_algebra(2)
    bad = AlgebraMap(field_algebra(), c2, Mat.column((1, 1)))
    with pytest.raises(ValueError):
        ring_extension_frobenius(bad)
