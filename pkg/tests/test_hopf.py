import pytest
import sympy

from frobpair.algebra import unit_map
from frobpair.bimodule import regular_bimodules
from frobpair.exactla import Mat, inverse, kron
from frobpair.frobenius import adjunction_triangles, verify_frobenius_system
from frobpair.hopf import (FDHopf, all_integral_dims, casimir_sections, check_hopf, corpus,
                           cross_check_extension, cyclic_group_hopf, dual_hopf, fundamental_iso_alpha,
                           hopf_frobenius_verdict, integral_space, sweedler_h4, verify_integral_dims)

CORPUS = corpus()
NAMES = sorted(CORPUS)


def _sympy_integral_dim(h, side):
    """Kernel of (L_a - eps(a)) stacked over a, via sympy."""
    n = h.dim
    A = h.algebra
    mults = A.left_mult if side == "left" else A.right_mult
    blocks = [sympy.Matrix(mults[a].to_lists()) - h.counit[a] * sympy.eye(n) for a in range(n)]
    return n - sympy.Matrix.vstack(*blocks).rank()


@pytest.mark.parametrize("name", NAMES)
def test_corpus_satisfies_hopf_axioms(name):
    assert check_hopf(CORPUS[name]).ok


def test_broken_antipode_detected():
    h = sweedler_h4()
    bad = FDHopf(h.algebra, h.comul, h.counit, Mat.identity(4))
    rep = check_hopf(bad)
    assert not rep.ok and any("antipode" in f for f in rep.failures)


def test_h4_is_neither_commutative_nor_cocommutative():
    h = sweedler_h4()
    A = h.algebra
    g, x = A.basis_vector(1), A.basis_vector(2)
    assert A.product(g, x) != A.product(x, g)
    swap = Mat.from_entries(16, 16, {(j * 4 + i, i * 4 + j): 1 for i in range(4) for j in range(4)})
    assert swap @ h.comul != h.comul


def test_h4_antipode_has_order_four():
    S = sweedler_h4().antipode
    s2 = S @ S
    assert not s2.is_identity()
    assert (s2 @ s2).is_identity()


def test_h4_integrals():
    h = sweedler_h4()
    # x + gx is a left integral and gx - x a right one (direct multiplication)
    assert integral_space(h, "H", "left").space.vectors() == [(0, 0, 1, 1)]
    assert integral_space(h, "H", "right").space.vectors() == [(0, 0, -1, 1)]
    # on H*: the functionals dual to gx and x
    assert integral_space(h, "H_dual", "left").space.vectors() == [(0, 0, 0, 1)]
    assert integral_space(h, "H_dual", "right").space.vectors() == [(0, 0, 1, 0)]


def test_group_integral_is_the_sum_of_group_elements():
    for n in range(1, 5):
        h = cyclic_group_hopf(n)
        for side in ("left", "right"):
            assert integral_space(h, "H", side).space.vectors() == [(1,) * n]


@pytest.mark.parametrize("name", NAMES)
def test_integral_dimensions_match_sympy(name):
    h = CORPUS[name]
    dims = all_integral_dims(h)
    assert dims[("H", "left")] == _sympy_integral_dim(h, "left") == 1
    assert dims[("H", "right")] == _sympy_integral_dim(h, "right") == 1
    hd = dual_hopf(h)
    assert dims[("H_dual", "left")] == _sympy_integral_dim(hd, "left") == 1
    assert verify_integral_dims(h).ok


def test_integral_space_rejects_bad_arguments():
    with pytest.raises(ValueError):
        integral_space(sweedler_h4(), "H", "middle")


@pytest.mark.parametrize("name", NAMES)
def test_dual_of_dual_has_the_same_tables(name):
    h = CORPUS[name]
    dd = dual_hopf(dual_hopf(h))
    assert dd.comul == h.comul and dd.algebra.mul == h.algebra.mul and dd.antipode == h.antipode


@pytest.mark.parametrize("name", NAMES)
def test_alpha_is_a_linear_isomorphism(name):
    h = CORPUS[name]
    rep = fundamental_iso_alpha(h)
    assert rep.ok, rep.report
    assert inverse(rep.matrix) is not None


@pytest.mark.parametrize("name", NAMES)
def test_casimir_sections_split(name):
    h = CORPUS[name]
    rep = casimir_sections(h)
    assert rep.ok, rep.report
    for t in integral_space(h, "H", "left").space.vectors():
        assert rep.p @ (rep.i @ t) == t
    for t in integral_space(h, "H", "right").space.vectors():
        assert rep.p_prime @ (rep.i_prime @ t) == t


def test_h4_casimir_element():
    h = sweedler_h4()
    rep = casimir_sections(h)
    t = (0, 0, 1, 1)
    z = rep.i @ t
    # t1 (x) S(t2) for t = x + gx, expanded by hand
    expected = [0] * 16
    for (a, b), c in {(2, 0): 1, (1, 3): -1, (3, 1): 1, (0, 2): 1}.items():
        expected[a * 4 + b] += c
    assert list(z) == expected
    assert rep.centralizer.contains(z)


@pytest.mark.parametrize("name", NAMES)
def test_hopf_frobenius_system(name):
    h = CORPUS[name]
    v = hopf_frobenius_verdict(h)
    assert v.yes
    lam_ext, x_ext = regular_bimodules(unit_map(h.algebra))
    assert verify_frobenius_system(v.certificate, lam_ext, x_ext).ok
    assert adjunction_triangles(v.certificate, lam_ext, x_ext).ok
    a, b = cross_check_extension(h)
    assert a.outcome == b.outcome


def test_casimir_is_built_from_comultiplication():
    h = sweedler_h4()
    t = integral_space(h, "H", "left").space.vectors()[0]
    z = kron(Mat.identity(4), h.antipode) @ h.comul @ t
    assert z == casimir_sections(h).i @ t
