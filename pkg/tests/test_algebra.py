import pytest
from hypothesis import given, strategies as st

from frobpair.algebra import (AlgebraError, AlgebraMap, FDAlgebra, build_standard, check_algebra,
                              check_algebra_map, cyclic_group_algebra, dual_numbers, field_algebra,
                              identity_map, inner_automorphism, matrix_algebra, opposite_algebra,
                              product_algebra, unit_map, upper_triangular_algebra)
from frobpair.exactla import Mat

STANDARD = [field_algebra(), matrix_algebra(2), matrix_algebra(3), cyclic_group_algebra(3),
            cyclic_group_algebra(4), upper_triangular_algebra(2), upper_triangular_algebra(3),
            dual_numbers(), product_algebra(field_algebra(), dual_numbers())]


@pytest.mark.parametrize("a", STANDARD, ids=repr)
def test_standard_algebras_are_valid(a):
    assert check_algebra(a).ok
    for i in range(a.dim):
        e = a.basis_vector(i)
        assert a.product(a.unit, e) == e == a.product(e, a.unit)


def test_dimensions():
    assert [a.dim for a in STANDARD] == [1, 4, 9, 3, 4, 3, 6, 2, 3]


def test_matrix_units_multiply():
    m = matrix_algebra(2)
    e = {n: m.basis_vector(m.basis_index(n)) for n in m.basis_names}
    names = m.basis_names
    # e_ij e_jk = e_ik, e_ij e_kl = 0 for j != k
    assert m.product(e[names[1]], e[names[2]]) == e[names[0]]
    assert not any(m.product(e[names[1]], e[names[1]]))


def test_non_associative_table_rejected():
    # basis u, a, b with unit u; a*a = b, a*b = b, b*a = 0, so (aa)a != a(aa)
    u, a, b = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    table = {(0, 0): u, (0, 1): a, (1, 0): a, (0, 2): b, (2, 0): b, (1, 1): b, (1, 2): b}
    with pytest.raises(AlgebraError):
        FDAlgebra.from_table(("u", "a", "b"), table, (1, 0, 0))


@pytest.mark.parametrize("a", STANDARD, ids=repr)
def test_opposite_is_an_involution(a):
    op = opposite_algebra(a)
    assert check_algebra(op).ok
    assert opposite_algebra(op) == a


def test_opposite_of_commutative_is_itself():
    assert opposite_algebra(cyclic_group_algebra(3)) == cyclic_group_algebra(3)
    assert opposite_algebra(upper_triangular_algebra(2)) != upper_triangular_algebra(2)


@pytest.mark.parametrize("a", STANDARD, ids=repr)
def test_unit_and_identity_maps(a):
    assert check_algebra_map(unit_map(a)).ok
    assert check_algebra_map(identity_map(a)).ok


def test_bad_map_detected():
    c2 = cyclic_group_algebra(2)
    # g -> 2g is not multiplicative
    f = AlgebraMap(c2, c2, Mat.from_rows([[1, 0], [0, 2]]))
    assert not check_algebra_map(f).ok


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_inner_automorphisms_of_m2(a, b, c):
    m = matrix_algebra(2)
    u = (1 if a == 0 else a, b, 0, 1 if c == 0 else c)   # upper triangular, invertible
    f = inner_automorphism(m, u)
    assert check_algebra_map(f).ok
    assert f.compose(f.inverse()) == identity_map(m)


def test_inverse_elements():
    c3 = cyclic_group_algebra(3)
    x = (2, 1, 0)
    inv = c3.inverse_element(x)
    assert c3.product(x, inv) == c3.unit
    assert dual_numbers().inverse_element((0, 1)) is None


def test_build_standard():
    assert build_standard("matrix", 2) == matrix_algebra(2)
    assert build_standard("product", field_algebra(), field_algebra()).dim == 2
    with pytest.raises(ValueError):
        build_standard("quaternion")
