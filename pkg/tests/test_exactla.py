from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from frobpair.exactla import (Mat, Q, Subspace, det, inverse, kernel_basis, kron, kron_vec, rank,
                              rref, solve_linear, subspace_intersection, subspace_sum, unvec, vec)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return Mat.from_rows([[draw(small) for _ in range(c)] for _ in range(r)])


@st.composite
def square(draw, max_dim=4):
    n = draw(st.integers(1, max_dim))
    return Mat.from_rows([[draw(small) for _ in range(n)] for _ in range(n)])


def test_scalars_are_canonical():
    assert Q(Fraction(4, 2)) == 2 and type(Q(Fraction(4, 2))) is int
    assert Q(Fraction(1, 3)) == Fraction(1, 3)


def test_matrix_product_and_transpose():
    a = Mat.from_rows([[1, 2], [3, 4]])
    b = Mat.from_rows([[0, 1], [1, 0]])
    assert (a @ b).to_lists() == [[2, 1], [4, 3]]
    assert a.T.to_lists() == [[1, 3], [2, 4]]
    assert a @ (1, 1) == (3, 7)


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).dim == m.ncols
    assert rank(m) == sympy.Matrix(m.to_lists()).rank()
    for v in kernel_basis(m).vectors():
        assert all(x == 0 for x in m @ v)


@given(matrices())
def test_rref_matches_sympy(m):
    r, piv = rref(m)
    sr, spiv = sympy.Matrix(m.to_lists()).rref()
    assert list(piv) == list(spiv)
    assert [[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in row]
            for row in r.to_lists()[:len(piv)]] == sr.tolist()[:len(piv)]


@given(square())
def test_det_and_inverse(m):
    d = det(m)
    assert d == sympy.Matrix(m.to_lists()).det()
    inv = inverse(m)
    if d == 0:
        assert inv is None
    else:
        assert (m @ inv).is_identity() and (inv @ m).is_identity()


@given(matrices(), st.data())
def test_solve_linear_finds_preimages(m, data):
    x = [data.draw(small) for _ in range(m.ncols)]
    b = m @ x
    sol = solve_linear(m, b)
    assert sol is not None and m @ sol == b


def test_solve_linear_reports_inconsistency():
    m = Mat.from_rows([[1, 1], [2, 2]])
    assert solve_linear(m, (1, 3)) is None


@given(matrices(3), matrices(3))
def test_kron_mixed_product(a, b):
    u = tuple(range(1, a.ncols + 1))
    v = tuple(range(2, b.ncols + 2))
    assert kron(a, b) @ kron_vec(u, v) == kron_vec(a @ u, b @ v)


@given(matrices())
def test_vec_round_trip(m):
    assert unvec(vec(m), m.nrows, m.ncols) == m


def test_subspace_operations():
    a = Subspace.span(3, [(1, 0, 0), (0, 1, 0)])
    b = Subspace.span(3, [(0, 1, 0), (0, 0, 1)])
    assert subspace_intersection(a, b).dim == 1
    assert subspace_sum(a, b).dim == 3
    assert a.contains((2, -1, 0)) and not a.contains((0, 0, 1))
    assert a.element(a.coordinates((3, 5, 0))) == (3, 5, 0)


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_span_dimension_is_rank(vectors):
    assert Subspace.span(3, vectors).dim == sympy.Matrix(vectors).rank()
