import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fundeg.degree import fundeg
from fundeg.errors import CapExceeded, GroupMismatchError, ParseError
from fundeg.groups import FiniteAbelianGroup
from fundeg.rings_nc import (
    Const,
    NcPolyExpression,
    Var,
    nc_degree,
    nc_evaluate,
    nc_induced_function,
    nc_parse,
    ring_make_mat,
    ring_make_zn,
    ring_parse,
)

M2Z2 = ring_make_mat(2, 2)

MATRIX_WORD_G = (
    "5 x1 [[1,-2],[3,5]] x1 x2 [[1,0],[0,1]] x2"
    " + 0 x1 x1 x2 x3 [[1,0],[0,-1]] x7"
    " + 2 x1 [[2,8],[7,6]]"
)


def test_matrix_ring_basics():
    assert M2Z2.order == 16
    assert M2Z2.additive_group == FiniteAbelianGroup((2, 2, 2, 2))
    assert ring_make_zn(9).additive_group == FiniteAbelianGroup((9,))
    assert M2Z2.kind == "Mat" and ring_make_zn(9).kind == "Zn"


def test_m2z2_noncommutative_by_search():
    els = M2Z2.elements()
    pairs = [(a, b) for a in els for b in els if M2Z2.mul(a, b) != M2Z2.mul(b, a)]
    assert pairs
    assert not M2Z2.is_commutative()
    assert ring_make_zn(8).is_commutative()


@pytest.mark.parametrize("R", [ring_make_zn(2), ring_make_zn(6), ring_make_zn(9), ring_make_mat(2, 2),
                               ring_make_mat(2, 3), ring_make_mat(1, 5)])
def test_ring_axioms(R):
    assert R.check_axioms()


def test_ring_size_errors():
    with pytest.raises(CapExceeded):
        ring_make_mat(3, 4)  # 4^9 elements
    with pytest.raises(ValueError):
        ring_make_zn(1)


@pytest.mark.parametrize("spec,ring", [("Z9", ring_make_zn(9)), ("M2(Z2)", M2Z2), ("m3(z2)", ring_make_mat(3, 2))])
def test_ring_parse(spec, ring):
    assert ring_parse(spec) == ring


@pytest.mark.parametrize("bad", ["Z", "M2", "M2(Z1)", "Q3", "M0(Z2)"])
def test_ring_parse_rejects(bad):
    with pytest.raises((ParseError, ValueError)):
        ring_parse(bad)


def test_matrix_example_degree():
    g = nc_parse(MATRIX_WORD_G)
    assert g.nvars == 7
    assert nc_degree(g) == 4
    # the zero-coefficient word is dropped, its length does not count
    assert all(len(w) < 7 for w in g.terms)


def test_matrix_example_induced_form():
    # over M2(Z3) the expression collapses to 5 x1 A x1 x2^2 + 2 x1 B
    R = ring_make_mat(2, 3)
    g = nc_parse(MATRIX_WORD_G, ring=R)
    short = nc_parse("5 x1 [[1,-2],[3,5]] x1 x2 x2 + 2 x1 [[2,8],[7,6]]", nvars=7, ring=R)
    rng = np.random.default_rng(0)
    els = R.elements()
    for _ in range(200):
        pt = [els[int(i)] for i in rng.integers(0, len(els), size=7)]
        assert nc_evaluate(g, R, pt) == nc_evaluate(short, R, pt)


def test_degree_zero_cases():
    assert nc_degree(NcPolyExpression(2)) == 0
    assert nc_degree(nc_parse("0 x1")) == 0
    assert nc_degree(nc_parse("[[1,0],[0,1]]")) == 0
    assert nc_degree(nc_parse("3")) == 0


def test_constant_words_are_not_merged():
    f = nc_parse("2 3 + 6", ring=ring_make_zn(7))
    assert len(f.terms) == 2
    assert nc_evaluate(f, ring_make_zn(7), []) == ring_make_zn(7).element(5)


@pytest.mark.parametrize("text,n,point,value", [
    ("x1 x1", 4, [2], 0),
    ("2*x1", 4, [1], 2),
    ("x1 x2 - x2 x1", 5, [2, 3], 0),
    ("3 x1 x1 x1 + 1", 9, [2], 7),
])
def test_evaluate_examples(text, n, point, value):
    R = ring_make_zn(n)
    assert nc_evaluate(nc_parse(text), R, point) == R.element(value)


def test_evaluate_errors():
    f = nc_parse("x1 [[1,0],[0,1]]")
    with pytest.raises(GroupMismatchError):
        nc_evaluate(f, ring_make_zn(4), [1])
    with pytest.raises(ValueError):
        nc_evaluate(nc_parse("x1 x2"), ring_make_zn(4), [1])
    with pytest.raises(GroupMismatchError):
        nc_evaluate(nc_parse("x1", ring=ring_make_zn(4)), ring_make_zn(8), [1])


@pytest.mark.parametrize("bad", ["", "x1 +", "[[1,2]", "x0", "x1 ** x2", "[[1,2],[3]]"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        nc_parse(bad, ring=M2Z2)


def test_parse_respects_factor_order():
    f = nc_parse("x1 [[0,1],[0,0]] x2", ring=M2Z2)
    g = nc_parse("x2 [[0,1],[0,0]] x1", ring=M2Z2)
    assert f != g
    (word,) = f.terms
    assert word == (Var(1), Const(((0, 1), (0, 0))), Var(2))


def _word(draw, R, nvars, max_deg):
    nv = draw(st.integers(0, max_deg))
    letters = [Var(draw(st.integers(1, nvars))) for _ in range(nv)]
    for _ in range(draw(st.integers(0 if nv else 1, 2))):
        c = R.elements()[draw(st.integers(0, R.order - 1))]
        value = c.coords[0] if not R.k else tuple(tuple(c.coords[i * R.k:(i + 1) * R.k]) for i in range(R.k))
        letters.insert(draw(st.integers(0, len(letters))), Const(value))
    return tuple(letters)


@st.composite
def expressions(draw, R, nvars, max_deg=3):
    terms = [(_word(draw, R, nvars, max_deg), draw(st.integers(-20, 20))) for _ in range(draw(st.integers(0, 3)))]
    return NcPolyExpression(nvars, terms, R)


RINGS = [ring_make_zn(4), ring_make_zn(8), ring_make_zn(9), M2Z2]


@pytest.mark.parametrize("R", RINGS, ids=str)
@settings(max_examples=50)
@given(data=st.data())
def test_degree_bounds_fundeg(R, data):
    nvars = data.draw(st.integers(1, 2))
    f = data.draw(expressions(R, nvars))
    assert fundeg(nc_induced_function(f, R)) <= nc_degree(f)


@pytest.mark.parametrize("R", RINGS + [ring_make_mat(2, 3)], ids=str)
@settings(max_examples=30)
@given(data=st.data())
def test_concatenation_is_product(R, data):
    u = NcPolyExpression(2, {_word(data.draw, R, 2, 2): 1}, R)
    v = NcPolyExpression(2, {_word(data.draw, R, 2, 2): 1}, R)
    els = R.elements()
    pt = [els[data.draw(st.integers(0, R.order - 1))] for _ in range(2)]
    assert nc_evaluate(u * v, R, pt) == R.mul(nc_evaluate(u, R, pt), nc_evaluate(v, R, pt))


@pytest.mark.parametrize("R,nvars", [(ring_make_zn(4), 2), (ring_make_zn(9), 2), (M2Z2, 2), (ring_make_zn(5), 3)], ids=str)
@settings(max_examples=10)
@given(data=st.data())
def test_induced_matches_pointwise(R, nvars, data):
    f = data.draw(expressions(R, nvars))
    ind = nc_induced_function(f, R)
    d = R.dim
    for r, x in enumerate(ind.domain):
        pt = [R.additive_group(x.coords[i * d:(i + 1) * d]) for i in range(nvars)]
        assert tuple(ind.table[r]) == nc_evaluate(f, R, pt).coords


def test_coefficients_reduced_and_rendered():
    R = ring_make_zn(4)
    f = nc_parse("6 x1 + 4 x2", ring=R)
    assert f.terms == {(Var(1),): 2}
    assert nc_parse(f.render(), nvars=2, ring=R) == f
    g = nc_parse("x1 [[1,1],[0,1]] - [[0,1],[1,0]]", ring=M2Z2)
    assert nc_parse(g.render(), nvars=1, ring=M2Z2) == g
