import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from superjac import (
    ParityError,
    SuperEndomorphism,
    check_sj,
    d_dx,
    d_dxi,
    det_even,
    identity_map,
    jacobian_pair,
    parse_map,
    parse_poly,
    reduce_mod_j,
    tangent_check,
)
from conftest import F3, F5, QQ, SQUARE_TEXT, ring
from oracles import same, to_sympy
from strategies import polys, rings


def P(text, m=2, n=3, field=QQ):
    return parse_poly(text, ring(m, n, field))


def lists(block):
    return [list(row) for row in block]


def matrix(rows, m=2, n=3, field=QQ):
    return [[P(e, m, n, field) for e in row] for row in rows]


@pytest.mark.parametrize(
    "text,i,expected,field",
    [("x1^2*xi1", 1, "2*x1*xi1", QQ), ("x1", 2, "0", QQ), ("x1^3", 1, "0", F3)],
)
def test_d_dx(text, i, expected, field):
    assert d_dx(P(text, field=field), i) == P(expected, field=field)


@pytest.mark.parametrize(
    "text,k,expected",
    [("xi1*xi2", 1, "xi2"), ("xi1*xi2", 2, "-xi1"), ("xi1*xi2*xi3", 2, "-xi1*xi3")],
)
def test_d_dxi(text, k, expected):
    assert d_dxi(P(text), k) == P(expected)


def test_d_dxi_leibniz_oracle():
    # d/dxi2 (xi1 * (xi2 xi3)) = 0 * xi2xi3 - xi1 * d/dxi2(xi2 xi3) = -xi1 xi3
    lhs = d_dxi(P("xi1") * P("xi2*xi3"), 2)
    rhs = d_dxi(P("xi1"), 2) * P("xi2*xi3") - P("xi1") * d_dxi(P("xi2*xi3"), 2)
    assert lhs == rhs == P("-xi1*xi3")


def test_index_out_of_range():
    with pytest.raises(IndexError):
        d_dx(P("x1"), 3)
    with pytest.raises(IndexError):
        d_dxi(P("x1"), 0)


def test_jacobian_a(endo_a):
    jp = jacobian_pair(endo_a)
    ctx = endo_a.ctx
    assert lists(jp.jx) == [[ctx.one()]]
    assert lists(jp.jxi) == [[ctx.one(), ctx.zero()], [ctx.zero(), ctx.one()]]


def test_jacobian_b(endo_b):
    jp = jacobian_pair(endo_b)
    assert lists(jp.jx) == matrix([["1", "2*x2"], ["0", "1"]], 2, 2)
    assert lists(jp.jxi) == matrix([["1", "x1"], ["0", "1"]], 2, 2)


def test_jacobian_identity():
    ctx = ring(3, 2)
    jp = jacobian_pair(identity_map(ctx))
    for block, size in ((jp.jx, 3), (jp.jxi, 2)):
        assert lists(block) == [[ctx.one() if r == c else ctx.zero() for c in range(size)] for r in range(size)]


def test_det_examples():
    assert det_even(matrix([["1", "x1"], ["0", "1"]])) == P("1")
    assert det_even(matrix([["xi1*xi2", "0"], ["0", "1"]])) == P("xi1*xi2")
    for k in range(5):
        ctx = ring(1, 1)
        ident = [[ctx.one() if r == c else ctx.zero() for c in range(k)] for r in range(k)]
        assert det_even(ident, ctx) == ctx.one()


def test_det_rejects_odd_entries():
    with pytest.raises(ParityError):
        det_even(matrix([["xi1", "0"], ["0", "1"]]))


def test_det_nilpotent_entries():
    # [[1 + xi1xi2, xi1xi3], [xi2xi3, 1]]: products of two even nilpotents overlap and vanish
    got = det_even(matrix([["1 + xi1*xi2", "xi1*xi3"], ["xi2*xi3", "1"]]))
    assert got == P("1 + xi1*xi2")


@pytest.mark.parametrize("field", [QQ, F5])
def test_det_matches_sympy_on_classical_matrices(field):
    ctx = ring(2, 0, field)
    rows = [["x1 + 1", "x2^2", "2"], ["x1*x2", "3", "x1"], ["1", "x2", "x1^2 + x2"]]
    m = [[parse_poly(e, ctx) for e in row] for row in rows]
    xs = sympy.symbols("x1:3")
    oracle = sympy.Matrix([[to_sympy(e)[0] for e in row] for row in m]).det()
    assert same(det_even(m), oracle, xs)


def test_check_sj_examples(endo_a, endo_b):
    for phi in (endo_a, endo_b, identity_map(ring(2, 2))):
        v = check_sj(phi)
        assert v.passed
        assert v.even_det == phi.ctx.one() and v.odd_det == phi.ctx.one()
    v = check_sj(parse_map(SQUARE_TEXT))
    assert not v.passed and not v.even_ok
    assert v.even_det_mod_j == parse_poly("2*x1", ring(1, 0))


def test_check_sj_odd_failure():
    phi = parse_map("ring m=1 n=2 field=Q\nx1 -> x1\nxi1 -> x1*xi1\nxi2 -> xi2\n")
    v = check_sj(phi)
    assert v.even_ok and not v.odd_ok


def test_tangent_examples(endo_a):
    sq = parse_map(SQUARE_TEXT)
    assert tangent_check(endo_a, [QQ.scalar(7)])
    assert not tangent_check(sq, [QQ.scalar(0)])
    assert tangent_check(sq, [QQ.scalar(1)])


# -- properties -------------------------------------------------------------


@given(st.data())
def test_leibniz(data):
    ctx = data.draw(rings())
    a = data.draw(st.integers(0, 1))
    p, q = data.draw(polys(ctx, parity=a)), data.draw(polys(ctx))
    for i in range(1, ctx.m + 1):
        assert d_dx(p * q, i) == d_dx(p, i) * q + p * d_dx(q, i)
    for k in range(1, ctx.n + 1):
        second = p * d_dxi(q, k)
        assert d_dxi(p * q, k) == d_dxi(p, k) * q + (-second if a else second)


@given(st.data())
def test_derivations_supercommute(data):
    ctx = data.draw(rings())
    p = data.draw(polys(ctx))
    for k, l in itertools.product(range(1, ctx.n + 1), repeat=2):
        assert d_dxi(d_dxi(p, k), l) == -d_dxi(d_dxi(p, l), k)
    for i, k in itertools.product(range(1, ctx.m + 1), range(1, ctx.n + 1)):
        assert d_dx(d_dxi(p, k), i) == d_dxi(d_dx(p, i), k)


@st.composite
def even_endomorphisms(draw, max_m=3, max_n=3, fields=(QQ, F5)):
    ctx = draw(rings(max_m=max_m, max_n=max_n, fields=list(fields)))
    fx = [draw(polys(ctx, max_terms=3, max_exp=2, parity=0)) for _ in range(ctx.m)]
    fxi = [draw(polys(ctx, max_terms=3, max_exp=2, parity=1)) for _ in range(ctx.n)]
    return SuperEndomorphism(ctx, fx, fxi)


@settings(max_examples=60, deadline=None)
@given(even_endomorphisms())
def test_reduced_determinant_is_classical_determinant(phi):
    v = check_sj(phi)
    ctx = phi.ctx
    xs = sympy.symbols(f"x1:{ctx.m + 1}")
    jx = jacobian_pair(phi).jx
    oracle = sympy.Matrix([[to_sympy(reduce_mod_j(e))[0] for e in row] for row in jx]).det() if ctx.m else 1
    assert same(reduce_mod_j(v.even_det), sympy.sympify(oracle), xs)


@settings(max_examples=60, deadline=None)
@given(even_endomorphisms(max_m=2, max_n=3))
def test_det_even_agrees_with_gaussian_elimination_mod_j(phi):
    jxi = jacobian_pair(phi).jxi
    ctx = phi.ctx
    reduced = [[reduce_mod_j(e) for e in row] for row in jxi]
    assert reduce_mod_j(det_even(jxi, ctx)) == det_even(reduced, ctx)
