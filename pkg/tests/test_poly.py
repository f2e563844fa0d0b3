import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superjac import (
    ContextMismatchError,
    Parity,
    SuperPolynomial,
    evaluate_at_point,
    is_unit,
    j_degree,
    parity_of,
    parse_poly,
    poly_add,
    poly_mul,
    reduce_mod_j,
)
from conftest import F3, F5, QQ, ring
from strategies import polys, ring_and_polys, rings


def P(text, m=2, n=3, field=QQ):
    return parse_poly(text, ring(m, n, field))


def sort_sign(indices):
    """Sign of the permutation sorting ``indices``; 0 on a repeated index."""
    if len(set(indices)) < len(indices):
        return 0
    swaps = sum(1 for a, b in itertools.combinations(indices, 2) if a > b)
    return -1 if swaps % 2 else 1


# -- worked examples -------------------------------------------------------


def test_add_cancels():
    assert poly_add(P("x1 + xi1"), P("-xi1")) == P("x1")


def test_add_zero_identity():
    p = P("x1^2 - 3*xi1*xi2")
    assert poly_add(P("0"), p) == p


def test_add_over_f3():
    assert P("xi1*xi2", field=F3) + P("xi1*xi2", field=F3) == P("2*xi1*xi2", field=F3)


def test_transposition_sign():
    assert poly_mul(P("xi2"), P("xi1")) == P("-xi1*xi2")


def test_odd_square():
    assert poly_mul(P("xi1"), P("xi1")).is_zero()


def test_cross_terms_cancel():
    assert poly_mul(P("x1 + xi1"), P("x1 - xi1")) == P("x1^2")


def test_sign_against_sort_oracle():
    assert poly_mul(P("xi1*xi3"), P("xi2")) == P("-xi1*xi2*xi3")
    assert sort_sign([1, 3, 2]) == -1


@pytest.mark.parametrize("left", [c for r in range(4) for c in itertools.combinations(range(1, 5), r)])
@pytest.mark.parametrize("right", [c for r in range(3) for c in itertools.combinations(range(1, 5), r)])
def test_monomial_signs_exhaustive(left, right):
    ctx = ring(0, 4)
    mono = lambda ks: SuperPolynomial(ctx, [([], list(ks), 1)])  # noqa: E731
    expected = sort_sign(list(left) + list(right))
    product = poly_mul(mono(left), mono(right))
    if expected == 0:
        assert product.is_zero()
    else:
        assert product == mono(sorted(left + right)).scale(expected)


@pytest.mark.parametrize(
    "text,parity",
    [("x1^2 + xi1*xi2", Parity.EVEN), ("xi1 + x1*xi2", Parity.ODD), ("x1 + xi1", Parity.MIXED), ("0", Parity.ZERO)],
)
def test_parity(text, parity):
    assert parity_of(P(text)) == parity


@pytest.mark.parametrize(
    "text,expected", [("x1 + xi1*xi2", "x1"), ("xi1", "0"), ("3 + x2^2 + x1*xi1", "3 + x2^2")]
)
def test_reduce_mod_j(text, expected):
    assert reduce_mod_j(P(text)) == P(expected)


@pytest.mark.parametrize("text,expected", [("x1", 0), ("x1*xi1 + xi1*xi2", 1), ("xi1*xi2*xi3", 3)])
def test_j_degree(text, expected):
    assert j_degree(P(text)) == expected


def test_j_degree_of_zero_is_infinite():
    assert j_degree(P("0")) == math.inf


def test_evaluate_at_point():
    p = P("x1^2 + x1*xi1*xi2", m=1, n=2)
    out = evaluate_at_point(p, [QQ.scalar(2)])
    assert out.ctx.m == 0
    assert out == parse_poly("4 + 2*xi1*xi2", out.ctx)
    assert evaluate_at_point(P("x1 - x1", m=1), [QQ.scalar(5)]).is_zero()


def test_evaluate_over_f3():
    p = P("1 + 3*x1^2", m=1, n=0, field=F3)
    out = evaluate_at_point(p, [F3.scalar(1)])
    assert out.constant_term() == F3.scalar(1)


@pytest.mark.parametrize("text,expected", [("2 + xi1*xi2", True), ("x1", False), ("xi1*xi2", False)])
def test_is_unit(text, expected):
    assert is_unit(P(text)) is expected


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        P("x1") + P("x1", field=F5)
    with pytest.raises(ContextMismatchError):
        P("x1") * P("x1", m=3)


def test_rational_coefficients():
    assert P("1/2*x1") * P("2/3*x1") == P("1/3*x1^2")
    assert P("x1").scale(Fraction(3, 4)) == P("3/4*x1")


def test_truncated_product():
    p, q = P("1 + x1 + x1*xi1"), P("1 + x2^2")
    assert p.mul_truncated(q, 2) == (p * q).truncate(2)


# -- properties -------------------------------------------------------------


@given(ring_and_polys(3))
def test_ring_laws(data):
    ctx, (p, q, r) = data
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p - p == ctx.zero()
    assert p * ctx.one() == p


@given(st.data())
def test_supercommutativity(data):
    ctx = data.draw(rings())
    a, b = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    p, q = data.draw(polys(ctx, parity=a)), data.draw(polys(ctx, parity=b))
    assert p * q == (-(q * p) if a and b else q * p)


@given(st.data())
def test_odd_elements_square_to_zero(data):
    ctx = data.draw(rings())
    p = data.draw(polys(ctx, parity=1))
    assert (p * p).is_zero()


@given(ring_and_polys(2))
def test_reduction_is_a_ring_map(data):
    _, (p, q) = data
    assert reduce_mod_j(p * q) == reduce_mod_j(p) * reduce_mod_j(q)
    assert reduce_mod_j(p + q) == reduce_mod_j(p) + reduce_mod_j(q)


@given(ring_and_polys(2))
def test_j_filtration_is_multiplicative(data):
    ctx, (p, q) = data
    pq = p * q
    if not pq.is_zero():
        assert j_degree(pq) >= j_degree(p) + j_degree(q)
    assert j_degree(p) == math.inf or j_degree(p) <= ctx.n


@settings(max_examples=50)
@given(st.data())
def test_odd_ideal_is_nilpotent(data):
    ctx = data.draw(rings(max_m=2, max_n=3))
    draws = [data.draw(polys(ctx, max_terms=3)) for _ in range(ctx.n + 1)]
    gens = [g - reduce_mod_j(g) for g in draws]  # n + 1 elements of J
    prod = ctx.one()
    for g in gens:
        prod = prod * g
    assert prod.is_zero()


@given(ring_and_polys(1))
def test_units_have_inverses_mod_nilpotents(data):
    ctx, (p,) = data
    c = reduce_mod_j(p)
    if is_unit(p):
        # p = c (1 + nilpotent); the geometric series terminates
        u = p * ctx.const(c.constant_term().inverse().value) - ctx.one()
        inv, term = ctx.one(), ctx.one()
        for _ in range(ctx.n):
            term = term * (-u)
            inv = inv + term
        assert (ctx.one() + u) * inv == ctx.one()


@given(ring_and_polys(1))
def test_hash_consistent_with_equality(data):
    ctx, (p,) = data
    q = SuperPolynomial(ctx, [(t.exponents, t.odd, c) for t, c in p.terms()]) if p.terms() else ctx.zero()
    assert q == p and hash(q) == hash(p)
