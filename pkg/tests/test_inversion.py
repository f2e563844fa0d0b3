import pytest
from hypothesis import given, settings, strategies as st

from superjac import (
    Automorphism,
    Inconclusive,
    NotAutomorphism,
    PreconditionError,
    Reason,
    build_theta,
    compose,
    identity_map,
    invert_classical,
    invert_full,
    linear_parts,
    parse_map,
    parse_poly,
    probe_upsilon_power,
    random_tame,
    unipotent_invert,
)
from superjac.inversion import default_degree_bound
from conftest import F3, F5, F9, QQ, ring


def classical(texts, m, field=QQ):
    ctx = ring(m, 0, field)
    return [parse_poly(t, ctx) for t in texts]


def test_invert_classical_triangular():
    g = invert_classical(classical(["x1 + x2^2", "x2"], 2), 4)
    assert list(g) == classical(["x1 - x2^2", "x2"], 2)


def test_invert_classical_identity():
    f = classical(["x1", "x2", "x3"], 3)
    for bound in (0, 1, 5):
        assert list(invert_classical(f, bound)) == f


def test_invert_classical_affine_and_composite():
    f = classical(["2*x1 + x2 + 3", "x2 - 1"], 2)
    g = invert_classical(f, 1)
    assert list(g) == classical(["1/2*x1 - 1/2*x2 - 2", "x2 + 1"], 2)
    # (x1 + (x2 + x1^2)^2, x2 + x1^2): inverse has degree 4
    f = classical(["x1 + x2^2 + 2*x1^2*x2 + x1^4", "x2 + x1^2"], 2)
    assert isinstance(invert_classical(f, 3), Inconclusive)
    g = invert_classical(f, 4)
    assert list(g) == classical(["x1 - x2^2", "x2 - x1^2 + 2*x1*x2^2 - x2^4"], 2)


def test_invert_classical_trap():
    f = classical(["x1 + x1^3"], 1, F3)
    res = invert_classical(f, 27)
    assert isinstance(res, Inconclusive) and res.degree_bound_tried == 27


def test_invert_classical_singular_linear_part():
    res = invert_classical(classical(["x1^2"], 1), 4)
    assert isinstance(res, NotAutomorphism)


def test_build_theta_examples(endo_a, endo_b):
    ident_a = identity_map(endo_a.ctx)
    dec = build_theta(endo_a, [endo_a.ctx.x(1)])
    assert dec.theta == ident_a and dec.upsilon == endo_a
    g = [parse_poly("x1 - x2^2", endo_b.ctx), endo_b.ctx.x(2)]
    dec = build_theta(endo_b, g)
    assert dec.theta == endo_b
    assert dec.upsilon == identity_map(endo_b.ctx)
    assert compose(dec.theta, dec.theta_inverse) == identity_map(endo_b.ctx)
    dec = build_theta(ident_a, [endo_a.ctx.x(1)])
    assert dec.theta == dec.upsilon == ident_a


def test_unipotent_examples(endo_a):
    psi, it = unipotent_invert(endo_a)
    assert psi.fx[0] == parse_poly("x1 - xi1*xi2", endo_a.ctx) and it == 2
    psi, it = unipotent_invert(identity_map(ring(2, 2)))
    assert psi == identity_map(ring(2, 2)) and it == 1
    u = parse_map("ring m=1 n=4 field=Q\nx1 -> x1 + xi1*xi2 + xi1*xi2*xi3*xi4\n" + "".join(f"xi{k} -> xi{k}\n" for k in range(1, 5)))
    psi, it = unipotent_invert(u)
    assert psi.fx[0] == parse_poly("x1 - xi1*xi2 - xi1*xi2*xi3*xi4", u.ctx)
    assert compose(psi, u) == compose(u, psi) == identity_map(u.ctx)
    assert it <= 5


def test_unipotent_rejects_wrong_shape(endo_b):
    with pytest.raises(PreconditionError):
        unipotent_invert(endo_b)


def test_invert_full_a(endo_a):
    res = invert_full(endo_a)
    assert isinstance(res, Automorphism)
    expected = parse_map("ring m=1 n=2 field=Q\nx1 -> x1 - xi1*xi2\nxi1 -> xi1\nxi2 -> xi2\n")
    assert res.inverse == expected
    assert res.certificate.verified_both_sides


def test_invert_full_b(endo_b):
    res = invert_full(endo_b, degree_bound=8)
    expected = parse_map(
        "ring m=2 n=2 field=Q\nx1 -> x1 - x2^2\nx2 -> x2\nxi1 -> xi1 - x1*xi2 + x2^2*xi2\nxi2 -> xi2\n"
    )
    assert isinstance(res, Automorphism) and res.inverse == expected
    assert res.certificate.even_inverse_degree == 2


def test_invert_full_rejections(square):
    assert invert_full(square) == NotAutomorphism(Reason.SJ_EVEN_FAIL)
    phi = parse_map("ring m=1 n=2 field=Q\nx1 -> x1\nxi1 -> x1*xi1\nxi2 -> xi2\n")
    assert invert_full(phi) == NotAutomorphism(Reason.SJ_ODD_FAIL)


def test_invert_full_trap(trap):
    res = invert_full(trap)
    assert isinstance(res, Inconclusive)
    res = invert_full(trap, prefilter=F9)
    assert isinstance(res, NotAutomorphism) and res.reason == Reason.POINT_COLLISION
    first, second = res.witness
    assert (F9.format(first[0].value), F9.format(second[0].value)) == ("0", "t")


def test_default_degree_bound(endo_b, trap):
    assert default_degree_bound(endo_b) == 2
    assert default_degree_bound(trap) == 1
    phi = random_tame(ring(3, 1), 4, 3, 5)
    assert default_degree_bound(phi, ceiling=7) <= 7


def test_probe_examples(endo_a):
    probe = probe_upsilon_power(endo_a)
    assert (probe.holds, probe.power, probe.characteristic) == (False, 3, 0)
    a3 = parse_map("ring m=1 n=2 field=Fp:3\nx1 -> x1 + xi1*xi2\nxi1 -> xi1\nxi2 -> xi2\n")
    probe = probe_upsilon_power(a3)
    assert (probe.holds, probe.characteristic) == (True, 3)
    assert probe_upsilon_power(identity_map(ring(2, 2))).holds


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 3), st.integers(0, 3), st.integers(1, 6), st.integers(1, 3),
    st.sampled_from([QQ, F5]), st.integers(0, 10**6),
)
def test_roundtrip_random_tame(m, n, depth, degree, field, seed):
    ctx = ring(m, n, field)
    phi = random_tame(ctx, depth, degree, seed)
    res = invert_full(phi)
    assert isinstance(res, Automorphism)
    ident = identity_map(ctx)
    assert compose(phi, res.inverse) == ident == compose(res.inverse, phi)
    assert res.certificate.unipotent_iterations <= n + 1
    # the even inverse in the certificate inverts the classical part
    g = invert_classical(linear_parts(phi).even_part, res.certificate.even_inverse_degree)
    assert isinstance(g, tuple)
