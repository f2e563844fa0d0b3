"""Constructive inversion of endomorphisms satisfying the super-Jacobian condition.

Pipeline for ``invert_full``::

    check_sj  ->  invert the classical part |phi|  ->  theta (linear part)
              ->  upsilon = theta^-1 o phi  ->  psi = upsilon^-1  ->  psi o theta^-1

theta sends x_i to the reduction f_i mod J and xi_k to sum_l C_kl(x) xi_l
(the xi-linear part of q_k).  upsilon then differs from the identity by
terms in J^2, and its inverse is the fixed point of
``psi(z) = z - psi(upsilon(z) - z)``, reached after at most n+1 rounds
because each round gains one power of J and J^{n+1} = 0.

Every ``Automorphism`` verdict is backed by exact two-sided verification.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from . import linalg
from .calculus import check_sj, d_dx, det_even
from .errors import InternalVerificationError, PreconditionError
from .fields import FieldSpec
from .morphism import (
    SuperEndomorphism,
    _Substitution,
    compose,
    identity_map,
    linear_parts,
    power,
)
from .poly import RingContext, SuperPolynomial, _add_into, j_degree

__all__ = [
    "Reason",
    "Certificate",
    "Automorphism",
    "NotAutomorphism",
    "Inconclusive",
    "InversionResult",
    "ThetaDecomposition",
    "UnipotentInverse",
    "UpsilonProbe",
    "invert_classical",
    "build_theta",
    "unipotent_invert",
    "invert_full",
    "probe_upsilon_power",
    "default_degree_bound",
    "DEFAULT_CEILING",
]

DEFAULT_CEILING = 64


class Reason(str, enum.Enum):
    SJ_EVEN_FAIL = "sjEvenFail"
    SJ_ODD_FAIL = "sjOddFail"
    EVEN_JACOBIAN_NOT_CONSTANT = "evenJacobianNotConstant"
    POINT_COLLISION = "pointCollision"


@dataclass(frozen=True)
class Certificate:
    even_inverse_degree: int
    unipotent_iterations: int
    verified_both_sides: bool


@dataclass(frozen=True)
class Automorphism:
    inverse: SuperEndomorphism
    certificate: Certificate
    verdict = "Automorphism"


@dataclass(frozen=True)
class NotAutomorphism:
    reason: Reason
    witness: tuple | None = None
    verdict = "NotAutomorphism"


@dataclass(frozen=True)
class Inconclusive:
    degree_bound_tried: int
    verdict = "Inconclusive"


InversionResult = Union[Automorphism, NotAutomorphism, Inconclusive]


def _classical_ctx(ctx: RingContext) -> RingContext:
    return RingContext(ctx.m, 0, ctx.field)


def _linear_map(ctx, matrix, shift=None) -> SuperEndomorphism:
    """x_i -> sum_j matrix[i][j] x_j (+ shift[i]) on raw field values."""
    f = ctx.field
    xs, _ = ctx.gens()
    images = []
    for i, row in enumerate(matrix):
        img: dict = {}
        for j, v in enumerate(row):
            _add_into(img, xs[j]._t, f, v)
        if shift is not None:
            _add_into(img, {0: shift[i]}, f)
        images.append(SuperPolynomial._raw(ctx, img))
    return SuperEndomorphism(ctx, images, [])


def _random_points(field: FieldSpec, m: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        if field.kind == "Fq":
            pts.append([field.from_tpoly([int(v) for v in rng.integers(0, field.p, field.degree)]) for _ in range(m)])
        else:
            pts.append([field.from_int(int(v)) for v in rng.integers(-1000, 1000, m)])
    return pts


def _eval(p: SuperPolynomial, point) -> object:
    f = p.field
    ctx = p.ctx
    total = f.zero
    for k, c in p._t.items():
        for a, e in zip(point, ctx.exponents(k)):
            if e:
                c = f.mul(c, f.pow(a, e))
        total = f.add(total, c)
    return total


def _points_agree(outer: SuperEndomorphism, inner: SuperEndomorphism, points) -> bool:
    """outer(inner(x)) == x at each point, evaluated numerically."""
    for pt in points:
        mid = [_eval(g, pt) for g in inner.fx]
        if [_eval(f, mid) for f in outer.fx] != list(pt):
            return False
    return True


def invert_classical(
    f: Sequence[SuperPolynomial], degree_bound: int
) -> tuple[SuperPolynomial, ...] | NotAutomorphism | Inconclusive:
    """Inverse of the polynomial map x -> f(x), searched among maps of degree <= degree_bound.

    ``f`` holds m classical polynomials of one context.  Returns the inverse
    images (in that context) on success, ``NotAutomorphism`` when the
    Jacobian determinant is not a nonzero constant, and ``Inconclusive``
    when no inverse of degree <= degree_bound exists.

    Normalising to F(x) = L^-1 (f(x) - f(0)) = x + H(x), with H of order >= 2,
    an inverse of degree <= D must equal the degree-D truncation of the
    formal inverse G = y - H(G), which is built one degree at a time.  A
    truncation is tried as a candidate whenever the next homogeneous
    component vanishes; candidates are screened at random points and then
    verified exactly on both sides.
    """
    if not f:
        raise PreconditionError("invert_classical needs m >= 1")
    src_ctx = f[0].ctx
    if len(f) != src_ctx.m or any(not p.is_classical() or p.ctx != src_ctx for p in f):
        raise PreconditionError("invert_classical needs m classical polynomials of one ring")
    ctx = _classical_ctx(src_ctx)
    field = ctx.field
    fmap = SuperEndomorphism(ctx, [p.recontext(ctx) for p in f], [])
    m = ctx.m

    jac = det_even([[d_dx(p, j) for j in range(1, m + 1)] for p in fmap.fx])
    if not (jac.is_constant() and not jac.is_zero()):
        return NotAutomorphism(Reason.EVEN_JACOBIAN_NOT_CONSTANT)

    const = [p.constant_term().value for p in fmap.fx]
    lin = [[p.coefficient(tuple(int(i == j) for i in range(m))).value for j in range(m)] for p in fmap.fx]
    lin_inv = linalg.inverse(field, lin)
    # F = L^-1 (f - c) = x + H;  if G inverts F then x -> G(L^-1 (x - c)) inverts f
    shifted = [p - ctx.const(field.scalar(c)) for p, c in zip(fmap.fx, const)]
    big_f = SuperEndomorphism(ctx, [_apply_linear(lin_inv, shifted, i, ctx) for i in range(m)], [])
    h = [p - x for p, x in zip(big_f.fx, ctx.gens()[0])]
    undo = _linear_map(ctx, lin_inv, [field.neg(v) for v in _matvec(field, lin_inv, const)])

    points = _random_points(field, m, 4, seed=degree_bound)
    g = list(ctx.gens()[0])
    bound = max(degree_bound, 1)
    for k in range(2, bound + 2):
        # degree-k part of H(G_{<k}); G_k is its negative
        sub = _TruncatedSubstitution(g, k)
        comp = [sub(hi).homogeneous_part(k) for hi in h]
        if all(c.is_zero() for c in comp):
            candidate = SuperEndomorphism(ctx, g, [])
            if _points_agree(big_f, candidate, points):
                inverse = compose(undo, candidate)
                if compose(fmap, inverse) == identity_map(ctx) and compose(inverse, fmap) == identity_map(ctx):
                    return tuple(p.recontext(src_ctx) for p in inverse.fx)
        if k <= bound:
            g = [gi - ci for gi, ci in zip(g, comp)]
    return Inconclusive(bound)


def _matvec(field, a, v):
    out = []
    for row in a:
        s = field.zero
        for x, y in zip(row, v):
            s = field.add(s, field.mul(x, y))
        out.append(s)
    return out


def _apply_linear(matrix, polys, i, ctx):
    acc: dict = {}
    for v, p in zip(matrix[i], polys):
        _add_into(acc, p._t, ctx.field, v)
    return SuperPolynomial._raw(ctx, acc)


class _TruncatedSubstitution:
    """x_i -> images[i], discarding everything above degree ``max_deg``."""

    def __init__(self, images, max_deg):
        self.images = images
        self.max_deg = max_deg
        self.ctx = images[0].ctx
        self._powers = {}

    def _power(self, i, e):
        pw = self._powers.get((i, e))
        if pw is None:
            pw = self.images[i] if e == 1 else self._power(i, e - 1).mul_truncated(self.images[i], self.max_deg)
            self._powers[(i, e)] = pw
        return pw

    def __call__(self, p):
        ctx = self.ctx
        acc: dict = {}
        for k, c in p._t.items():
            term = None
            for i, e in enumerate(ctx.exponents(k)):
                if e:
                    pw = self._power(i, e)
                    term = pw if term is None else term.mul_truncated(pw, self.max_deg)
            if term is None:
                term = ctx.one()
            _add_into(acc, term._t, ctx.field, c)
        return SuperPolynomial._raw(ctx, acc)


@dataclass(frozen=True)
class ThetaDecomposition:
    theta: SuperEndomorphism
    theta_inverse: SuperEndomorphism
    upsilon: SuperEndomorphism


def unipotent_shape_ok(upsilon: SuperEndomorphism) -> bool:
    """upsilon(x_i) - x_i in J^2 and upsilon(xi_k) - xi_k in J^3."""
    xs, xis = upsilon.ctx.gens()
    return all(j_degree(f - x) >= 2 for f, x in zip(upsilon.fx, xs)) and all(
        j_degree(q - xi) >= 3 for q, xi in zip(upsilon.fxi, xis)
    )


def _adjugate(matrix, ctx):
    size = len(matrix)
    adj = [[None] * size for _ in range(size)]
    for r in range(size):
        for c in range(size):
            minor = [[matrix[i][j] for j in range(size) if j != c] for i in range(size) if i != r]
            cof = det_even(minor, ctx)
            adj[c][r] = -cof if (r + c) % 2 else cof
    return adj


def build_theta(phi: SuperEndomorphism, even_inverse: Sequence[SuperPolynomial]) -> ThetaDecomposition:
    """Split phi = theta o upsilon given the inverse of its classical part.

    ``even_inverse`` must satisfy g(f mod J) = x.  The odd block C of theta
    is inverted through its adjugate; det C is a nonzero constant when phi
    passes the super-Jacobian check.
    """
    ctx = phi.ctx
    f = ctx.field
    lp = linear_parts(phi)
    xs, xis = ctx.gens()
    theta = SuperEndomorphism(
        ctx,
        lp.even_part,
        [sum((c * xi for c, xi in zip(row, xis) if not c.is_zero()), ctx.zero()) for row in lp.coeff_matrix],
    )
    if ctx.n:
        c_det = det_even(lp.coeff_matrix, ctx)
        if not (c_det.is_constant() and not c_det.is_zero()):
            raise PreconditionError("odd linear block has no constant nonzero determinant")
        scale = f.inv(c_det.constant_term().value)
        adj = _adjugate(lp.coeff_matrix, ctx)
        classical_g = SuperEndomorphism(ctx, even_inverse, xis)
        sub = _Substitution(classical_g)
        inv_rows = [[sub(e).scale(f.scalar(scale)) for e in row] for row in adj]
    else:
        inv_rows = []
    theta_inverse = SuperEndomorphism(
        ctx,
        even_inverse,
        [sum((c * xi for c, xi in zip(row, xis) if not c.is_zero()), ctx.zero()) for row in inv_rows],
    )
    upsilon = compose(theta_inverse, phi)
    if not unipotent_shape_ok(upsilon):
        raise InternalVerificationError("upsilon does not have unipotent shape")
    return ThetaDecomposition(theta, theta_inverse, upsilon)


class UnipotentInverse(NamedTuple):
    inverse: SuperEndomorphism
    iterations: int


def unipotent_invert(upsilon: SuperEndomorphism) -> UnipotentInverse:
    """Inverse of a unipotent endomorphism by filtration fixed-point iteration.

    With upsilon(z) = z + w_z, iterate psi(z) <- z - psi(w_z) from psi = id
    until it stops changing.  ``iterations`` counts the rounds run including
    the one that detected stabilisation; it never exceeds n + 1.
    """
    if not unipotent_shape_ok(upsilon):
        raise PreconditionError("upsilon must fix x mod J^2 and xi mod J^3")
    ctx = upsilon.ctx
    ident = identity_map(ctx)
    gens = ident.images()
    deviations = [img - z for img, z in zip(upsilon.images(), gens)]
    psi = ident
    limit = ctx.n + 1
    for it in range(1, limit + 1):
        sub = _Substitution(psi)
        images = [z - sub(w) for z, w in zip(gens, deviations)]
        nxt = SuperEndomorphism(ctx, images[: ctx.m], images[ctx.m :])
        if nxt == psi:
            break
        psi = nxt
    else:
        raise InternalVerificationError(f"fixed-point iteration did not stabilise within {limit} rounds")
    if compose(psi, upsilon) != ident or compose(upsilon, psi) != ident:
        raise InternalVerificationError("unipotent inverse failed verification")
    return UnipotentInverse(psi, it)


def default_degree_bound(phi: SuperEndomorphism, ceiling: int = DEFAULT_CEILING) -> int:
    """(largest degree of the classical part)^(m-1), capped at ``ceiling``."""
    ctx = phi.ctx
    if ctx.m == 0:
        return 0
    deg = max(max(lp.total_degree() for lp in linear_parts(phi).even_part), 1)
    bound = 1
    for _ in range(ctx.m - 1):
        bound *= deg
        if bound >= ceiling:
            return ceiling
    return min(bound, ceiling)


def invert_full(
    phi: SuperEndomorphism,
    degree_bound: int | None = None,
    ceiling: int = DEFAULT_CEILING,
    prefilter: FieldSpec | None = None,
    enumeration_ceiling: int | None = None,
) -> InversionResult:
    """Decide whether phi is an automorphism and, if so, return its verified inverse.

    ``prefilter`` names a finite field containing phi's field; when given,
    the classical point map is first checked for collisions over it.
    """
    ctx = phi.ctx
    verdict = check_sj(phi)
    if not verdict.even_ok:
        return NotAutomorphism(Reason.SJ_EVEN_FAIL)
    if not verdict.odd_ok:
        return NotAutomorphism(Reason.SJ_ODD_FAIL)
    if prefilter is not None:
        from .pointcheck import DEFAULT_ENUMERATION_CEILING, Collision, exhaustive_bijectivity

        res = exhaustive_bijectivity(phi, enumeration_ceiling or DEFAULT_ENUMERATION_CEILING, field=prefilter)
        if isinstance(res, Collision):
            return NotAutomorphism(Reason.POINT_COLLISION, (res.first, res.second))

    bound = degree_bound if degree_bound is not None else default_degree_bound(phi, ceiling)
    lp = linear_parts(phi)
    if ctx.m:
        g = invert_classical(lp.even_part, bound)
        if not isinstance(g, tuple):
            return g
    else:
        g = ()
    decomposition = build_theta(phi, g)
    psi, iterations = unipotent_invert(decomposition.upsilon)
    inverse = compose(psi, decomposition.theta_inverse)
    ident = identity_map(ctx)
    if compose(phi, inverse) != ident or compose(inverse, phi) != ident:
        raise InternalVerificationError("inverse failed two-sided verification")
    degree = max((p.total_degree() for p in g), default=0)
    return Automorphism(inverse, Certificate(degree, iterations, True))


@dataclass(frozen=True)
class UpsilonProbe:
    holds: bool
    power: int
    characteristic: int


def probe_upsilon_power(upsilon: SuperEndomorphism) -> UpsilonProbe:
    """Test whether upsilon^(n+1) is the identity for a unipotent upsilon."""
    if not unipotent_shape_ok(upsilon):
        raise PreconditionError("upsilon must fix x mod J^2 and xi mod J^3")
    k = upsilon.ctx.n + 1
    return UpsilonProbe(
        power(upsilon, k) == identity_map(upsilon.ctx), k, upsilon.ctx.field.characteristic
    )
