"""Super partial derivatives, block Jacobians and the super-Jacobian test.

Odd derivatives are left derivatives:
``d/dxi_k (xi_K) = (-1)^{#{j in K : j < k}} xi_{K - k}`` when k is in K.
Every statement checked downstream (Leibniz rule, invertibility of the
determinants mod J) is independent of that choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from . import linalg
from .errors import ContextMismatchError, ParityError
from .poly import Parity, SuperPolynomial, evaluate_at_point, parity_of, reduce_mod_j

if TYPE_CHECKING:
    from .morphism import SuperEndomorphism

__all__ = [
    "JacobianPair",
    "SJVerdict",
    "d_dx",
    "d_dxi",
    "jacobian_pair",
    "det_even",
    "check_sj",
    "tangent_check",
]

Matrix = tuple[tuple[SuperPolynomial, ...], ...]


def d_dx(p: SuperPolynomial, i: int) -> SuperPolynomial:
    """Partial derivative in the even variable x_i (1-based)."""
    ctx = p.ctx
    if not 1 <= i <= ctx.m:
        raise IndexError(f"even variable index {i} out of range 1..{ctx.m}")
    unit = [0] * ctx.m
    unit[i - 1] = 1
    step = ctx.encode(unit)
    f = ctx.field
    out = {}
    for k, c in p._t.items():
        e = ctx.exponents(k)[i - 1]
        if e:
            c = f.mul(c, f.from_int(e))
            if not f.is_zero(c):
                out[k - step] = c
    return SuperPolynomial._raw(ctx, out)


def d_dxi(p: SuperPolynomial, k: int) -> SuperPolynomial:
    """Left partial derivative in the odd variable xi_k (1-based)."""
    ctx = p.ctx
    if not 1 <= k <= ctx.n:
        raise IndexError(f"odd variable index {k} out of range 1..{ctx.n}")
    bit = 1 << (k - 1)
    below = bit - 1
    neg = ctx.field.neg
    out = {}
    for key, c in p._t.items():
        if key & bit:
            out[key - bit] = neg(c) if (key & below).bit_count() & 1 else c
    return SuperPolynomial._raw(ctx, out)


@dataclass(frozen=True)
class JacobianPair:
    jx: Matrix
    jxi: Matrix


def jacobian_pair(phi: SuperEndomorphism) -> JacobianPair:
    """``jx[i][j] = d f_i / d x_j`` and ``jxi[k][l] = d q_k / d xi_l`` (0-based positions)."""
    ctx = phi.ctx
    jx = tuple(tuple(d_dx(f, j) for j in range(1, ctx.m + 1)) for f in phi.fx)
    jxi = tuple(tuple(d_dxi(q, l) for l in range(1, ctx.n + 1)) for q in phi.fxi)
    return JacobianPair(jx, jxi)


def det_even(matrix: Sequence[Sequence[SuperPolynomial]], ctx=None) -> SuperPolynomial:
    """Determinant of a square matrix with even entries.

    Even elements commute, so the usual Laplace expansion is well defined.
    Minors of the bottom rows are memoised by their column set, which costs
    O(2^k k) products and no division.  ``ctx`` is needed only for 0x0 input.
    """
    size = len(matrix)
    if size == 0:
        if ctx is None:
            raise ValueError("context required for an empty matrix")
        return ctx.one()
    ctx = matrix[0][0].ctx
    for row in matrix:
        if len(row) != size:
            raise ValueError("matrix is not square")
        for entry in row:
            if entry.ctx != ctx:
                raise ContextMismatchError(f"{entry.ctx} vs {ctx}")
            if parity_of(entry) not in (Parity.EVEN, Parity.ZERO):
                raise ParityError("det_even needs even entries")
    # minors[S]: determinant of the last |S| rows restricted to columns S
    minors = {0: ctx.one()}
    for r in range(size - 1, -1, -1):
        nxt = {}
        row = matrix[r]
        for cols, minor in minors.items():
            if minor.is_zero():
                continue
            for j in range(size):
                bit = 1 << j
                if cols & bit or row[j].is_zero():
                    continue
                # sign of column j's position among cols | bit
                term = row[j] * minor
                if (cols & (bit - 1)).bit_count() & 1:
                    term = -term
                key = cols | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = nxt
    return minors.get((1 << size) - 1, ctx.zero())


@dataclass(frozen=True)
class SJVerdict:
    even_det: SuperPolynomial
    odd_det: SuperPolynomial
    even_det_mod_j: SuperPolynomial
    odd_det_mod_j: SuperPolynomial
    even_ok: bool
    odd_ok: bool

    @property
    def passed(self) -> bool:
        return self.even_ok and self.odd_ok


def _nonzero_constant(p: SuperPolynomial) -> bool:
    return p.is_constant() and not p.is_zero()


def check_sj(phi: SuperEndomorphism) -> SJVerdict:
    """Both block Jacobian determinants must lie in F^x + J."""
    jp = jacobian_pair(phi)
    even_det = det_even(jp.jx, phi.ctx)
    odd_det = det_even(jp.jxi, phi.ctx)
    even_red = reduce_mod_j(even_det)
    odd_red = reduce_mod_j(odd_det)
    return SJVerdict(
        even_det,
        odd_det,
        even_red,
        odd_red,
        _nonzero_constant(even_red),
        _nonzero_constant(odd_red),
    )


def tangent_check(phi: SuperEndomorphism, point: Sequence) -> bool:
    """Both Jacobian blocks, evaluated at ``point`` and reduced mod J, are invertible."""
    ctx = phi.ctx
    if len(point) != ctx.m:
        raise ContextMismatchError(f"point has {len(point)} coordinates, ring has m={ctx.m}")
    jp = jacobian_pair(phi)
    f = ctx.field
    for block in (jp.jx, jp.jxi):
        scalars = [[evaluate_at_point(e, point).constant_term().value for e in row] for row in block]
        if scalars and f.is_zero(linalg.det(f, scalars)):
            return False
    return True
