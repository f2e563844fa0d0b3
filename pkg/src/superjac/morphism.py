"""Endomorphisms of R given by generator images, and tame generators.

An endomorphism sends x_i to an even f_i and xi_k to an odd q_k; it acts on
a monomial x^a xi_K as prod f_i^{a_i} * q_{k_1} ... q_{k_r} with K ascending.
``compose(phi, psi)`` is the algebra map ``p -> phi(psi(p))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .calculus import det_even
from .errors import ContextMismatchError, ParityError, PreconditionError
from .fields import Scalar
from .poly import Parity, RingContext, SuperPolynomial, _add_into, j_degree, parity_of, reduce_mod_j

__all__ = [
    "SuperEndomorphism",
    "LinearParts",
    "apply",
    "compose",
    "identity_map",
    "linear_parts",
    "make_elementary",
    "random_tame",
    "ELEMENTARY_KINDS",
]


@dataclass(frozen=True)
class SuperEndomorphism:
    ctx: RingContext
    fx: tuple[SuperPolynomial, ...]
    fxi: tuple[SuperPolynomial, ...]

    def __post_init__(self):
        fx, fxi = tuple(self.fx), tuple(self.fxi)
        object.__setattr__(self, "fx", fx)
        object.__setattr__(self, "fxi", fxi)
        if len(fx) != self.ctx.m or len(fxi) != self.ctx.n:
            raise ContextMismatchError(
                f"need {self.ctx.m} even and {self.ctx.n} odd images, got {len(fx)} and {len(fxi)}"
            )
        for i, f in enumerate(fx, 1):
            if f.ctx != self.ctx:
                raise ContextMismatchError(f"image of x{i} lives in {f.ctx}")
            if parity_of(f) not in (Parity.EVEN, Parity.ZERO):
                raise ParityError(f"image of x{i} must be even, got {parity_of(f).value}")
        for k, q in enumerate(fxi, 1):
            if q.ctx != self.ctx:
                raise ContextMismatchError(f"image of xi{k} lives in {q.ctx}")
            if parity_of(q) not in (Parity.ODD, Parity.ZERO):
                raise ParityError(f"image of xi{k} must be odd, got {parity_of(q).value}")

    def __call__(self, p: SuperPolynomial) -> SuperPolynomial:
        return apply(self, p)

    def __matmul__(self, other: SuperEndomorphism) -> SuperEndomorphism:
        return compose(self, other)

    def images(self) -> tuple[SuperPolynomial, ...]:
        return self.fx + self.fxi

    def recontext(self, ctx: RingContext) -> SuperEndomorphism:
        if (ctx.m, ctx.n) != (self.ctx.m, self.ctx.n):
            raise ContextMismatchError(f"cannot move a map on {self.ctx} to {ctx}")
        return SuperEndomorphism(ctx, [f.recontext(ctx) for f in self.fx], [q.recontext(ctx) for q in self.fxi])

    def __str__(self):
        from .textio import print_map

        return print_map(self)


class _Substitution:
    """Applies one endomorphism to many polynomials, caching monomial images."""

    def __init__(self, phi: SuperEndomorphism):
        self.phi = phi
        self.ctx = phi.ctx
        one = self.ctx.one()
        self._powers: dict = {}
        self._even: dict = {0: one}
        self._odd: dict = {0: one}

    def _power(self, i, e):
        key = (i, e)
        pw = self._powers.get(key)
        if pw is None:
            if e == 1:
                pw = self.phi.fx[i]
            else:
                half = self._power(i, e // 2)
                pw = half * half
                if e & 1:
                    pw = pw * self.phi.fx[i]
            self._powers[key] = pw
        return pw

    def even_image(self, key):
        img = self._even.get(key)
        if img is None:
            img = None
            for i, e in enumerate(self.ctx.exponents(key)):
                if e:
                    pw = self._power(i, e)
                    img = pw if img is None else img * pw
            self._even[key] = img
        return img

    def odd_image(self, mask):
        img = self._odd.get(mask)
        if img is None:
            top = mask.bit_length() - 1
            img = self.odd_image(mask ^ (1 << top)) * self.phi.fxi[top]
            self._odd[mask] = img
        return img

    def __call__(self, p: SuperPolynomial) -> SuperPolynomial:
        if p.ctx != self.ctx:
            raise ContextMismatchError(f"{p.ctx} vs {self.ctx}")
        field = self.ctx.field
        low = self.ctx.low_mask
        groups: dict = {}
        for k, c in p._t.items():
            mask = k & low
            groups.setdefault(mask, {})[k - mask] = c
        acc: dict = {}
        for mask, evens in groups.items():
            odd = self.odd_image(mask)
            if odd.is_zero():
                continue
            # sum the even images for this odd set first, then one product
            even_sum: dict = {}
            for ek, c in evens.items():
                _add_into(even_sum, self.even_image(ek)._t, field, c)
            if even_sum:
                prod = SuperPolynomial._raw(self.ctx, even_sum) * odd
                _add_into(acc, prod._t, field)
        return SuperPolynomial._raw(self.ctx, acc)


def apply(phi: SuperEndomorphism, p: SuperPolynomial) -> SuperPolynomial:
    return _Substitution(phi)(p)


def compose(phi: SuperEndomorphism, psi: SuperEndomorphism) -> SuperEndomorphism:
    """The endomorphism p -> phi(psi(p))."""
    if phi.ctx != psi.ctx:
        raise ContextMismatchError(f"{phi.ctx} vs {psi.ctx}")
    sub = _Substitution(phi)
    return SuperEndomorphism(phi.ctx, [sub(f) for f in psi.fx], [sub(q) for q in psi.fxi])


def identity_map(ctx: RingContext) -> SuperEndomorphism:
    xs, xis = ctx.gens()
    return SuperEndomorphism(ctx, xs, xis)


def power(phi: SuperEndomorphism, k: int) -> SuperEndomorphism:
    result = identity_map(phi.ctx)
    for _ in range(k):
        result = compose(phi, result)
    return result


@dataclass(frozen=True)
class LinearParts:
    """Reduction mod J of the even images, and the xi-linear coefficients of the odd ones.

    ``coeff_matrix[k][l]`` is the classical polynomial C_kl with
    q_k = sum_l C_kl xi_l + (terms of odd degree >= 3); ``const_matrix`` is C at x = 0.
    """

    even_part: tuple[SuperPolynomial, ...]
    coeff_matrix: tuple[tuple[SuperPolynomial, ...], ...]
    const_matrix: tuple[tuple[Scalar, ...], ...]

    @property
    def coefficients_constant(self) -> bool:
        """True when every C_kl is a constant, i.e. q_k = sum c_kl xi_l mod J^2 with c_kl in F."""
        return all(c.is_constant() for row in self.coeff_matrix for c in row)


def xi_linear_coefficients(q: SuperPolynomial) -> list[SuperPolynomial]:
    """[C_1, ..., C_n] with the xi-degree-1 part of q equal to sum_l C_l xi_l."""
    ctx = q.ctx
    low = ctx.low_mask
    cols: list[dict] = [{} for _ in range(ctx.n)]
    for k, c in q._t.items():
        mask = k & low
        if mask and not mask & (mask - 1):
            cols[mask.bit_length() - 1][k - mask] = c
    return [SuperPolynomial._raw(ctx, t) for t in cols]


def linear_parts(phi: SuperEndomorphism) -> LinearParts:
    even = tuple(reduce_mod_j(f) for f in phi.fx)
    coeff = tuple(tuple(xi_linear_coefficients(q)) for q in phi.fxi)
    const = tuple(tuple(c.constant_term() for c in row) for row in coeff)
    return LinearParts(even, coeff, const)


# -- elementary automorphisms ---------------------------------------------

ELEMENTARY_KINDS = ("even_linear", "even_triangular", "even_jshift", "odd_linear", "odd_shift")


def _as_poly(ctx, value) -> SuperPolynomial:
    if isinstance(value, SuperPolynomial):
        if value.ctx != ctx:
            raise ContextMismatchError(f"{value.ctx} vs {ctx}")
        return value
    if isinstance(value, str):
        from .textio import parse_poly

        return parse_poly(value, ctx)
    return ctx.const(value)


def make_elementary(ctx: RingContext, kind: str, **params) -> SuperEndomorphism:
    """One elementary automorphism; all generators not named are fixed.

    Kinds and parameters (indices are 1-based, polynomials may be given as text):

    * ``even_linear(matrix)``: x_i -> sum_j A_ij x_j, A invertible over F.
    * ``even_triangular(i, h)``: x_i -> x_i + h, h classical and free of x_i.
    * ``even_jshift(i, s)``: x_i -> x_i + s, s even with j_degree >= 2.
    * ``odd_linear(matrix)``: xi_k -> sum_l C_kl xi_l, C over F[x] with
      constant nonzero determinant.
    * ``odd_shift(k, w)``: xi_k -> xi_k + w, w odd with j_degree >= 3.
    """
    xs, xis = ctx.gens()
    fx, fxi = list(xs), list(xis)
    f = ctx.field
    if kind == "even_linear":
        a = [[f.coerce(v) for v in row] for row in params["matrix"]]
        if len(a) != ctx.m or any(len(row) != ctx.m for row in a):
            raise PreconditionError(f"even_linear needs an {ctx.m}x{ctx.m} matrix")
        if f.is_zero(linalg.det(f, a)):
            raise PreconditionError("even_linear matrix is singular")
        fx = []
        for row in a:
            img = {}
            for j, v in enumerate(row):
                _add_into(img, xs[j]._t, f, v)
            fx.append(SuperPolynomial._raw(ctx, img))
    elif kind in ("even_triangular", "even_jshift"):
        i = params["i"]
        if not 1 <= i <= ctx.m:
            raise PreconditionError(f"even variable index {i} out of range")
        h = _as_poly(ctx, params["h"] if kind == "even_triangular" else params["s"])
        if kind == "even_triangular":
            if not h.is_classical():
                raise PreconditionError("even_triangular shift must not involve odd variables")
            if h.involves_x(i):
                raise PreconditionError(f"even_triangular shift must not involve x{i}")
        elif parity_of(h) not in (Parity.EVEN, Parity.ZERO) or j_degree(h) < 2:
            raise PreconditionError("even_jshift shift must be even with j_degree >= 2")
        fx[i - 1] = xs[i - 1] + h
    elif kind == "odd_linear":
        rows = [[_as_poly(ctx, v) for v in row] for row in params["matrix"]]
        if len(rows) != ctx.n or any(len(row) != ctx.n for row in rows):
            raise PreconditionError(f"odd_linear needs an {ctx.n}x{ctx.n} matrix")
        if any(not e.is_classical() for row in rows for e in row):
            raise PreconditionError("odd_linear entries must be classical polynomials")
        d = det_even(rows, ctx)
        if not (d.is_constant() and not d.is_zero()):
            raise PreconditionError("odd_linear determinant is not a nonzero constant")
        fxi = []
        for row in rows:
            img = ctx.zero()
            for l, c in enumerate(row):
                if not c.is_zero():
                    img = img + c * xis[l]
            fxi.append(img)
    elif kind == "odd_shift":
        k = params["k"]
        if not 1 <= k <= ctx.n:
            raise PreconditionError(f"odd variable index {k} out of range")
        w = _as_poly(ctx, params["w"])
        if parity_of(w) not in (Parity.ODD, Parity.ZERO) or j_degree(w) < 3:
            raise PreconditionError("odd_shift term must be odd with j_degree >= 3")
        fxi[k - 1] = xis[k - 1] + w
    else:
        raise PreconditionError(f"unknown elementary kind {kind!r}")
    return SuperEndomorphism(ctx, fx, fxi)


# -- random tame automorphisms ---------------------------------------------

_POOL = (-2, -1, 1, 2)


def _feasible_kinds(ctx: RingContext) -> list[str]:
    kinds = []
    if ctx.m:
        kinds += ["even_linear", "even_triangular"]
        if ctx.n >= 2:
            kinds.append("even_jshift")
    if ctx.n:
        kinds.append("odd_linear")
        if ctx.n >= 3:
            kinds.append("odd_shift")
    return kinds


def _random_exponents(rng, m, deg, avoid=None):
    vars_ = [j for j in range(m) if j != avoid]
    exps = [0] * m
    for _ in range(deg):
        exps[vars_[rng.integers(len(vars_))]] += 1
    return exps


def _random_classical(rng, ctx, max_degree, avoid=None, min_degree=0):
    """Sparse classical polynomial: one or two monomials, optionally avoiding one variable."""
    free = ctx.m - (avoid is not None)
    terms = []
    for _ in range(int(rng.integers(1, 3))):
        deg = int(rng.integers(min_degree, max_degree + 1)) if free else 0
        exps = _random_exponents(rng, ctx.m, deg, avoid) if deg else [0] * ctx.m
        terms.append((exps, (), int(rng.choice(_POOL))))
    return SuperPolynomial(ctx, terms)


def _random_odd_set(rng, n, size):
    return sorted(int(k) + 1 for k in rng.choice(n, size=size, replace=False))


def _random_params(rng, ctx, kind, max_degree):
    f = ctx.field
    if kind == "even_linear":
        size = ctx.m
        perm = rng.permutation(size)
        lower = [[1 if i == j else (int(rng.choice(_POOL)) if j < i and rng.random() < 0.5 else 0)
                  for j in range(size)] for i in range(size)]
        upper = [[int(rng.choice(_POOL)) if i == j else (int(rng.choice(_POOL)) if j > i and rng.random() < 0.5 else 0)
                  for j in range(size)] for i in range(size)]
        raw = linalg.matmul(f, [[f.from_int(v) for v in row] for row in lower],
                            [[f.from_int(v) for v in row] for row in upper])
        return {"matrix": [raw[int(perm[i])] for i in range(size)]}
    if kind == "even_triangular":
        i = int(rng.integers(1, ctx.m + 1))
        return {"i": i, "h": _random_classical(rng, ctx, max_degree, avoid=i - 1, min_degree=1 if ctx.m > 1 else 0)}
    if kind == "even_jshift":
        i = int(rng.integers(1, ctx.m + 1))
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            size = 2 * int(rng.integers(1, ctx.n // 2 + 1))
            deg = int(rng.integers(0, max_degree + 1))
            terms.append((_random_exponents(rng, ctx.m, deg), _random_odd_set(rng, ctx.n, size), int(rng.choice(_POOL))))
        return {"i": i, "s": SuperPolynomial(ctx, terms)}
    if kind == "odd_linear":
        n = ctx.n
        perm = rng.permutation(n)
        rows = [[ctx.const(int(rng.choice(_POOL))) if perm[i] == j else ctx.zero() for j in range(n)] for i in range(n)]
        if n >= 2:
            a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
            # adding h * (row b) to row a keeps the determinant
            h = _random_classical(rng, ctx, max_degree)
            rows[a] = [rows[a][j] + h * rows[b][j] for j in range(n)]
        return {"matrix": rows}
    if kind == "odd_shift":
        k = int(rng.integers(1, ctx.n + 1))
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            size = 2 * int(rng.integers(1, (ctx.n - 1) // 2 + 1)) + 1
            deg = int(rng.integers(0, max_degree + 1))
            terms.append((_random_exponents(rng, ctx.m, deg), _random_odd_set(rng, ctx.n, size), int(rng.choice(_POOL))))
        return {"k": k, "w": SuperPolynomial(ctx, terms)}
    raise PreconditionError(f"unknown elementary kind {kind!r}")


def random_tame(
    ctx: RingContext,
    depth: int,
    max_degree: int,
    seed: int,
    kinds: Sequence | None = None,
) -> SuperEndomorphism:
    """Composition of ``depth`` random elementary automorphisms, deterministic in ``seed``.

    Parameter degrees never exceed ``max_degree`` and are lowered when needed
    so that the x-degree of the composite stays within ``max_degree ** 2``.

    ``kinds`` restricts the draw; an entry may be a kind name or a
    ``(kind, params)`` pair that fixes the parameters of that elementary.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    choices = list(kinds) if kinds is not None else _feasible_kinds(ctx)
    if not choices:
        raise PreconditionError(f"no elementary automorphisms exist for {ctx}")
    streams = np.random.SeedSequence(seed).spawn(depth)
    budget = max(max_degree, 1) ** 2
    result = identity_map(ctx)
    for stream in streams:
        rng = np.random.default_rng(stream)
        choice = choices[int(rng.integers(len(choices)))]
        if isinstance(choice, str):
            # substituting into degree-D images multiplies degrees; keep D <= budget
            current = max((f.total_degree() for f in result.images()), default=1)
            cap = min(max_degree, max(1, budget // max(current, 1)))
            elem = make_elementary(ctx, choice, **_random_params(rng, ctx, choice, cap))
        else:
            kind, params = choice
            elem = make_elementary(ctx, kind, **params)
        result = compose(result, elem)
    return result
