"""Sparse supercommutative polynomials F[x_1..x_m; xi_1..xi_n].

Terms are stored in a dict keyed by a packed integer.  From the low end the
key holds the odd set as an n-bit mask (xi_k is bit k-1), then the even
exponents in fixed-width fields (x_1 most significant), then the total even
degree.  Adding two keys whose masks are disjoint gives the key of the
product monomial, so multiplication never unpacks exponents.  Integer order
on ``key >> n`` is graded lex on the even part.

Odd factors are kept in ascending index order; any reordering sign lives in
the coefficient, so equal polynomials have equal term dicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import ContextMismatchError, FieldMismatchError
from .fields import FieldSpec, Scalar

__all__ = [
    "RingContext",
    "SuperMonomial",
    "SuperPolynomial",
    "Parity",
    "poly_add",
    "poly_mul",
    "parity_of",
    "reduce_mod_j",
    "j_degree",
    "evaluate_at_point",
    "is_unit",
]

EXP_BITS = 32
_EXP_MASK = (1 << EXP_BITS) - 1


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"
    ZERO = "zero"


class SuperMonomial(NamedTuple):
    """x^exponents * xi_{odd[0]} * xi_{odd[1]} * ... with ``odd`` ascending, 1-based."""

    exponents: tuple[int, ...]
    odd: tuple[int, ...]


@lru_cache(maxsize=1 << 16)
def koszul_sign(mask_a: int, mask_b: int) -> int:
    """Sign of xi_K * xi_L against xi_{K u L}: (-1)^#{(k, l) in K x L : k > l}.

    Masks must be disjoint.  Returns 1 or -1.
    """
    count = 0
    rest = mask_b
    while rest:
        low = rest & -rest
        count += (mask_a & ~((low << 1) - 1)).bit_count()
        rest ^= low
    return -1 if count & 1 else 1


def _mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


@dataclass(frozen=True)
class RingContext:
    """The ring F[x_1..x_m; xi_1..xi_n]."""

    m: int
    n: int
    field: FieldSpec

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)) or self.m < 0 or self.n < 0:
            raise ValueError(f"ring sizes must be non-negative integers, got m={self.m}, n={self.n}")

    def __str__(self):
        return f"ring m={self.m} n={self.n} field={self.field.token}"

    # -- key layout ---------------------------------------------------------

    @cached_property
    def low_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def deg_shift(self) -> int:
        return self.n + EXP_BITS * self.m

    @cached_property
    def _packed_mask(self) -> int:
        return (1 << (EXP_BITS * self.m)) - 1

    def encode(self, exponents: Sequence[int], mask: int = 0) -> int:
        if len(exponents) != self.m:
            raise ContextMismatchError(f"expected {self.m} exponents, got {len(exponents)}")
        packed = 0
        for e in exponents:
            if e < 0 or e > _EXP_MASK:
                raise ValueError(f"exponent {e} out of range")
            packed = (packed << EXP_BITS) | e
        return (((sum(exponents) << (EXP_BITS * self.m)) | packed) << self.n) | mask

    def exponents(self, key: int) -> tuple[int, ...]:
        packed = (key >> self.n) & self._packed_mask
        out = [0] * self.m
        for j in range(self.m - 1, -1, -1):
            out[j] = packed & _EXP_MASK
            packed >>= EXP_BITS
        return tuple(out)

    def key_degree(self, key: int) -> int:
        return key >> self.deg_shift

    def monomial(self, key: int) -> SuperMonomial:
        return SuperMonomial(self.exponents(key), _mask_indices(key & self.low_mask))

    def sort_key(self, key: int):
        mask = key & self.low_mask
        return (-(key >> self.n), mask.bit_count(), _mask_indices(mask))

    def monomial_key(self, exponents: Sequence[int], odd: Iterable[int]) -> tuple[int, int]:
        """(key, sign) for x^exponents * xi_{odd...} in the given odd order; sign 0 if it vanishes."""
        mask = 0
        sign = 1
        for k in odd:
            if not 1 <= k <= self.n:
                raise ValueError(f"odd variable index {k} out of range 1..{self.n}")
            bit = 1 << (k - 1)
            if mask & bit:
                return 0, 0
            sign *= koszul_sign(mask, bit)
            mask |= bit
        return self.encode(exponents, mask), sign

    # -- element constructors ---------------------------------------------

    def zero(self) -> SuperPolynomial:
        return SuperPolynomial._raw(self, {})

    def one(self) -> SuperPolynomial:
        return self.const(1)

    def const(self, c) -> SuperPolynomial:
        c = self.field.coerce(c)
        return SuperPolynomial._raw(self, {} if self.field.is_zero(c) else {0: c})

    def x(self, i: int) -> SuperPolynomial:
        if not 1 <= i <= self.m:
            raise ValueError(f"even variable index {i} out of range 1..{self.m}")
        exps = [0] * self.m
        exps[i - 1] = 1
        return SuperPolynomial._raw(self, {self.encode(exps): self.field.one})

    def xi(self, k: int) -> SuperPolynomial:
        if not 1 <= k <= self.n:
            raise ValueError(f"odd variable index {k} out of range 1..{self.n}")
        return SuperPolynomial._raw(self, {self.encode([0] * self.m, 1 << (k - 1)): self.field.one})

    def gens(self):
        return [self.x(i) for i in range(1, self.m + 1)], [self.xi(k) for k in range(1, self.n + 1)]

    def scalar(self, c) -> Scalar:
        return self.field.scalar(c)


def _lcm_den(t):
    d = 1
    for c in t.values():
        d = math.lcm(d, c.denominator)
    return d


def _group_by_mask(items, low):
    groups = {}
    for k, c in items:
        mk = k & low
        groups.setdefault(mk, []).append((k - mk, c))
    return groups


def _mul_terms(ctx: RingContext, t1: dict, t2: dict, max_deg: int | None = None) -> dict:
    if not t1 or not t2:
        return {}
    field = ctx.field
    kind = field.kind
    if kind == "Q":
        d1, d2 = _lcm_den(t1), _lcm_den(t2)
        i1 = [(k, c.numerator * (d1 // c.denominator)) for k, c in t1.items()]
        i2 = [(k, c.numerator * (d2 // c.denominator)) for k, c in t2.items()]
    else:
        i1, i2 = t1.items(), t2.items()
    low = ctx.low_mask
    g1 = _group_by_mask(i1, low)
    g2 = _group_by_mask(i2, low)
    shift = ctx.deg_shift
    if max_deg is not None:
        for lst in g2.values():
            lst.sort()

    acc: dict = {}
    get = acc.get
    generic = kind == "Fq"
    fmul, fadd, fneg, zero = field.mul, field.add, field.neg, field.zero
    for m1, l1 in g1.items():
        for m2, l2 in g2.items():
            if m1 & m2:
                continue
            mm = m1 | m2
            sign = koszul_sign(m1, m2)
            for k1, c1 in l1:
                base = k1 + mm
                if max_deg is not None:
                    room = max_deg - (k1 >> shift)
                    if room < 0:
                        continue
                    limit = ((room + 1) << shift) - 1
                    pairs = [(k2, c2) for k2, c2 in l2 if k2 <= limit]
                else:
                    pairs = l2
                if generic:
                    if sign < 0:
                        c1 = fneg(c1)
                    for k2, c2 in pairs:
                        k = base + k2
                        acc[k] = fadd(get(k, zero), fmul(c1, c2))
                elif sign > 0:
                    for k2, c2 in pairs:
                        k = base + k2
                        acc[k] = get(k, 0) + c1 * c2
                else:
                    for k2, c2 in pairs:
                        k = base + k2
                        acc[k] = get(k, 0) - c1 * c2
    if kind == "Q":
        den = d1 * d2
        return {k: Fraction(c, den) for k, c in acc.items() if c}
    if kind == "Fp":
        p = field.p
        out = {}
        for k, c in acc.items():
            c %= p
            if c:
                out[k] = c
        return out
    return {k: c for k, c in acc.items() if any(c)}


def _add_into(acc: dict, terms: dict, field: FieldSpec, scale=None) -> None:
    """acc += scale * terms, dropping zeros (in place)."""
    add, mul, is_zero = field.add, field.mul, field.is_zero
    for k, c in terms.items():
        if scale is not None:
            c = mul(c, scale)
        if k in acc:
            s = add(acc[k], c)
            if is_zero(s):
                del acc[k]
            else:
                acc[k] = s
        elif not is_zero(c):
            acc[k] = c


class SuperPolynomial:
    """An immutable element of a :class:`RingContext`.

    Supports ``+ - *`` with other polynomials of the same context, with ints
    and with scalars, and ``**`` with non-negative integers.
    """

    __slots__ = ("ctx", "_t", "_hash")

    def __init__(self, ctx: RingContext, terms: Iterable = ()):
        """Build from ``(exponents, odd_indices, coeff)`` triples.

        ``odd_indices`` may be in any order; the Koszul sign of sorting them
        is folded into the coefficient and repeated indices give zero.
        """
        acc: dict = {}
        f = ctx.field
        for exps, odd, c in terms:
            key, sign = ctx.monomial_key(exps, odd)
            if sign == 0:
                continue
            c = f.coerce(c)
            _add_into(acc, {key: c if sign > 0 else f.neg(c)}, f)
        self.ctx = ctx
        self._t = acc
        self._hash = None

    @classmethod
    def _raw(cls, ctx: RingContext, t: dict) -> SuperPolynomial:
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._t = t
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.ctx.field

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def terms(self) -> list[tuple[SuperMonomial, Scalar]]:
        """Terms in canonical order (descending graded lex on x, then odd set)."""
        ctx = self.ctx
        return [
            (ctx.monomial(k), Scalar(ctx.field, self._t[k]))
            for k in sorted(self._t, key=ctx.sort_key)
        ]

    def raw_terms(self) -> dict:
        return dict(self._t)

    def coefficient(self, exponents: Sequence[int], odd: Sequence[int] = ()) -> Scalar:
        key, sign = self.ctx.monomial_key(exponents, odd)
        f = self.ctx.field
        if sign == 0:
            return Scalar(f, f.zero)
        c = self._t.get(key, f.zero)
        return Scalar(f, c if sign > 0 else f.neg(c))

    def constant_term(self) -> Scalar:
        return Scalar(self.field, self._t.get(0, self.field.zero))

    def total_degree(self) -> int:
        """Highest total degree in the even variables (-1 for zero)."""
        if not self._t:
            return -1
        shift = self.ctx.deg_shift
        return max(k >> shift for k in self._t)

    def odd_masks(self) -> set[int]:
        low = self.ctx.low_mask
        return {k & low for k in self._t}

    def is_classical(self) -> bool:
        """True when no term involves an odd variable."""
        low = self.ctx.low_mask
        return all(not (k & low) for k in self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def parity(self) -> Parity:
        return parity_of(self)

    def j_degree(self):
        return j_degree(self)

    def reduce_mod_j(self) -> SuperPolynomial:
        return reduce_mod_j(self)

    def involves_x(self, i: int) -> bool:
        return any(e[i - 1] for e in map(self.ctx.exponents, self._t))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> SuperPolynomial:
        if isinstance(other, SuperPolynomial):
            if other.ctx != self.ctx:
                raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, Scalar) and other.field != self.ctx.field:
            raise FieldMismatchError(f"{other.field} vs {self.ctx.field}")
        return self.ctx.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._t)
        _add_into(acc, other._t, self.field)
        return SuperPolynomial._raw(self.ctx, acc)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return SuperPolynomial._raw(self.ctx, {k: neg(c) for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, SuperPolynomial):
            other = self._coerce(other)
            return SuperPolynomial._raw(self.ctx, _mul_terms(self.ctx, self._t, other._t))
        return self.scale(other)

    def __rmul__(self, other):
        # scalars are even, hence central
        return self.scale(other)

    def scale(self, c) -> SuperPolynomial:
        f = self.field
        if isinstance(c, Scalar) and c.field != f:
            raise FieldMismatchError(f"{c.field} vs {f}")
        c = f.coerce(c)
        if f.is_zero(c):
            return self.ctx.zero()
        mul = f.mul
        return SuperPolynomial._raw(self.ctx, {k: mul(v, c) for k, v in self._t.items()})

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_truncated(self, other: SuperPolynomial, max_deg: int) -> SuperPolynomial:
        """Product with every term of even degree above ``max_deg`` discarded."""
        other = self._coerce(other)
        return SuperPolynomial._raw(self.ctx, _mul_terms(self.ctx, self._t, other._t, max_deg))

    def truncate(self, max_deg: int) -> SuperPolynomial:
        shift = self.ctx.deg_shift
        return SuperPolynomial._raw(self.ctx, {k: c for k, c in self._t.items() if k >> shift <= max_deg})

    def homogeneous_part(self, deg: int) -> SuperPolynomial:
        """Terms whose even degree is exactly ``deg``."""
        shift = self.ctx.deg_shift
        return SuperPolynomial._raw(self.ctx, {k: c for k, c in self._t.items() if k >> shift == deg})

    # -- equality / display -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.ctx == other.ctx and self._t == other._t
        if isinstance(other, (int, Scalar, Fraction)):
            try:
                return self == self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._t.items())))
        return self._hash

    def __str__(self):
        from .textio import print_canonical

        return print_canonical(self)

    def __repr__(self):
        return f"SuperPolynomial({self.ctx.m}|{self.ctx.n}, {self.field.token}, {self})"

    # -- context changes ----------------------------------------------------

    def recontext(self, ctx: RingContext) -> SuperPolynomial:
        """The same polynomial in another context (variables must fit; the
        field must embed, e.g. F_p into F_{p^k})."""
        if ctx == self.ctx:
            return self
        src = self.ctx
        out = {}
        for k, c in self._t.items():
            exps = src.exponents(k)
            mask = k & src.low_mask
            if mask >> ctx.n:
                raise ContextMismatchError(f"odd variable out of range for {ctx}")
            if len(exps) > ctx.m:
                if any(exps[ctx.m:]):
                    raise ContextMismatchError(f"even variable out of range for {ctx}")
                exps = exps[: ctx.m]
            else:
                exps = exps + (0,) * (ctx.m - len(exps))
            out[ctx.encode(exps, mask)] = ctx.field.embed(c, src.field)
        return SuperPolynomial._raw(ctx, out)


def _check_ctx(p: SuperPolynomial, q: SuperPolynomial):
    if p.ctx != q.ctx:
        raise ContextMismatchError(f"{p.ctx} vs {q.ctx}")


def poly_add(p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    _check_ctx(p, q)
    return p + q


def poly_mul(p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    _check_ctx(p, q)
    return p * q


def parity_of(p: SuperPolynomial) -> Parity:
    if not p._t:
        return Parity.ZERO
    low = p.ctx.low_mask
    parities = {(k & low).bit_count() & 1 for k in p._t}
    if len(parities) == 2:
        return Parity.MIXED
    return Parity.ODD if parities.pop() else Parity.EVEN


def reduce_mod_j(p: SuperPolynomial) -> SuperPolynomial:
    """Drop every term containing an odd variable (the map R -> R/J)."""
    low = p.ctx.low_mask
    return SuperPolynomial._raw(p.ctx, {k: c for k, c in p._t.items() if not k & low})


def j_degree(p: SuperPolynomial):
    """Largest d with p in J^d: the least odd degree over the terms; inf for zero."""
    if not p._t:
        return math.inf
    low = p.ctx.low_mask
    return min((k & low).bit_count() for k in p._t)


def evaluate_at_point(p: SuperPolynomial, point: Sequence) -> SuperPolynomial:
    """Substitute x_i := point[i-1]; the result lives in F[; xi_1..xi_n]."""
    ctx = p.ctx
    if len(point) != ctx.m:
        raise ContextMismatchError(f"point has {len(point)} coordinates, ring has m={ctx.m}")
    f = ctx.field
    vals = []
    for a in point:
        if isinstance(a, Scalar) and a.field != f:
            raise FieldMismatchError(f"{a.field} vs {f}")
        vals.append(f.coerce(a))
    target = RingContext(0, ctx.n, f)
    acc: dict = {}
    low = ctx.low_mask
    powers: dict = {}
    for k, c in p._t.items():
        for i, e in enumerate(ctx.exponents(k)):
            if e:
                pw = powers.get((i, e))
                if pw is None:
                    pw = powers[(i, e)] = f.pow(vals[i], e)
                c = f.mul(c, pw)
        _add_into(acc, {k & low: c}, f)
    return SuperPolynomial._raw(target, acc)


def is_unit(p: SuperPolynomial) -> bool:
    """Units of R are exactly the elements with nonzero constant image in R/J."""
    red = reduce_mod_j(p)
    return len(red._t) == 1 and 0 in red._t
