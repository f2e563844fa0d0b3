"""Point-level evidence about the classical part of an endomorphism.

A maximal Z2-homogeneous ideal of R corresponds to a point of F^m, so the
point map b -> (f_1 mod J)(b), ..., (f_m mod J)(b) stands in for the action
on those ideals.  Over a finite field the map can be enumerated; over Q it
can only be sampled.  Every verdict here is evidence, not proof: x + x^3 is
bijective on F_3 yet has no polynomial inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import ContextMismatchError, FieldMismatchError, PreconditionError
from .fields import FieldSpec, Scalar
from .morphism import SuperEndomorphism
from .poly import RingContext, reduce_mod_j

__all__ = [
    "point_map",
    "exhaustive_bijectivity",
    "sample_injectivity",
    "Bijective",
    "Collision",
    "NoCollisionFound",
    "DEFAULT_ENUMERATION_CEILING",
]

DEFAULT_ENUMERATION_CEILING = 10**6


@dataclass(frozen=True)
class Bijective:
    points: int
    verdict = "bijective"


@dataclass(frozen=True)
class Collision:
    first: tuple[Scalar, ...]
    second: tuple[Scalar, ...]
    image: tuple[Scalar, ...]
    verdict = "collision"


@dataclass(frozen=True)
class NoCollisionFound:
    trials: int
    verdict = "noCollisionFound"


BijectivityResult = Union[Bijective, Collision]


class _PointEvaluator:
    def __init__(self, phi: SuperEndomorphism):
        ctx = phi.ctx
        self.field = ctx.field
        self.polys = [
            [(ctx.exponents(k), c) for k, c in reduce_mod_j(f)._t.items()] for f in phi.fx
        ]

    def __call__(self, point):
        f = self.field
        add, mul, pow_ = f.add, f.mul, f.pow
        out = []
        for terms in self.polys:
            total = f.zero
            for exps, c in terms:
                for a, e in zip(point, exps):
                    if e:
                        c = mul(c, pow_(a, e))
                total = add(total, c)
            out.append(total)
        return tuple(out)


def _lift(phi: SuperEndomorphism, field: FieldSpec | None) -> SuperEndomorphism:
    if field is None or field == phi.ctx.field:
        return phi
    if not field.contains(phi.ctx.field):
        raise FieldMismatchError(f"{field} does not contain {phi.ctx.field}")
    return phi.recontext(RingContext(phi.ctx.m, phi.ctx.n, field))


def point_map(phi: SuperEndomorphism, point: Sequence) -> tuple[Scalar, ...]:
    """The image of a point under the classical part of phi."""
    ctx = phi.ctx
    f = ctx.field
    if len(point) != ctx.m:
        raise ContextMismatchError(f"point has {len(point)} coordinates, ring has m={ctx.m}")
    raw = []
    for a in point:
        if isinstance(a, Scalar) and a.field != f:
            raise FieldMismatchError(f"{a.field} vs {f}")
        raw.append(f.coerce(a))
    return tuple(Scalar(f, v) for v in _PointEvaluator(phi)(raw))


def exhaustive_bijectivity(
    phi: SuperEndomorphism,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
    field: FieldSpec | None = None,
) -> BijectivityResult:
    """Enumerate F^m and report a bijection or the first collision found.

    ``field`` optionally widens the check to a finite extension of phi's
    field.  Points are visited in lexicographic order of their coordinates,
    so the collision reported has the smallest possible second point.
    """
    phi = _lift(phi, field)
    f = phi.ctx.field
    if not f.is_finite:
        raise PreconditionError("exhaustive enumeration needs a finite field")
    total = f.order ** phi.ctx.m
    if total > ceiling:
        raise PreconditionError(f"{total} points exceed the enumeration ceiling {ceiling}")
    evaluate = _PointEvaluator(phi)
    seen: dict = {}
    for point in itertools.product(list(f.elements()), repeat=phi.ctx.m):
        image = evaluate(point)
        if image in seen:
            wrap = lambda vs: tuple(Scalar(f, v) for v in vs)  # noqa: E731
            return Collision(wrap(seen[image]), wrap(point), wrap(image))
        seen[image] = point
    # injective on a finite set, hence bijective
    return Bijective(total)


def sample_injectivity(
    phi: SuperEndomorphism, trials: int, seed: int, height: int = 20
) -> NoCollisionFound | Collision:
    """Look for two points with the same image among random points of bounded height.

    Each trial draws a point b and also evaluates -b, so maps that identify
    sign-flipped points (such as x -> x^2) are caught.  Over Q the numerator
    and denominator of each coordinate are bounded by ``height``.
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    f = phi.ctx.field
    m = phi.ctx.m
    rng = np.random.default_rng(seed)
    evaluate = _PointEvaluator(phi)
    seen: dict = {}
    wrap = lambda vs: tuple(Scalar(f, v) for v in vs)  # noqa: E731
    for _ in range(trials):
        if f.kind == "Q":
            nums = rng.integers(-height, height + 1, m)
            dens = rng.integers(1, height + 1, m)
            b = tuple(Fraction(int(a), int(d)) for a, d in zip(nums, dens))
        elif f.kind == "Fp":
            b = tuple(int(v) for v in rng.integers(0, f.p, m))
        else:
            b = tuple(f.from_tpoly([int(v) for v in rng.integers(0, f.p, f.degree)]) for _ in range(m))
        for point in (b, tuple(f.neg(a) for a in b)):
            image = evaluate(point)
            other = seen.get(image)
            if other is not None and other != point:
                first, second = sorted((other, point), key=_order_key(f))
                return Collision(wrap(first), wrap(second), wrap(image))
            seen.setdefault(image, point)
    return NoCollisionFound(trials)


def _order_key(f: FieldSpec):
    if f.kind == "Q":
        return lambda pt: pt
    return lambda pt: tuple(tuple(reversed(a)) if isinstance(a, tuple) else a for a in pt)
