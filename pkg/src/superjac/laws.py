"""Randomised algebra-law suites, shared by ``superjac selftest`` and the test suite.

Each suite draws its own rings (m, n <= 4) and small random elements of
degree <= 4, then checks an identity with exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .calculus import d_dx, d_dxi
from .fields import FieldSpec
from .poly import RingContext, SuperPolynomial
from .textio import deserialize, parse_poly, print_canonical, serialize

__all__ = ["SuiteResult", "random_poly", "random_homogeneous", "SUITES", "run_suites"]

_POOL = (-3, -2, -1, 1, 2, 3)


def random_poly(rng, ctx: RingContext, max_terms=4, max_degree=4, odd_parity=None) -> SuperPolynomial:
    """Random sparse element; ``odd_parity`` of 0 or 1 makes it homogeneous."""
    terms = []
    for _ in range(int(rng.integers(0, max_terms + 1))):
        deg = int(rng.integers(0, max_degree + 1))
        exps = [0] * ctx.m
        if ctx.m:
            for v in rng.integers(0, ctx.m, deg):
                exps[int(v)] += 1
        size = int(rng.integers(0, ctx.n + 1))
        if odd_parity is not None and size % 2 != odd_parity:
            size = size - 1 if size else 1
            if size > ctx.n:
                continue
        odd = [int(k) + 1 for k in rng.choice(ctx.n, size=size, replace=False)] if size else []
        coeff = int(rng.choice(_POOL))
        if ctx.field.kind == "Q" and rng.random() < 0.3:
            coeff = Fraction(coeff, int(rng.integers(1, 5)))
        terms.append((exps, odd, coeff))
    return SuperPolynomial(ctx, terms)


def random_homogeneous(rng, ctx):
    par = int(rng.integers(0, 2)) if ctx.n else 0
    return random_poly(rng, ctx, odd_parity=par), par


def _random_ctx(rng, field):
    return RingContext(int(rng.integers(0, 5)), int(rng.integers(0, 5)), field)


def law_supercommutativity(rng, field):
    ctx = _random_ctx(rng, field)
    (p, a), (q, b) = random_homogeneous(rng, ctx), random_homogeneous(rng, ctx)
    return p * q == (q * p if not (a and b) else -(q * p))


def law_associativity(rng, field):
    ctx = _random_ctx(rng, field)
    p, q, r = (random_poly(rng, ctx) for _ in range(3))
    return (p * q) * r == p * (q * r)


def law_distributivity(rng, field):
    ctx = _random_ctx(rng, field)
    p, q, r = (random_poly(rng, ctx) for _ in range(3))
    return p * (q + r) == p * q + p * r and (p + q) * r == p * r + q * r


def law_odd_square_zero(rng, field):
    ctx = RingContext(int(rng.integers(0, 5)), int(rng.integers(1, 5)), field)
    p = random_poly(rng, ctx, odd_parity=1)
    return (p * p).is_zero()


def law_leibniz(rng, field):
    ctx = _random_ctx(rng, field)
    p, a = random_homogeneous(rng, ctx)
    q = random_poly(rng, ctx)
    pq = p * q
    for i in range(1, ctx.m + 1):
        if d_dx(pq, i) != d_dx(p, i) * q + p * d_dx(q, i):
            return False
    for k in range(1, ctx.n + 1):
        second = p * d_dxi(q, k)
        if d_dxi(pq, k) != d_dxi(p, k) * q + (-second if a else second):
            return False
    return True


def law_derivations_commute(rng, field):
    """Odd derivations anticommute and square to zero; even ones commute with all."""
    ctx = _random_ctx(rng, field)
    p = random_poly(rng, ctx)
    for k in range(1, ctx.n + 1):
        if not d_dxi(d_dxi(p, k), k).is_zero():
            return False
        for l in range(k + 1, ctx.n + 1):
            if d_dxi(d_dxi(p, k), l) != -d_dxi(d_dxi(p, l), k):
                return False
    for i in range(1, ctx.m + 1):
        for j in range(i + 1, ctx.m + 1):
            if d_dx(d_dx(p, i), j) != d_dx(d_dx(p, j), i):
                return False
        for k in range(1, ctx.n + 1):
            if d_dx(d_dxi(p, k), i) != d_dxi(d_dx(p, i), k):
                return False
    return True


def law_text_roundtrip(rng, field):
    ctx = _random_ctx(rng, field)
    p = random_poly(rng, ctx)
    text = print_canonical(p)
    doc = serialize(p)
    return parse_poly(text, ctx) == p and deserialize(doc) == p and serialize(deserialize(doc)) == doc


SUITES: dict[str, Callable] = {
    "supercommutativity": law_supercommutativity,
    "associativity": law_associativity,
    "distributivity": law_distributivity,
    "odd_square_zero": law_odd_square_zero,
    "leibniz": law_leibniz,
    "derivations_commute": law_derivations_commute,
    "text_roundtrip": law_text_roundtrip,
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    field: str
    cases: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def run_suites(trials: int, seed: int, fields=None, names=None) -> list[SuiteResult]:
    """Run each named suite ``trials`` times per field; deterministic in ``seed``."""
    fields = fields or [FieldSpec.rationals(), FieldSpec.prime(5)]
    names = names or list(SUITES)
    results = []
    for fi, field in enumerate(fields):
        for si, name in enumerate(names):
            rng = np.random.default_rng([seed, fi, si])
            law = SUITES[name]
            failures = sum(not law(rng, field) for _ in range(trials))
            results.append(SuiteResult(name, field.token, trials, failures))
    return results
