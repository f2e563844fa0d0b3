"""Exact scalar fields: the rationals, prime fields F_p and small extensions F_p[t]/(g).

A :class:`FieldSpec` describes a field and owns the arithmetic on *raw*
values (``Fraction`` for Q, ``int`` in ``[0, p)`` for F_p, a coefficient
tuple of length ``deg g`` for F_q).  Polynomial code works on raw values
directly for speed; :class:`Scalar` is the public wrapper pairing a raw value
with its field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import FieldMismatchError

__all__ = ["FieldSpec", "Scalar", "scalar_arith", "is_prime", "QQ"]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, which covers any field we can use."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _poly_divides(div, num, p):
    # remainder of num by monic div over F_p, both low-to-high coefficient lists
    r = list(num)
    k = len(div) - 1
    for i in range(len(r) - 1, k - 1, -1):
        c = r[i] % p
        if c:
            for j in range(k + 1):
                r[i - k + j] = (r[i - k + j] - c * div[j]) % p
    return not any(c % p for c in r[:k])


def _is_irreducible(modulus, p):
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _poly_divides(list(low) + [1], modulus, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """An exact field.  Build with :meth:`rationals`, :meth:`prime`,
    :meth:`extension` or :meth:`parse`; the constructors validate."""

    kind: str
    p: int | None = None
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None or self.modulus is not None:
                raise ValueError("Q takes no parameters")
            return
        if self.kind not in ("Fp", "Fq"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p == 2:
            raise ValueError("characteristic 2 is not supported")
        if self.kind == "Fp":
            if self.modulus is not None:
                raise ValueError("Fp takes no modulus")
            return
        mod = tuple(int(c) % self.p for c in (self.modulus or ()))
        object.__setattr__(self, "modulus", mod)
        if len(mod) < 3:
            raise ValueError("extension modulus must have degree >= 2")
        if mod[-1] != 1:
            raise ValueError("extension modulus must be monic")
        if not _is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")

    # -- construction -------------------------------------------------------

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("Fp", p)

    @classmethod
    def extension(cls, p: int, modulus) -> FieldSpec:
        """F_p[t]/(modulus), coefficients given low-to-high."""
        return cls("Fq", p, tuple(modulus))

    @classmethod
    def parse(cls, token: str) -> FieldSpec:
        """Parse ``Q``, ``Fp:<p>`` or ``Fq:<p>:<c0,c1,...>``."""
        parts = token.strip().split(":")
        try:
            if parts == ["Q"]:
                return cls.rationals()
            if parts[0] == "Fp" and len(parts) == 2:
                return cls.prime(int(parts[1]))
            if parts[0] == "Fq" and len(parts) == 3:
                return cls.extension(int(parts[1]), [int(c) for c in parts[2].split(",")])
        except ValueError as exc:
            raise ValueError(f"bad field token {token!r}: {exc}") from None
        raise ValueError(f"bad field token {token!r}")

    @property
    def token(self) -> str:
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"Fp:{self.p}"
        return f"Fq:{self.p}:" + ",".join(str(c) for c in self.modulus)

    def __str__(self):
        return self.token

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else self.p

    @property
    def degree(self) -> int:
        """Degree over the prime field (1 for Q and F_p)."""
        return len(self.modulus) - 1 if self.kind == "Fq" else 1

    @property
    def is_finite(self) -> bool:
        return self.kind != "Q"

    @property
    def order(self) -> int | None:
        return None if self.kind == "Q" else self.p ** self.degree

    def contains(self, other: FieldSpec) -> bool:
        """True if raw values of *other* embed into this field via :meth:`embed`."""
        if other == self:
            return True
        return self.kind == "Fq" and other.kind == "Fp" and other.p == self.p

    def embed(self, value, source: FieldSpec):
        if source == self:
            return value
        if not self.contains(source):
            raise FieldMismatchError(f"cannot embed {source} into {self}")
        return self.from_int(value)

    # -- raw arithmetic -----------------------------------------------------

    @property
    def zero(self):
        if self.kind == "Q":
            return Fraction(0)
        if self.kind == "Fp":
            return 0
        return (0,) * self.degree

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.kind == "Q":
            return Fraction(n)
        if self.kind == "Fp":
            return n % self.p
        return (n % self.p,) + (0,) * (self.degree - 1)

    def from_fraction(self, num: int, den: int):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if self.kind == "Q":
            return Fraction(num, den)
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes in {self.token}")
        return self.mul(self.from_int(num), self.from_int(pow(den, -1, self.p)))

    def from_tpoly(self, coeffs):
        """Element from a t-polynomial given low-to-high (reduced mod the modulus)."""
        if self.kind != "Fq":
            raise FieldMismatchError(f"t-polynomial coefficient is not in {self.token}")
        return self._reduce(list(coeffs))

    def is_zero(self, a) -> bool:
        if self.kind == "Fq":
            return not any(a)
        return a == 0

    def is_prime_subfield(self, a) -> bool:
        return self.kind != "Fq" or not any(a[1:])

    def add(self, a, b):
        if self.kind == "Q":
            return a + b
        if self.kind == "Fp":
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.kind == "Q":
            return a - b
        if self.kind == "Fp":
            return (a - b) % self.p
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.kind == "Q":
            return -a
        if self.kind == "Fp":
            return -a % self.p
        return tuple(-x % self.p for x in a)

    def _reduce(self, c):
        p, mod = self.p, self.modulus
        k = len(mod) - 1
        c = [x % p for x in c]
        for i in range(len(c) - 1, k - 1, -1):
            top = c[i]
            if top:
                for j in range(k):
                    c[i - k + j] = (c[i - k + j] - top * mod[j]) % p
            c[i] = 0
        c = c[:k] + [0] * (k - len(c))
        return tuple(c)

    def mul(self, a, b):
        if self.kind == "Q":
            return a * b
        if self.kind == "Fp":
            return a * b % self.p
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.kind == "Q":
            return a**e
        if self.kind == "Fp":
            return pow(a, e, self.p)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError(f"division by zero in {self.token}")
        if self.kind == "Q":
            return 1 / a
        if self.kind == "Fp":
            return pow(a, -1, self.p)
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> Iterator:
        """All elements of a finite field, ordered by the integer sum c_i p^i."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite field")
        if self.kind == "Fp":
            yield from range(self.p)
            return
        for digits in itertools.product(range(self.p), repeat=self.degree):
            yield tuple(reversed(digits))

    def format(self, a) -> str:
        """Canonical text of a raw value (no surrounding parentheses)."""
        if self.kind == "Q":
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        if self.kind == "Fp":
            return str(a)
        parts = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                var = "t" if i == 1 else f"t^{i}"
                parts.append(var if c == 1 else f"{c}*{var}")
        return " + ".join(parts) if parts else "0"

    def scalar(self, value) -> Scalar:
        """Wrap an int, Fraction, raw tuple or Scalar as a Scalar of this field."""
        return Scalar(self, self.coerce(value))

    def coerce(self, value):
        """Raw value from an int, Fraction, Scalar or (for F_q) raw tuple."""
        if isinstance(value, Scalar):
            return self.embed(value.value, value.field)
        if isinstance(value, bool):
            raise TypeError("bool is not a field element")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value.numerator, value.denominator)
        if isinstance(value, tuple) and self.kind == "Fq":
            return self.from_tpoly(value)
        raise TypeError(f"cannot interpret {value!r} in {self.token}")


QQ = FieldSpec.rationals()


@dataclass(frozen=True)
class Scalar:
    field: FieldSpec
    value: object

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inverse(self) -> Scalar:
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self.field.token}, {self})"


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two scalars of one field."""
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    ops = {"add": a.field.add, "sub": a.field.sub, "mul": a.field.mul, "div": a.field.div}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return Scalar(a.field, ops[op](a.value, b.value))
