"""Text and JSON formats for superpolynomials and endomorphisms.

Polynomial grammar (whitespace is insignificant)::

    poly    := ['-'] term (('+' | '-') term)*
    term    := coeff ['*' factors] | factors
    factors := factor ('*' factor)*
    factor  := var ['^' nat]
    var     := 'x' nat | 'xi' nat
    coeff   := integer | integer '/' integer | '(' tpoly ')'

``tpoly`` is an element of an extension field written in ``t``, such as
``(2*t + 1)``.  Map files have a header line ``ring m=<m> n=<n> field=<F>``
followed by one ``<var> -> <poly>`` line per generator; ``#`` starts a comment.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import ContextMismatchError, FieldMismatchError, ParityError, ParseError
from .fields import FieldSpec
from .morphism import SuperEndomorphism
from .poly import RingContext, SuperPolynomial, _add_into

__all__ = [
    "parse_poly",
    "print_canonical",
    "parse_map",
    "print_map",
    "parse_scalar",
    "serialize",
    "deserialize",
    "poly_document",
    "map_document",
]

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>->|[-+*/^()]))")


@dataclass
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1):
    toks = []
    pos = 0
    col0 = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                col0 = pos + 1
            pos += 1
        if pos >= len(text):
            toks.append(_Tok("end", "", line, pos - col0 + 1))
            return toks
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = mt.lastgroup
        start = mt.start(kind)
        toks.append(_Tok(kind, mt.group(kind), line, start - col0 + 1))
        pos = mt.end()


_VAR = re.compile(r"(xi|x)(\d+)$")


class _Parser:
    def __init__(self, text: str, ctx: RingContext, line: int = 1):
        self.ctx = ctx
        self.field = ctx.field
        self.toks = _tokenize(text, line)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect_int(self):
        if self.tok.kind != "int":
            self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        self.i += 1
        return int(self.toks[self.i - 1].text)

    def expect_end(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    # poly := ['-'] term (('+'|'-') term)*
    def poly(self) -> dict:
        f = self.field
        acc: dict = {}
        negative = self.accept("-")
        while True:
            key, coeff = self.term()
            if key is not None:
                _add_into(acc, {key: f.neg(coeff) if negative else coeff}, f)
            if self.accept("+"):
                negative = False
            elif self.accept("-"):
                negative = True
            else:
                return acc

    def term(self):
        f = self.field
        tok = self.tok
        if tok.kind == "int" or (tok.kind == "op" and tok.text == "("):
            coeff = self.coeff()
            if not self.accept("*"):
                return 0, coeff
        elif tok.kind == "name":
            coeff = f.one
        else:
            self.error(f"expected a term, found {tok.text or 'end of input'!r}")
        exps = [0] * self.ctx.m
        odd = []
        while True:
            kind, idx, tok = self.var()
            power = 1
            if self.accept("^"):
                power = self.expect_int()
            if kind == "x":
                exps[idx - 1] += power
            else:
                odd.extend([idx] * power)
            if not self.accept("*"):
                break
        key, sign = self.ctx.monomial_key(exps, odd)
        if sign == 0:
            return None, coeff
        return key, coeff if sign > 0 else f.neg(coeff)

    def var(self):
        tok = self.tok
        if tok.kind != "name":
            self.error(f"expected a variable, found {tok.text or 'end of input'!r}")
        mt = _VAR.match(tok.text)
        if not mt:
            self.error(f"unknown variable {tok.text!r}")
        kind, idx = mt.group(1), int(mt.group(2))
        bound = self.ctx.m if kind == "x" else self.ctx.n
        if not 1 <= idx <= bound:
            self.error(f"variable {tok.text} out of range (ring has {kind}1..{kind}{bound})" if bound else
                       f"variable {tok.text} out of range (ring has no {kind} variables)")
        self.i += 1
        return kind, idx, tok

    def coeff(self):
        f = self.field
        tok = self.tok
        try:
            if self.accept("("):
                value = self.tpoly()
                if not self.accept(")"):
                    self.error("expected ')'")
                return value
            num = self.expect_int()
            if self.accept("/"):
                den_tok = self.tok
                den = self.expect_int()
                if den == 0:
                    self.error("zero denominator", den_tok)
                return f.from_fraction(num, den)
            return f.from_int(num)
        except (ZeroDivisionError, FieldMismatchError) as exc:
            self.error(f"coefficient not in field {f.token}: {exc}", tok)

    # tpoly := ['-'] tterm (('+'|'-') tterm)*;  tterm := int ['*' 't' ['^' nat]] | 't' ['^' nat]
    def tpoly(self):
        coeffs: dict[int, int] = {}
        negative = self.accept("-")
        while True:
            c, e = 1, 0
            if self.tok.kind == "int":
                c = self.expect_int()
                if self.accept("*"):
                    e = self.tvar()
            else:
                e = self.tvar()
            coeffs[e] = coeffs.get(e, 0) + (-c if negative else c)
            if self.accept("+"):
                negative = False
            elif self.accept("-"):
                negative = True
            else:
                break
        top = max(coeffs)
        low_to_high = [coeffs.get(i, 0) for i in range(top + 1)]
        if top == 0:
            return self.field.from_int(low_to_high[0])
        return self.field.from_tpoly(low_to_high)

    def tvar(self):
        tok = self.tok
        if tok.kind != "name" or tok.text != "t":
            self.error(f"expected 't', found {tok.text or 'end of input'!r}")
        self.i += 1
        return self.expect_int() if self.accept("^") else 1


def parse_poly(text: str, ctx: RingContext, line: int = 1) -> SuperPolynomial:
    """Parse text in the polynomial grammar into canonical form."""
    parser = _Parser(text, ctx, line)
    terms = parser.poly()
    parser.expect_end()
    return SuperPolynomial._raw(ctx, terms)


def parse_scalar(text: str, field: FieldSpec):
    """Raw field value from ``int``, ``int/int``, or a t-polynomial (optionally negated)."""
    ctx = RingContext(0, 0, field)
    parser = _Parser(text, ctx)
    negative = parser.accept("-")
    tok = parser.tok
    if field.kind == "Fq" and tok.kind == "name":
        value = parser.tpoly()
    elif field.kind == "Fq" and tok.kind == "int" and parser.toks[parser.i + 1].text in ("*", "+", "-"):
        value = parser.tpoly()
    else:
        value = parser.coeff()
    parser.expect_end()
    return field.neg(value) if negative else value


def _monomial_text(exps, odd) -> str:
    parts = []
    for j, e in enumerate(exps, 1):
        if e == 1:
            parts.append(f"x{j}")
        elif e > 1:
            parts.append(f"x{j}^{e}")
    parts.extend(f"xi{k}" for k in odd)
    return "*".join(parts)


def _coeff_text(field: FieldSpec, c) -> tuple[bool, str]:
    """(negative, magnitude text) for printing a term coefficient."""
    if field.kind == "Q":
        return c < 0, field.format(abs(c))
    if field.is_prime_subfield(c):
        return False, field.format(c)
    return False, f"({field.format(c)})"


def print_canonical(p: SuperPolynomial) -> str:
    """Canonical text; terms in descending graded lex order, then by odd set."""
    ctx = p.ctx
    f = ctx.field
    if p.is_zero():
        return "0"
    out = []
    for key in sorted(p._t, key=ctx.sort_key):
        mono = ctx.monomial(key)
        negative, mag = _coeff_text(f, p._t[key])
        body = _monomial_text(mono.exponents, mono.odd)
        if body:
            text = body if mag == "1" else f"{mag}*{body}"
        else:
            text = mag
        if not out:
            out.append(f"-{text}" if negative else text)
        else:
            out.append(f" - {text}" if negative else f" + {text}")
    return "".join(out)


# -- map files -------------------------------------------------------------

_HEADER = re.compile(r"ring\s+m\s*=\s*(\d+)\s+n\s*=\s*(\d+)(?:\s+field\s*=\s*(\S+))?\s*$")
_ASSIGN = re.compile(r"\s*(\w+)\s*->(.*)$")


def parse_map(text: str, default_field: FieldSpec | None = None) -> SuperEndomorphism:
    """Parse a map file.  ``default_field`` is used only if the header names none."""
    lines = [(no, line.split("#", 1)[0].rstrip()) for no, line in enumerate(text.splitlines(), 1)]
    lines = [(no, line) for no, line in lines if line.strip()]
    if not lines:
        raise ParseError("empty map file", 1, 1)
    no, header = lines[0]
    mt = _HEADER.match(header.strip())
    if not mt:
        raise ParseError("expected header 'ring m=<m> n=<n> field=<field>'", no, 1)
    m, n = int(mt.group(1)), int(mt.group(2))
    if mt.group(3):
        try:
            field = FieldSpec.parse(mt.group(3))
        except ValueError as exc:
            raise ParseError(str(exc), no, header.index("field") + 1) from None
    elif default_field is not None:
        field = default_field
    else:
        raise ParseError("no field in header and none supplied", no, 1)
    ctx = RingContext(m, n, field)
    images: dict[tuple[str, int], SuperPolynomial] = {}
    for no, line in lines[1:]:
        am = _ASSIGN.match(line)
        if not am:
            raise ParseError("expected '<variable> -> <polynomial>'", no, 1)
        name = am.group(1)
        vm = _VAR.match(name)
        col = line.index(name) + 1
        if not vm:
            raise ParseError(f"unknown variable {name!r}", no, col)
        kind, idx = vm.group(1), int(vm.group(2))
        if not 1 <= idx <= (m if kind == "x" else n):
            raise ParseError(f"variable {name} out of range", no, col)
        if (kind, idx) in images:
            raise ParseError(f"duplicate assignment for {name}", no, col)
        offset = am.start(2)
        try:
            images[(kind, idx)] = parse_poly(am.group(2), ctx)
        except ParseError as exc:
            col = exc.column + offset if exc.line == 1 else exc.column
            raise ParseError(exc.message, no + exc.line - 1, col) from None
    missing = [f"x{i}" for i in range(1, m + 1) if ("x", i) not in images]
    missing += [f"xi{k}" for k in range(1, n + 1) if ("xi", k) not in images]
    if missing:
        raise ParseError(f"missing assignment for {', '.join(missing)}", lines[-1][0], 1)
    try:
        return SuperEndomorphism(
            ctx,
            [images[("x", i)] for i in range(1, m + 1)],
            [images[("xi", k)] for k in range(1, n + 1)],
        )
    except ParityError as exc:
        raise ParityError(f"generator images have the wrong parity: {exc}") from None


def print_map(phi: SuperEndomorphism) -> str:
    lines = [str(phi.ctx)]
    lines += [f"x{i} -> {print_canonical(f)}" for i, f in enumerate(phi.fx, 1)]
    lines += [f"xi{k} -> {print_canonical(q)}" for k, q in enumerate(phi.fxi, 1)]
    return "\n".join(lines) + "\n"


# -- JSON documents --------------------------------------------------------


def _terms_doc(p: SuperPolynomial) -> list:
    ctx = p.ctx
    f = ctx.field
    out = []
    for key in sorted(p._t, key=ctx.sort_key):
        mono = ctx.monomial(key)
        out.append({"e": list(mono.exponents), "o": list(mono.odd), "c": f.format(p._t[key])})
    return out


def poly_document(p: SuperPolynomial) -> dict:
    return {"m": p.ctx.m, "n": p.ctx.n, "field": p.ctx.field.token, "terms": _terms_doc(p)}


def map_document(phi: SuperEndomorphism) -> dict:
    ctx = phi.ctx
    return {
        "m": ctx.m,
        "n": ctx.n,
        "field": ctx.field.token,
        "even": [_terms_doc(f) for f in phi.fx],
        "odd": [_terms_doc(q) for q in phi.fxi],
    }


def dumps(doc) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True)


def serialize(obj) -> str:
    """Compact, byte-deterministic JSON for a polynomial or an endomorphism."""
    if isinstance(obj, SuperPolynomial):
        return dumps(poly_document(obj))
    if isinstance(obj, SuperEndomorphism):
        return dumps(map_document(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class DocumentError(ParseError):
    def __init__(self, message):
        super().__init__(message, 1, 1)


def _terms_from_doc(ctx: RingContext, terms) -> SuperPolynomial:
    if not isinstance(terms, list):
        raise DocumentError("'terms' must be a list")
    f = ctx.field
    out = {}
    for t in terms:
        if not isinstance(t, dict) or set(t) != {"e", "o", "c"}:
            raise DocumentError(f"malformed term {t!r}")
        exps, odd, c = t["e"], t["o"], t["c"]
        if (
            not isinstance(exps, list)
            or len(exps) != ctx.m
            or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exps)
        ):
            raise DocumentError(f"bad exponents {exps!r}")
        if not isinstance(odd, list) or not all(isinstance(k, int) and 1 <= k <= ctx.n for k in odd):
            raise DocumentError(f"bad odd set {odd!r}")
        if any(a >= b for a, b in zip(odd, odd[1:])):
            raise DocumentError(f"odd set {odd!r} is not strictly ascending")
        if not isinstance(c, str):
            raise DocumentError("coefficients must be strings")
        try:
            value = parse_scalar(c, f)
        except ParseError as exc:
            raise DocumentError(f"bad coefficient {c!r}: {exc.message}") from None
        if f.is_zero(value):
            raise DocumentError("zero coefficient")
        key, _ = ctx.monomial_key(exps, odd)
        if key in out:
            raise DocumentError(f"duplicate monomial {exps!r} {odd!r}")
        out[key] = value
    return SuperPolynomial._raw(ctx, out)


def deserialize(text: str, ctx: RingContext | None = None):
    """Inverse of :func:`serialize`.  If ``ctx`` is given the document must match it."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed document: {exc.msg}", exc.lineno, exc.colno) from None
    return from_document(doc, ctx)


def from_document(doc, ctx: RingContext | None = None):
    if not isinstance(doc, dict):
        raise DocumentError("document must be an object")
    try:
        m, n = doc["m"], doc["n"]
        field = FieldSpec.parse(doc["field"])
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise DocumentError(f"bad ring header: {exc}") from None
    if not (isinstance(m, int) and isinstance(n, int)) or m < 0 or n < 0:
        raise DocumentError("ring sizes must be non-negative integers")
    doc_ctx = RingContext(m, n, field)
    if ctx is not None and ctx != doc_ctx:
        raise ContextMismatchError(f"document ring {doc_ctx} differs from {ctx}")
    keys = set(doc)
    if keys == {"m", "n", "field", "terms"}:
        return _terms_from_doc(doc_ctx, doc["terms"])
    if keys == {"m", "n", "field", "even", "odd"}:
        even, odd = doc["even"], doc["odd"]
        if not isinstance(even, list) or not isinstance(odd, list):
            raise DocumentError("'even' and 'odd' must be lists")
        return SuperEndomorphism(
            doc_ctx,
            [_terms_from_doc(doc_ctx, t) for t in even],
            [_terms_from_doc(doc_ctx, t) for t in odd],
        )
    raise DocumentError(f"unrecognised document keys {sorted(keys)}")
