"""Command-line front end.

Every subcommand parses its inputs, calls one kernel operation and prints a
JSON report (indent 2, fixed key order) to stdout.  ``--quiet`` prints only
the verdict word, or the bare result for commands that have no verdict.

Exit status: 0 computed (including NotAutomorphism), 2 bad input, 3 failed
precondition, 4 internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import Sequence

from . import calculus, inversion, laws, morphism, pointcheck
from .errors import (
    ContextMismatchError,
    FieldMismatchError,
    InternalVerificationError,
    ParityError,
    ParseError,
    PreconditionError,
)
from .fields import QQ, FieldSpec
from .poly import RingContext
from .textio import map_document, parse_map, parse_poly, parse_scalar, poly_document, print_canonical, print_map

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_VERIFICATION = 4

_VAR_INDEX = re.compile(r"\b(xi|x)(\d+)\b")


class _UsageError(Exception):
    pass


# -- input helpers ---------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _field(args) -> FieldSpec | None:
    if args.field is None:
        return None
    try:
        return FieldSpec.parse(args.field)
    except ValueError as exc:
        raise _UsageError(f"--field: {exc}") from None


def _load_map(path: str, args):
    return parse_map(_read(path), default_field=_field(args))


def _poly_ring(texts: Sequence[str], args) -> RingContext:
    # ring sizes default to the largest generator index mentioned
    m = n = 0
    for text in texts:
        for kind, idx in _VAR_INDEX.findall(text):
            if kind == "x":
                m = max(m, int(idx))
            else:
                n = max(n, int(idx))
    m = args.m if args.m is not None else m
    n = args.n if args.n is not None else n
    return RingContext(m, n, _field(args) or QQ)


def _polys(texts: Sequence[str], args):
    ctx = _poly_ring(texts, args)
    return ctx, [parse_poly(t, ctx) for t in texts]


def _ring_doc(ctx: RingContext) -> dict:
    return {"m": ctx.m, "n": ctx.n, "field": ctx.field.token}


def _scalars(values) -> list[str]:
    return [str(v) for v in values]


def _matrix_text(matrix) -> list[list[str]]:
    return [[print_canonical(e) for e in row] for row in matrix]


# -- subcommands -----------------------------------------------------------
# each returns (report dict, short text for --quiet)


def cmd_canon(args):
    ctx, (p,) = _polys([args.poly], args)
    text = print_canonical(p)
    return {"ring": _ring_doc(ctx), "canonical": text, "document": poly_document(p)}, text


def cmd_mul(args):
    ctx, (p, q) = _polys([args.left, args.right], args)
    text = print_canonical(p * q)
    return {"ring": _ring_doc(ctx), "product": text}, text


def cmd_diff(args):
    mt = re.fullmatch(r"(xi|x)(\d+)", args.var.strip())
    if not mt:
        raise _UsageError(f"--var expects x<i> or xi<k>, got {args.var!r}")
    ctx, (p, _) = _polys([args.poly, args.var], args)
    idx = int(mt.group(2))
    try:
        d = calculus.d_dx(p, idx) if mt.group(1) == "x" else calculus.d_dxi(p, idx)
    except IndexError as exc:
        raise _UsageError(str(exc)) from None
    text = print_canonical(d)
    return {"ring": _ring_doc(ctx), "variable": args.var, "derivative": text}, text


def cmd_jac(args):
    phi = _load_map(args.map, args)
    jp = calculus.jacobian_pair(phi)
    report = {"ring": _ring_doc(phi.ctx), "jx": _matrix_text(jp.jx), "jxi": _matrix_text(jp.jxi)}
    return report, "computed"


def cmd_check(args):
    phi = _load_map(args.map, args)
    v = calculus.check_sj(phi)
    word = "pass" if v.passed else "fail"
    report = {
        "ring": _ring_doc(phi.ctx),
        "verdict": word,
        "even": {"det": print_canonical(v.even_det), "det_mod_j": print_canonical(v.even_det_mod_j), "ok": v.even_ok},
        "odd": {"det": print_canonical(v.odd_det), "det_mod_j": print_canonical(v.odd_det_mod_j), "ok": v.odd_ok},
        "odd_linear_coefficients_constant": morphism.linear_parts(phi).coefficients_constant,
    }
    return report, word


def cmd_tangent(args):
    phi = _load_map(args.map, args)
    coords = [c for c in args.point.split(",") if c.strip()] if args.point else []
    point = [parse_scalar(c.strip(), phi.ctx.field) for c in coords]
    ok = calculus.tangent_check(phi, point)
    word = "invertible" if ok else "singular"
    return {"ring": _ring_doc(phi.ctx), "point": [phi.ctx.field.format(a) for a in point], "verdict": word}, word


def _verdict_doc(result) -> dict:
    doc: dict = {"verdict": result.verdict}
    if isinstance(result, inversion.Automorphism):
        c = result.certificate
        doc["certificate"] = {
            "even_inverse_degree": c.even_inverse_degree,
            "unipotent_iterations": c.unipotent_iterations,
            "verified_both_sides": c.verified_both_sides,
        }
        doc["inverse"] = print_map(result.inverse).splitlines()[1:]
    elif isinstance(result, inversion.NotAutomorphism):
        doc["reason"] = result.reason.value
        if result.witness is not None:
            doc["witness"] = [_scalars(pt) for pt in result.witness]
    else:
        doc["degree_bound_tried"] = result.degree_bound_tried
    return doc


def cmd_invert(args):
    phi = _load_map(args.map, args)
    prefilter = None
    if args.prefilter:
        try:
            prefilter = FieldSpec.parse(args.prefilter)
        except ValueError as exc:
            raise _UsageError(f"--prefilter: {exc}") from None
    result = inversion.invert_full(
        phi,
        degree_bound=args.degree_bound,
        ceiling=args.ceiling if args.ceiling is not None else inversion.DEFAULT_CEILING,
        prefilter=prefilter,
    )
    report = {"ring": _ring_doc(phi.ctx)}
    report.update(_verdict_doc(result))
    return report, result.verdict


def cmd_compose(args):
    outer = _load_map(args.outer, args)
    inner = _load_map(args.inner, args)
    result = morphism.compose(outer, inner)
    text = print_map(result)
    return {"ring": _ring_doc(result.ctx), "map": text.splitlines()[1:], "document": map_document(result)}, text.rstrip("\n")


def cmd_points(args):
    phi = _load_map(args.map, args)
    extension = None
    if args.extension:
        try:
            extension = FieldSpec.parse(args.extension)
        except ValueError as exc:
            raise _UsageError(f"--extension: {exc}") from None
    target = extension or phi.ctx.field
    report: dict = {"ring": _ring_doc(phi.ctx), "over": target.token}
    if target.is_finite:
        ceiling = args.ceiling if args.ceiling is not None else pointcheck.DEFAULT_ENUMERATION_CEILING
        res = pointcheck.exhaustive_bijectivity(phi, ceiling, field=extension)
        report["mode"] = "exhaustive"
    else:
        res = pointcheck.sample_injectivity(phi, args.trials, args.seed)
        report["mode"] = "sampled"
    report["verdict"] = res.verdict
    if isinstance(res, pointcheck.Collision):
        report["first"] = _scalars(res.first)
        report["second"] = _scalars(res.second)
        report["image"] = _scalars(res.image)
    elif isinstance(res, pointcheck.Bijective):
        report["points"] = res.points
    else:
        report["trials"] = res.trials
    return report, res.verdict


def cmd_random(args):
    ctx = RingContext(args.m if args.m is not None else 1, args.n if args.n is not None else 1, _field(args) or QQ)
    phi = morphism.random_tame(ctx, args.depth, args.max_degree, args.seed)
    text = print_map(phi)
    return None, text.rstrip("\n")


def cmd_probe_upsilon(args):
    phi = _load_map(args.map, args)
    probe = inversion.probe_upsilon_power(phi)
    unip = inversion.unipotent_invert(phi)
    report = {
        "ring": _ring_doc(phi.ctx),
        "power": probe.power,
        "characteristic": probe.characteristic,
        "holds": probe.holds,
        "unipotent_iterations": unip.iterations,
    }
    return report, "holds" if probe.holds else "fails"


def cmd_selftest(args):
    results = laws.run_suites(args.trials, args.seed)
    passed = all(r.passed for r in results)
    suites = [{"suite": r.name, "field": r.field, "cases": r.cases, "failures": r.failures} for r in results]
    word = "pass" if passed else "fail"
    return {"verdict": word, "suites": suites}, word


# -- argument parsing ------------------------------------------------------


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q | Fp:<p> | Fq:<p>:<c0,c1,...>; a map file header takes precedence")
    common.add_argument("--degree-bound", type=_nat)
    common.add_argument("--ceiling", type=_nat)
    common.add_argument("--seed", type=_nat, default=0)
    common.add_argument("--trials", type=_nat, default=100)
    common.add_argument("--out", help="also write the report to this file")
    common.add_argument("--quiet", action="store_true", help="print the verdict word only")
    common.add_argument("--timing", action="store_true", help="print elapsed time to stderr")

    ring = argparse.ArgumentParser(add_help=False)
    ring.add_argument("-m", type=_nat, help="number of even generators")
    ring.add_argument("-n", type=_nat, help="number of odd generators")

    parser = argparse.ArgumentParser(prog="superjac", description="Polynomial superalgebra toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, parents=(common,)):
        p = sub.add_parser(name, parents=list(parents), help=help_)
        p.set_defaults(func=func)
        return p

    add("canon", cmd_canon, "print a polynomial canonically", (common, ring)).add_argument("poly")
    p = add("mul", cmd_mul, "multiply two polynomials", (common, ring))
    p.add_argument("left")
    p.add_argument("right")
    p = add("diff", cmd_diff, "differentiate by a generator", (common, ring))
    p.add_argument("poly")
    p.add_argument("--var", required=True, help="x<i> or xi<k>")
    add("jac", cmd_jac, "Jacobian blocks of a map").add_argument("map")
    add("check", cmd_check, "determinant criterion for a map").add_argument("map")
    p = add("tangent", cmd_tangent, "tangent invertibility at a point")
    p.add_argument("map")
    p.add_argument("--point", default="", help="comma-separated coordinates")
    p = add("invert", cmd_invert, "decide invertibility and compute the inverse")
    p.add_argument("map")
    p.add_argument("--prefilter", help="finite field for a point-collision prefilter")
    p = add("compose", cmd_compose, "outer o inner")
    p.add_argument("outer")
    p.add_argument("inner")
    p = add("points", cmd_points, "bijectivity of the classical point map")
    p.add_argument("map")
    p.add_argument("--extension", help="finite extension field to enumerate over")
    p = add("random", cmd_random, "random tame automorphism as a map file", (common, ring))
    p.add_argument("--depth", type=_nat, default=4)
    p.add_argument("--max-degree", type=_nat, default=2)
    add("probe-upsilon", cmd_probe_upsilon, "test upsilon^(n+1) = id for a unipotent map").add_argument("map")
    add("selftest", cmd_selftest, "randomised algebra-law suites")
    return parser


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fail(code: int, message: str) -> int:
    sys.stderr.write(f"superjac: error: {message}\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report, short = args.func(args)
        if report is None:
            text = short + "\n"
        elif args.quiet:
            text = short + "\n"
        else:
            doc = {"command": args.command, **report}
            text = json.dumps(doc, indent=2, ensure_ascii=True) + "\n"
        _emit(text, args.out)
    except ParseError as exc:
        return _fail(EXIT_INPUT, f"parse error at {exc}")
    except (ParityError, ContextMismatchError, FieldMismatchError, _UsageError, OSError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except PreconditionError as exc:
        return _fail(EXIT_PRECONDITION, str(exc))
    except InternalVerificationError as exc:
        return _fail(EXIT_VERIFICATION, str(exc))
    finally:
        if args.timing:
            sys.stderr.write(f"elapsed {time.perf_counter() - start:.3f}s\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
