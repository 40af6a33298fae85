"""The ``hs`` command.

Exit status 0 on success, 1 on a mathematical failure (the JSON document
then carries a ``code`` field), 2 on unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .basechange import (
    BaseExtension,
    CounterexampleInstance,
    counterexample_report,
    counterexample_witness_family,
    extend_hs,
    leap_scan,
)
from .decompose import decompose_char_p, factor_over_poly_extension
from .hs import INF, compose, invert, order, subst_action
from .integrate import BoundExhaustedError, Bounds, find_log_integral
from .jets import JetSeries, SubstitutionMap
from .logideal import NotLogarithmicError, log_defects, pushforward_hs, lift_hs_from_quotient
from .textio import ParseError, format_derivation, parse_expr, read_derivation, read_ideal


class Failure(Exception):
    """A mathematical failure: exit status 1 with a machine-readable code."""

    def __init__(self, code: str, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_emit_error(f"{self.prog}: {message}", 2))


def _emit_error(message: str, status: int) -> int:
    print(message, file=sys.stderr)
    return status


def _bounds(args) -> Bounds:
    if getattr(args, "bounds", None):
        return Bounds.parse(args.bounds)
    return Bounds.from_env()


def _ideal_over(path, ring):
    I = read_ideal(path)
    if I.ring != ring:
        raise ParseError(f"{path}: ideal ring {I.ring} differs from the derivation ring {ring}")
    return I


def _doc(args, payload: dict, text: str) -> str:
    if args.json:
        return json.dumps({"version": __version__, **payload}, sort_keys=True, indent=2)
    return text


# -- subcommands ---------------------------------------------------------------

def cmd_compose(args):
    D, E = read_derivation(args.a), read_derivation(args.b)
    if D.ring != E.ring or D.length != E.length:
        raise ParseError("both derivations need the same header")
    out = format_derivation(compose(D, E))
    return _doc(args, {"result": out}, out)


def cmd_invert(args):
    out = format_derivation(invert(read_derivation(args.deriv)))
    return _doc(args, {"result": out}, out)


def cmd_subst(args):
    D = read_derivation(args.deriv)
    target = D.length if args.to is None else args.to
    c = parse_expr(args.image, D.ring, target)
    image = JetSeries(D.ring, [c.get(i, D.ring.zero()) for i in range(target + 1)])
    try:
        psi = SubstitutionMap(D.length, image)
    except ValueError as e:
        raise ParseError(str(e)) from None
    out = format_derivation(subst_action(psi, D))
    return _doc(args, {"result": out}, out)


def cmd_order(args):
    ell = order(read_derivation(args.deriv))
    value = None if ell is INF else ell
    return _doc(args, {"order": value}, "inf" if value is None else str(value))


def cmd_check_log(args):
    D = read_derivation(args.deriv)
    I = _ideal_over(args.ideal, D.ring)
    r = D.length if args.r is None else args.r
    bad = log_defects(D, I, r)
    defects = [{"generator": str(I.gens[gi]), "index": i, "remainder": str(rem)} for gi, i, rem in bad]
    payload = {"r": r, "logarithmic": not bad, "defects": defects}
    text = f"{r}-logarithmic: {'yes' if not bad else 'no'}"
    for d in defects:
        text += f"\n  D_{d['index']}({d['generator']}) = {d['remainder']} mod I"
    if bad:
        raise Failure("not_logarithmic", text, payload)
    return _doc(args, payload, text)


def cmd_push(args):
    D = read_derivation(args.deriv)
    I = _ideal_over(args.ideal, D.ring)
    try:
        Q = pushforward_hs(D, I)
    except NotLogarithmicError as e:
        raise Failure("not_logarithmic", str(e)) from None
    out = format_derivation(Q.rep)
    return _doc(args, {"result": out, "ideal": [str(g) for g in I.gens]}, out)


def cmd_lift(args):
    D = read_derivation(args.deriv)
    I = _ideal_over(args.ideal, D.ring)
    try:
        lifted = lift_hs_from_quotient(pushforward_hs(D, I))
    except NotLogarithmicError as e:
        raise Failure("not_logarithmic", str(e)) from None
    out = format_derivation(lifted)
    return _doc(args, {"result": out}, out)


def cmd_integrate(args):
    D = read_derivation(args.deriv)
    I = _ideal_over(args.ideal, D.ring)
    try:
        rep = find_log_integral(D, I, args.n, _bounds(args))
    except NotLogarithmicError as e:
        raise Failure("not_logarithmic", str(e)) from None
    payload = rep.to_dict()
    if not rep.feasible:
        raise Failure(rep.status, f"no {args.n}-integral: {rep.status} within {rep.bounds.to_dict()}", payload)
    return _doc(args, payload, format_derivation(rep.witness))


def cmd_decompose(args):
    D = read_derivation(args.deriv)
    I = _ideal_over(args.ideal, D.ring)
    try:
        cert = decompose_char_p(D, I, args.p, args.l, _bounds(args))
    except NotLogarithmicError as e:
        raise Failure("not_logarithmic", str(e)) from None
    except BoundExhaustedError as e:
        raise Failure("bound_exhausted", str(e), {"report": e.report.to_dict()}) from None
    if not cert.verify():
        raise Failure("certificate_rejected", "certificate failed verification", cert.to_dict())
    lines = [f"{f.label}:\n{format_derivation(f.derivation)}" for f in cert.factors]
    return _doc(args, cert.to_dict(), "".join(lines).rstrip("\n"))


def cmd_factor_ext(args):
    D = read_derivation(args.deriv)
    I = None
    if args.ideal:
        I = read_ideal(args.ideal)
        if I.ring != D.ring.base_ring():
            raise ParseError("the ideal must live on the base ring (no ext variables)")
    cert = factor_over_poly_extension(D, args.m, I)
    if not cert.verify():
        raise Failure("certificate_rejected", "factor attestation failed", cert.to_dict())
    lines = [f"{f.label}:\n{format_derivation(f.derivation)}" for f in cert.factors]
    return _doc(args, cert.to_dict(), "".join(lines).rstrip("\n"))


def cmd_extend(args):
    D = read_derivation(args.deriv)
    if bool(args.vars) == bool(args.twist):
        raise ParseError("give exactly one of --vars or --twist")
    try:
        if args.vars:
            ext = BaseExtension.polynomial(D.ring, [v for v in args.vars.split(",") if v])
        else:
            roots = dict(part.split("=", 1) for part in args.twist.split(","))
            ext = BaseExtension.frobenius_twist(D.ring, roots, args.exponent)
    except ValueError as e:
        raise ParseError(str(e)) from None
    out = format_derivation(extend_hs(D, ext))
    return _doc(args, {"result": out, "kind": ext.kind}, out)


def cmd_counterexample(args):
    rep = counterexample_report(_bounds(args) if args.bounds else Bounds(8, 4))
    return _doc(args, rep.to_dict(), rep.to_text())


def cmd_leaps(args):
    if args.ideal:
        I = read_ideal(args.ideal)
        witnesses = []
        for path in args.deriv or []:
            D = read_derivation(path)
            if D.ring != I.ring:
                raise ParseError(f"{path}: ring differs from the ideal's")
            witnesses.append((path, D))
        if not witnesses:
            raise ParseError("--ideal needs at least one --deriv witness")
    else:
        inst = CounterexampleInstance.build()
        I = inst.ideal
        witnesses = counterexample_witness_family(inst)
    try:
        rep = leap_scan(I, args.m_max, witnesses, _bounds(args))
    except NotLogarithmicError as e:
        raise Failure("not_logarithmic", str(e)) from None
    lines = [f"{r['name']}: flag {r['flag']}" for r in rep.rows]
    lines.append(f"candidates {rep.candidates}; powers of p only: {rep.consistent}")
    return _doc(args, rep.to_dict(), "\n".join(lines))


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = ArgumentParser(prog="hs", description="Hasse-Schmidt derivation toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="emit a JSON document")
        p.set_defaults(fn=fn)
        return p

    p = add("compose", cmd_compose, "compose two derivations (a o b)")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)

    p = add("invert", cmd_invert, "inverse derivation")
    p.add_argument("--deriv", required=True)

    p = add("subst", cmd_subst, "act by mu -> IMAGE")
    p.add_argument("--deriv", required=True)
    p.add_argument("--image", required=True, help="expression in mu with zero constant term")
    p.add_argument("--to", type=int, help="target length (default: the input length)")

    p = add("order", cmd_order, "least index of a nonzero component")
    p.add_argument("--deriv", required=True)

    p = add("check-log", cmd_check_log, "test r-logarithmicity")
    p.add_argument("--deriv", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--r", type=int)

    for name, fn, help_ in (("push", cmd_push, "induced derivation on R/I"),
                            ("lift", cmd_lift, "lift a derivation of R/I to R")):
        p = add(name, fn, help_)
        p.add_argument("--deriv", required=True)
        p.add_argument("--ideal", required=True)

    p = add("integrate", cmd_integrate, "search a logarithmic n-integral")
    p.add_argument("--deriv", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bounds", help="e.g. ring=6,param=2,depth=1")

    p = add("decompose", cmd_decompose, "T[p] o F decomposition")
    p.add_argument("--deriv", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--bounds")

    p = add("factor-ext", cmd_factor_ext, "factor over a polynomial extension")
    p.add_argument("--deriv", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--ideal", help="ideal over the base ring for log attestations")

    p = add("extend", cmd_extend, "base change of a derivation")
    p.add_argument("--deriv", required=True)
    p.add_argument("--vars", help="new polynomial variables, comma separated")
    p.add_argument("--twist", help="roots of parameters, e.g. s=a,t=b")
    p.add_argument("--exponent", type=int, default=1)

    p = add("counterexample", cmd_counterexample, "non-surjectivity report")
    p.add_argument("--bounds")

    p = add("leaps", cmd_leaps, "bounded leap scan")
    p.add_argument("--ideal")
    p.add_argument("--deriv", action="append")
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--bounds")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        out = args.fn(args)
    except Failure as f:
        if args.json:
            doc = {"version": __version__, "code": f.code, "message": str(f), **f.payload}
            print(json.dumps(doc, sort_keys=True, indent=2))
        else:
            print(str(f))
        return 1
    except (ParseError, OSError, ValueError) as e:
        return _emit_error(f"hs {args.command}: {e}", 2)
    print(out.rstrip("\n"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
