"""``hv`` command line front end.

Every invocation prints one JSON document on stdout.  Exit status: 0 pass,
1 fail (a verification found a counterexample), 2 error (bad input).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction

from .algebra import (AlgebraKind, bracket, format_rational, jacobi_sweep, parse_generator,
                      parse_word)
from .errors import HVError
from .moduledoc import build_from_doc, load_doc
from .modules import Vec
from .pbw import formula_suite, normal_form
from .probes import (LEMMAS, DPrime, action_matrix, annihilator, apply_op, check_degree_lemma,
                     injectivity_probe, invariant, local_nilpotency_probe)
from .sugawara import appendix_decomposition_check, verify_sugawara_relations

log = logging.getLogger("hv")

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _json_default(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(doc, out):
    out.write(json.dumps(doc, default=_json_default, ensure_ascii=False) + "\n")


def _op(token, kind):
    """Generator token, or ``d':n`` for the shifted operator d'_n."""
    s = token.strip()
    if s.startswith("d':") or s.startswith("dprime:"):
        return DPrime(int(s.split(":", 1)[1]))
    return parse_generator(s, kind)


def _vector(M, text):
    if text is None or text == "top":
        return M.top_vector()
    obj = load_doc(text)
    return M.vector_from_json(obj)


def _module(args):
    return build_from_doc(args.spec, truncation=getattr(args, "truncation", None))


# ---------------------------------------------------------------- handlers

def cmd_bracket(args):
    kind = AlgebraKind.parse(args.algebra)
    res = bracket(kind, parse_generator(args.x, kind), parse_generator(args.y, kind))
    items = sorted(res.items(), key=lambda gc: (gc[0].is_central, gc[0].sort_key()))
    return "pass", {"result": [[g.token, format_rational(c)] for g, c in items]}


def cmd_normalize(args):
    kind = AlgebraKind.parse(args.algebra)
    return "pass", {"result": normal_form(kind, parse_word(args.word, kind)).to_json()}


def _report(rep):
    return ("pass" if rep.passed else "fail"), rep.to_json()


def cmd_verify(args):
    what = args.what
    if what == "jacobi":
        kinds = (AlgebraKind.MIRROR, AlgebraKind.TWISTED) if args.algebra == "both" \
            else (AlgebraKind.parse(args.algebra),)
        return _report(jacobi_sweep(kinds, args.range))
    if what == "formulas":
        t = 3 if args.t is None else args.t
        return _report(formula_suite(args.range, t))
    if args.spec is None:
        raise UsageError(f"verify {what} needs --spec")
    M = _module(args)
    if what == "sugawara":
        return _report(verify_sugawara_relations(M, args.range, z=args.z))
    return _report(appendix_decomposition_check(M, args.range))


def cmd_module(args):
    M = _module(args)
    if args.action == "build":
        basis = M.basis(M.truncation) if M.truncation is not None else []
        return "pass", {"module": M.describe(), "dimension": len(basis),
                        "basis": [M.basis_to_json(b) for b in basis],
                        "top_vector": M.vector_to_json(M.top_vector())}
    if args.action == "act":
        if not args.gen:
            raise UsageError("module act needs --gen")
        v = _vector(M, args.vector)
        for tok in reversed(args.gen.split(",")):
            op = _op(tok, M.kind)
            v = Vec(apply_op(M, op, v._terms)) if isinstance(op, DPrime) else M.act(op, v)
        return "pass", {"result": M.vector_to_json(v)}
    if args.action == "invariants":
        if not args.which:
            raise UsageError("module invariants needs --which")
        rep = invariant(M, args.which, B=args.scan)
        return "pass", rep.to_json(M)
    if not args.gen:
        raise UsageError("module dump-matrix needs --gen")
    return "pass", action_matrix(M, _op(args.gen, M.kind))


def cmd_probe(args):
    M = _module(args)
    if args.what == "lemma":
        if args.seed is None:
            raise UsageError("probe lemma needs an explicit --seed")
        if args.which not in LEMMAS:
            raise UsageError(f"--which must be one of {list(LEMMAS)}")
        N = 6 if args.lemma_truncation is None else args.lemma_truncation
        rep = check_degree_lemma(args.which, M, samples=args.samples, seed=args.seed, N=N,
                                 k=args.k, l=args.l)
        return _report(rep)
    if args.what == "annihilator":
        ker = annihilator(M, args.family, args.r)
        return "pass", {"family": args.family, "r": args.r, "dimension": len(ker),
                        "basis": [M.vector_to_json(v) for v in ker]}
    if not args.gen:
        raise UsageError(f"probe {args.what} needs --gen")
    op = _op(args.gen, M.kind)
    if args.what == "injective":
        return "pass", injectivity_probe(M, op)
    res = local_nilpotency_probe(M, op, _vector(M, args.vector), args.maxpow)
    return "pass", res


# ---------------------------------------------------------------- parser

def build_parser():
    p = _Parser(prog="hv", description="Exact computations for Heisenberg-Virasoro algebras.")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized probes")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bracket", help="Lie bracket of two generators")
    b.add_argument("--algebra", default="mirror")
    b.add_argument("--x", required=True)
    b.add_argument("--y", required=True)
    b.set_defaults(func=cmd_bracket)

    nz = sub.add_parser("normalize", help="PBW normal form of a word")
    nz.add_argument("--algebra", default="mirror")
    nz.add_argument("--word", required=True, help="comma separated tokens, e.g. h:1/2,h:-1/2")
    nz.set_defaults(func=cmd_normalize)

    v = sub.add_parser("verify", help="verification suites")
    v.add_argument("what", choices=["jacobi", "formulas", "sugawara", "appendix"])
    v.add_argument("--range", type=int, required=True)
    v.add_argument("--t", type=int, default=None, help="max number of factors (formulas)")
    v.add_argument("--algebra", default="both", help="jacobi: mirror, twisted or both")
    v.add_argument("--spec", default=None)
    v.add_argument("--truncation", type=Fraction, default=None)
    v.add_argument("--z", type=Fraction, default=None)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("module", help="build modules and act on vectors")
    m.add_argument("action", choices=["build", "act", "invariants", "dump-matrix"])
    m.add_argument("--spec", required=True)
    m.add_argument("--truncation", type=Fraction, default=None)
    m.add_argument("--gen", default=None,
                   help="generator token(s); for act, a comma separated word applied right to left")
    m.add_argument("--vector", default=None, help="Vec JSON (inline or file); default: top vector")
    m.add_argument("--which", default=None, choices=["n_S", "m_S", "r_S", "n_M", "r_M"])
    m.add_argument("--scan", type=int, default=8, help="scan bound B for invariants")
    m.set_defaults(func=cmd_module)

    pr = sub.add_parser("probe", help="exact probes")
    pr.add_argument("what", choices=["lemma", "injective", "nilpotent", "annihilator"])
    pr.add_argument("--spec", required=True)
    pr.add_argument("--truncation", type=Fraction, default=None)
    pr.add_argument("--gen", default=None)
    pr.add_argument("--vector", default=None)
    pr.add_argument("--maxpow", type=int, default=10)
    pr.add_argument("--family", choices=["h", "vir", "dprime"], default="h")
    pr.add_argument("--r", type=int, default=0)
    pr.add_argument("--which", default=None, help=f"lemma: one of {', '.join(LEMMAS)}")
    pr.add_argument("--samples", type=int, default=50)
    pr.add_argument("--k", type=int, default=None)
    pr.add_argument("--l", type=int, default=None)
    pr.add_argument("--lemma-truncation", type=Fraction, default=None,
                    help="truncation of the induced module built over the base")
    pr.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit({"status": "error", "error": str(exc)}, stdout)
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        status, payload = args.func(args)
    except (UsageError, HVError, ValueError, KeyError, TypeError) as exc:
        _emit({"status": "error", "error": f"{type(exc).__name__}: {exc}"}, stdout)
        log.error("%s", exc)
        return EXIT_ERROR
    _emit({"status": status, **payload}, stdout)
    log.info("done in %.0f ms", 1000 * (time.perf_counter() - t0))
    return EXIT_PASS if status == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
