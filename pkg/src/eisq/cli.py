"""Command-line interface: ``eisq <command> [options]``.

Exit codes: 0 success (or every check passed), 1 a check failed,
2 a check was inconclusive, 3 invalid input or a library error.  Errors are
printed to stderr as a JSON object {"error": {"code", "type", "message"}}.
"""

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .dirichlet import QuadraticCharacter, l_value
from .eisenstein import EisensteinParams, derivative_coefficient, holomorphic_expansion
from .errors import EisqError, InvalidArgument
from .field import FractionalIdeal, genus_characters, genus_representatives, make_field
from .repnum import DEFAULT_BUDGET, count_G, sigma_polynomial
from .special import DEFAULT_PREC
from .verify import CHECKS, run_suite, suite_status

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2, 3

HZ_LABEL = (
    "weight 2: for m > 0 the m-th coefficient is proportional to the volume "
    "of the Hirzebruch-Zagier divisor T_m on the Hilbert modular surface X(a)"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("usage", "UsageError", message)
        sys.exit(EXIT_ERROR)


def _emit_error(code, kind, message):
    print(json.dumps({"error": {"code": code, "type": kind, "message": message}}), file=sys.stderr)


def _frac(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _real(x, digits):
    return mpmath.nstr(x, digits, min_fixed=0, max_fixed=0)


def _digits(prec):
    return max(5, int(prec * 0.30103))


def _error_field(value, prec):
    # nominal bound from the precision contract (relative 2^-prec)
    return _real(max(abs(value), 1) * mpmath.mpf(2) ** (-prec), 3)


def _default_precision():
    env = os.environ.get("EISQ_PRECISION")
    if env is None:
        return DEFAULT_PREC
    try:
        return int(env)
    except ValueError:
        raise InvalidArgument(f"EISQ_PRECISION must be an integer, got {env!r}") from None


def _field_and_ideal(args):
    F = make_field(args.disc)
    if args.ideal is not None and args.genus is not None:
        raise InvalidArgument("give either --ideal or --genus, not both")
    if args.ideal is not None:
        return F, FractionalIdeal.parse(args.ideal, F.D)
    reps = genus_representatives(F)
    idx = args.genus or 0
    if not 0 <= idx < len(reps):
        raise InvalidArgument(f"--genus must be in 0..{len(reps) - 1}, got {idx}")
    return F, reps[idx]


def _params(args):
    F, I = _field_and_ideal(args)
    return EisensteinParams(F, I, args.weight, prec=args.precision, budget=args.budget)


def _check_common(args):
    if args.precision < 16:
        raise InvalidArgument(f"--precision must be at least 16 bits, got {args.precision}")
    if args.budget <= 0:
        raise InvalidArgument("--budget must be positive")
    least = 0 if args.command == "derivative" else 1
    if getattr(args, "terms", least) < least:
        raise InvalidArgument(f"--terms must be >= {least}, got {args.terms}")


def _write(obj, args, rows=None, header=None):
    if args.format == "csv" and rows is not None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        print(json.dumps(obj, indent=2))


# -- commands ---------------------------------------------------------------


def cmd_info(args):
    F = make_field(args.disc)
    a, b, den = F.eps0.halves()
    genera = [
        {"ideal": str(I), "norm": _frac(I.norm()), "genus_chars": list(genus_characters(F, I))}
        for I in genus_representatives(F)
    ]
    out = {
        "D": F.D,
        "eps0": str(F.eps0),
        "eps0_halves": {"a": a, "b": b, "den": den},
        "eps0_norm": F.eps0_norm,
        "h_narrow": F.h_narrow,
        "h_wide": F.h_wide,
        "prime_discs": list(F.prime_discs),
        "num_genera": F.num_genera,
        "genera": genera,
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_expand(args):
    P = _params(args)
    exp = holomorphic_expansion(P, args.terms, workers=args.workers)
    out = exp.to_json()
    if P.k == 2:
        out["label"] = HZ_LABEL
    rows = [(m, c.numerator, c.denominator) for m, c in sorted(exp.coefficients.items())]
    _write(out, args, rows, ("m", "num", "den"))
    return EXIT_OK


def _parts_json(parts):
    out = {}
    for key, val in parts.items():
        if isinstance(val, Fraction):
            out[key] = _frac(val)
        elif isinstance(val, list):
            out[key] = val
        else:
            out[key] = str(val) if not isinstance(val, int) else val
    return out


def cmd_derivative(args):
    P = _params(args)
    if args.v is None or args.v <= 0:
        raise InvalidArgument("--v must be given and positive")
    digits = _digits(args.precision)
    coeffs = []
    rows = []
    for m in range(-args.terms, args.terms + 1):
        dc = derivative_coefficient(P, m)
        with mpmath.workprec(args.precision):
            val = dc.value(args.v, args.precision)
            entry = {
                "m": m,
                "value": _real(val, digits),
                "error": _error_field(val, args.precision),
                "parts": _parts_json(dc.parts()),
            }
        coeffs.append(entry)
        rows.append((m, entry["value"], entry["error"]))
    out = {
        "D": P.field.D,
        "ideal": str(P.ideal),
        "k": P.k,
        "v": args.v,
        "precision": args.precision,
        "genus_chars": list(genus_characters(P.field, P.ideal)),
        "coeffs": coeffs,
    }
    _write(out, args, rows, ("m", "value", "error"))
    return EXIT_OK


def cmd_sigma(args):
    F, I = _field_and_ideal(args)
    if args.m == 0:
        raise InvalidArgument("--m must be nonzero")
    poly = sigma_polynomial(F, I, args.m, args.budget)
    w = args.w if args.w is not None else 1 - args.weight
    digits = _digits(args.precision)
    with mpmath.workprec(args.precision):
        deriv = poly.derivative(w, args.precision)
        out = {
            "D": F.D,
            "ideal": str(I),
            "m": args.m,
            "w": w,
            "terms": poly.to_json(),
            "value_at_w": _frac(poly.value(w)) if w % 2 else _real(poly.numeric(w, args.precision), digits),
            "derivative_at_w": _real(deriv, digits),
            "derivative_error": _error_field(deriv, args.precision),
        }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _int_range(text):
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
        else:
            lo = hi = int(text)
    except ValueError:
        raise InvalidArgument(f"expected an integer or lo:hi, got {text!r}") from None
    if lo > hi:
        raise InvalidArgument(f"empty range {text!r}")
    return range(lo, hi + 1)


def cmd_repnum(args):
    _, I = _field_and_ideal(args)
    if args.b_max < 1:
        raise InvalidArgument("--b-max must be >= 1")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("m", "b", "count"))
    for m in _int_range(args.m):
        for b in range(1, args.b_max + 1):
            w.writerow((m, b, count_G(I, m, b, args.budget)))
    return EXIT_OK


def cmd_lvalue(args):
    chi = QuadraticCharacter(args.disc)
    if (args.n is None) == (args.s is None):
        raise InvalidArgument("give exactly one of --n (point 1-n) or --s (real point)")
    if args.n is not None:
        if args.n < 1:
            raise InvalidArgument("--n must be >= 1")
        point = 1 - args.n
    else:
        point = mpmath.mpf(args.s)
    lv = l_value(point, chi, args.precision)
    out = {
        "character": chi.modulus,
        "point": str(point) if args.n is None else point,
        "exact": _frac(lv.exact) if lv.exact is not None else None,
        "approx": _real(lv.approx, _digits(args.precision)),
        "error": _real(lv.error_bound, 3),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_verify(args):
    selection = "all" if args.suite == "all" else [args.suite]
    discs = (args.disc,) if args.disc is not None else None
    weights = (args.weight,) if args.weight_given else None
    kwargs = {"budget": args.budget, "workers": args.workers}
    if discs:
        make_field(discs[0])
        kwargs["discs"] = discs
    if weights:
        kwargs["weights"] = weights
    reports = run_suite(selection, **kwargs)
    status = suite_status(reports)
    if args.json:
        print(json.dumps({"status": status, "reports": [r.to_json() for r in reports]}, indent=2))
    else:
        for r in reports:
            p = ", ".join(f"{k}={v}" for k, v in r.params.items())
            print(f"{r.status.upper():13s} {r.name:17s} disc={r.discrepancy:.3e} tol={r.tolerance:.1e} [{p}]")
        print(f"{len(reports)} checks, exit {status}")
    return status


# -- parser -----------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="eisq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"eisq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    prec = _default_precision()

    def common(p, ideal=True, weight=True):
        p.add_argument("--disc", type=int, required=True, help="odd fundamental discriminant D")
        if ideal:
            p.add_argument("--ideal", help="ideal as q:a:b meaning q(aZ + (b+sqrt D)/2 Z)")
            p.add_argument("--genus", type=int, help="index into the genus representatives")
        if weight:
            p.add_argument("--weight", type=int, default=2, help="even weight k >= 2")
        p.add_argument("--precision", type=int, default=prec, help="bits (env EISQ_PRECISION)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="work budget for enumerations")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    p = common(sub.add_parser("info", help="field data and genus representatives"), ideal=False, weight=False)
    p.set_defaults(func=cmd_info)

    p = common(sub.add_parser("expand", help="exact q-expansion of E(tau, 0)"))
    p.add_argument("--terms", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_expand)

    p = common(sub.add_parser("derivative", help="coefficients of E'(tau, 0) for -terms <= m <= terms"))
    p.add_argument("--terms", type=int, default=50)
    p.add_argument("--v", type=float, help="imaginary part of tau")
    p.set_defaults(func=cmd_derivative)

    p = common(sub.add_parser("sigma", help="divisor sum sigma(a, m, .) as a Dirichlet polynomial"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--w", type=int, help="evaluation point (default 1-k)")
    p.set_defaults(func=cmd_sigma)

    p = common(sub.add_parser("repnum", help="CSV of G^b(a, m, 0) by enumeration"))
    p.add_argument("--m", default="1:10", help="m or lo:hi")
    p.add_argument("--b-max", type=int, default=6)
    p.set_defaults(func=cmd_repnum)

    p = common(sub.add_parser("l-value", help="L(s, chi_D)"), ideal=False, weight=False)
    p.add_argument("--n", type=int, help="exact value at s = 1 - n")
    p.add_argument("--s", type=str, help="real point, evaluated numerically")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--suite", default="all", choices=("all",) + CHECKS)
    p.add_argument("--disc", type=int)
    p.add_argument("--weight", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    try:
        parser = build_parser()
    except EisqError as exc:
        _emit_error(exc.code, type(exc).__name__, str(exc))
        return EXIT_ERROR
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.command == "verify":
        args.weight_given = args.weight is not None
        if args.weight_given and (args.weight < 2 or args.weight % 2):
            _emit_error("invalid_argument", "InvalidArgument", f"weight must be even and >= 2, got {args.weight}")
            return EXIT_ERROR
    try:
        if args.command != "verify":
            _check_common(args)
        return args.func(args)
    except EisqError as exc:
        _emit_error(exc.code, type(exc).__name__, str(exc))
    except (ValueError, ArithmeticError) as exc:
        _emit_error("error", type(exc).__name__, str(exc))
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
