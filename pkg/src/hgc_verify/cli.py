"""Command line: ``hgc-verify <command> [options]``.

Exit codes: 0 success, 1 a certificate failed, 2 usage or configuration error,
3 internal invariant violation.
"""

import argparse
import json
import re
import sys

from . import cycle_calculus as CC
from . import divisors as Dv
from . import forms_invariants as FI
from . import local_series as L
from . import quotients_genus as QG
from . import suites as S
from .errors import ConfigurationError, HGCError, InvariantViolation, UnsupportedError
from .local_series import Point

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


def _backend_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", "--p", dest="N", type=int, default=3, help="the exponent N (or prime p)")
    p.add_argument("--backend", choices=("symbolic", "finite"), default="symbolic")
    p.add_argument("--q", type=int, help="prime modulus of the finite backend (q = 1 mod 2N)")
    p.add_argument("--lambda", dest="lam", type=int, help="lambda mod q")
    p.add_argument("--xi", type=int, help="xi mod q, with xi^(2N) (1 - lambda) = 1")
    p.add_argument("--seed", type=int, help="seed for a random finite specialization")
    p.add_argument("--precision-ceiling", type=int, help="largest series precision before giving up")
    p.add_argument("--xi-sign", type=int, choices=(1, -1), default=1,
                   help="-1 applies xi -> -xi (P and Q trade places)")
    return p


def _config(args, **extra):
    return S.SuiteConfig(N=args.N, backend=args.backend, q=args.q, lam=args.lam, xi=args.xi,
                         seed=args.seed, precision_ceiling=args.precision_ceiling,
                         xi_sign=args.xi_sign, **extra).validate()


def _print_cert(cert, as_json):
    if as_json:
        print(json.dumps(cert.to_dict(), indent=2, sort_keys=True))
    else:
        print(f"{cert.verdict}  {cert.id}")
        print(f"  {cert.statement}")
        if cert.witness:
            print(f"  witness: {cert.witness}")
        for k, v in sorted(cert.details.items()):
            print(f"  {k}: {v}")
        for n in cert.notes:
            print(f"  note: {n}")


def _status(certs):
    return EXIT_OK if all(c.passed for c in certs) else EXIT_FAIL


def parse_point(text: str) -> Point:
    """``c1:0``, ``c1_0``, ``P`` or ``Q``."""
    text = text.strip()
    if text in ("P", "Q"):
        return Point(text)
    m = re.fullmatch(r"(a|b|c1|c2)[:_](\d+)", text)
    if not m:
        raise ConfigurationError(f"cannot read the point {text!r} (use c1:0, b:2, P, Q)")
    return Point(m.group(1), int(m.group(2)))


def parse_divisor(text: str, X) -> Dv.Divisor:
    """Sums like ``5*b:0 - 5*c2:0`` or ``P + Q - 2*c1:0``."""
    D = Dv.Divisor()
    compact = text.replace(" ", "")
    if not compact:
        return D
    for sign, coeff, name in re.findall(r"([+-]?)(?:(\d+)\*)?([A-Za-z0-9:_]+)", compact):
        n = int(coeff or 1) * (-1 if sign == "-" else 1)
        pt = parse_point(name)
        if pt.is_cusp and pt.index >= X.family_size(pt.kind):
            raise ConfigurationError(f"index out of range in {name}")
        D = D + Dv.Divisor.point(pt, n)
    return D


def cmd_verify(args):
    suites = tuple(s for chunk in args.suite for s in chunk.split(",")) if args.suite else ("all",)
    config = _config(args, suites=suites, d=args.d, n_max=args.n_max, workers=args.workers)
    if args.cross_check:
        bundle = S.cross_check(config, seeds=tuple(range(1, args.cross_check + 1)))
    else:
        bundle = S.run_suite(config)
    timing = not args.no_timing
    if args.json:
        text = S.emit(bundle, "json", args.json, timing)
        if args.json == "-":
            sys.stdout.write(text)
    if args.md:
        text = S.emit(bundle, "markdown", args.md, timing)
        if args.md == "-":
            sys.stdout.write(text)
    s = bundle.summary()
    print(f"N={config.N} backend={config.backend}: {s['pass']} pass, {s['fail']} fail, "
          f"{s['unsupported']} unsupported, {s[S.DISCREPANCY]} {S.DISCREPANCY}",
          file=sys.stderr if args.json == "-" or args.md == "-" else sys.stdout)
    return EXIT_OK if bundle.ok() else EXIT_FAIL


def cmd_lspace(args):
    X = _config(args).curve()
    if not 0 <= args.d:
        raise ConfigurationError("--d must be nonnegative")
    res = Dv.lspace_basis(X, args.d, args.family)
    _print_cert(res.certificate, args.as_json)
    return _status([res.certificate])


def cmd_pi_z(args):
    X = _config(args).curve()
    cert = CC.pi_z_certificate(X, parse_point(args.base))
    _print_cert(cert, args.as_json)
    # the fixed-base-point case is informational
    return EXIT_OK if cert.verdict != "FAIL" else EXIT_FAIL


def cmd_nontrivial(args):
    X = _config(args).curve()
    p = X.N
    if p % 2 == 0:
        raise ConfigurationError("nontriviality needs odd p")
    pairs = [(args.a, args.b)] if args.a else [(a, b) for a in range(1, p) for b in range(1, p)]
    ls = [args.l] if args.l else range(1, (p - 1) // 2 + 1)
    certs = [Dv.nontriviality_certificate(X, a, b, l, parse_point(args.base)) for a, b in pairs for l in ls]
    for c in certs:
        if args.as_json:
            _print_cert(c, True)
        else:
            d = c.details
            print(f"{c.verdict}  {c.id}  rank {d['rank']} of {d['cols']} ({d['rows']} rows)")
    return _status(certs)


def cmd_invariants(args):
    certs = [FI.wedge_certificate(n) for n in range(2, args.n_max + 1)]
    if args.as_json:
        print(json.dumps([c.to_dict() for c in certs], indent=2, sort_keys=True))
    else:
        print("N  dim(wedge^3 H^1)^G_N  routes")
        for c in certs:
            d = c.details
            print(f"{c.inputs['N']:<2} {d['dimension']:<21} {d['routes']}  {c.verdict}")
    return _status(certs)


def cmd_genus_table(args):
    N = args.N
    rows = QG.genus_table(N)
    if args.as_json:
        print(json.dumps([{"a": a, "b": b, "genus": g, "hyperelliptic": h} for a, b, g, h in rows],
                         indent=2, sort_keys=True))
    else:
        print(f"C^(a,b) for N={N}: genus, hyperelliptic ('-' disconnected or unsupported)")
        for a, b, g, h in rows:
            gs = "-" if g is None else str(g)
            hs = "-" if h is None else ("yes" if h else "no")
            print(f"({a},{b})  genus {gs:<3} hyperelliptic {hs}")
    return EXIT_OK


def cmd_witness_search(args):
    X = _config(args).curve()
    D = parse_divisor(args.divisor, X)
    box = tuple(int(v) for v in args.box.split(",")) if args.box else None
    res = Dv.witness_search(X, D, box)
    cert = Dv.witness_certificate(X, D, box, cert_id=f"witness-search/N{X.N}", result=res)
    _print_cert(cert, args.as_json)
    return EXIT_OK


def build_parser():
    parent = _backend_parent()
    ap = argparse.ArgumentParser(prog="hgc-verify",
                                 description="Exact checks for the curves (1-x^N)(1-y^N) = lambda x^N y^N.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[parent], help="run verification suites")
    v.add_argument("--suite", action="append", help=f"one of {', '.join(S.SUITES)} or all (repeatable)")
    v.add_argument("--d", type=int, help="largest d for the lemma suite")
    v.add_argument("--n-max", type=int, help="largest N for the wedge invariants")
    v.add_argument("--json", help="write the JSON bundle here ('-' for stdout)")
    v.add_argument("--md", help="write the markdown report here ('-' for stdout)")
    v.add_argument("--cross-check", type=int, nargs="?", const=3, default=0, metavar="K",
                   help="also run K finite specializations and compare verdicts (default 3)")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--no-timing", action="store_true", help="omit wall time (byte-identical reruns)")
    v.set_defaults(func=cmd_verify)

    ls = sub.add_parser("lspace", parents=[parent], help="basis of L(d * sum of a cusp family)")
    ls.add_argument("--d", type=int, required=True)
    ls.add_argument("--family", choices=L.CUSP_FAMILIES, default="c1")
    ls.set_defaults(func=cmd_lspace)

    pz = sub.add_parser("pi-z", parents=[parent], help="Pi_Z of the modified diagonal with base point e")
    pz.add_argument("--base", default="c1:0")
    pz.set_defaults(func=cmd_pi_z)

    nt = sub.add_parser("nontrivial", parents=[parent], help="nontriviality linear systems")
    nt.add_argument("--a", type=int)
    nt.add_argument("--b", type=int)
    nt.add_argument("--l", type=int)
    nt.add_argument("--base", default="c1:0")
    nt.set_defaults(func=cmd_nontrivial)

    inv = sub.add_parser("invariants", help="table N -> dim (wedge^3 H^1_dR)^{G_N}")
    inv.add_argument("--n-max", type=int, default=6)
    inv.set_defaults(func=cmd_invariants)

    gt = sub.add_parser("genus-table", help="genus and hyperellipticity of the quotients C^(a,b)")
    gt.add_argument("--n", "--p", dest="N", type=int, default=3)
    gt.set_defaults(func=cmd_genus_table)

    ws = sub.add_parser("witness-search", parents=[parent], help="search a function with a given divisor")
    ws.add_argument("--divisor", required=True, help="e.g. '3*b:0 - 3*c2:0' or 'P + Q - 2*c1:0'")
    ws.add_argument("--box", help="monomial box m,n (default: the complete box)")
    ws.set_defaults(func=cmd_witness_search)

    for p in (ls, pz, nt, inv, gt, ws):
        p.add_argument("--json", dest="as_json", action="store_true", help="print JSON")
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "a", None) is not None and getattr(args, "b", None) is None:
            raise ConfigurationError("--a needs --b")
        return args.func(args)
    except (ConfigurationError, UnsupportedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except HGCError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
