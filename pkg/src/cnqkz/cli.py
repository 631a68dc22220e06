"""Command-line front end.

Exit codes: 0 success / every check passed, 1 a check failed or a numeric
sum did not converge, 2 invalid usage.  Reports go to stdout as JSON
(``"schema": "1"``); human-oriented summaries go to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable

import numpy as np

from . import hecke, macdonald, qintegral, rmatrix
from .report import SCHEMA_VERSION, Report
from .ring import Ring, display

SUITES = ("ybe", "conjugation", "hecke", "prop61", "lemmas4", "identity53", "prop31",
          "eigen", "triangularity", "qkz-numeric", "lemma43", "cor51")

# what --self-test corrupts in each suite
SELF_TESTS = {
    "ybe": "R coefficient d replaced by d + 1",
    "conjugation": "R coefficient d replaced by d + y_1",
    "hecke": "every T_i replaced by T_i + 1",
    "prop61": "every T_i replaced by T_i + 1",
    "lemmas4": "R coefficients b and c exchanged",
    "identity53": "last phi dropped from the sum",
    "prop31": "R coefficients b and c exchanged",
    "eigen": "last composition term dropped from P",
    "triangularity": "leading orbit-sum coefficient doubled",
    "qkz-numeric": "R-matrix products multiplied in reverse order",
    "lemma43": "R coefficients a and c exchanged",
    "cor51": "q^lambda replaced by q^(lambda+1)",
}


class UsageError(Exception):
    pass


def _max_size() -> int:
    env = os.environ.get("CNQKZ_MAX_RANK")
    return 4 * int(env) if env else 12


def _parse_y(text: str | None, n: int) -> tuple[complex, ...] | None:
    if text is None:
        return None
    try:
        vals = tuple(complex(s.strip().replace(" ", "")) for s in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse --y {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"--y needs {n} values, got {len(vals)}")
    return vals


def _point_kwargs(args) -> dict:
    out = {"tol": args.tol}
    if getattr(args, "prod_trunc", None):
        out["prod_trunc"] = args.prod_trunc
    if getattr(args, "ladder_trunc", None):
        out["ladder_trunc"] = args.ladder_trunc
    return out


def _points(args, n: int, lam: int) -> list[qintegral.NumericPoint]:
    y = _parse_y(args.y, n)
    kw = _point_kwargs(args)
    try:
        if y is not None:
            pt = qintegral.NumericPoint(args.q, args.t, y, lam, **kw)
            pt.require_generic()
            return [pt]
        rng = np.random.default_rng(args.seed)
        return [qintegral.random_point(n, lam, rng, q=args.q, t=args.t, **kw) for _ in range(args.points)]
    except (ValueError, qintegral.NonGenericPointError) as exc:
        raise UsageError(str(exc)) from None


# -- suites -------------------------------------------------------------------

def _suite_ybe(args, mut):
    p = rmatrix.QKZParams(args.n, mutation="d_plus_1" if mut else None)
    return rmatrix.verify_ybe(args.n, p)


def _suite_conjugation(args, mut):
    p = rmatrix.QKZParams(args.n, mutation="d_plus_y1" if mut else None)
    rep = rmatrix.verify_conjugation(args.n, p)
    rep.extend(rmatrix.verify_inverse(args.n, p))
    return rep


def _suite_hecke(args, mut):
    return hecke.verify_hecke_relations(args.n, shift=1 if mut else 0)


def _suite_prop61(args, mut):
    return hecke.verify_prop61(args.n, shift=1 if mut else 0)


def _suite_lemmas4(args, mut):
    p = rmatrix.QKZParams(args.n, mutation="swap_bc" if mut else None)
    rep = Report("lemmas4")
    rep.extend(hecke.verify_si_action(args.n, p))
    rep.extend(hecke.verify_partial_fractions(args.n, p))
    rep.extend(rmatrix.verify_induced_lemmas(args.n, p))
    return rep


def _suite_identity53(args, mut):
    return hecke.verify_identity_53(args.n, drop_last=mut)


def _suite_prop31(args, mut):
    return hecke.verify_prop31_integrand(args.n, rmatrix.QKZParams(args.n, mutation="swap_bc" if mut else None))


def _suite_eigen(args, mut):
    return macdonald.verify_eigen(args.n, args.lam, mutate=mut)


def _suite_triangularity(args, mut):
    return macdonald.verify_triangularity(args.n, args.lam, mutate=mut)


def _suite_qkz(args, mut):
    rep = Report("qkz-numeric")
    for pt in _points(args, args.n, args.lam):
        rep.extend(qintegral.verify_qkz(pt, reverse=mut))
    return rep


def _suite_lemma43(args, mut):
    rep = Report("lemma43")
    p = rmatrix.QKZParams(args.n, args.lam, mutation="swap_ac" if mut else None)
    for pt in _points(args, args.n, args.lam):
        rep.extend(qintegral.verify_lemma43(pt, p))
    return rep


def _suite_cor51(args, mut):
    rep = Report("cor51")
    for i, pt in enumerate(_points(args, args.n, args.lam)):
        rep.extend(qintegral.verify_cor51(args.n, args.lam, pt, seed=args.seed + i,
                                          q_power_offset=1 if mut else 0))
    return rep


SUITE_FUNCS: dict[str, Callable] = {
    "ybe": _suite_ybe, "conjugation": _suite_conjugation, "hecke": _suite_hecke,
    "prop61": _suite_prop61, "lemmas4": _suite_lemmas4, "identity53": _suite_identity53,
    "prop31": _suite_prop31, "eigen": _suite_eigen, "triangularity": _suite_triangularity,
    "qkz-numeric": _suite_qkz, "lemma43": _suite_lemma43, "cor51": _suite_cor51,
}

# suites that are meaningful at rank n (full module and integrand checks stop at 3)
RANK_LIMITS = {"ybe": 3, "conjugation": 3, "prop31": 3, "eigen": 3, "triangularity": 3,
               "qkz-numeric": 3, "lemma43": 3, "cor51": 3}


def run_suite(name: str, args, self_test: bool = False) -> Report:
    limit = RANK_LIMITS.get(name, 4)
    if args.n > rmatrix.rank_limit(limit):
        raise UsageError(f"suite {name} is limited to n <= {rmatrix.rank_limit(limit)} "
                         "(set CNQKZ_MAX_RANK to override)")
    try:
        return SUITE_FUNCS[name](args, self_test)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands -----------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.n < 1 or args.lam < 1:
        raise UsageError("need --n >= 1 and --lambda >= 1")
    names = SUITES if args.suite == "all" else (args.suite,)
    if args.suite == "all" and args.n > 3 and not os.environ.get("CNQKZ_MAX_RANK"):
        names = tuple(s for s in names if RANK_LIMITS.get(s, 4) >= args.n)
    reports = [run_suite(s, args, args.self_test) for s in names]
    passed = all(r.passed for r in reports)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "suite": args.suite,
        "n": args.n,
        "lambda": args.lam,
        "seed": args.seed,
        "self_test": SELF_TESTS.get(args.suite) if args.self_test and args.suite != "all" else args.self_test,
        "passed": passed,
        "reports": [{"suite": r.suite, "passed": r.passed, "checks": r.to_json()} for r in reports],
    }
    print(json.dumps(payload, indent=2))
    for r in reports:
        print(r.summary(), file=sys.stderr)
    return 0 if passed else 1


def macdonald_payload(n: int, lam: int) -> dict:
    P = macdonald.macdonald_onerow(n, lam)
    R = Ring(n)
    monos = []
    for ye, c in sorted(P.y_coefficients().items(), reverse=True):
        monos.append({"monomial": str(R.mono(y=list(ye))), "exponent": list(ye),
                      "coefficient": display(R.frac(c, P.den))})
    mb = [{"nu": list(nu), "coefficient": display(a)} for nu, a in macdonald.m_basis(P).items()]
    return {
        "schema": SCHEMA_VERSION,
        "command": "macdonald",
        "n": n,
        "lambda": lam,
        "monomial_expansion": monos,
        "m_basis_expansion": mb,
        "eigenvalue": display(macdonald.eigenvalue_c((lam,) + (0,) * (n - 1), n)),
    }


def cmd_macdonald(args) -> int:
    if args.n < 1 or args.lam < 1:
        raise UsageError("need --n >= 1 and --lambda >= 1")
    if args.n * args.lam > _max_size():
        raise UsageError(f"n * lambda = {args.n * args.lam} exceeds the desk-scale bound {_max_size()}")
    data = macdonald_payload(args.n, args.lam)
    if args.format == "json":
        print(json.dumps(data, indent=2))
        return 0
    print(f"P_{(args.lam,) + (0,) * (args.n - 1)} for C_{args.n}".replace(",)", ")"))
    print(f"eigenvalue: {data['eigenvalue']}")
    print("monomial expansion:")
    for m in data["monomial_expansion"]:
        print(f"  {m['monomial']}: {m['coefficient']}")
    print("orbit-sum expansion:")
    for m in data["m_basis_expansion"]:
        print(f"  m_{tuple(m['nu'])}: {m['coefficient']}")
    return 0


def cmd_integral(args) -> int:
    if args.n < 1 or args.lam < 1:
        raise UsageError("need --n >= 1 and --lambda >= 1")
    y = _parse_y(args.y, args.n)
    try:
        pt = qintegral.NumericPoint(args.q, args.t, y, args.lam, **_point_kwargs(args))
        psi = qintegral.psi_from_selector(args.psi, args.n)
        res = qintegral.bracket(psi, pt)
    except (ValueError, qintegral.NonGenericPointError) as exc:
        raise UsageError(str(exc)) from None
    payload = {"schema": SCHEMA_VERSION, "command": "integral", "psi": args.psi,
               "point": pt.to_json(), **res.to_json()}
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        v = res.value
        print(f"<{args.psi}> = {v.real:.15g} {'+' if v.imag >= 0 else '-'} {abs(v.imag):.15g}i")
        print(f"terms used: {res.terms_used}, converged: {res.converged}")
    return 0 if res.converged else 1


# -- parser -------------------------------------------------------------------

def _add_numeric(p: argparse.ArgumentParser, y_required: bool = False):
    p.add_argument("--q", type=float, default=0.3)
    p.add_argument("--t", type=float, default=0.7)
    p.add_argument("--y", required=y_required, help="comma-separated y values (complex allowed, e.g. 0.9,1.1+0.2j)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--prod-trunc", type=int, default=None)
    p.add_argument("--ladder-trunc", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnqkz", description="C_n QKZ / Macdonald toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("macdonald", help="one-row Macdonald polynomial P_(lambda,0,...,0)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_macdonald)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--seed", type=int, default=0,
                   help="seed for numpy's PCG64 generator (SeedSequence-based)")
    p.add_argument("--points", type=int, default=3, help="random points for numeric suites")
    p.add_argument("--self-test", action="store_true",
                   help="deliberately corrupt the checked objects; the suite must then fail")
    _add_numeric(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integral", help="evaluate a bracket <psi> by residue sums")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--psi", default="one", help="one, phi_k, s0_one, s0_phi_k or shifted_ratio")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_numeric(p, y_required=True)
    p.set_defaults(func=cmd_integral)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
