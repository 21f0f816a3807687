"""Command-line front end.

Exit codes: 0 success, 1 verification failure or incomplete computation,
2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .fieldcore import FieldError, gf
from .heller import heller_shift
from .nullcone import PointP1, ProfileIncomplete, jordan_profile
from .partitions import jordan_type_string
from .sl2mod import ModuleError
from .thetasheaf import (
    KernelIncomplete,
    SaturationError,
    SplittingType,
    default_degree_bound,
    fi_data,
    kernel_report,
)
from .verify import CHECKS, build_module, summarize, verify_all

FAMILIES = ("weyl", "dual-weyl", "projective", "phi")


class UsageError(ValueError):
    pass


def parse_xi(text: str, p: int) -> PointP1:
    """'s,t' for an F_p point, or 'ext:e:c0,c1,...' for [1:c] with c in F_{p^e}."""
    try:
        if text.startswith("ext:"):
            _, e, coeffs = text.split(":", 2)
            fld = gf(p, int(e))
            c = [int(x) for x in coeffs.split(",")]
            if len(c) > fld.e:
                raise UsageError(f"too many coefficients for F_{p}^{e}")
            return PointP1(fld, fld.one, fld(c))
        s, t = (int(x) for x in text.split(","))
        return PointP1(gf(p), s, t)
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad --xi {text!r}: {exc}") from exc


def _module(args):
    if args.lam is None:
        raise UsageError("--lambda is required")
    xi = parse_xi(args.xi, args.p) if args.xi else None
    if args.family == "phi" and xi is None:
        raise UsageError("--family phi needs --xi")
    return build_module(args.family, args.p, args.lam, xi)


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _emit(args, text: str, data, rows) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif args.format == "csv":
        print(_csv(rows))
    else:
        print(text)


def cmd_jtype(args) -> int:
    m = _module(args)
    prof = jordan_profile(m, e_max=args.ext_max)
    rows = [["point", "type"], ["generic", jordan_type_string(prof.generic)]]
    rows += [[str(pt), jordan_type_string(lam)] for pt, lam in prof.exceptional]
    data = {"module": m.label, **prof.to_json()}
    _emit(args, prof.text(), data, rows)
    return 0


def cmd_kernel(args) -> int:
    m = _module(args)
    bound = args.max_degree if args.max_degree is not None else default_degree_bound(m)
    rep = kernel_report(m, args.j, bound)
    split = SplittingType(rep["splitting"])
    rows = [["twist"]] + [[a] for a in split]
    _emit(args, str(split), rep, rows)
    return 0


def cmd_fi(args) -> int:
    if args.i is None:
        raise UsageError("--i is required")
    m = _module(args)
    if not 1 <= args.i <= m.p:
        raise UsageError("--i must lie in 1..p")
    res = fi_data(m, args.i, args.max_degree)
    rows = [["d", "dim"]] + [[d, k] for d, k in res.hilbert]
    _emit(args, res.text(), res.to_json(), rows)
    return 0


def cmd_heller(args) -> int:
    if args.lam is None:
        raise UsageError("--lambda is required")
    res = heller_shift(args.p, args.lam, seed=args.seed)
    data = {
        "lambda": args.lam,
        "p": args.p,
        "omega": res.text(),
        "identical_action": res.identical_action,
        "isomorphism_found": res.isomorphism_found,
        "cover_checks": res.cover_checks,
        "module": res.module.to_json(),
    }
    rows = [["lambda", "omega", "verified"], [args.lam, res.text(), res.ok]]
    _emit(args, res.text(), data, rows)
    return 0 if res.ok else 1


def cmd_verify_all(args) -> int:
    p_list = args.p_list
    for p in p_list:
        gf(p)
    points = None
    if args.xi_list:
        points = {p: [parse_xi(x, p) for x in args.xi_list] for p in p_list}
    checks = set(args.checks.split(",")) if args.checks else None
    if checks and not checks <= set(CHECKS):
        raise UsageError(f"unknown checks: {sorted(checks - set(CHECKS))}")
    results = verify_all(p_list, args.lambda_max, points, jobs=args.jobs, checks=checks)
    summary = summarize(results)
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        data = {
            "p": p_list,
            "lambda_max": args.lambda_max,
            "seed": args.seed,
            "summary": {k: {"passed": a, "total": b} for k, (a, b) in summary.items()},
            "results": [r.to_json() for r in results],
            "status": "pass" if not failed else "fail",
        }
        print(json.dumps(data, indent=2, sort_keys=True))
    elif args.format == "csv":
        rows = [["check", "case", "status", "detail"]]
        rows += [[r.check, r.case, "pass" if r.ok else "fail", r.detail] for r in results]
        print(_csv(rows))
    else:
        for name, (a, b) in summary.items():
            print(f"{name:18s} {a}/{b} {'PASS' if a == b else 'FAIL'}")
        for r in failed:
            print(f"FAIL {r.check} {r.case}: {r.detail}")
        print("all checks pass" if not failed else f"{len(failed)} checks failed")
    return 0 if not failed else 1


def _p_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sl2sheaf", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--ext-max", dest="ext_max", type=int, default=8)
    common.add_argument("--max-degree", dest="max_degree", type=int, default=None)

    module = argparse.ArgumentParser(add_help=False)
    module.add_argument("--p", type=int, required=True)
    module.add_argument("--family", choices=FAMILIES, default="weyl")
    module.add_argument("--lambda", dest="lam", type=int)
    module.add_argument("--xi", help="'s,t' or 'ext:e:c0,c1,...' (the point [1:c])")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("jtype", parents=[common, module], help="local Jordan type profile")
    p.set_defaults(func=cmd_jtype)
    p = sub.add_parser("kernel", parents=[common, module], help="splitting type of the kernel sheaf")
    p.add_argument("--j", type=int, default=1, help="power of the global operator")
    p.set_defaults(func=cmd_kernel)
    p = sub.add_parser("fi", parents=[common, module], help="the subquotient sheaf F_i")
    p.add_argument("--i", type=int)
    p.set_defaults(func=cmd_fi)
    p = sub.add_parser("heller", parents=[common, module], help="Heller shift of a Weyl module")
    p.set_defaults(func=cmd_heller)
    p = sub.add_parser("verify-all", parents=[common], help="run every structural check")
    p.add_argument("--p", dest="p_list", type=_p_list, default=[3, 5, 7], help="comma separated primes")
    p.add_argument("--lambda-max", dest="lambda_max", type=int, default=None, help="default 3p for each p")
    p.add_argument("--xi", dest="xi_list", action="append", help="test point (repeatable)")
    p.add_argument("--checks", help=f"comma separated subset of: {', '.join(CHECKS)}")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModuleError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KernelIncomplete, SaturationError, ProfileIncomplete) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
