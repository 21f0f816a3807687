"""Reproducible checks of the structural statements about restricted sl2-modules.

Each check is a pure function of its case key, so checks can be spread over
worker processes and merged back in key order.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .fieldcore import FqMatrix, gf
from .heller import heller_shift
from .nullcone import PointP1, jordan_profile, jordan_type_of, rational_points
from .partitions import Partition, jordan_type_string, power_type
from .sl2mod import dual_weyl, phi, projective, split_lambda, verify_phi_basis, weyl
from .thetasheaf import (
    SplittingType,
    build_theta,
    fi_data,
    graded_kernel,
    named_matrix,
    theta_power,
)


# ---------------------------------------------------------------------------
# expected values


def weyl_indecomposable(p: int, lam: int) -> bool:
    return lam < p or (lam + 1) % p != 0


def phi_valid(p: int, lam: int) -> bool:
    return lam >= p and (lam + 1) % p != 0


def expected_rational_type(p: int, lam: int) -> Partition:
    r, a = split_lambda(p, lam)
    return power_type(p, r, [a + 1])


def expected_phi_special_type(p: int, lam: int) -> Partition:
    r, a = split_lambda(p, lam)
    return power_type(p, r - 1, [p - a - 1, a + 1])


def expected_kernel(family: str, p: int, lam: int) -> SplittingType:
    r, a = split_lambda(p, lam)
    if family == "phi":
        return SplittingType([a + 2 - p] * r)
    if family == "weyl":
        return SplittingType([-lam] + [a + 2 - p] * r)
    if family == "dual-weyl":
        return SplittingType([-a] * (r + 1))
    if family == "projective":
        return SplittingType([-lam, lam + 2 - 2 * p])
    raise ValueError(family)


def expected_fi(p: int, lam: int, i: int) -> SplittingType:
    """F_i of an indecomposable V(lam), i < p."""
    return SplittingType([-lam]) if (i - lam - 1) % p == 0 else SplittingType()


def sample_points(p: int) -> list[PointP1]:
    """All F_p-rational points plus one point defined over F_{p^2} only."""
    f2 = gf(p, 2)
    return rational_points(p) + [PointP1(f2, f2.one, f2.gen)]


def point_from_key(p: int, key: tuple) -> PointP1:
    e, s, t = key
    fld = gf(p, e)
    return PointP1(fld, fld(list(s)), fld(list(t)))


def point_key(pt: PointP1) -> tuple:
    f = pt.field
    return (f.e, tuple(f.coeffs(pt.s)), tuple(f.coeffs(pt.t)))


def build_module(family: str, p: int, lam: int, xi: PointP1 | None = None):
    if family == "weyl":
        return weyl(p, lam)
    if family == "dual-weyl":
        return dual_weyl(p, lam)
    if family == "projective":
        return projective(p, lam)
    if family == "phi":
        if xi is None:
            raise ValueError("phi needs a point")
        return phi(p, lam, xi)
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# individual checks; each returns (ok, detail)


def check_jordan_type(p: int, lam: int, family: str, xkey=None) -> tuple[bool, str]:
    xi = None if xkey is None else point_from_key(p, xkey)
    m = build_module(family, p, lam, xi)
    prof = jordan_profile(m)
    if family == "phi":
        r, _ = split_lambda(p, lam)
        want_generic = power_type(p, r)
        want_exc = expected_phi_special_type(p, lam)
        ok = (
            prof.generic == want_generic
            and len(prof.exceptional) == 1
            and prof.exceptional[0][0] == xi
            and prof.exceptional[0][1] == want_exc
        )
        return ok, f"{prof.text()} (expected generic {jordan_type_string(want_generic)}, {xi} -> {jordan_type_string(want_exc)})"
    want = power_type(p, m.dim // p) if family == "projective" else expected_rational_type(p, lam)
    return prof.constant and prof.generic == want, f"{prof.text()} (expected constant {jordan_type_string(want)})"


def check_example_v2() -> tuple[bool, str]:
    p = 5
    m = weyl(p, 2)
    fld = gf(p)
    want_e = FqMatrix.from_entries(fld, [[0, 2, 0], [0, 0, 1], [0, 0, 0]])
    want_f = FqMatrix.from_entries(fld, [[0, 0, 0], [1, 0, 0], [0, 2, 0]])
    want_h = FqMatrix.from_entries(fld, [[2, 0, 0], [0, 0, 0], [0, 0, -2]])
    theta = build_theta(m)
    want_theta = [["2st", "2s^2", "0"], ["-t^2", "0", "s^2"], ["0", "-2t^2", "-2st"]]
    prof = jordan_profile(m)
    ok = (
        m.E == want_e and m.F == want_f and m.H == want_h
        and theta.to_json()["entries"] == want_theta
        and prof.constant and prof.generic == Partition([3])
    )
    return ok, f"theta={theta.to_json()['entries']}, type {prof.text()}"


def check_named_matrices(p: int, lam: int) -> tuple[bool, str]:
    bad = []
    if build_theta(weyl(p, lam)) != named_matrix("B", p, lam):
        bad.append("B")
    if build_theta(dual_weyl(p, lam)) != named_matrix("C", p, lam):
        bad.append("C")
    if lam < p - 1 and build_theta(projective(p, lam)) != named_matrix("D", p, lam):
        bad.append("D")
    if phi_valid(p, lam):
        fld = gf(p)
        if build_theta(phi(p, lam, PointP1(fld, 0, 1))) != named_matrix("B_prime", p, lam):
            bad.append("B_prime")
        for c in range(p):
            if build_theta(phi(p, lam, PointP1(fld, 1, c))) != named_matrix("M_eps", p, lam, c):
                bad.append(f"M_{c}")
    return not bad, "all equal" if not bad else "mismatch: " + ", ".join(bad)


def check_kernel(p: int, lam: int, family: str, xkey=None, max_degree: int | None = None) -> tuple[bool, str]:
    xi = None if xkey is None else point_from_key(p, xkey)
    m = build_module(family, p, lam, xi)
    if max_degree is None:
        max_degree = 2 * lam + 2 * p
    sub = graded_kernel(build_theta(m), max_degree)
    got = SplittingType(-d for d, _ in sub.generators)
    want = expected_kernel(family, p, lam)
    tag = " [0 <= lambda <= 2p-2]" if family == "weyl" and lam <= 2 * p - 2 else ""
    return sub.certified and got == want, f"{m.label}: {got} (expected {want}){tag}"


def check_bprime_pointwise(p: int, lam: int) -> tuple[bool, str]:
    r, a = split_lambda(p, lam)
    b = named_matrix("B_prime", p, lam)
    fld = gf(p)
    cases = [((0, 0), power_type(1, r * p)), ((0, 1), expected_phi_special_type(p, lam))]
    cases += [((1, c), power_type(p, r)) for c in range(p)]
    bad = []
    for (s, t), want in cases:
        got = jordan_type_of(b.evaluate(fld(s), fld(t)), p)
        if got != want:
            bad.append(f"({s},{t}): {jordan_type_string(got)} != {jordan_type_string(want)}")
    return not bad, "all points match" if not bad else "; ".join(bad)


def check_simple(p: int, lam: int) -> tuple[bool, str]:
    m = weyl(p, lam)
    bad = []
    if not theta_power(m, lam + 1).is_zero():
        bad.append("B^(lam+1) != 0")
    bl = theta_power(m, lam) if lam > 0 else None
    if bl is not None:
        for i in range(lam + 1):
            for j in range(lam + 1):
                support = set(bl.entry(i, j))
                if not support <= {lam - j + i}:
                    bad.append(f"support of entry ({i},{j})")
    top = fi_data(m, lam + 1)
    kernel_type = expected_kernel("weyl", p, lam)
    if top.splitting != kernel_type:
        bad.append(f"F_{lam + 1} = {top.text()} != {kernel_type}")
    ker = graded_kernel(build_theta(m), top.hilbert[-1][0], stop_early=False)
    if top.hilbert != ker.hilbert():
        bad.append(f"F_{lam + 1} Hilbert data differs from the kernel")
    for i in range(1, p + 1):
        if i != lam + 1 and not fi_data(m, i).is_zero:
            bad.append(f"F_{i} nonzero")
    return not bad, "ok" if not bad else "; ".join(bad)


def check_heller(p: int, lam: int) -> tuple[bool, str]:
    res = heller_shift(p, lam)
    return res.ok, f"Omega V({lam}) = {res.text()}; cover checks {res.cover_checks}"


def check_fi(p: int, lam: int) -> tuple[bool, str]:
    m = weyl(p, lam)
    bad = []
    for i in range(1, p):
        got = fi_data(m, i)
        want = expected_fi(p, lam, i)
        if got.splitting != want:
            bad.append(f"F_{i} = {got.text()} != {want}")
    omega = heller_shift(p, lam)
    if omega.predicted is not None:
        om = omega.module
        for i in range(1, p):
            a = fi_data(m, i)
            b = fi_data(om, p - i)
            shifted = None if b.splitting is None else b.splitting.twist(2 * p - 2 * i)
            if a.rank != b.rank or a.degree != b.degree + b.rank * (2 * p - 2 * i) or a.splitting != shifted:
                bad.append(f"twist relation fails at i={i}: {a.text()} vs {b.text()}")
    return not bad, "ok" if not bad else "; ".join(bad)


def check_phi_basis(p: int, lam: int, xkey) -> tuple[bool, str]:
    xi = point_from_key(p, xkey)
    rep = verify_phi_basis(p, lam, xi.t, xi.field)
    return rep.ok, str(rep.to_json())


CHECKS = {
    "jordan_type": check_jordan_type,
    "example_v2": check_example_v2,
    "named_matrix": check_named_matrices,
    "kernel_bundle": check_kernel,
    "bprime_pointwise": check_bprime_pointwise,
    "simple_fi": check_simple,
    "heller": check_heller,
    "fi_formula": check_fi,
    "phi_basis": check_phi_basis,
}


# ---------------------------------------------------------------------------
# driver


@dataclass(frozen=True)
class CheckResult:
    check: str
    args: tuple
    ok: bool
    detail: str

    @property
    def case(self) -> str:
        parts = []
        for a in self.args:
            if isinstance(a, tuple):
                e, s, t = a
                fmt = (lambda c: str(c[0])) if e == 1 else (lambda c: "(" + ",".join(map(str, c)) + ")")
                parts.append(f"[{fmt(s)}:{fmt(t)}]")
            else:
                parts.append(str(a))
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"check": self.check, "case": self.case, "status": "pass" if self.ok else "fail", "detail": self.detail}


def plan(p_list, lam_max: int | None, points: dict[int, list[PointP1]] | None = None,
         checks: set[str] | None = None) -> list[tuple[str, tuple]]:
    out: list[tuple[str, tuple]] = [("example_v2", ())]
    for p in p_list:
        pts = [point_key(x) for x in (points[p] if points and p in points else sample_points(p))]
        top = 3 * p if lam_max is None else lam_max
        for lam in range(top + 1):
            valid = weyl_indecomposable(p, lam)
            if valid:
                out.append(("jordan_type", (p, lam, "weyl")))
                out.append(("jordan_type", (p, lam, "dual-weyl")))
                out.append(("kernel_bundle", (p, lam, "weyl")))
                out.append(("kernel_bundle", (p, lam, "dual-weyl")))
                out.append(("fi_formula", (p, lam)))
            if lam < p:
                out.append(("jordan_type", (p, lam, "projective")))
                out.append(("simple_fi", (p, lam)))
            if lam < p - 1:
                out.append(("kernel_bundle", (p, lam, "projective")))
            out.append(("named_matrix", (p, lam)))
            if valid:
                out.append(("heller", (p, lam)))
            if phi_valid(p, lam):
                out.append(("bprime_pointwise", (p, lam)))
                for key in pts:
                    out.append(("jordan_type", (p, lam, "phi", key)))
                    out.append(("kernel_bundle", (p, lam, "phi", key)))
                    out.append(("phi_basis", (p, lam, key)))
    if checks:
        out = [c for c in out if c[0] in checks]
    return out


def run_case(case: tuple[str, tuple]) -> CheckResult:
    name, args = case
    try:
        ok, detail = CHECKS[name](*args)
    except Exception as exc:  # a crash is a failed check, never a skipped one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, args, bool(ok), detail)


def verify_all(p_list, lam_max: int | None, points: dict[int, list[PointP1]] | None = None,
               jobs: int = 1, checks: set[str] | None = None) -> list[CheckResult]:
    cases = plan(p_list, lam_max, points, checks)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_case, cases, chunksize=4))
    else:
        results = [run_case(c) for c in cases]
    return results


def summarize(results: list[CheckResult]) -> dict[str, tuple[int, int]]:
    out: dict[str, tuple[int, int]] = {}
    for r in results:
        passed, total = out.get(r.check, (0, 0))
        out[r.check] = (passed + r.ok, total + 1)
    return out
