"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest, which
repeats the lines in a terminal summary section.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402

from sl2sheaf.fieldcore import FqMatrix, gf  # noqa: E402
from sl2sheaf.nullcone import PointP1, jordan_type_of  # noqa: E402
from sl2sheaf.partitions import Partition, conjugate  # noqa: E402
from sl2sheaf.sl2mod import dual_weyl, phi, projective, weyl  # noqa: E402
from sl2sheaf.thetasheaf import build_theta, graded_image, graded_kernel, saturate, theta_power  # noqa: E402
from sl2sheaf.verify import plan, run_case, verify_all  # noqa: E402

REPORT: dict[int, str] = {}

TITLES = {
    1: "Jordan type tables",
    2: "V(2) worked example",
    3: "named matrices",
    4: "kernel bundles",
    5: "pointwise types of B'",
    6: "simple modules and F_i",
    7: "Heller shifts",
    8: "F_i of Weyl modules and twist relation",
    9: "property suites",
}


def _record(n: int, ok: bool, detail: str, started: float) -> None:
    line = f"criterion {n} [{TITLES[n]}]: {'PASS' if ok else 'FAIL'} ({detail}, {time.perf_counter() - started:.1f}s)"
    REPORT[n] = line
    print(line)


def _run(n: int, checks: set[str], primes) -> None:
    started = time.perf_counter()
    results = [run_case(c) for c in plan(primes, None, checks=checks)]
    failed = [r for r in results if not r.ok]
    detail = f"{len(results) - len(failed)}/{len(results)} cases"
    if failed:
        detail += "; first failure " + f"{failed[0].check} {failed[0].case}: {failed[0].detail}"
    _record(n, bool(results) and not failed, detail, started)
    assert results, "no cases planned"
    assert not failed, detail


def test_criterion_1_jordan_types():
    _run(1, {"jordan_type"}, (3, 5, 7))


def test_criterion_2_example_v2():
    _run(2, {"example_v2"}, (5,))


def test_criterion_3_named_matrices():
    _run(3, {"named_matrix"}, (3, 5, 7))


def test_criterion_4_kernels():
    started = time.perf_counter()
    results = [run_case(c) for c in plan((3, 5, 7), None, checks={"kernel_bundle"})]
    labelled = [r for r in results if "[0 <= lambda <= 2p-2]" in r.detail]
    failed = [r for r in results if not r.ok]
    detail = f"{len(results) - len(failed)}/{len(results)} cases, {len(labelled)} in the range 0 <= lambda <= 2p-2"
    if failed:
        detail += f"; first failure {failed[0].case}: {failed[0].detail}"
    ok = not failed and len(labelled) == sum(2 * p - 1 for p in (3, 5, 7))
    _record(4, ok, detail, started)
    assert ok, detail


def test_criterion_5_bprime_pointwise():
    _run(5, {"bprime_pointwise"}, (3, 5, 7))


def test_criterion_6_simple_modules():
    _run(6, {"simple_fi"}, (3, 5, 7))


def test_criterion_7_heller():
    _run(7, {"heller"}, (3, 5))


def test_criterion_8_fi_formula():
    _run(8, {"fi_formula"}, (3, 5))


# ---------------------------------------------------------------------------
# criterion 9


def _prop_conjugation(rng: random.Random) -> bool:
    for _ in range(300):
        lam = Partition(oracles.random_partition(rng.randint(0, 20), 8, rng))
        if conjugate(conjugate(lam)) != lam or conjugate(lam).size != lam.size:
            return False
    return True


def _prop_rank_sequence(rng: random.Random) -> bool:
    for _ in range(150):
        p = rng.choice((3, 5, 7))
        n = rng.randint(1, 8)
        parts = oracles.random_partition(n, p, rng)
        a = FqMatrix.from_entries(gf(p), oracles.nilpotent_with_type(parts, p, rng))
        if jordan_type_of(a, p) != Partition(parts):
            return False
    return True


def _sample_modules():
    f5 = gf(5)
    return [weyl(3, 4), dual_weyl(5, 7), projective(5, 1), phi(5, 7, PointP1(f5, 1, 2)), weyl(5, 8)]


def _prop_saturation(rng: random.Random) -> bool:
    for m in _sample_modules():
        d = 2 * m.dim + 2 * m.p
        for j in (1, 2):
            op = theta_power(m, j)
            if op.is_zero():
                continue
            img = graded_image(op, d)
            once = saturate(img)
            if not once.contains(img) or not saturate(once).same_as(once):
                return False
    return True


def _prop_rank_nullity(rng: random.Random) -> bool:
    for m in _sample_modules():
        theta = build_theta(m)
        d = 2 * m.dim + 2 * m.p
        ker = graded_kernel(theta, d, stop_early=False)
        img = graded_image(theta, d + 2, ker.grading)
        n = m.dim
        if any(ker.dim(k) + img.dim(k + 2) != n * (k + 1) for k in range(d + 1)):
            return False
    return True


def _prop_scaling(rng: random.Random) -> bool:
    for m in _sample_modules():
        theta = build_theta(m)
        p, f = m.p, theta.field
        for _ in range(6):
            s, t = rng.randrange(p), rng.randrange(p)
            if s == t == 0:
                continue
            c = rng.randrange(1, p)
            base = jordan_type_of(theta.evaluate(f(s), f(t)), p)
            scaled = jordan_type_of(theta.evaluate(f(c * s), f(c * t)), p)
            if base != scaled:
                return False
    return True


def _prop_determinism(rng: random.Random) -> bool:
    a = [r.to_json() for r in verify_all([3], 4)]
    b = [r.to_json() for r in verify_all([3], 4)]
    return a == b


PROPERTIES = {
    "conjugation involution": _prop_conjugation,
    "rank sequence vs known Jordan form": _prop_rank_sequence,
    "saturation idempotence": _prop_saturation,
    "degreewise rank-nullity": _prop_rank_nullity,
    "scaling invariance": _prop_scaling,
    "determinism": _prop_determinism,
}


def test_criterion_9_properties():
    started = time.perf_counter()
    failed = [name for name, fn in PROPERTIES.items() if not fn(random.Random(20240611))]
    detail = f"{len(PROPERTIES) - len(failed)}/{len(PROPERTIES)} properties"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    _record(9, not failed, detail, started)
    assert not failed, detail


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    bad = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            bad += 1
    sys.exit(1 if bad else 0)
