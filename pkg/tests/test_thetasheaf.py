from __future__ import annotations

import pytest

import oracles
from sl2sheaf.fieldcore import gf
from sl2sheaf.nullcone import PointP1
from sl2sheaf.sl2mod import direct_sum, dual_weyl, phi, projective, weyl
from sl2sheaf.thetasheaf import (
    HomMatrix,
    HomogeneityError,
    KernelIncomplete,
    SplittingType,
    analyze_hilbert,
    build_theta,
    fi_data,
    graded_coker_hilbert,
    graded_image,
    graded_kernel,
    kernel_report,
    named_matrix,
    saturate,
    theta_power,
    verify_fi_rank_theorem,
)


def kernel_dims_oracle(theta: HomMatrix, max_degree: int) -> list[int]:
    """dim of the degree-d kernel by dense elimination on monomial coordinates."""
    p, n, k = theta.field.p, theta.cols, theta.degree
    out = []
    for d in range(max_degree + 1):
        rows = [[0] * (n * (d + 1)) for _ in range(theta.rows * (d + k + 1))]
        for j in range(n):
            for u in range(d + 1):
                col = j * (d + 1) + u
                for l, layer in enumerate(theta.coeffs):
                    for i in range(theta.rows):
                        c = int(layer[i, j, 0])
                        if c:
                            rows[i * (d + k + 1) + u + l][col] = c
        out.append(n * (d + 1) - oracles.rank(rows, p))
    return out


def bundle_hilbert(twists, max_degree):
    return [sum(max(0, d + a + 1) for a in twists) for d in range(max_degree + 1)]


def test_theta_of_v2():
    theta = build_theta(weyl(5, 2))
    assert theta.to_json()["entries"] == [["2st", "2s^2", "0"], ["-t^2", "0", "s^2"], ["0", "-2t^2", "-2st"]]
    assert theta.degree == 2 and (theta.src_twist, theta.tgt_twist) == (0, 2)


def test_theta_pointwise_matches_operator():
    from sl2sheaf.nullcone import operator_at

    m = dual_weyl(5, 8)
    for pt in (PointP1(gf(5), 1, 3), PointP1(gf(5), 0, 1)):
        assert build_theta(m).evaluate(pt.s, pt.t) == operator_at(m, pt)


def test_twists_must_chain():
    theta = build_theta(weyl(3, 2))
    with pytest.raises(HomogeneityError):
        theta @ theta
    assert (theta.twisted(2) @ theta).degree == 4


@pytest.mark.parametrize("p", [3, 5])
def test_named_matrices(p):
    f = gf(p)
    for lam in range(3 * p + 1):
        assert build_theta(weyl(p, lam)) == named_matrix("B", p, lam)
        assert build_theta(dual_weyl(p, lam)) == named_matrix("C", p, lam)
        if lam < p - 1:
            assert build_theta(projective(p, lam)) == named_matrix("D", p, lam)
        if lam >= p and (lam + 1) % p:
            assert build_theta(phi(p, lam, PointP1(f, 0, 1))) == named_matrix("B_prime", p, lam)
            for c in range(p):
                assert build_theta(phi(p, lam, PointP1(f, 1, c))) == named_matrix("M_eps", p, lam, c)


CASES = [
    (weyl(5, 7), [-1, -7]),
    (dual_weyl(5, 7), [-2, -2]),
    (projective(5, 2), [-2, -6]),
    (phi(5, 7, PointP1(gf(5), 1, 3)), [-1]),
    (weyl(3, 4), [0, -4]),
    (weyl(7, 21), [-5, -5, -5, -21]),
    (direct_sum(weyl(5, 1), dual_weyl(5, 3)), [-1, -3]),
]


@pytest.mark.parametrize("m,twists", CASES, ids=lambda x: getattr(x, "label", None) or str(x))
def test_kernel_splitting(m, twists):
    d = 2 * m.dim + 2 * m.p
    ker = graded_kernel(build_theta(m), d)
    assert ker.certified
    assert SplittingType(-g for g, _ in ker.generators) == SplittingType(twists)


@pytest.mark.parametrize("m,twists", CASES[:5], ids=lambda x: getattr(x, "label", None) or str(x))
def test_kernel_hilbert_against_dense_oracle(m, twists):
    theta = build_theta(m)
    d = 2 * m.p + 4
    ker = graded_kernel(theta, d, stop_early=False)
    dims = kernel_dims_oracle(theta, d)
    assert [ker.dim(k) for k in range(d + 1)] == dims
    assert dims == bundle_hilbert(twists, d)


def test_kernel_over_extension_field():
    f2 = gf(5, 2)
    m = phi(5, 12, PointP1(f2, f2.one, f2.gen))
    ker = graded_kernel(build_theta(m), 40)
    assert SplittingType(-g for g, _ in ker.generators) == SplittingType([-1, -1])


def test_kernel_incomplete_reports_generators():
    with pytest.raises(KernelIncomplete) as info:
        graded_kernel(build_theta(weyl(5, 7)), 3)
    assert info.value.corank == 2
    assert "larger" in str(info.value)


def test_kernel_report_shape():
    rep = kernel_report(dual_weyl(5, 7))
    assert rep["splitting"] == [-2, -2] and rep["certified"]
    assert rep["object"] == "ker^1"
    assert len(rep["generators"]) == 2
    assert str(SplittingType(rep["splitting"])) == "O(-2)^2"


def test_image_and_cokernel_complement():
    theta = build_theta(weyl(5, 6))
    img = graded_image(theta, 12)
    coker = dict(graded_coker_hilbert(theta, 12))
    for d in range(13):
        assert img.dim(d) + coker[d] == 7 * (d + 1)


def test_saturation_is_idempotent_and_contains():
    m = weyl(5, 8)
    for j in (1, 2, 3):
        img = graded_image(theta_power(m, j), 30)
        sat = saturate(img)
        assert sat.contains(img)
        assert saturate(sat).same_as(sat)


def test_splitting_type_strings():
    assert str(SplittingType([-2, -2])) == "O(-2)^2"
    assert str(SplittingType([-7, -1])) == "O(-1) + O(-7)"
    assert str(SplittingType()) == "0"
    assert SplittingType([-1, -3]).twist(2) == SplittingType([1, -1])


def test_analyze_hilbert():
    h = list(enumerate(bundle_hilbert([-1, -4], 12)))
    res = analyze_hilbert(h)
    assert (res.rank, res.degree) == (2, -5)
    assert res.splitting == SplittingType([-1, -4])


@pytest.mark.parametrize(
    "m,i,text",
    [
        (weyl(3, 2), 3, "O(-2)"),
        (weyl(5, 7), 3, "O(-7)"),
        (weyl(5, 7), 5, "O(-1)"),
        (weyl(5, 7), 1, "0"),
        (projective(5, 2), 5, "O(-2) + O(-6)"),
        (weyl(5, 15), 1, "O(-15)"),
    ],
    ids=lambda x: getattr(x, "label", None) or str(x),
)
def test_fi_examples(m, i, text):
    assert fi_data(m, i).text() == text


def test_fi_rank_theorem():
    for m in (weyl(5, 7), dual_weyl(5, 8), projective(3, 1)):
        assert verify_fi_rank_theorem(m).ok
