from __future__ import annotations

import random

import pytest

import oracles
from sl2sheaf.fieldcore import FqMatrix, gf
from sl2sheaf.nullcone import (
    PointP1,
    ProfileIncomplete,
    iota,
    is_projective,
    jordan_profile,
    jordan_type_of,
    local_j_rank,
    local_jordan_type,
    operator_at,
    rank_sequence,
    rational_points,
)
from sl2sheaf.partitions import Partition, j_rank
from sl2sheaf.sl2mod import direct_sum, dual_weyl, phi, projective, weyl


def test_points_normalize_and_compare():
    f = gf(5)
    assert PointP1(f, 2, 4) == PointP1(f, 1, 2)
    assert str(PointP1(f, 2, 4)) == "[1:2]"
    assert PointP1(f, 0, 3).is_infinity
    assert len(rational_points(5)) == 6
    with pytest.raises(ValueError):
        PointP1(f, 0, 0)


def test_iota_lands_on_quadric():
    for p in (3, 5, 7):
        for pt in rational_points(p):
            x, y, z = iota(pt)
            assert x * y + z * z == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_jordan_type_against_constructed_forms(p):
    rng = random.Random(p)
    for _ in range(40):
        parts = oracles.random_partition(rng.randint(1, 8), p, rng)
        a = FqMatrix.from_entries(gf(p), oracles.nilpotent_with_type(parts, p, rng))
        assert jordan_type_of(a, p) == Partition(parts)
        assert rank_sequence(a, p)[0] == oracles.rank(a.int_array().tolist(), p)


def test_local_type_of_v2():
    m = weyl(5, 2)
    for pt in rational_points(5):
        assert local_jordan_type(m, pt) == Partition([3])
        op = operator_at(m, pt)
        assert jordan_type_of(op, 5) == Partition([3])
    assert jordan_profile(m).text() == "constant [3]"


def test_local_j_rank_matches_partition():
    m = weyl(5, 8)
    pt = PointP1(gf(5), 1, 3)
    lam = local_jordan_type(m, pt)
    assert lam == Partition([5, 4])
    for j in range(1, 6):
        assert local_j_rank(m, pt, j) == j_rank(lam, j)


def test_profiles_of_families():
    assert jordan_profile(weyl(5, 12)).text() == "constant [5]^2[3]"
    assert jordan_profile(dual_weyl(5, 12)).text() == "constant [5]^2[3]"
    assert jordan_profile(projective(5, 1)).text() == "constant [5]^2"
    assert is_projective(projective(5, 1))
    assert not is_projective(weyl(5, 3))
    assert is_projective(weyl(5, 4))


def test_phi_exceptional_point():
    f = gf(5)
    prof = jordan_profile(phi(5, 7, PointP1(f, 1, 1)))
    assert prof.text() == "generic [5]; exceptional [1:1] -> [3][2]"
    prof = jordan_profile(phi(5, 13, PointP1(f, 0, 1)))
    # r = 2, a = 3: [p]^(r-1) [p-a-1] [a+1]
    assert prof.text() == "generic [5]^2; exceptional [0:1] -> [5][4][1]"


def test_phi_exceptional_point_over_extension():
    f2 = gf(5, 2)
    xi = PointP1(f2, f2.one, f2.gen)
    prof = jordan_profile(phi(5, 7, xi))
    assert prof.generic == Partition([5])
    assert len(prof.exceptional) == 1
    pt, lam = prof.exceptional[0]
    assert pt == xi and lam == Partition([3, 2])
    with pytest.raises(ProfileIncomplete):
        jordan_profile(phi(5, 7, xi), e_max=1)


def test_sum_of_modules_profile():
    f = gf(3)
    m = direct_sum(weyl(3, 1), phi(3, 4, PointP1(f, 1, 2)))
    prof = jordan_profile(m)
    assert prof.generic == Partition([3, 2])
    # [2] from V(1) plus [p-a-1][a+1] = [1][2] at the exceptional point
    assert prof.exceptional[0][1] == Partition([2, 2, 1])
