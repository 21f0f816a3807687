from __future__ import annotations

import random

import pytest

from sl2sheaf.fieldcore import FqMatrix, gf
from sl2sheaf.nullcone import PointP1
from sl2sheaf.sl2mod import (
    ModuleError,
    Sl2Module,
    direct_sum,
    dual,
    dual_weyl,
    find_isomorphism,
    hom_space,
    is_indecomposable,
    phi,
    projective,
    sl2_group_action,
    verify_phi_basis,
    weyl,
)

P_LIST = (3, 5, 7)


def _bracket(a, b):
    return a @ b - b @ a


def _relations_hold(m: Sl2Module) -> bool:
    e, f, h = m.E, m.F, m.H
    two = 2
    return (
        _bracket(e, f) == h
        and _bracket(h, e) == e.scale(m.field(two))
        and _bracket(h, f) == f.scale(m.field(-two))
        and (e ** m.p).is_zero()
        and (f ** m.p).is_zero()
        and h ** m.p == h
    )


@pytest.mark.parametrize("p", P_LIST)
def test_families_satisfy_restricted_relations(p):
    fld = gf(p)
    for lam in range(3 * p + 1):
        assert _relations_hold(weyl(p, lam))
        assert _relations_hold(dual_weyl(p, lam))
        if lam < p:
            assert _relations_hold(projective(p, lam))
        if lam >= p and (lam + 1) % p:
            for c in range(p):
                assert _relations_hold(phi(p, lam, PointP1(fld, 1, c)))
            assert _relations_hold(phi(p, lam, PointP1(fld, 0, 1)))


def test_weyl_v2_matrices():
    m = weyl(5, 2)
    fld = gf(5)
    assert m.E == FqMatrix.from_entries(fld, [[0, 2, 0], [0, 0, 1], [0, 0, 0]])
    assert m.F == FqMatrix.from_entries(fld, [[0, 0, 0], [1, 0, 0], [0, 2, 0]])
    assert m.H == FqMatrix.from_entries(fld, [[2, 0, 0], [0, 0, 0], [0, 0, -2]])


@pytest.mark.parametrize("p,lam", [(3, 4), (5, 7), (5, 12)])
def test_weights_and_dims(p, lam):
    m = weyl(p, lam)
    assert m.dim == lam + 1
    for i in range(lam + 1):
        assert m.H[i, i] == m.field(lam - 2 * i)
    assert projective(p, 1).dim == 2 * p
    assert projective(p, p - 1).dim == p


def test_dual_weyl_is_dual_of_weyl():
    for lam in range(10):
        a, b = dual_weyl(5, lam), dual(weyl(5, lam))
        assert find_isomorphism(a, b) is not None


@pytest.mark.parametrize("lam", [0, 3, 6, 7, 8])
def test_weyl_endomorphisms_are_scalars(lam):
    m = weyl(5, lam)
    assert len(hom_space(m, m)) == 1
    assert is_indecomposable(m) == "true"


def test_direct_sum_is_decomposable():
    m = direct_sum(weyl(5, 1), weyl(5, 2))
    assert is_indecomposable(m) == "false"
    assert len(hom_space(m, m)) == 2


def test_projective_indecomposable():
    assert is_indecomposable(projective(5, 2)) == "true"


def test_phi_preconditions():
    fld = gf(5)
    with pytest.raises(ModuleError):
        phi(5, 4, PointP1(fld, 1, 0))
    with pytest.raises(ModuleError):
        phi(5, 9, PointP1(fld, 1, 0))
    with pytest.raises(ModuleError):
        weyl(2, 3)


def _random_sl2(p: int, rng: random.Random) -> list[list[int]]:
    a, b, c = (rng.randrange(p) for _ in range(3))
    upper = [[1, a], [0, 1]]
    lower = [[1, 0], [b, 1]]
    out = [[1, c], [0, 1]]
    for m in (lower, upper):
        out = [[sum(out[i][k] * m[k][j] for k in range(2)) % p for j in range(2)] for i in range(2)]
    return out


def test_group_action_is_multiplicative():
    p, lam = 5, 7
    rng = random.Random(3)
    for _ in range(8):
        g, h = _random_sl2(p, rng), _random_sl2(p, rng)
        gh = [[sum(g[i][k] * h[k][j] for k in range(2)) % p for j in range(2)] for i in range(2)]
        assert sl2_group_action(p, lam, gh) == sl2_group_action(p, lam, g) @ sl2_group_action(p, lam, h)


@pytest.mark.parametrize("p,lam", [(3, 4), (5, 7), (5, 11), (7, 12)])
def test_phi_basis_spans_submodule(p, lam):
    fld = gf(p)
    for c in range(p):
        assert verify_phi_basis(p, lam, fld(c), fld).ok
    f2 = gf(p, 2)
    assert verify_phi_basis(p, lam, f2.gen, f2).ok


def test_module_json_round_trip():
    m = phi(5, 7, PointP1(gf(5, 2), 1, gf(5, 2).gen))
    again = Sl2Module.from_json(m.to_json())
    assert again.actions == m.actions
    assert again.label == m.label
