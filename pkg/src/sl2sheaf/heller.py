"""Heller shifts of Weyl modules through an explicit projective cover."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldcore import FqMatrix, gf, rref_mod
from .sl2mod import (
    ModuleError,
    Sl2Module,
    binom,
    direct_sum,
    find_isomorphism,
    inv_mod,
    is_hom,
    projective,
    projective_basis,
    split_lambda,
    weyl,
    zero_module,
)


class HellerError(RuntimeError):
    pass


@dataclass
class CoverData:
    p: int
    lam: int
    cover: Sl2Module
    target: Sl2Module
    f: FqMatrix
    kernel_basis: FqMatrix  # columns v'_0 .. v'_N in the basis of the cover

    @property
    def kernel_dim(self) -> int:
        return self.kernel_basis.cols

    def checks(self) -> dict[str, bool]:
        p, lam = self.p, self.lam
        r, a = split_lambda(p, lam)
        f, k = self.f, self.kernel_basis
        expected_dim = 2 * p * (r + 1) - (lam + 1)
        return {
            "homomorphism": is_hom(f, self.cover, self.target),
            "surjective": f.rank() == lam + 1,
            "kernel_dim": expected_dim == (r + 2) * p - a - 1 == f.cols - f.rank(),
            "basis_in_kernel": (f @ k).is_zero(),
            "basis_independent": k.rank() == k.cols == expected_dim,
        }


def cover_map_column(p: int, a: int, q: int, sym: tuple[str, int]) -> tuple[int, int] | None:
    """Image of a basis symbol of the q-th copy of Q(a): (index in V(lam), coefficient)."""
    kind, i = sym
    idx = (q - 1) * p + a + i + 1
    if kind == "w":
        coeff = (-1) ** (i + a) * inv_mod(binom(a, i + a + 1 - p), p)
    elif i <= p - a - 2:
        coeff = -((a + 1) ** 2) * binom(p - i - 1, a + 1)
    elif i <= p - 1:
        return None
    else:
        coeff = (-1) ** (a + 1) * (a + 1) ** 2 * binom(i + a + 1 - p, a + 1)
    return idx, coeff % p


def kernel_basis_symbols(p: int, lam: int) -> list[list[tuple[int, int]]]:
    """Each v'_i as a list of (copy q, index of v in Q(a))."""
    r, a = split_lambda(p, lam)
    out = []
    for i in range((r + 2) * p - a - 1):
        q, b = divmod(i, p)
        if q == 0:
            out.append([(0, i)])
        elif q <= r and b <= p - a - 2:
            out.append([(q, b), (q - 1, p + b)])
        elif q <= r:
            out.append([(q, b)])
        else:
            out.append([(r, p + b)])
    return out


def projective_cover(p: int, lam: int) -> CoverData:
    if lam < 0:
        raise ModuleError("lambda must be >= 0")
    r, a = split_lambda(p, lam)
    if a == p - 1:
        raise ModuleError("the cover construction needs lambda not congruent to -1 mod p")
    fld = gf(p)
    q_mod = projective(p, a)
    cover = direct_sum(*([q_mod] * (r + 1)))
    cover.family, cover.lam = "Cover", lam
    target = weyl(p, lam)
    basis = projective_basis(p, a)
    size = len(basis)
    f_entries = {}
    for q in range(r + 1):
        for col, sym in enumerate(basis):
            hit = cover_map_column(p, a, q, sym)
            if hit is None:
                continue
            idx, coeff = hit
            if 0 <= idx <= lam and coeff:
                f_entries[(idx, q * size + col)] = coeff
    f = FqMatrix.from_sparse(fld, lam + 1, size * (r + 1), f_entries)
    position = {("v", i): k for k, (kind, i) in enumerate(basis) if kind == "v"}
    vecs = kernel_basis_symbols(p, lam)
    k_entries = {}
    for col, terms in enumerate(vecs):
        for q, i in terms:
            k_entries[(q * size + position[("v", i)], col)] = 1
    kb = FqMatrix.from_sparse(fld, size * (r + 1), len(vecs), k_entries)
    return CoverData(p, lam, cover, target, f, kb)


def restrict_action(basis: FqMatrix, x: FqMatrix) -> FqMatrix:
    """Matrix C with X B = B C, for B of full column rank spanning an X-stable subspace."""
    p = basis.field.p
    b = basis.int_array()
    y = (x.int_array() @ b) % p
    n, k = b.shape
    red, piv = rref_mod(np.hstack([b, y]), p)
    if len(piv) != k or any(c >= k for c in piv):
        raise HellerError("subspace is not stable under the action")
    c = red[:k, k:]
    if not np.array_equal((b @ c) % p, y):
        raise HellerError("subspace is not stable under the action")
    return FqMatrix(basis.field, c)


@dataclass
class HellerResult:
    p: int
    lam: int
    module: Sl2Module
    predicted: int | None  # label of the Weyl module, None for the zero module
    identical_action: bool
    isomorphism_found: bool
    cover_checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.identical_action and self.isomorphism_found and all(self.cover_checks.values())

    def text(self) -> str:
        if self.predicted is None:
            return "0 (projective)"
        return f"V({self.predicted})"


def heller_shift(p: int, lam: int, seed: int = 0) -> HellerResult:
    r, a = split_lambda(p, lam)
    if lam == p - 1:
        return HellerResult(p, lam, zero_module(p), None, True, True, {})
    if a == p - 1:
        raise ModuleError("the Heller shift is only constructed for lambda not congruent to -1 mod p")
    cover = projective_cover(p, lam)
    checks = cover.checks()
    kb = cover.kernel_basis
    mats = [restrict_action(kb, x) for x in cover.cover.actions]
    predicted = (r + 2) * p - a - 2
    omega = Sl2Module(kb.field, *mats, family="Weyl", lam=predicted)
    ref = weyl(p, predicted)
    identical = all(x == y for x, y in zip(omega.actions, ref.actions))
    iso = find_isomorphism(omega, ref, seed=seed) is not None
    result = HellerResult(p, lam, omega, predicted, identical, iso, checks)
    if not (identical or iso):
        raise HellerError(f"kernel of the cover of V({lam}) is not isomorphic to V({predicted})")
    return result
