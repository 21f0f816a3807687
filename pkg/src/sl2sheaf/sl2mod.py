"""Restricted sl2-modules: the indecomposable families, homomorphisms and
indecomposability tests."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .fieldcore import FieldError, FqMatrix, GF, gf, nullspace_mod, rank_nullspace, rank_mod
from .nullcone import PointP1


class ModuleError(ValueError):
    pass


def binom(n: int, k: int) -> int:
    """Integer binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def inv_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(x, p - 2, p)


@dataclass(eq=False)
class Sl2Module:
    """Matrices of e, f, h acting on column vectors (column i = image of basis vector i)."""

    field: GF
    E: FqMatrix
    F: FqMatrix
    H: FqMatrix
    family: str = "Other"
    lam: int | None = None
    xi: PointP1 | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return self.E.rows

    @property
    def actions(self) -> tuple[FqMatrix, FqMatrix, FqMatrix]:
        return self.E, self.F, self.H

    @property
    def label(self) -> str:
        lam = self.lam
        if self.family == "Weyl":
            return f"V({lam})"
        if self.family == "DualWeyl":
            return f"V({lam})*"
        if self.family == "Projective":
            return f"Q({lam})"
        if self.family == "NonConstant":
            return f"Phi_{self.xi}({lam})"
        return f"M(dim {self.dim})"

    def relation_violations(self) -> list[str]:
        E, F, H = self.actions
        bad = []
        if not (E @ F - F @ E) == H:
            bad.append("[E,F] != H")
        if not (H @ E - E @ H) == E.scale(2):
            bad.append("[H,E] != 2E")
        if not (H @ F - F @ H) == F.scale(-2):
            bad.append("[H,F] != -2F")
        p = self.p
        if not (E**p).is_zero():
            bad.append("E^p != 0")
        if not (F**p).is_zero():
            bad.append("F^p != 0")
        if not H**p == H:
            bad.append("H^p != H")
        return bad

    def validate(self) -> "Sl2Module":
        bad = self.relation_violations()
        if bad:
            raise ModuleError(f"{self.label}: " + "; ".join(bad))
        return self

    def extend(self, dst: GF) -> "Sl2Module":
        if dst == self.field:
            return self
        return Sl2Module(dst, self.E.extend(dst), self.F.extend(dst), self.H.extend(dst),
                         self.family, self.lam, self.xi)

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "dim": self.dim,
            "family": self.family,
            "lambda": self.lam,
            "xi": self.xi.to_json() if self.xi is not None else None,
            "E": self.E.to_json(),
            "F": self.F.to_json(),
            "H": self.H.to_json(),
        }
        if self.field.e > 1:
            out["field"] = self.field.describe()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Sl2Module":
        fd = data.get("field")
        fld = GF(data["p"], fd["e"], fd["modulus"]) if fd else gf(data["p"])
        mats = []
        for key in ("E", "F", "H"):
            arr = np.array(data[key], dtype=np.int64).reshape(data["dim"], data["dim"], -1)
            mats.append(FqMatrix(fld, arr))
        xi = PointP1.from_json(fld, data["xi"]) if data.get("xi") is not None else None
        return cls(fld, *mats, family=data.get("family", "Other"), lam=data.get("lambda"), xi=xi)


def _check_prime(p: int) -> GF:
    try:
        return gf(p)
    except FieldError as exc:
        raise ModuleError(str(exc)) from exc


def _module(fld: GF, n: int, e: dict, f: dict, h: dict, **meta) -> Sl2Module:
    mats = [FqMatrix.from_sparse(fld, n, n, d) for d in (e, f, h)]
    return Sl2Module(fld, *mats, **meta)


def weyl(p: int, lam: int) -> Sl2Module:
    if lam < 0:
        raise ModuleError("lambda must be >= 0")
    fld = _check_prime(p)
    e, f, h = {}, {}, {}
    for i in range(lam + 1):
        if i >= 1:
            e[(i - 1, i)] = lam - i + 1
        if i + 1 <= lam:
            f[(i + 1, i)] = i + 1
        h[(i, i)] = lam - 2 * i
    return _module(fld, lam + 1, e, f, h, family="Weyl", lam=lam)


def dual_weyl(p: int, lam: int) -> Sl2Module:
    if lam < 0:
        raise ModuleError("lambda must be >= 0")
    fld = _check_prime(p)
    e, f, h = {}, {}, {}
    for i in range(lam + 1):
        if i >= 1:
            e[(i - 1, i)] = i
        if i + 1 <= lam:
            f[(i + 1, i)] = lam - i
        h[(i, i)] = lam - 2 * i
    return _module(fld, lam + 1, e, f, h, family="DualWeyl", lam=lam)


def projective_basis(p: int, lam: int) -> list[tuple[str, int]]:
    """Ordered basis symbols of Q(lam) for lam < p - 1."""
    return [("v", i) for i in range(2 * p - lam - 1)] + [("w", i) for i in range(p - lam - 1, p)]


def projective(p: int, lam: int) -> Sl2Module:
    fld = _check_prime(p)
    if lam < 0 or lam >= p:
        raise ModuleError(f"projective Q(lambda) needs 0 <= lambda <= p-1, got {lam}")
    if lam == p - 1:
        m = weyl(p, lam)
        m.family = "Projective"
        return m
    basis = projective_basis(p, lam)
    index = {sym: k for k, sym in enumerate(basis)}
    e, f, h = {}, {}, {}

    def put(d: dict, target: tuple[str, int], source: tuple[str, int], coeff: int) -> None:
        if target in index and coeff % p:
            key = (index[target], index[source])
            d[key] = d.get(key, 0) + coeff

    for sym in basis:
        kind, i = sym
        put(e, (kind, i - 1), sym, -(lam + i + 1))
        put(f, (kind, i + 1), sym, i + 1)
        put(h, sym, sym, -(lam + 2 * i + 2))
        if kind == "w":
            put(e, ("v", i - 1), sym, inv_mod(i, p))
            if i == p - 1:
                put(f, ("v", p), sym, -inv_mod(lam + 1, p))
    return _module(fld, 2 * p, e, f, h, family="Projective", lam=lam)


def split_lambda(p: int, lam: int) -> tuple[int, int]:
    """lam = r p + a with 0 <= a < p."""
    return divmod(lam, p)


def phi(p: int, lam: int, xi: PointP1) -> Sl2Module:
    """Non-constant module attached to a point xi of P^1 (over xi's field)."""
    fld = xi.field
    if fld.p != p:
        raise ModuleError("point field has the wrong characteristic")
    if lam < p or (lam + 1) % p == 0:
        raise ModuleError(f"Phi needs lambda >= p and p not dividing lambda+1, got {lam}")
    r, a = split_lambda(p, lam)
    if xi.is_infinity:
        v = weyl(p, lam).extend(fld)
        idx = list(range(a + 1, lam + 1))
        mats = [X.submatrix(idx, idx) for X in v.actions]
        return Sl2Module(fld, *mats, family="NonConstant", lam=lam, xi=xi)
    eps = xi.t
    n = lam - a
    pos = {i: i - a - 1 for i in range(a + 1, lam + 1)}
    e, f, h = {}, {}, {}
    for i in range(a + 1, lam + 1):
        q, b = divmod(i, p)
        col = pos[i]
        if i + 1 in pos:
            e[(pos[i + 1], col)] = fld(i + 1)
        if b == a:
            corr = fld(-(i + 1) * binom(lam, i)) * eps ** (q * p)
            key = (pos[a + 1], col)
            e[key] = e.get(key, fld.zero) + corr
        if i - 1 in pos:
            f[(pos[i - 1], col)] = fld(lam - i + 1)
        h[(col, col)] = fld(2 * i - lam)
    return _module(fld, n, e, f, h, family="NonConstant", lam=lam, xi=xi)


def phi_matrix(fld: GF, eps) -> list[list]:
    """The group element [[0, 1], [-1, -eps]] attached to [1:eps]."""
    return [[fld.zero, fld.one], [fld(-1), -eps]]


def sl2_group_action(p: int, lam: int, g: Sequence[Sequence], fld: GF | None = None) -> FqMatrix:
    """Matrix of g = [[a, b], [c, d]] acting on V(lam); column i is g v_i."""
    if fld is None:
        fld = gf(p)
    (a, b), (c, d) = [[fld(x) if isinstance(x, int) else x for x in row] for row in g]
    if (a * d - b * c).is_zero():
        raise ModuleError("group element is singular")
    n = lam + 1
    entries = {}
    for i in range(n):
        for j in range(n):
            acc = fld.zero
            for t in range(max(0, j - i), min(j, lam - i) + 1):
                coeff = binom(lam - j, lam - i - t) * binom(j, t)
                if coeff % p == 0:
                    continue
                acc += fld(coeff) * a ** (lam - i - t) * b ** (t + i - j) * c**t * d ** (j - t)
            if not acc.is_zero():
                entries[(j, i)] = acc
    return FqMatrix.from_sparse(fld, n, n, entries)


def phi_basis_vectors(p: int, lam: int, eps, fld: GF) -> FqMatrix:
    """Columns w_{a+1}..w_lam of V(lam): v_{lam-i} - C(r,q) eps^{qp} v_{lam-b} if b <= a."""
    r, a = split_lambda(p, lam)
    entries = {}
    for col, i in enumerate(range(a + 1, lam + 1)):
        q, b = divmod(i, p)
        entries[(lam - i, col)] = fld.one
        if b <= a:
            key = (lam - b, col)
            entries[key] = entries.get(key, fld.zero) - fld(binom(r, q)) * eps ** (q * p)
    return FqMatrix.from_sparse(fld, lam + 1, lam - a, entries)


@dataclass
class PhiBasisReport:
    ok: bool
    rank_images: int
    rank_w: int
    rank_joint: int
    action_matches: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_phi_basis(p: int, lam: int, eps, fld: GF | None = None) -> PhiBasisReport:
    """Compare span{phi(xi) v_i : i > a} with span{w_i} inside V(lam), and
    check that V(lam) acts on the w-basis exactly as the Phi formulas say."""
    if fld is None:
        fld = gf(p)
    eps = fld(eps) if isinstance(eps, int) else eps
    if lam < p or (lam + 1) % p == 0:
        raise ModuleError("Phi needs lambda >= p and p not dividing lambda+1")
    r, a = split_lambda(p, lam)
    g = sl2_group_action(p, lam, phi_matrix(fld, eps), fld)
    images = g.submatrix(range(lam + 1), range(a + 1, lam + 1))
    w = phi_basis_vectors(p, lam, eps, fld)
    joint = FqMatrix(fld, np.concatenate([images.coeffs, w.coeffs], axis=1))
    ri, rw, rj = images.rank(), w.rank(), joint.rank()
    v = weyl(p, lam).extend(fld)
    ph = phi(p, lam, PointP1(fld, fld.one, eps))
    matches = all(X @ w == w @ Y for X, Y in zip(v.actions, ph.actions))
    n = lam - a
    return PhiBasisReport(ri == rw == rj == n and matches, ri, rw, rj, matches)


def direct_sum(*mods: Sl2Module) -> Sl2Module:
    fld = mods[0].field
    if any(m.field != fld for m in mods):
        raise ModuleError("direct sum over different fields")
    mats = [FqMatrix.block_diag(fld, [m.actions[k] for m in mods]) for k in range(3)]
    return Sl2Module(fld, *mats)


def dual(m: Sl2Module) -> Sl2Module:
    return Sl2Module(m.field, *(-(X.T) for X in m.actions))


def zero_module(p: int) -> Sl2Module:
    fld = gf(p)
    z = FqMatrix.zeros(fld, 0, 0)
    return Sl2Module(fld, z, z, z, family="Zero", lam=None)


def _kron(fld: GF, a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if fld.e == 1:
        return FqMatrix(fld, np.kron(a.coeffs[:, :, 0], b.coeffs[:, :, 0]) % fld.p)
    prod = np.einsum("ijk,abl,klm->iajbm", a.coeffs, b.coeffs, fld._mul_tensor)
    r = a.rows * b.rows
    c = a.cols * b.cols
    return FqMatrix(fld, prod.reshape(r, c, fld.e))


def hom_space(m: Sl2Module, n: Sl2Module) -> list[FqMatrix]:
    """Basis of module maps T: M -> N (T is dim N x dim M)."""
    if m.field != n.field:
        if m.field.p != n.field.p:
            raise ModuleError("modules over different characteristics")
        from .fieldcore import common_field

        big = common_field(m.field, n.field)
        m, n = m.extend(big), n.extend(big)
    fld = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    i_m = FqMatrix.identity(fld, dm)
    i_n = FqMatrix.identity(fld, dn)
    blocks = [(_kron(fld, XN, i_m) - _kron(fld, i_n, XM.T)) for XM, XN in zip(m.actions, n.actions)]
    system = FqMatrix(fld, np.concatenate([b.coeffs for b in blocks], axis=0))
    _, basis = rank_nullspace(system)
    return [FqMatrix(fld, v.reshape(dn, dm, fld.e)) for v in basis]


def is_hom(t: FqMatrix, m: Sl2Module, n: Sl2Module) -> bool:
    return all(t @ XM == XN @ t for XM, XN in zip(m.actions, n.actions))


def find_isomorphism(m: Sl2Module, n: Sl2Module, seed: int = 0, tries: int = 16) -> FqMatrix | None:
    """An invertible intertwiner M -> N, or None if none was found."""
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return FqMatrix.zeros(m.field, 0, 0)
    basis = hom_space(m, n)
    if not basis:
        return None
    for t in basis:
        if t.rank() == m.dim:
            return t
    rng = random.Random(seed)
    fld = basis[0].field
    for _ in range(tries):
        t = FqMatrix.zeros(fld, n.dim, m.dim)
        for b in basis:
            t = t + b.scale(fld.random_element(rng))
        if t.rank() == m.dim:
            return t
    return None


def _poly_at_matrix(fld: GF, h, x: FqMatrix) -> FqMatrix:
    coeffs = h.coeffs()
    n = x.rows
    acc = FqMatrix.zeros(fld, n, n)
    ident = FqMatrix.identity(fld, n)
    for c in reversed(coeffs):
        acc = acc @ x + ident.scale(c)
    return acc


def is_indecomposable(m: Sl2Module, seed: int = 0, samples: int = 8) -> str:
    """'false' if some sampled endomorphism has a Fitting splitting, 'true' if all
    sampled endomorphisms are scalar plus nilpotent, 'inconclusive' otherwise."""
    from flint import nmod_mat

    n = m.dim
    if n == 0:
        return "false"
    fld = m.field
    basis = hom_space(m, m)
    rng = random.Random(seed)
    tests = list(basis)
    for _ in range(samples):
        t = FqMatrix.zeros(fld, n, n)
        for b in basis:
            t = t + b.scale(fld.random_element(rng))
        tests.append(t)
    verdict = "true"
    for phi_ in tests:
        real = phi_.realified()
        minpoly = nmod_mat(real.tolist(), fld.p).minpoly()
        lifted = fld.poly_ctx([fld(int(c)) for c in minpoly.coeffs()])
        _, factors = lifted.factor()
        local = False
        for h, _k in factors:
            rk = _poly_at_matrix(fld, h, phi_)
            rank = (rk**n).rank()
            if 0 < rank < n:
                return "false"
            if rank == 0:
                local = h.degree() == 1
        if not local:
            verdict = "inconclusive"
    return verdict
