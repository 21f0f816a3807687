"""Points of P^1, the nullcone map, and local Jordan types of sl2-modules."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .fieldcore import GF, FqMatrix, common_field, embed, generic_rank, gf
from .partitions import Partition, j_rank, jordan_type_from_ranks, jordan_type_string

if TYPE_CHECKING:
    from .sl2mod import Sl2Module


class ProfileIncomplete(RuntimeError):
    pass


class PointP1:
    """A point [s:t] of P^1, normalized to [1:t] or [0:1]."""

    __slots__ = ("field", "s", "t")

    def __init__(self, field: GF, s, t):
        s = field(s) if isinstance(s, (int, list, tuple)) else s
        t = field(t) if isinstance(t, (int, list, tuple)) else t
        if s.is_zero() and t.is_zero():
            raise ValueError("[0:0] is not a point of P^1")
        if s.is_zero():
            s, t = field.zero, field.one
        else:
            s, t = field.one, t / s
        self.field = field
        self.s = s
        self.t = t

    @property
    def is_infinity(self) -> bool:
        return self.s.is_zero()

    def key(self) -> tuple:
        return (self.field.key, tuple(self.field.coeffs(self.s)), tuple(self.field.coeffs(self.t)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointP1) or other.field.p != self.field.p:
            return False
        big = common_field(self.field, other.field)
        a, b = self.extend(big), other.extend(big)
        return a.s == b.s and a.t == b.t

    def __hash__(self) -> int:
        return hash((self.field.p, self.is_infinity))

    def extend(self, dst: GF) -> "PointP1":
        if dst == self.field:
            return self
        return PointP1(dst, embed(self.s, self.field, dst), embed(self.t, self.field, dst))

    def to_json(self) -> list:
        return [self.field.to_json(self.s), self.field.to_json(self.t)]

    @classmethod
    def from_json(cls, field: GF, data) -> "PointP1":
        return cls(field, field.from_json(data[0]), field.from_json(data[1]))

    def __str__(self) -> str:
        def fmt(x) -> str:
            text = str(x)
            return text if self.field.e == 1 else f"({text})"

        return f"[{fmt(self.s)}:{fmt(self.t)}]"

    __repr__ = __str__


def rational_points(p: int) -> list[PointP1]:
    fld = gf(p)
    return [PointP1(fld, 1, c) for c in range(p)] + [PointP1(fld, 0, 1)]


def iota(pt: PointP1) -> tuple:
    """(x, y, z) = (s^2, -t^2, st); lies on xy + z^2 = 0."""
    s, t = pt.s, pt.t
    return (s * s, -(t * t), s * t)


def operator_at(m: "Sl2Module", pt: PointP1) -> FqMatrix:
    fld = common_field(m.field, pt.field)
    m = m.extend(fld)
    pt = pt.extend(fld)
    x, y, z = iota(pt)
    return m.E.scale(x) + m.F.scale(y) + m.H.scale(z)


def rank_sequence(a: FqMatrix, p: int) -> list[int]:
    ranks = []
    power = a
    for _ in range(1, p):
        r = power.rank()
        ranks.append(r)
        if r == 0:
            break
        power = power @ a
    return ranks


def jordan_type_of(a: FqMatrix, p: int) -> Partition:
    return jordan_type_from_ranks(a.rows, rank_sequence(a, p), p)


def local_jordan_type(m: "Sl2Module", pt: PointP1) -> Partition:
    return jordan_type_of(operator_at(m, pt), m.p)


def local_j_rank(m: "Sl2Module", pt: PointP1, j: int) -> int:
    if not 0 <= j <= m.p:
        raise ValueError("need 0 <= j <= p")
    return j_rank(local_jordan_type(m, pt), j)


@dataclass
class JordanProfile:
    dim: int
    generic: Partition
    exceptional: list[tuple[PointP1, Partition]]

    @property
    def constant(self) -> bool:
        return not self.exceptional

    def to_json(self) -> dict:
        return {
            "generic": jordan_type_string(self.generic),
            "exceptional": [
                {"point": pt.to_json(), "field": pt.field.describe(), "type": jordan_type_string(lam)}
                for pt, lam in self.exceptional
            ],
        }

    def text(self) -> str:
        if self.constant:
            return f"constant {jordan_type_string(self.generic)}"
        exc = ", ".join(f"{pt} -> {jordan_type_string(lam)}" for pt, lam in self.exceptional)
        return f"generic {jordan_type_string(self.generic)}; exceptional {exc}"


def _generic_operator(m: "Sl2Module"):
    """Operator at [1:u] as a matrix of polynomials in u."""
    fld = m.field
    pc = fld.poly_ctx
    n = m.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(pc([m.E[i, j], m.H[i, j], -m.F[i, j]]))
        rows.append(row)
    return rows


def _poly_matmul(a, b, pc):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = pc.zero()
            for l in range(k):
                if not ai[l].is_zero() and not b[l][j].is_zero():
                    acc += ai[l] * b[l][j]
            row.append(acc)
        out.append(row)
    return out


def jordan_profile(m: "Sl2Module", e_max: int = 8, seeds: int = 3) -> JordanProfile:
    """Generic Jordan type over F(u) plus the finitely many exceptional points.

    Candidates for rank drops of A(u)^j are the roots of the gcd of several
    maximal nonvanishing minors (found by Bareiss elimination in different
    pivot orders); each candidate and the point [0:1] are then evaluated.
    """
    key = ("profile", e_max)
    if key in m._cache:
        return m._cache[key]
    fld, p, n = m.field, m.p, m.dim
    pc = fld.poly_ctx
    a = _generic_operator(m)
    power = a
    ranks: list[int] = []
    locus = pc.zero()
    for j in range(1, p):
        g = pc.zero()
        rank = None
        for seed in range(seeds):
            res = generic_rank(fld, power, seed=None if seed == 0 else seed)
            rank = res.rank
            if rank == 0:
                break
            g = res.minor if g.is_zero() else g.gcd(res.minor)
            if g.degree() == 0:
                break
        ranks.append(rank)
        if rank == 0:
            break
        if not g.is_zero() and g.degree() > 0:
            locus = g if locus.is_zero() else locus * g
        power = _poly_matmul(power, a, pc)
    generic = jordan_type_from_ranks(n, ranks, p)

    candidates: list[PointP1] = [PointP1(fld, 0, 1)]
    if not locus.is_zero() and locus.degree() > 0:
        _, factors = locus.factor()
        for h, _k in sorted(factors, key=lambda hk: (hk[0].degree(), str(hk[0]))):
            big_e = fld.e * h.degree()
            if big_e > e_max:
                raise ProfileIncomplete(
                    f"profile incomplete: factor {h} needs F_{p}^{big_e} beyond e_max={e_max}"
                )
            big = gf(p, big_e) if big_e > fld.e else fld
            lifted = big.poly_ctx([embed(c, fld, big) for c in h.coeffs()])
            for root, _ in sorted(lifted.roots(), key=lambda r: big.coeffs(r[0])):
                candidates.append(PointP1(big, big.one, root))
    exceptional = []
    seen: list[PointP1] = []
    for pt in candidates:
        if pt in seen:
            continue
        seen.append(pt)
        lam = local_jordan_type(m, pt)
        if lam != generic:
            exceptional.append((pt, lam))
    exceptional.sort(key=lambda item: (item[0].field.e, not item[0].is_infinity, item[0].key()))
    prof = JordanProfile(n, generic, exceptional)
    m._cache[key] = prof
    return prof


def has_constant_jordan_type(m: "Sl2Module", e_max: int = 8) -> bool:
    return jordan_profile(m, e_max).constant


def is_projective(m: "Sl2Module", e_max: int = 8) -> bool:
    prof = jordan_profile(m, e_max)
    p = m.p
    return prof.constant and m.dim % p == 0 and prof.generic == Partition([p] * (m.dim // p))
