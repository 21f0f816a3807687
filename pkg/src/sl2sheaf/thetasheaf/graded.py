"""Graded submodules of free modules over F_q[s, t], computed degree by degree.

Every degree-d component of R^n = F_q[s, t]^n is stored realified over F_p
(see ``HomMatrix.induced`` for the flattening).  When the operator admits
integer weights w with w_i - w_j = 2l - k on its t^l terms, the charge
2m - w_j - d of s^(d-m) t^m e_j is preserved by the operator, lowered by one
under multiplication by s and raised by one under t.  All linear algebra is
then done one charge block at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

import numpy as np

from ..fieldcore import GF, fq_span_basis, generic_rank, intersect_rowspaces, nullspace_mod, rank_mod, rowspace_mod
from .homogeneous import HomMatrix


class KernelIncomplete(RuntimeError):
    def __init__(self, message: str, generators: list, corank: int):
        super().__init__(message)
        self.generators = generators
        self.corank = corank


class SaturationError(RuntimeError):
    pass


class Grading:
    """Charge blocks of (R^n)_d for fixed weights (period 0 means exact)."""

    def __init__(self, field: GF, n: int, weights: np.ndarray | None = None, period: int = 0):
        self.field = field
        self.n = n
        self.weights = None if weights is None else np.asarray(weights, dtype=np.int64)
        self.period = period
        self._cache: dict[int, dict[int, np.ndarray]] = {}
        self._pos: dict[int, np.ndarray] = {}

    @classmethod
    def for_matrix(cls, m: HomMatrix) -> "Grading":
        g = m.grading()
        if g is None:
            return cls(m.field, m.rows)
        return cls(m.field, m.rows, g[0], g[1])

    def key(self) -> tuple:
        w = None if self.weights is None else tuple(self.weights.tolist())
        return (self.field.key, self.n, w, self.period)

    def charge(self, chi: int) -> int:
        return chi % self.period if self.period else chi

    def blocks(self, d: int) -> dict[int, np.ndarray]:
        """charge -> sorted realified indices of (R^n)_d."""
        if d in self._cache:
            return self._cache[d]
        n, e = self.n, self.field.e
        if self.weights is None:
            out = {0: np.arange((d + 1) * n * e)}
        else:
            m = np.repeat(np.arange(d + 1), n)
            j = np.tile(np.arange(n), d + 1)
            chi = 2 * m - self.weights[j] - d
            if self.period:
                chi %= self.period
            out = {}
            for c in np.unique(chi):
                flat = np.flatnonzero(chi == c)
                out[int(c)] = (flat[:, None] * e + np.arange(e)[None, :]).ravel()
        self._cache[d] = out
        pos = np.empty((d + 1) * n * e, dtype=np.int64)
        for idx in out.values():
            pos[idx] = np.arange(idx.size)
        self._pos[d] = pos
        return out

    def position(self, d: int) -> np.ndarray:
        """Position of each realified index inside its charge block."""
        self.blocks(d)
        return self._pos[d]

    def shift_s(self, chi: int) -> int:
        return chi if self.weights is None else self.charge(chi - 1)

    def shift_t(self, chi: int) -> int:
        return chi if self.weights is None else self.charge(chi + 1)


def _empty(width: int) -> np.ndarray:
    return np.zeros((0, width), dtype=np.int64)


@dataclass
class GradedSubmodule:
    """Degreewise F_p bases (blockwise, echelonized) of a graded F_q-submodule of R^n."""

    grading: Grading
    comps: dict[int, dict[int, np.ndarray]] = dc_field(default_factory=dict)
    generators: list[tuple[int, np.ndarray]] = dc_field(default_factory=list)
    certified: bool = False
    corank: int | None = None

    @property
    def field(self) -> GF:
        return self.grading.field

    @property
    def n(self) -> int:
        return self.grading.n

    @property
    def degrees(self) -> list[int]:
        return sorted(self.comps)

    def block(self, d: int, chi: int) -> np.ndarray:
        width = self.grading.blocks(d)[chi].size
        return self.comps[d].get(chi, _empty(width))

    def dim(self, d: int) -> int:
        return sum(b.shape[0] for b in self.comps[d].values()) // self.field.e

    def hilbert(self) -> list[tuple[int, int]]:
        return [(d, self.dim(d)) for d in self.degrees]

    def full_basis(self, d: int) -> np.ndarray:
        """Realified basis rows in full (R^n)_d coordinates."""
        blocks = self.grading.blocks(d)
        width = (d + 1) * self.n * self.field.e
        rows = []
        for chi, basis in self.comps[d].items():
            if basis.shape[0] == 0:
                continue
            full = np.zeros((basis.shape[0], width), dtype=np.int64)
            full[:, blocks[chi]] = basis
            rows.append(full)
        return np.vstack(rows) if rows else _empty(width)

    def same_as(self, other: "GradedSubmodule", degrees: Iterable[int] | None = None) -> bool:
        p = self.field.p
        for d in degrees if degrees is not None else self.degrees:
            for chi in self.grading.blocks(d):
                a, b = self.block(d, chi), other.block(d, chi)
                if a.shape[0] != b.shape[0]:
                    return False
                if a.shape[0] and rank_mod(np.vstack([a, b]), p) != a.shape[0]:
                    return False
        return True

    def contains(self, other: "GradedSubmodule", degrees: Iterable[int] | None = None) -> bool:
        p = self.field.p
        for d in degrees if degrees is not None else other.degrees:
            for chi in self.grading.blocks(d):
                a, b = self.block(d, chi), other.block(d, chi)
                if b.shape[0] and rank_mod(np.vstack([a, b]), p) != a.shape[0]:
                    return False
        return True

    def restrict(self, degrees: Iterable[int]) -> "GradedSubmodule":
        return GradedSubmodule(self.grading, {d: self.comps[d] for d in degrees})


def ambient(grading: Grading, degrees: Iterable[int]) -> GradedSubmodule:
    comps = {}
    for d in degrees:
        comps[d] = {chi: np.eye(idx.size, dtype=np.int64) for chi, idx in grading.blocks(d).items()}
    return GradedSubmodule(grading, comps)


def _block_map(m: HomMatrix, grading: Grading, d: int, chi: int) -> np.ndarray:
    """Realified map from charge block chi of degree d to block chi of degree d+k."""
    e = m.field.e
    ne = m.cols * e
    src = grading.blocks(d)[chi]
    tgt = grading.blocks(d + m.degree).get(chi)
    if tgt is None or src.size == 0:
        return np.zeros((0 if tgt is None else tgt.size, src.size), dtype=np.int64)
    sm, sj = np.divmod(src, ne)
    tm, ti = np.divmod(tgt, ne)
    out = np.zeros((tgt.size, src.size), dtype=np.int64)
    shift = tm[:, None] - sm[None, :]
    for l, layer in enumerate(m.real_layers()):
        mask = shift == l
        if mask.any():
            rows, cols = np.nonzero(mask)
            out[rows, cols] += layer[ti[rows], sj[cols]]
    return out % m.field.p


def _check_grading(m: HomMatrix, grading: Grading) -> None:
    """Every t^l term at (i, j) must satisfy w_i - w_j = 2l - k (mod period)."""
    if m.rows != m.cols or m.rows != grading.n or m.field != grading.field:
        raise ValueError("operator does not act on the graded ambient module")
    if grading.weights is None:
        return
    w, k = grading.weights, m.degree
    for l, c in enumerate(m.coeffs):
        nz = np.argwhere(c.any(axis=2))
        if nz.size == 0:
            continue
        diff = w[nz[:, 0]] - w[nz[:, 1]] - (2 * l - k)
        if grading.period:
            diff %= grading.period
        if diff.any():
            raise ValueError("operator does not respect the grading")


def kernel_component(m: HomMatrix, grading: Grading, d: int) -> dict[int, np.ndarray]:
    p = m.field.p
    out = {}
    for chi in grading.blocks(d):
        a = _block_map(m, grading, d, chi)
        null = nullspace_mod(a, p) if a.shape[0] else np.eye(a.shape[1], dtype=np.int64)
        if null.shape[0]:
            out[chi] = rowspace_mod(null, p)
    return out


def image_component(m: HomMatrix, grading: Grading, d: int) -> dict[int, np.ndarray]:
    """Component in degree d of the image of m (sources in degree d - k)."""
    p = m.field.p
    src_d = d - m.degree
    out = {}
    if src_d < 0:
        return out
    for chi in grading.blocks(src_d):
        if chi not in grading.blocks(d):
            continue
        a = _block_map(m, grading, src_d, chi)
        if a.size and a.any():
            out[chi] = rowspace_mod(a.T, p)
    return out


def _shift_positions(grading: Grading, d: int, chi: int, by_t: bool) -> tuple[int, np.ndarray]:
    """Target charge and positions in degree d+1 of s* or t* times block (d, chi)."""
    src = grading.blocks(d)[chi]
    idx = src + (grading.n * grading.field.e if by_t else 0)
    target_chi = grading.shift_t(chi) if by_t else grading.shift_s(chi)
    return target_chi, grading.position(d + 1)[idx]


def multiply_component(sub: GradedSubmodule, d: int) -> dict[int, np.ndarray]:
    """s * sub_d + t * sub_d inside degree d + 1."""
    g = sub.grading
    p = sub.field.p
    pieces: dict[int, list[np.ndarray]] = {}
    for chi, basis in sub.comps[d].items():
        if basis.shape[0] == 0:
            continue
        for by_t in (False, True):
            tchi, pos = _shift_positions(g, d, chi, by_t)
            width = g.blocks(d + 1)[tchi].size
            rows = np.zeros((basis.shape[0], width), dtype=np.int64)
            rows[:, pos] = basis
            pieces.setdefault(tchi, []).append(rows)
    return {chi: rowspace_mod(np.vstack(rows), p) for chi, rows in pieces.items()}


def _corank(m: HomMatrix) -> int:
    return m.cols - generic_rank(m.field, m.poly_entries()).rank


def _new_generators(sub: GradedSubmodule, d: int) -> list[np.ndarray]:
    """Realified full-coordinate vectors of sub_d that are new modulo (s, t) sub_{d-1}."""
    g = sub.grading
    fld = sub.field
    lower = multiply_component(sub, d - 1) if (d - 1) in sub.comps else {}
    blocks = g.blocks(d)
    width = (d + 1) * g.n * fld.e
    gens = []
    for chi, basis in sub.comps[d].items():
        have = lower.get(chi, _empty(basis.shape[1]))
        if basis.shape[0] <= have.shape[0]:
            continue
        chosen = fq_span_basis(fld, basis, have if have.shape[0] else None)
        for v in chosen:
            full = np.zeros(width, dtype=np.int64)
            full[blocks[chi]] = v
            gens.append(full)
    return gens


def graded_kernel(m: HomMatrix, max_degree: int, stop_early: bool = True,
                  grading: Grading | None = None) -> GradedSubmodule:
    """Kernel of m degree by degree, with minimal generators.

    The kernel of a map of free modules over a two-variable polynomial ring is
    free, so once the number of minimal generators reaches the generic corank
    all generators are known.  With ``stop_early`` the computation ends there.
    """
    if grading is None:
        grading = Grading.for_matrix(m)
    else:
        _check_grading(m, grading)
    corank = _corank(m)
    sub = GradedSubmodule(grading, corank=corank)
    count = 0
    for d in range(max_degree + 1):
        sub.comps[d] = kernel_component(m, grading, d)
        if count < corank:
            for v in _new_generators(sub, d):
                sub.generators.append((d, v))
            count = len(sub.generators)
            if count > corank:
                raise RuntimeError("more minimal generators than the generic corank")
        if count == corank:
            sub.certified = True
            if stop_early:
                break
    if not sub.certified:
        raise KernelIncomplete(
            f"incomplete at D={max_degree}: found {count} of {corank} generators; try a larger --max-degree",
            sub.generators,
            corank,
        )
    return sub


def graded_image(m: HomMatrix, max_degree: int, grading: Grading | None = None) -> GradedSubmodule:
    """Image of m inside R^rows, degrees 0..max_degree (zero below the entry degree)."""
    if grading is None:
        grading = Grading.for_matrix(m)
    else:
        _check_grading(m, grading)
    sub = GradedSubmodule(grading)
    for d in range(max_degree + 1):
        sub.comps[d] = image_component(m, grading, d)
    return sub


def graded_coker_hilbert(m: HomMatrix, max_degree: int, grading: Grading | None = None) -> list[tuple[int, int]]:
    img = graded_image(m, max_degree, grading)
    return [(d, (d + 1) * m.rows - img.dim(d)) for d in img.degrees]


def intersect(a: GradedSubmodule, b: GradedSubmodule) -> GradedSubmodule:
    if a.grading is not b.grading and a.grading.key() != b.grading.key():
        raise ValueError("submodules live in differently graded ambients")
    p = a.field.p
    out = GradedSubmodule(a.grading)
    for d in sorted(set(a.comps) & set(b.comps)):
        comp = {}
        for chi in a.comps[d]:
            if chi in b.comps[d]:
                x = intersect_rowspaces(a.comps[d][chi], b.comps[d][chi], p)
                if x.shape[0]:
                    comp[chi] = x
        out.comps[d] = comp
    return out


def saturate(sub: GradedSubmodule, window: int = 2) -> GradedSubmodule:
    """Saturation with respect to (s, t), degrees min..max of ``sub``.

    Runs the colon recursion T_d = {v : s v, t v in T_(d+1)} downward from
    T_top = sub_top.  The top ``window`` degrees must already agree with the
    input, otherwise the saturation has not stabilized by the top degree and a
    SaturationError is raised.
    """
    g = sub.grading
    p = sub.field.p
    degs = sub.degrees
    if not degs:
        return GradedSubmodule(g)
    lo, top = degs[0], degs[-1]
    if degs != list(range(lo, top + 1)):
        raise ValueError("saturation needs a contiguous degree range")
    out = GradedSubmodule(g)
    out.comps[top] = sub.comps[top]
    for d in range(top - 1, lo - 1, -1):
        above = out.comps[d + 1]
        annihilators: dict[int, np.ndarray] = {}

        def annihilator(chi: int) -> np.ndarray:
            if chi not in annihilators:
                width = g.blocks(d + 1)[chi].size
                basis = above.get(chi, _empty(width))
                if basis.shape[0] == 0:
                    annihilators[chi] = np.eye(width, dtype=np.int64)
                elif basis.shape[0] == width:
                    annihilators[chi] = _empty(width)
                else:
                    annihilators[chi] = nullspace_mod(basis, p)
            return annihilators[chi]

        comp = {}
        for chi, idx in g.blocks(d).items():
            conds = []
            for by_t in (False, True):
                tchi, pos = _shift_positions(g, d, chi, by_t)
                k = annihilator(tchi)
                if k.shape[0]:
                    conds.append(k[:, pos])
            if not conds:
                comp[chi] = np.eye(idx.size, dtype=np.int64)
                continue
            sol = nullspace_mod(np.vstack(conds), p)
            if sol.shape[0]:
                comp[chi] = rowspace_mod(sol, p)
        out.comps[d] = comp
    check = [d for d in range(max(lo, top - window), top + 1)]
    if not out.same_as(sub, check):
        raise SaturationError(
            f"saturation not stable at the top degrees {check}; enlarge the degree bound"
        )
    return out


def generator_polynomials(sub: GradedSubmodule, degree: int, vec: np.ndarray) -> list[str]:
    """Render a realified vector of (R^n)_degree as n homogeneous forms."""
    fld = sub.field
    n, e = sub.n, fld.e
    coeffs = vec.reshape(degree + 1, n, e)
    out = []
    for j in range(n):
        terms = []
        for mm in range(degree + 1):
            c = coeffs[mm, j]
            if not c.any():
                continue
            if e == 1:
                v = int(c[0])
                cs = str(v - fld.p if v > fld.p // 2 else v)
            else:
                cs = f"({fld(list(c))})"
            mono = "".join(f"{x}" + (f"^{k}" if k > 1 else "") for x, k in (("s", degree - mm), ("t", mm)) if k > 0)
            if mono and cs == "1":
                cs = ""
            elif mono and cs == "-1":
                cs = "-"
            terms.append(cs + mono if mono else cs)
        out.append(" + ".join(terms) if terms else "0")
    return out
