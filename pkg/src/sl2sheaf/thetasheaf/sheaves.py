"""Splitting types, kernel/image reports and the subquotient sheaves F_i."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from ..nullcone import jordan_profile
from ..partitions import Partition, jordan_type_string
from .graded import (
    GradedSubmodule,
    Grading,
    ambient,
    generator_polynomials,
    graded_image,
    graded_kernel,
    intersect,
    saturate,
)
from .homogeneous import build_theta, theta_power

if TYPE_CHECKING:
    from ..sl2mod import Sl2Module


class SplittingUndetermined(RuntimeError):
    pass


class SplittingType(tuple):
    """Twists a_i of a sum of line bundles O(a_i), in descending order."""

    def __new__(cls, twists: Sequence[int] = ()):
        return super().__new__(cls, sorted((int(a) for a in twists), reverse=True))

    @property
    def rank(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def twist(self, k: int) -> "SplittingType":
        return SplittingType(a + k for a in self)

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = []
        i = 0
        while i < len(self):
            k = i
            while k < len(self) and self[k] == self[i]:
                k += 1
            parts.append(f"O({self[i]})" + (f"^{k - i}" if k - i > 1 else ""))
            i = k
        return " + ".join(parts)


def default_degree_bound(m: "Sl2Module") -> int:
    return 2 * max(m.dim - 1, 0) + 2 * m.p


def splitting_from_generators(sub: GradedSubmodule) -> SplittingType:
    if not sub.certified:
        raise SplittingUndetermined("kernel generators are not certified complete")
    return SplittingType(-d for d, _ in sub.generators)


@dataclass
class HilbertAnalysis:
    rank: int
    degree: int
    tail_valid: bool
    splitting: SplittingType | None
    window_valid: bool


def analyze_hilbert(h: Sequence[tuple[int, int]], window: int = 2) -> HilbertAnalysis:
    """Read rank and degree from the linear tail h(d) = rank (d + 1) + degree,
    and twists from Delta h(d) = #{i : a_i >= -d} when that is consistent."""
    values = dict(h)
    degs = sorted(values)
    top = degs[-1]
    rank = values[top] - values.get(top - 1, 0)
    degree = values[top] - rank * (top + 1)
    tail = [d for d in degs if d >= top - window]
    tail_valid = all(values[d] == rank * (d + 1) + degree for d in tail)
    twists: list[int] = []
    window_valid = False
    if tail_valid and degs[0] == 0:
        prev_delta = 0
        ok = True
        for d in degs:
            delta = values[d] - values.get(d - 1, 0)
            if delta < prev_delta:
                ok = False
                break
            twists.extend([-d] * (delta - prev_delta))
            prev_delta = delta
        window_valid = ok and len(twists) == rank and sum(twists) == degree
    splitting = None
    if tail_valid and rank == 0:
        splitting = SplittingType()
    elif tail_valid and rank == 1:
        splitting = SplittingType([degree])
    elif window_valid:
        splitting = SplittingType(twists)
    return HilbertAnalysis(rank, degree, tail_valid, splitting, window_valid)


def splitting_type(sub: GradedSubmodule, mode: str = "free_generators") -> SplittingType:
    if mode == "free_generators":
        return splitting_from_generators(sub)
    if mode == "hilbert_window":
        res = analyze_hilbert(sub.hilbert())
        if res.splitting is None:
            raise SplittingUndetermined(
                f"splitting undetermined: rank {res.rank}, degree {res.degree}, hilbert {sub.hilbert()}"
            )
        return res.splitting
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# reports


def sheaf_report(m: "Sl2Module", obj: str, sub: GradedSubmodule, splitting: SplittingType | None,
                 certified: bool) -> dict:
    return {
        "module": m.label,
        "object": obj,
        "certified": certified,
        "generators": [
            {"degree": d, "vector": generator_polynomials(sub, d, v)} for d, v in sub.generators
        ],
        "splitting": None if splitting is None else list(splitting),
        "hilbert": [{"d": d, "dim": k} for d, k in sub.hilbert()],
    }


def kernel_report(m: "Sl2Module", j: int = 1, max_degree: int | None = None) -> dict:
    if max_degree is None:
        max_degree = default_degree_bound(m)
    op = theta_power(m, j)
    sub = graded_kernel(op, max_degree, grading=_context(m, max_degree).grading)
    return sheaf_report(m, f"ker^{j}", sub, splitting_from_generators(sub), sub.certified)


def image_report(m: "Sl2Module", j: int = 1, max_degree: int | None = None) -> dict:
    if max_degree is None:
        max_degree = default_degree_bound(m)
    ctx = _context(m, max_degree)
    img = graded_image(theta_power(m, j), max_degree, ctx.grading)
    res = analyze_hilbert(saturate(img).hilbert())
    return sheaf_report(m, f"im^{j}", img, res.splitting, res.splitting is not None)


def coker_report(m: "Sl2Module", j: int = 1, max_degree: int | None = None) -> dict:
    if max_degree is None:
        max_degree = default_degree_bound(m)
    ctx = _context(m, max_degree)
    img = graded_image(theta_power(m, j), max_degree, ctx.grading)
    n = m.dim
    return {
        "module": m.label,
        "object": f"coker^{j}",
        "certified": False,
        "generators": [],
        "splitting": None,
        "hilbert": [{"d": d, "dim": (d + 1) * n - k} for d, k in img.hilbert()],
    }


# ---------------------------------------------------------------------------
# F_i


class _SheafContext:
    """Per-module cache of Ker and Ker ∩ sat(Im^j) up to a degree bound."""

    def __init__(self, m: "Sl2Module", max_degree: int):
        self.module = m
        self.max_degree = max_degree
        self.theta = build_theta(m)
        self.grading = Grading.for_matrix(self.theta)
        self._kernel: GradedSubmodule | None = None
        self._layers: dict[int, GradedSubmodule] = {}

    @property
    def kernel(self) -> GradedSubmodule:
        if self._kernel is None:
            self._kernel = graded_kernel(self.theta, self.max_degree, stop_early=False, grading=self.grading)
        return self._kernel

    def layer(self, j: int) -> GradedSubmodule:
        """Ker ∩ sat(Im^j), which is the saturation of Ker ∩ Im^j."""
        if j not in self._layers:
            degrees = range(self.max_degree + 1)
            if j == 0:
                self._layers[j] = self.kernel
            else:
                op = theta_power(self.module, j)
                if op.is_zero():
                    self._layers[j] = GradedSubmodule(self.grading, {d: {} for d in degrees})
                else:
                    img = saturate(graded_image(op, self.max_degree, self.grading))
                    self._layers[j] = intersect(self.kernel, img)
        return self._layers[j]


def _context(m: "Sl2Module", max_degree: int) -> _SheafContext:
    key = ("sheaf", max_degree)
    if key not in m._cache:
        m._cache[key] = _SheafContext(m, max_degree)
    return m._cache[key]


@dataclass
class FiData:
    module: str
    i: int
    hilbert: list[tuple[int, int]]
    rank: int
    degree: int
    splitting: SplittingType | None
    tail_valid: bool

    @property
    def is_zero(self) -> bool:
        return all(k == 0 for _, k in self.hilbert)

    def text(self) -> str:
        if self.is_zero:
            return "0"
        if self.splitting is not None:
            return str(self.splitting)
        return f"rank {self.rank}, degree {self.degree} (splitting undetermined)"

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "object": f"F_{self.i}",
            "certified": self.splitting is not None,
            "generators": [],
            "splitting": None if self.splitting is None else list(self.splitting),
            "hilbert": [{"d": d, "dim": k} for d, k in self.hilbert],
            "rank": self.rank,
            "degree": self.degree,
        }


def fi_data(m: "Sl2Module", i: int, max_degree: int | None = None) -> FiData:
    p = m.p
    if not 1 <= i <= p:
        raise ValueError("need 1 <= i <= p")
    if max_degree is None:
        max_degree = default_degree_bound(m)
    ctx = _context(m, max_degree)
    upper, lower = ctx.layer(i - 1), ctx.layer(i)
    h = [(d, upper.dim(d) - lower.dim(d)) for d in range(max_degree + 1)]
    res = analyze_hilbert(h)
    return FiData(m.label, i, h, res.rank, res.degree, res.splitting, res.tail_valid)


@dataclass
class FiRankReport:
    ok: bool
    jordan_type: Partition
    assembled: Partition
    ranks: dict[int, int]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "jordan_type": jordan_type_string(self.jordan_type),
            "assembled": jordan_type_string(self.assembled),
            "ranks": self.ranks,
        }


def verify_fi_rank_theorem(m: "Sl2Module", max_degree: int | None = None) -> FiRankReport:
    prof = jordan_profile(m)
    if not prof.constant:
        raise ValueError(f"{m.label} does not have constant Jordan type")
    ranks = {i: fi_data(m, i, max_degree).rank for i in range(1, m.p + 1)}
    assembled = Partition.sorted([i for i, a in ranks.items() for _ in range(a)])
    return FiRankReport(assembled == prof.generic, prof.generic, assembled, ranks)
