"""Homogeneous matrices over F_q[s, t] and the global operator of a module."""
from __future__ import annotations

import math
from collections import deque
from typing import TYPE_CHECKING

import numpy as np

from ..fieldcore import GF, FqMatrix, gf
from ..sl2mod import ModuleError, binom, inv_mod, split_lambda

if TYPE_CHECKING:
    from ..sl2mod import Sl2Module


class HomogeneityError(ValueError):
    pass


class HomMatrix:
    """Matrix whose entries are forms of degree k = tgt_twist - src_twist.

    ``coeffs[l]`` is the (rows, cols, e) coefficient array of s^(k-l) t^l.
    """

    def __init__(self, field: GF, coeffs: list[np.ndarray], src_twist: int = 0, tgt_twist: int | None = None):
        if not coeffs:
            raise HomogeneityError("need at least one coefficient layer")
        k = len(coeffs) - 1
        if tgt_twist is None:
            tgt_twist = src_twist + k
        if tgt_twist - src_twist != k:
            raise HomogeneityError(f"entries of degree {k} do not match twists ({src_twist}, {tgt_twist})")
        shape = coeffs[0].shape
        if any(c.shape != shape for c in coeffs) or len(shape) != 3 or shape[2] != field.e:
            raise HomogeneityError("inconsistent coefficient layers")
        self.field = field
        self.coeffs = [np.asarray(c, dtype=np.int64) % field.p for c in coeffs]
        self.src_twist = src_twist
        self.tgt_twist = tgt_twist
        self._real: list[np.ndarray] | None = None
        self._grading = None

    # basic data
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def rows(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs[0].shape[1]

    @classmethod
    def zero(cls, field: GF, rows: int, cols: int, degree: int, src_twist: int = 0) -> "HomMatrix":
        layers = [np.zeros((rows, cols, field.e), dtype=np.int64) for _ in range(degree + 1)]
        return cls(field, layers, src_twist)

    @classmethod
    def from_terms(cls, field: GF, rows: int, cols: int, degree: int, terms: dict, src_twist: int = 0) -> "HomMatrix":
        """terms maps (i, j, l) to the coefficient of s^(degree-l) t^l at (i, j)."""
        layers = [np.zeros((rows, cols, field.e), dtype=np.int64) for _ in range(degree + 1)]
        for (i, j, l), v in terms.items():
            if isinstance(v, (int, np.integer)):
                layers[l][i, j, 0] += int(v)
            else:
                layers[l][i, j, :] += field.coeffs(v)
        return cls(field, layers, src_twist)

    def entry(self, i: int, j: int) -> dict[int, object]:
        """Nonzero terms {l: coefficient of s^(k-l) t^l}."""
        out = {}
        for l, c in enumerate(self.coeffs):
            if c[i, j].any():
                out[l] = self.field(list(c[i, j]))
        return out

    def entry_text(self, i: int, j: int) -> str:
        k = self.degree
        parts = []
        for l, c in self.entry(i, j).items():
            mono = "".join(
                f"{v}" + (f"^{e}" if e > 1 else "") for v, e in (("s", k - l), ("t", l)) if e > 0
            )
            if self.field.e == 1:
                v = int(str(c))
                coeff = str(v - self.field.p if v > self.field.p // 2 else v)
            else:
                coeff = f"({c})"
            if mono and coeff == "-1":
                coeff = "-"
            if mono and coeff == "1":
                coeff = ""
            parts.append(f"{coeff}{mono}" if mono else coeff)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "degree": self.degree,
            "twists": [self.src_twist, self.tgt_twist],
            "entries": [[self.entry_text(i, j) for j in range(self.cols)] for i in range(self.rows)],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomMatrix) or other.field != self.field:
            return False
        if other.degree != self.degree or other.coeffs[0].shape != self.coeffs[0].shape:
            return False
        return all(np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.coeffs)

    def layer(self, l: int) -> FqMatrix:
        return FqMatrix(self.field, self.coeffs[l])

    def twisted(self, shift: int) -> "HomMatrix":
        return HomMatrix(self.field, self.coeffs, self.src_twist + shift, self.tgt_twist + shift)

    def submatrix(self, rows, cols) -> "HomMatrix":
        ix = np.ix_(list(rows), list(cols))
        return HomMatrix(self.field, [c[ix] for c in self.coeffs], self.src_twist, self.tgt_twist)

    def __matmul__(self, other: "HomMatrix") -> "HomMatrix":
        """Composite self after other; twists must chain."""
        if other.tgt_twist != self.src_twist:
            raise HomogeneityError(
                f"twists do not chain: target {other.tgt_twist} vs source {self.src_twist}"
            )
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        f = self.field
        k = self.degree + other.degree
        layers = []
        for l in range(k + 1):
            acc = FqMatrix.zeros(f, self.rows, other.cols)
            for a in range(max(0, l - other.degree), min(self.degree, l) + 1):
                acc = acc + self.layer(a) @ other.layer(l - a)
            layers.append(acc.coeffs)
        return HomMatrix(f, layers, other.src_twist, self.tgt_twist)

    def evaluate(self, s, t) -> FqMatrix:
        f = self.field
        k = self.degree
        acc = FqMatrix.zeros(f, self.rows, self.cols)
        for l in range(k + 1):
            acc = acc + self.layer(l).scale(s ** (k - l) * t**l)
        return acc

    def poly_entries(self):
        """Entries dehomogenized at s = 1, as polynomials in u = t."""
        pc = self.field.poly_ctx
        return [
            [pc([self.field(list(c[i, j])) for c in self.coeffs]) for j in range(self.cols)]
            for i in range(self.rows)
        ]

    # realified coefficient layers
    def real_layers(self) -> list[np.ndarray]:
        if self._real is None:
            self._real = [FqMatrix(self.field, c).realified() for c in self.coeffs]
        return self._real

    def induced(self, d: int) -> np.ndarray:
        """F_p matrix of (R^cols)_d -> (R^rows)_{d+k}, realified.

        A vector of (R^n)_d is flattened with s^(d-m) t^m e_j at position
        (m * n + j) * e + r, for coefficient r of the field element.
        """
        e, k = self.field.e, self.degree
        rr, cc = self.rows * e, self.cols * e
        out = np.zeros(((d + k + 1) * rr, (d + 1) * cc), dtype=np.int64)
        for l, layer in enumerate(self.real_layers()):
            if not layer.any():
                continue
            for m in range(d + 1):
                out[(m + l) * rr : (m + l + 1) * rr, m * cc : (m + 1) * cc] = layer
        return out

    # grading
    def grading(self) -> tuple[np.ndarray, int] | None:
        """Integer weights w on the basis with w_i - w_j = 2l - k whenever the
        t^l coefficient at (i, j) is nonzero, modulo a period G (0 = exact).

        Returns None if only the trivial period 1 is possible.  Only square
        matrices are graded.
        """
        if self._grading is not None:
            return None if self._grading == "none" else self._grading
        if self.rows != self.cols:
            self._grading = "none"
            return None
        n, k = self.rows, self.degree
        edges: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for l, c in enumerate(self.coeffs):
            nz = np.argwhere(c.any(axis=2))
            for i, j in nz:
                edges[j].append((int(i), 2 * l - k))
                edges[i].append((int(j), -(2 * l - k)))
        w = [None] * n
        period = 0
        for root in range(n):
            if w[root] is not None:
                continue
            w[root] = 0
            queue = deque([root])
            while queue:
                j = queue.popleft()
                for i, delta in edges[j]:
                    target = w[j] + delta
                    if w[i] is None:
                        w[i] = target
                        queue.append(i)
                    else:
                        period = math.gcd(period, abs(w[i] - target))
        if period == 1:
            self._grading = "none"
            return None
        weights = np.array(w, dtype=np.int64)
        if period:
            weights %= period
        self._grading = (weights, period)
        return self._grading


# ---------------------------------------------------------------------------
# global operator and named matrices


def build_theta(m: "Sl2Module") -> HomMatrix:
    """s^2 E - t^2 F + st H, twists (0, 2)."""
    layers = [m.E.coeffs, m.H.coeffs, (-m.F).coeffs]
    return HomMatrix(m.field, layers, 0, 2)


def theta_power(m: "Sl2Module | HomMatrix", j: int) -> HomMatrix:
    theta = m if isinstance(m, HomMatrix) else build_theta(m)
    if j < 0:
        raise ValueError("j must be >= 0")
    if j == 0:
        n = theta.rows
        ident = FqMatrix.identity(theta.field, n).coeffs
        return HomMatrix(theta.field, [ident], 0, 0)
    result = theta
    for step in range(1, j):
        result = theta.twisted(2 * step) @ result
    return result


def _b_terms(lam: int, offset: int = 0) -> dict:
    terms = {}
    for i in range(lam + 1):
        if i >= 1:
            terms[(i + offset, i - 1 + offset, 2)] = -i
        terms[(i + offset, i + offset, 1)] = lam - 2 * i
        if i + 1 <= lam:
            terms[(i + offset, i + 1 + offset, 0)] = lam - i
    return terms


def matrix_b(p: int, lam: int) -> HomMatrix:
    fld = gf(p)
    return HomMatrix.from_terms(fld, lam + 1, lam + 1, 2, _b_terms(lam), 0)


def matrix_b_prime(p: int, lam: int) -> HomMatrix:
    r, a = split_lambda(p, lam)
    idx = range(a + 1, lam + 1)
    return matrix_b(p, lam).submatrix(idx, idx)


def matrix_c(p: int, lam: int) -> HomMatrix:
    fld = gf(p)
    terms = {}
    for i in range(lam + 1):
        if i >= 1:
            terms[(i, i - 1, 2)] = i - lam - 1
        terms[(i, i, 1)] = lam - 2 * i
        if i + 1 <= lam:
            terms[(i, i + 1, 0)] = i + 1
    return HomMatrix.from_terms(fld, lam + 1, lam + 1, 2, terms, 0)


def matrix_m_eps(p: int, lam: int, eps, fld: GF | None = None) -> HomMatrix:
    """Rows and columns indexed a+1..lam."""
    if fld is None:
        fld = gf(p)
    eps = fld(eps) if isinstance(eps, int) else eps
    r, a = split_lambda(p, lam)
    n = lam - a
    pos = lambda i: i - a - 1  # noqa: E731
    terms: dict = {}
    for i in range(a + 1, lam + 1):
        if i - 1 >= a + 1:
            terms[(pos(i), pos(i - 1), 0)] = fld(i)
        terms[(pos(i), pos(i), 1)] = fld(2 * i - a)
        if i + 1 <= lam:
            terms[(pos(i), pos(i + 1), 2)] = fld(i - a)
    for q in range(1, r + 1):
        key = (pos(a + 1), pos(q * p + a), 0)
        corr = fld(-(a + 1) * binom(r, q)) * eps ** (q * p)
        terms[key] = terms.get(key, fld.zero) + corr
    return HomMatrix.from_terms(fld, n, n, 2, terms, 0)


def matrix_b_dagger(p: int, a: int) -> HomMatrix:
    """Transpose of B(a) with s and t exchanged."""
    b = matrix_b(p, a)
    layers = [np.transpose(c, (1, 0, 2)) for c in reversed(b.coeffs)]
    return HomMatrix(b.field, layers, 0, 2)


def matrix_d(p: int, a: int) -> HomMatrix:
    if not 0 <= a < p - 1:
        raise ModuleError(f"D(a) needs 0 <= a < p-1, got {a}")
    fld = gf(p)
    top = matrix_b(p, 2 * p - a - 2)
    bottom = matrix_b_dagger(p, a)
    n1, n2 = top.rows, bottom.rows
    n = n1 + n2
    layers = [np.zeros((n, n, 1), dtype=np.int64) for _ in range(3)]
    for l in range(3):
        layers[l][:n1, :n1] = top.coeffs[l]
        layers[l][n1:, n1:] = bottom.coeffs[l]
    for j in range(n2):
        i = j + p - a - 2
        if 0 <= i < n1:
            layers[0][i, n1 + j, 0] += inv_mod(i + 1, p)
    layers[2][p, n1 + a, 0] += inv_mod(a + 1, p)
    return HomMatrix(fld, layers, 0, 2)


def named_matrix(kind: str, p: int, lam: int, eps=None, fld: GF | None = None) -> HomMatrix:
    """kind in {"M_eps", "B", "B_prime", "C", "D"}; for "D" the parameter is a."""
    if lam < 0:
        raise ModuleError("parameter must be >= 0")
    if kind == "B":
        return matrix_b(p, lam)
    if kind == "B_prime":
        if lam < p or (lam + 1) % p == 0:
            raise ModuleError("B' needs lambda >= p and p not dividing lambda+1")
        return matrix_b_prime(p, lam)
    if kind == "C":
        return matrix_c(p, lam)
    if kind == "D":
        return matrix_d(p, lam)
    if kind == "M_eps":
        if lam < p or (lam + 1) % p == 0:
            raise ModuleError("M_eps needs lambda >= p and p not dividing lambda+1")
        return matrix_m_eps(p, lam, 0 if eps is None else eps, fld)
    raise ValueError(f"unknown matrix kind {kind!r}")
