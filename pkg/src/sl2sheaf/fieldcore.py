"""Exact arithmetic over F_p and F_{p^e}.

Scalars and univariate polynomials are python-flint objects; matrices are
numpy coefficient arrays.  Linear algebra over F_{p^e} is done by
restriction of scalars: an ``r x c`` matrix over F_{p^e} is realified to an
``re x ce`` matrix over F_p on which plain mod-p elimination runs.
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np
from flint import fmpz, fmpz_mod_poly_ctx, fq_default_ctx, fq_default_poly_ctx


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and bool(fmpz(n).is_prime())


def _poly_is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Rabin test: f of degree e is irreducible iff it divides x^{p^e} - x and
    gcd(f, x^{p^{e/l}} - x) = 1 for every prime l dividing e."""
    ring = fmpz_mod_poly_ctx(p)
    f = ring(list(coeffs))
    e = f.degree()
    if e <= 0:
        return False
    if e == 1:
        return True
    x = ring([0, 1])

    def frob_power(k: int):
        y = x
        for _ in range(k):
            y = y.pow_mod(p, f)
        return y

    if (frob_power(e) - x) % f != 0:
        return False
    for l in {q for q in range(2, e + 1) if e % q == 0 and is_prime(q)}:
        g = (frob_power(e // l) - x).gcd(f)
        if g.degree() > 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree e over F_p.

    Candidates are enumerated with the non-leading coefficients
    (c_{e-1}, ..., c_0) in lexicographic order.  Returned low-to-high.
    """
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        coeffs = tuple(reversed(tail)) + (1,)
        if coeffs[0] == 0:
            continue
        if _poly_is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


class GF:
    """The finite field F_p[x]/(modulus) of order p^e.

    Elements are ``flint.fq_default`` values.  Use :func:`gf` to get the
    canonical (cached) instance for a given (p, e).
    """

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if e < 1:
            raise FieldError("extension degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree e")
        if not _poly_is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.e = e
        self.modulus = modulus
        self.order = p**e
        if e == 1:
            self.ctx = fq_default_ctx(p)
        else:
            self.ctx = fq_default_ctx(modulus=fmpz_mod_poly_ctx(p)(list(modulus)))
        self.poly_ctx = fq_default_poly_ctx(self.ctx)
        self._mul_tensor = self._structure_tensor()

    def _structure_tensor(self) -> np.ndarray:
        # tensor[k, l, m] = coefficient of x^m in x^(k+l) mod modulus
        e, p = self.e, self.p
        powers = []
        cur = [1] + [0] * (e - 1)
        for _ in range(2 * e - 1):
            powers.append(cur)
            top = cur[-1]
            shifted = [0] + cur[:-1]
            cur = [(shifted[i] - top * self.modulus[i]) % p for i in range(e)]
        t = np.zeros((e, e, e), dtype=np.int64)
        for k in range(e):
            for l in range(e):
                t[k, l, :] = powers[k + l]
        return t

    # identity / hashing
    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.p, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"

    def describe(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    # elements
    def __call__(self, value) -> object:
        if isinstance(value, (list, tuple)):
            return self.ctx([int(c) % self.p for c in value])
        if isinstance(value, (int, np.integer)):
            return self.ctx(int(value) % self.p)
        return self.ctx(value)

    @property
    def zero(self):
        return self.ctx.zero()

    @property
    def one(self):
        return self.ctx.one()

    @property
    def gen(self):
        """Class of x (for e = 1 this is just the root of x, i.e. 0)."""
        return self.ctx.gen() if self.e > 1 else self.ctx(0)

    def coeffs(self, a) -> list[int]:
        c = [int(v) for v in a.to_list()]
        return c + [0] * (self.e - len(c))

    def to_json(self, a):
        c = self.coeffs(a)
        return c[0] if self.e == 1 else c

    def from_json(self, value):
        return self(value)

    def elements(self) -> Iterable:
        for c in itertools.product(range(self.p), repeat=self.e):
            yield self(list(reversed(c)))

    def random_element(self, rng: random.Random, nonzero: bool = False):
        while True:
            a = self([rng.randrange(self.p) for _ in range(self.e)])
            if not (nonzero and a.is_zero()):
                return a

    def frobenius(self, a):
        return a**self.p

    def mult_matrix(self, a) -> np.ndarray:
        """Matrix over F_p of multiplication by a on coefficient vectors."""
        c = np.array(self.coeffs(a), dtype=np.int64)
        return np.einsum("k,klm->ml", c, self._mul_tensor) % self.p

    def contains(self, other: "GF") -> bool:
        return other.p == self.p and self.e % other.e == 0


@functools.lru_cache(maxsize=None)
def gf(p: int, e: int = 1) -> GF:
    """Canonical field of order p^e (deterministic modulus)."""
    return GF(p, e)


def common_field(a: GF, b: GF) -> GF:
    if a.p != b.p:
        raise FieldError("fields of different characteristic")
    if a.contains(b):
        return a
    if b.contains(a):
        return b
    return gf(a.p, a.e * b.e // math.gcd(a.e, b.e))


@functools.lru_cache(maxsize=None)
def _embedding_root(src: GF, dst: GF):
    if src == dst:
        return dst.gen
    if src.e == 1:
        return None
    if not dst.contains(src):
        raise FieldError(f"{src} does not embed in {dst}")
    poly = dst.poly_ctx([dst(c) for c in src.modulus])
    roots = sorted((r for r, _ in poly.roots()), key=lambda r: dst.coeffs(r))
    return roots[0]


def embed(a, src: GF, dst: GF):
    """Image of a under the chosen embedding src -> dst (identity if equal)."""
    if src == dst:
        return a
    root = _embedding_root(src, dst)
    if root is None:
        return dst(src.coeffs(a)[0])
    acc = dst.zero
    for c in reversed(src.coeffs(a)):
        acc = acc * root + dst(c)
    return acc


# ---------------------------------------------------------------------------
# mod-p dense linear algebra


@numba.njit(cache=True)
def _rref_kernel(a, p):
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = tmp
        # inverse by Fermat
        base = a[r, c]
        inv = 1
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def _rref(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    work = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)
    rank, pivots = _rref_kernel(work, p)
    return work[:rank], pivots


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (nonzero rows, pivot columns)."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64), []
    red, pivots = _rref(a, p)
    return red, pivots.tolist()


def rank_mod(a: np.ndarray, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return int(_rref(a, p)[1].size)


def nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of {v : a v = 0} over F_p."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    red, pivots = _rref(a, p)
    mask = np.ones(cols, dtype=bool)
    mask[pivots] = False
    free = np.flatnonzero(mask)
    basis = np.zeros((free.size, cols), dtype=np.int64)
    basis[np.arange(free.size), free] = 1
    if pivots.size:
        basis[:, pivots] = (-red[:, free].T) % p
    return basis


def rowspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    if a.shape[0] == 0:
        return a.astype(np.int64)
    return rref_mod(a, p)[0]


def intersect_rowspaces(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """RREF basis of rowspace(a) ∩ rowspace(b)."""
    cols = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.int64)
    stacked = np.vstack([a, b]).T
    null = nullspace_mod(stacked, p)
    if null.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.int64)
    return rowspace_mod(null[:, : a.shape[0]] @ a % p, p)


# ---------------------------------------------------------------------------
# matrices over F_q


class FqMatrix:
    """Dense matrix over a finite field, stored as coefficient array (r, c, e)."""

    __slots__ = ("field", "coeffs", "_real")

    def __init__(self, field: GF, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.ndim == 2:
            coeffs = coeffs[:, :, None]
        if coeffs.ndim != 3 or coeffs.shape[2] != field.e:
            raise ValueError("coefficient array must have shape (rows, cols, e)")
        self.field = field
        self.coeffs = coeffs % field.p
        self._real = None

    # construction
    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int) -> "FqMatrix":
        return cls(field, np.zeros((rows, cols, field.e), dtype=np.int64))

    @classmethod
    def identity(cls, field: GF, n: int) -> "FqMatrix":
        c = np.zeros((n, n, field.e), dtype=np.int64)
        c[np.arange(n), np.arange(n), 0] = 1
        return cls(field, c)

    @classmethod
    def from_entries(cls, field: GF, rows: Sequence[Sequence]) -> "FqMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        c = np.zeros((nrows, ncols, field.e), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if isinstance(v, (int, np.integer)):
                    c[i, j, 0] = int(v) % field.p
                else:
                    c[i, j, :] = field.coeffs(v)
        return cls(field, c)

    @classmethod
    def from_sparse(cls, field: GF, rows: int, cols: int, entries: dict) -> "FqMatrix":
        """Build from {(i, j): value}; value is an int or a field element."""
        c = np.zeros((rows, cols, field.e), dtype=np.int64)
        for (i, j), v in entries.items():
            if isinstance(v, (int, np.integer)):
                c[i, j, 0] += int(v)
            else:
                c[i, j, :] += field.coeffs(v)
        return cls(field, c)

    # shape and entries
    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[0], self.coeffs.shape[1]

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[1]

    def __getitem__(self, ij):
        i, j = ij
        return self.field(list(self.coeffs[i, j]))

    def to_json(self) -> list:
        if self.field.e == 1:
            return self.coeffs[:, :, 0].tolist()
        return self.coeffs.tolist()

    def int_array(self) -> np.ndarray:
        if self.field.e != 1:
            raise FieldError("int_array only for prime fields")
        return self.coeffs[:, :, 0]

    def __repr__(self) -> str:
        return f"FqMatrix({self.field!r}, {self.to_json()})"

    # realification
    def realified(self) -> np.ndarray:
        if self._real is None:
            f = self.field
            if f.e == 1:
                self._real = self.coeffs[:, :, 0]
            else:
                r, c = self.shape
                blocks = np.einsum("ijk,klm->imjl", self.coeffs, f._mul_tensor) % f.p
                self._real = blocks.reshape(r * f.e, c * f.e)
        return self._real

    @classmethod
    def from_realified(cls, field: GF, real: np.ndarray) -> "FqMatrix":
        e = field.e
        r, c = real.shape[0] // e, real.shape[1] // e
        blocks = real.reshape(r, e, c, e)
        return cls(field, np.transpose(blocks[:, :, :, 0], (0, 2, 1)))

    # algebra
    def _check(self, other: "FqMatrix") -> None:
        if other.field != self.field:
            raise FieldError("matrices over different fields")

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        return FqMatrix(self.field, self.coeffs + other.coeffs)

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        return FqMatrix(self.field, self.coeffs - other.coeffs)

    def __neg__(self) -> "FqMatrix":
        return FqMatrix(self.field, -self.coeffs)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        self._check(other)
        f = self.field
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        if f.e == 1:
            return FqMatrix(f, (self.coeffs[:, :, 0] @ other.coeffs[:, :, 0]) % f.p)
        return FqMatrix.from_realified(f, (self.realified() @ other.realified()) % f.p)

    def scale(self, a) -> "FqMatrix":
        f = self.field
        if isinstance(a, (int, np.integer)):
            return FqMatrix(f, self.coeffs * (int(a) % f.p))
        if f.e == 1:
            return FqMatrix(f, self.coeffs * f.coeffs(a)[0])
        m = f.mult_matrix(a)
        return FqMatrix(f, np.einsum("ml,ijl->ijm", m, self.coeffs))

    def __pow__(self, k: int) -> "FqMatrix":
        result = FqMatrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix(self.field, np.transpose(self.coeffs, (1, 0, 2)))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FqMatrix)
            and other.field == self.field
            and other.coeffs.shape == self.coeffs.shape
            and bool(np.array_equal(other.coeffs, self.coeffs))
        )

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def rank(self) -> int:
        return rank_mod(self.realified(), self.field.p) // self.field.e

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FqMatrix":
        return FqMatrix(self.field, self.coeffs[np.ix_(list(rows), list(cols))])

    def extend(self, dst: GF) -> "FqMatrix":
        """Entrywise image under the embedding of self.field into dst."""
        src = self.field
        if src == dst:
            return self
        if src.e == 1:
            c = np.zeros(self.shape + (dst.e,), dtype=np.int64)
            c[:, :, 0] = self.coeffs[:, :, 0]
            return FqMatrix(dst, c)
        root = _embedding_root(src, dst)
        images = np.array(
            [dst.coeffs(root**k) for k in range(src.e)], dtype=np.int64
        )  # (src.e, dst.e)
        return FqMatrix(dst, np.einsum("ijk,kl->ijl", self.coeffs, images))

    @staticmethod
    def block_diag(field: GF, blocks: Sequence["FqMatrix"]) -> "FqMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        c = np.zeros((n, m, field.e), dtype=np.int64)
        i = j = 0
        for b in blocks:
            c[i : i + b.rows, j : j + b.cols] = b.coeffs
            i += b.rows
            j += b.cols
        return FqMatrix(field, c)


def realify_vectors(field: GF, vecs: np.ndarray) -> np.ndarray:
    """(k, n, e) coefficient vectors -> (k, n*e) F_p rows."""
    return vecs.reshape(vecs.shape[0], -1)


def scalar_orbit(field: GF, vec: np.ndarray) -> np.ndarray:
    """Realified vectors alpha^k * vec for k < e, where alpha is the generator."""
    e = field.e
    out = [vec]
    if e == 1:
        return np.array(out)
    m = field.mult_matrix(field.gen)
    cur = vec.reshape(-1, e)
    for _ in range(e - 1):
        cur = (cur @ m.T) % field.p
        out.append(cur.reshape(-1))
    return np.array(out)


def fq_span_basis(field: GF, fp_rows: np.ndarray, existing: np.ndarray | None = None) -> list[np.ndarray]:
    """Greedily choose F_q-independent vectors among realified F_p rows.

    ``existing`` (realified rows, assumed F_q-stable) is treated as already spanned.
    """
    p = field.p
    width = fp_rows.shape[1]
    span = np.zeros((0, width), dtype=np.int64) if existing is None else rowspace_mod(existing, p)
    chosen = []
    for v in fp_rows:
        trial = np.vstack([span, v[None, :]])
        if rank_mod(trial, p) > span.shape[0]:
            chosen.append(v.copy())
            span = rowspace_mod(np.vstack([span, scalar_orbit(field, v)]), p)
    return chosen


def rank_nullspace(m: FqMatrix) -> tuple[int, list[np.ndarray]]:
    """Rank of m and a basis of its right nullspace over m.field.

    Basis vectors are returned as (cols, e) coefficient arrays.
    """
    f = m.field
    real = m.realified()
    null = nullspace_mod(real, f.p)
    if f.e == 1:
        vecs = [v.reshape(-1, 1) for v in null]
    else:
        vecs = [v.reshape(-1, f.e) for v in fq_span_basis(f, null)]
    return m.cols - len(vecs), vecs


def vectors_to_matrix(field: GF, vecs: Sequence[np.ndarray], length: int) -> FqMatrix:
    """Columns given as (n, e) coefficient arrays -> n x k matrix."""
    if not vecs:
        return FqMatrix.zeros(field, length, 0)
    return FqMatrix(field, np.stack(vecs, axis=1))


# ---------------------------------------------------------------------------
# univariate polynomials and fraction-free elimination


def poly(field: GF, coeffs: Sequence) -> object:
    """Univariate polynomial in u over field, coefficients low-to-high."""
    return field.poly_ctx([field(c) if isinstance(c, (int, np.integer, list, tuple)) else c for c in coeffs])


@dataclass(frozen=True)
class GenericRank:
    rank: int
    pivot_product: object
    minor: object  # determinant of the selected rank x rank submatrix


def generic_rank(field: GF, entries: Sequence[Sequence], seed: int | None = None) -> GenericRank:
    """Rank over F_q(u) of a matrix of polynomials, by Bareiss elimination.

    Every step divides exactly by the previous pivot, so all intermediate
    entries stay in F_q[u].  Pivots are searched in a (seeded) random row and
    column order; the last pivot is a maximal nonvanishing minor.
    """
    pc = field.poly_ctx
    a = [[pc(x) if not hasattr(x, "degree") else x for x in row] for row in entries]
    n = len(a)
    m = len(a[0]) if n else 0
    rows = list(range(n))
    cols = list(range(m))
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(rows)
        rng.shuffle(cols)
    a = [[a[i][j] for j in cols] for i in rows]
    prev = pc.one()
    product = pc.one()
    k = 0
    while k < min(n, m):
        piv = None
        for j in range(k, m):
            for i in range(k, n):
                if not a[i][j].is_zero():
                    piv = (i, j)
                    break
            if piv is not None:
                break
        if piv is None:
            break
        i, j = piv
        if i != k:
            a[i], a[k] = a[k], a[i]
        if j != k:
            for row in a:
                row[j], row[k] = row[k], row[j]
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, m):
                num = akk * row_i[j] - aik * row_k[j]
                row_i[j] = num if prev.is_one() else num.exact_division(prev)
            row_i[k] = pc.zero()
        prev = akk
        product = product * akk
        k += 1
    return GenericRank(k, product, prev)


def irreducible_factors(f) -> list[tuple[object, int]]:
    """Monic irreducible factors with multiplicity of a nonzero polynomial."""
    if f.is_zero():
        raise FieldError("the zero polynomial has no factorization")
    _, factors = f.factor()
    return sorted(((g, int(k)) for g, k in factors), key=lambda gk: (gk[0].degree(), str(gk[0])))


def norm_to_prime_field(f, field: GF):
    """Product of the Frobenius conjugates of f, as a polynomial over F_p."""
    base = gf(field.p)
    if field.e == 1:
        return base.poly_ctx([base(field.coeffs(c)[0]) for c in f.coeffs()])
    acc = f
    conj = f
    for _ in range(field.e - 1):
        conj = field.poly_ctx([c.frobenius() for c in conj.coeffs()])
        acc = acc * conj
    out = []
    for c in acc.coeffs():
        cc = field.coeffs(c)
        if any(cc[1:]):
            raise FieldError("norm has coefficients outside F_p")
        out.append(base(cc[0]))
    return base.poly_ctx(out)


def roots_in(f_prime, dst: GF) -> list:
    """Roots in dst of a polynomial over F_p, sorted canonically."""
    lifted = dst.poly_ctx([dst(int(c.to_list()[0]) if c.to_list() else 0) for c in f_prime.coeffs()])
    return sorted((r for r, _ in lifted.roots()), key=lambda r: dst.coeffs(r))
