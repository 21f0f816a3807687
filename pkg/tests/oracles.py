"""Small pure-Python reference implementations used to cross-check the library."""
from __future__ import annotations

import random


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    a = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(rows: list[list[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def matmul(a, b, p):
    return [[sum(x * y for x, y in zip(row, col)) % p for col in zip(*b)] for row in a]


def random_invertible(n: int, p: int, rng: random.Random) -> list[list[int]]:
    while True:
        m = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if rank(m, p) == n:
            return m


def inverse(m, p):
    n = len(m)
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, _ = rref(aug, p)
    return [row[n:] for row in red]


def nilpotent_with_type(parts: list[int], p: int, rng: random.Random) -> list[list[int]]:
    """P J P^{-1} for the nilpotent Jordan matrix J with the given block sizes."""
    n = sum(parts)
    j = [[0] * n for _ in range(n)]
    start = 0
    for b in parts:
        for i in range(start, start + b - 1):
            j[i][i + 1] = 1
        start += b
    if n == 0:
        return []
    q = random_invertible(n, p, rng)
    return matmul(matmul(q, j, p), inverse(q, p), p)


def random_partition(n: int, largest: int, rng: random.Random) -> list[int]:
    parts = []
    while n:
        k = rng.randint(1, min(n, largest))
        parts.append(k)
        n -= k
    return sorted(parts, reverse=True)
