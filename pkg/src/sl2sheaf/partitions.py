"""Partitions, conjugation, j-ranks and Jordan types from rank sequences."""
from __future__ import annotations

import re
from typing import Iterable, Sequence


class PartitionError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x < 1 for x in parts):
            raise PartitionError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def sorted(cls, parts: Iterable[int]) -> "Partition":
        return cls(sorted((x for x in parts if x > 0), reverse=True))

    @property
    def size(self) -> int:
        return sum(self)

    def is_restricted(self, p: int) -> bool:
        return all(x <= p for x in self)

    def __str__(self) -> str:
        return jordan_type_string(self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


def conjugate(lam: Sequence[int]) -> Partition:
    lam = Partition(lam)
    if not lam:
        return Partition()
    return Partition(sum(1 for x in lam if x > j) for j in range(lam[0]))


def j_rank(lam: Sequence[int], j: int) -> int:
    if j < 0:
        raise PartitionError("j must be non-negative")
    return sum(max(0, x - j) for x in lam)


def jordan_type_from_ranks(n: int, ranks: Sequence[int], p: int | None = None) -> Partition:
    """Jordan type of a nilpotent operator on an n-dimensional space.

    ``ranks[k]`` is the rank of A^(k+1).  The column lengths of the Young
    diagram are the successive rank drops, so the type is the conjugate of
    that sequence.  With ``p`` given, A^p = 0 is enforced and the list is
    padded with zeros up to length p - 1 if shorter.
    """
    ranks = [int(r) for r in ranks]
    if p is not None:
        if len(ranks) > p - 1 and any(ranks[p - 1 :]):
            raise PartitionError("rank of A^p must vanish")
        ranks = ranks[: p - 1] + [0] * max(0, p - 1 - len(ranks))
    seq = [n] + ranks + [0]
    if any(r < 0 for r in seq):
        raise PartitionError("negative rank")
    drops = [seq[k] - seq[k + 1] for k in range(len(seq) - 1)]
    if any(d < 0 for d in drops) or any(drops[k] < drops[k + 1] for k in range(len(drops) - 1)):
        raise PartitionError(f"rank sequence {ranks} is not realized by a nilpotent operator on dim {n}")
    if p is None and ranks and ranks[-1] != 0:
        raise PartitionError("rank sequence does not reach zero")
    return conjugate(Partition(d for d in drops if d > 0))


def jordan_type_string(lam: Sequence[int]) -> str:
    lam = Partition(lam)
    if not lam:
        return "[]"
    out = []
    i = 0
    while i < len(lam):
        k = i
        while k < len(lam) and lam[k] == lam[i]:
            k += 1
        mult = k - i
        out.append(f"[{lam[i]}]" + (f"^{mult}" if mult > 1 else ""))
        i = k
    return "".join(out)


_TOKEN = re.compile(r"\[(\d+)\](?:\^(\d+))?")


def parse_jordan_type(text: str) -> Partition:
    text = text.strip()
    if text == "[]":
        return Partition()
    parts: list[int] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PartitionError(f"malformed partition text: {text!r}")
        size = int(m.group(1))
        mult = int(m.group(2)) if m.group(2) else 1
        if size < 1 or mult < 1:
            raise PartitionError(f"malformed partition text: {text!r}")
        parts.extend([size] * mult)
        pos = m.end()
    try:
        return Partition(parts)
    except PartitionError as exc:
        raise PartitionError(f"malformed partition text: {text!r}") from exc


def power_type(p: int, count: int, rest: Sequence[int] = ()) -> Partition:
    """[p]^count followed by the extra parts (zeros dropped)."""
    return Partition.sorted([p] * count + list(rest))
