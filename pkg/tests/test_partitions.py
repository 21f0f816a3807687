from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from sl2sheaf.partitions import (
    Partition,
    PartitionError,
    conjugate,
    j_rank,
    jordan_type_from_ranks,
    jordan_type_string,
    parse_jordan_type,
    power_type,
)

partitions = st.lists(st.integers(1, 9), max_size=12).map(Partition.sorted)


def test_example_partition():
    lam = Partition([4, 4, 2, 1])
    assert jordan_type_string(lam) == "[4]^2[2][1]"
    assert conjugate(lam) == Partition([4, 3, 2, 2])
    assert j_rank(lam, 2) == 4
    assert lam.size == 11


def test_empty_and_parse():
    assert jordan_type_string(Partition()) == "[]"
    assert parse_jordan_type("[5]^3[2]") == Partition([5, 5, 5, 2])
    assert power_type(5, 2, [3]) == Partition([5, 5, 3])


def test_invalid_partition():
    with pytest.raises(PartitionError):
        Partition([1, 3])
    with pytest.raises(PartitionError):
        Partition([0])


def test_from_ranks_of_known_operator():
    # a 3x3 regular nilpotent block has ranks 2, 1, 0
    assert jordan_type_from_ranks(3, [2, 1, 0]) == Partition([3])
    assert jordan_type_from_ranks(3, [2, 1], p=3) == Partition([3])
    assert jordan_type_from_ranks(5, [2, 0], p=3) == Partition([2, 2, 1])
    with pytest.raises(PartitionError):
        jordan_type_from_ranks(3, [1, 2, 0])


@given(partitions)
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).size == lam.size


@given(partitions)
def test_round_trip_through_ranks(lam):
    n = lam.size
    top = max(lam, default=1)
    ranks = [j_rank(lam, j) for j in range(1, top + 1)]
    assert jordan_type_from_ranks(n, ranks) == lam
    assert parse_jordan_type(jordan_type_string(lam)) == lam
