"""Oracle — brute-force enumeration of partitions, independent of any series code.

Every count here is the length of an explicitly generated object list.
"""

from __future__ import annotations

import logging
from typing import Iterator, Sequence

from src.series import UsageError

log = logging.getLogger(__name__)

Vector = tuple[int, ...]

UNRESTRICTED = "unrestricted"
DISTINCT = "distinct"


def _fits(part: Vector, remaining: Vector) -> bool:
    return all(p <= r for p, r in zip(part, remaining))


def _minus(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def _all_parts(target: Vector) -> list[Vector]:
    parts = [()]
    for bound in target:
        parts = [p + (c,) for p in parts for c in range(bound + 1)]
    return [p for p in parts if any(p)]


def vector_partitions(target: Sequence[int], parts: Sequence[Vector] | None = None,
                      distinct: bool = False) -> Iterator[tuple[Vector, ...]]:
    """Multisets (or sets, if distinct) of parts summing to target.

    Parts are emitted in non-increasing lexicographic order, one tuple per multiset.
    The default part set is every nonzero vector below target.
    """
    target = tuple(target)
    if any(c < 0 for c in target):
        raise UsageError(f"Target {list(target)} has a negative component")
    pool = sorted(set(parts if parts is not None else _all_parts(target)), reverse=True)
    for p in pool:
        if len(p) != len(target) or not any(p) or any(c < 0 for c in p):
            raise UsageError(f"Part {list(p)} is not a nonzero vector of length {len(target)}")

    def walk(remaining: Vector, start: int, chosen: tuple[Vector, ...]):
        if not any(remaining):
            yield chosen
            return
        for i in range(start, len(pool)):
            part = pool[i]
            if _fits(part, remaining):
                yield from walk(_minus(remaining, part), i + 1 if distinct else i, chosen + (part,))

    yield from walk(target, 0, ())


def count_vector_partitions(target: Sequence[int], mode: str = UNRESTRICTED) -> int:
    if mode not in (UNRESTRICTED, DISTINCT):
        raise UsageError(f"Unknown partition mode {mode!r}")
    return sum(1 for _ in vector_partitions(target, distinct=mode == DISTINCT))


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples summing to n."""
    if n < 0:
        raise UsageError(f"Cannot partition {n}")
    if n == 0:
        yield ()
        return
    top = n if largest is None else min(largest, n)
    for first in range(top, 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def count_integer_partitions(n: int) -> int:
    return sum(1 for _ in integer_partitions(n))


def _rows_under(bound: tuple[int, ...], most: int) -> Iterator[tuple[int, ...]]:
    """Non-empty non-increasing rows r with r[i] <= bound[i] and sum(r) <= most."""

    def walk(i: int, left: int, ceiling: int, row: tuple[int, ...]):
        if row:
            yield row
        if i == len(bound):
            return
        for value in range(min(ceiling, bound[i], left), 0, -1):
            yield from walk(i + 1, left - value, value, row + (value,))

    yield from walk(0, most, most, ())


def plane_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Arrays of positive integers, non-increasing along rows and columns, summing to n."""
    if n < 0:
        raise UsageError(f"Cannot partition {n}")

    def walk(remaining: int, above: tuple[int, ...]):
        if remaining == 0:
            yield ()
            return
        for row in _rows_under(above, remaining):
            for rest in walk(remaining - sum(row), row):
                yield (row,) + rest

    yield from walk(n, (n,) * n)


def trace(pp: tuple[tuple[int, ...], ...]) -> int:
    return sum(row[i] for i, row in enumerate(pp) if i < len(row))


def count_plane_partitions(n: int, rows: int | None = None, trace_value: int | None = None) -> int:
    """Plane partitions of n, optionally with at most `rows` rows and a fixed trace."""
    if rows is not None and rows < 0:
        raise UsageError(f"Row bound must be non-negative, got {rows}")
    count = 0
    for pp in plane_partitions(n):
        if rows is not None and len(pp) > rows:
            continue
        if trace_value is not None and trace(pp) != trace_value:
            continue
        count += 1
    log.debug(f"plane partitions of {n} (rows={rows}, trace={trace_value}): {count}")
    return count
