"""Subsets of a small ground set stored as Python ints (bit i <=> element i)."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

MAX_GROUND = 20


def members(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def from_members(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        if i < 0:
            raise ValueError(f"negative element index {i}")
        mask |= 1 << i
    return mask


def size(mask: int) -> int:
    return mask.bit_count()


def full(n: int) -> int:
    return (1 << n) - 1


def key(mask: int) -> tuple[int, int]:
    """Canonical ordering key: cardinality first, then the bit pattern."""
    return (mask.bit_count(), mask)


def canonical(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=key))


def family_key(family: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Lexicographic key for a family already in canonical order."""
    return tuple(key(m) for m in family)


def compress(mask: int, index_map: Sequence[int]) -> int:
    """Re-index ``mask`` onto positions of ``index_map`` (which must cover it)."""
    out = 0
    for pos, i in enumerate(index_map):
        if mask >> i & 1:
            out |= 1 << pos
    return out


def expand(mask: int, index_map: Sequence[int]) -> int:
    """Inverse of :func:`compress`."""
    out = 0
    for pos in members(mask):
        out |= 1 << index_map[pos]
    return out


def to_list(mask: int) -> list[int]:
    return list(members(mask))


def label(mask: int, one_based: bool = True) -> str:
    off = 1 if one_based else 0
    return "{" + ",".join(str(i + off) for i in members(mask)) + "}"


def family_label(family: Iterable[int], one_based: bool = True) -> str:
    return "{" + ", ".join(label(m, one_based) for m in family) + "}"
