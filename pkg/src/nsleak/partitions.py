"""Exhaustive set-partition enumeration (restricted growth strings).

Partitions are produced in lexicographic order of their restricted growth
string over the input order of the elements: the first partition is the
single block, the last puts every element in its own block.
"""

from __future__ import annotations

from typing import Iterator, Sequence


def bell_number(n: int) -> int:
    """Number of partitions of an ``n``-element set (Bell triangle)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def partition_masks(n: int) -> Iterator[tuple]:
    """Yield every partition of ``range(n)`` as a tuple of block bitmasks.

    Blocks appear in order of their smallest element.  The yielded tuples are
    snapshots, safe to keep.
    """
    if n == 0:
        yield ()
        return
    blocks: list = []

    def rec(i):
        if i == n:
            yield tuple(blocks)
            return
        bit = 1 << i
        for j in range(len(blocks)):
            blocks[j] |= bit
            yield from rec(i + 1)
            blocks[j] ^= bit
        blocks.append(bit)
        yield from rec(i + 1)
        blocks.pop()

    yield from rec(0)


def masks_to_blocks(masks: Sequence[int], elements: Sequence) -> tuple:
    return tuple(
        frozenset(e for i, e in enumerate(elements) if m >> i & 1) for m in masks
    )


def set_partitions(elements: Sequence) -> Iterator[tuple]:
    """Yield every partition of ``elements`` as a tuple of frozensets."""
    elements = list(elements)
    for masks in partition_masks(len(elements)):
        yield masks_to_blocks(masks, elements)
