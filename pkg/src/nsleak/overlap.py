"""Overlap partitions and maximin information."""

from __future__ import annotations

from dataclasses import dataclass

from .leakage import DEFAULT_ORACLE_CAP, AttributePartition, _indexed
from .partitions import partition_masks
from .uv import JointRange, LogBase, Selector, _disjoint, canonical_sorted, log_ratio


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, items=()):
        self.parent = {}
        self.size = {}
        for it in items:
            self.add(it)

    def add(self, e):
        if e not in self.parent:
            self.parent[e] = e
            self.size[e] = 1

    def find(self, e):
        parent = self.parent
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def groups(self) -> list:
        acc: dict = {}
        for e in self.parent:
            acc.setdefault(self.find(e), []).append(e)
        return list(acc.values())


@dataclass(frozen=True)
class OverlapPartition:
    """The ``[[X|Y]]``-overlap partition of ``[[X]]``.

    ``blocks`` are ordered by their smallest element and each block is a
    tuple in canonical order; ``block_of[x]`` is the block index, which also
    serves as the realization of the common variable of ``X`` and ``Y``.
    """

    blocks: tuple
    block_of: dict

    def __len__(self):
        return len(self.blocks)

    def as_attribute(self) -> AttributePartition:
        return AttributePartition(self.blocks)


def overlap_partition(jr: JointRange, x: Selector, y: Selector) -> OverlapPartition:
    """Connected components of ``[[X]]`` under chains of intersecting conditional ranges.

    Two conditional ranges ``[[X|Y=y]]`` and ``[[X|Y=y']]`` intersect exactly
    when some ``x`` is compatible with both ``y`` and ``y'``, so the union-find
    runs over ``[[Y]]`` (joining all ``y`` in each ``[[Y|X=x]]``) and each ``x``
    inherits the component of its observations.
    """
    ix, iy = _disjoint(jr, x, y)
    ds = DisjointSet()
    first_y = {}
    for xv, yv in zip(jr.project(ix), jr.project(iy)):
        ds.add(yv)
        y0 = first_y.setdefault(xv, yv)
        if y0 != yv:
            ds.union(y0, yv)
    groups: dict = {}
    for xv in canonical_sorted(first_y):
        groups.setdefault(ds.find(first_y[xv]), []).append(xv)
    # dict order = order of each block's smallest element
    blocks = tuple(tuple(g) for g in groups.values())
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    return OverlapPartition(blocks, block_of)


def maximin_information(jr: JointRange, x: Selector, y: Selector, base: LogBase = 2) -> float:
    """``I*(X;Y) = log |[[X|Y]]*|``."""
    return log_ratio(len(overlap_partition(jr, x, y)), 1, base)


def one_shot_sup_oracle(jr: JointRange, x: Selector, y: Selector, base: LogBase = 2,
                        cap: int = DEFAULT_ORACLE_CAP) -> float:
    """Largest ``L(U -> Y)`` over attributes that ``Y`` always reveals exactly.

    Searches every partition of ``[[X]]`` in which each conditional range
    ``[[X | Y=y]]`` falls inside a single block, i.e. ``|[[U | Y=y]]| = 1``
    for all ``y``.  The leakage of such an attribute is ``log`` of its block
    count.
    """
    return log_ratio(one_shot_block_count(jr, x, y, cap), 1, base)


def one_shot_block_count(jr: JointRange, x: Selector, y: Selector,
                         cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Largest number of blocks of a partition that ``Y`` always pins to one block."""
    xs, _, conds = _indexed(jr, x, y, cap)
    best = 0
    for blocks in partition_masks(len(xs)):
        if len(blocks) <= best:
            continue
        if all(any(c & b == c for b in blocks) for c in conds):
            best = len(blocks)
    return best
