"""Brute-force guessing leakage, maximal leakage and identifiability.

An attribute ``U = g(X)`` only matters through the preimage blocks of ``g``,
so attributes are :class:`AttributePartition` objects over ``[[X]]``.  With
``k`` blocks, ``|[[U]]| = k`` and ``|[[U | Y=y]]|`` is the number of blocks
meeting ``[[X | Y=y]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional

from .errors import DomainError, OracleScaleError, PartitionError
from .partitions import masks_to_blocks, partition_masks
from .uv import (
    JointRange,
    LogBase,
    Selector,
    _disjoint,
    base_value,
    log_base,
    log_ratio,
    marginal_range,
    canonical_sorted,
    symbol_key,
)

DEFAULT_ORACLE_CAP = 8

TO_MAXIMAL = "L->L*"
TO_GUESSING = "L*->L"
_DIRECTIONS = {
    "L->L*": TO_MAXIMAL, "L->L★": TO_MAXIMAL, "to_maximal": TO_MAXIMAL,
    "L*->L": TO_GUESSING, "L★->L": TO_GUESSING, "to_guessing": TO_GUESSING,
}


def canonical_blocks(blocks) -> tuple:
    """Blocks ordered by their smallest element in canonical order."""
    elems = [x for b in blocks for x in b]
    if all(isinstance(x, tuple) for x in elems):
        order = canonical_sorted(elems)
    else:
        order = sorted(elems, key=symbol_key)
    label = {x: i for i, b in enumerate(blocks) for x in b}
    seen: set = set()
    out = []
    for x in order:
        i = label[x]
        if i not in seen:
            seen.add(i)
            out.append(blocks[i])
    return tuple(out)


@dataclass(frozen=True)
class AttributePartition:
    """Preimage partition of an attribute map ``g: [[X]] -> [[U]]``.

    Blocks are stored in canonical order (by smallest element), so two
    partitions with the same blocks compare equal regardless of input order.
    """

    blocks: tuple
    _labels: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        if any(not b for b in blocks):
            raise PartitionError("attribute partition has an empty block")
        blocks = canonical_blocks(blocks)
        labels = {x: i for i, b in enumerate(blocks) for x in b}
        if sum(len(b) for b in blocks) != len(labels):
            raise PartitionError("attribute partition blocks overlap")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_labels", labels)

    def __len__(self):
        return len(self.blocks)

    @property
    def elements(self):
        return self._labels.keys()

    def labels(self) -> dict:
        """``{x: block index}``."""
        return dict(self._labels)

    @classmethod
    def from_labels(cls, labels: Mapping) -> "AttributePartition":
        acc: dict = {}
        for x, u in labels.items():
            acc.setdefault(u, set()).add(x)
        return cls(tuple(acc.values()))

    @classmethod
    def from_function(cls, elements: Iterable, g: Callable) -> "AttributePartition":
        """Group ``elements`` by the value of ``g``."""
        return cls.from_labels({x: g(x) for x in elements})

    @classmethod
    def identity(cls, elements: Iterable) -> "AttributePartition":
        return cls(tuple({x} for x in elements))

    @classmethod
    def trivial(cls, elements: Iterable) -> "AttributePartition":
        return cls((frozenset(elements),))


@dataclass(frozen=True)
class LeakageReport:
    """Outcome of a leakage computation.

    ``leakage == log(prior_cost / min_posterior_cost)``.  ``argmin_y`` lists,
    in canonical order, the observations attaining the smallest posterior
    range.  ``partition`` is the attribute the report refers to, when one was
    constructed or searched for.
    """

    leakage: float
    argmin_y: tuple
    prior_cost: int
    min_posterior_cost: int
    partition: Optional[AttributePartition] = None

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.prior_cost, self.min_posterior_cost)


def _sorted_y(ys):
    return canonical_sorted(ys)


def posterior_costs(jr: JointRange, u_attr: AttributePartition, x: Selector,
                    y: Selector) -> dict:
    """``{y: |[[U | Y=y]]|}`` for every realizable ``y``."""
    ix, iy = _disjoint(jr, x, y)
    xs = marginal_range(jr, ix)
    label = u_attr._labels
    if label.keys() != xs:
        missing = len(xs - label.keys())
        extra = len(label.keys() - xs)
        raise PartitionError(
            f"attribute does not partition [[X]] ({missing} missing, {extra} foreign elements)")
    return {
        yv: len({label[xv] for xv in rng})
        for yv, rng in jr.grouped(ix, iy).items()
    }


def guessing_leakage(jr: JointRange, u_attr: AttributePartition, x: Selector,
                     y: Selector, base: LogBase = 2) -> LeakageReport:
    """Brute-force guessing leakage ``L(U -> Y) = log(|[[U]]| / min_y |[[U|Y=y]]|)``."""
    costs = posterior_costs(jr, u_attr, x, y)
    m = min(costs.values())
    k = len(u_attr)
    argmin = tuple(_sorted_y(yv for yv, c in costs.items() if c == m))
    return LeakageReport(log_ratio(k, m, base), argmin, k, m, u_attr)


def _min_conditional(jr: JointRange, x: Selector, y: Selector):
    ix, iy = _disjoint(jr, x, y)
    sizes = {yv: len(rng) for yv, rng in jr.grouped(ix, iy).items()}
    m = min(sizes.values())
    argmin = tuple(_sorted_y(yv for yv, s in sizes.items() if s == m))
    return len(marginal_range(jr, ix)), m, argmin


def identity_leakage(jr: JointRange, x: Selector, y: Selector,
                     base: LogBase = 2) -> LeakageReport:
    """``L(X -> Y)``: guessing leakage of the identity attribute ``U = X``."""
    n, m, argmin = _min_conditional(jr, x, y)
    return LeakageReport(log_ratio(n, m, base), argmin, n, m)


def worst_case_attribute(jr: JointRange, x: Selector, y: Selector) -> AttributePartition:
    """The attribute attaining the maximal leakage.

    Collapses the smallest conditional range ``[[X | Y=y*]]`` into one block
    and keeps every other element of ``[[X]]`` as a singleton.  Ties on
    ``y*`` go to the smallest ``y`` in canonical order.
    """
    _, _, argmin = _min_conditional(jr, x, y)
    ix, iy = _disjoint(jr, x, y)
    core = jr.grouped(ix, iy)[argmin[0]]
    rest = marginal_range(jr, ix) - core
    return AttributePartition((core,) + tuple(frozenset({v}) for v in rest))


def maximal_leakage(jr: JointRange, x: Selector, y: Selector,
                    base: LogBase = 2) -> LeakageReport:
    """Maximal leakage ``L*(X -> Y) = log(|[[X]]| - min_y |[[X|Y=y]]| + 1)``.

    The report describes the worst-case attribute (see
    :func:`worst_case_attribute`): ``prior_cost`` is its number of blocks and
    ``min_posterior_cost`` is 1.  ``argmin_y`` holds the observations with
    the smallest conditional range of ``X``.
    """
    n, m, argmin = _min_conditional(jr, x, y)
    k = n - m + 1
    return LeakageReport(log_ratio(k, 1, base), argmin, k, 1)


def _indexed(jr: JointRange, x: Selector, y: Selector, cap: int):
    ix, iy = _disjoint(jr, x, y)
    xs = canonical_sorted(marginal_range(jr, ix))
    if len(xs) > cap:
        raise OracleScaleError(f"|[[X]]| = {len(xs)} exceeds the oracle cap {cap}")
    pos = {v: i for i, v in enumerate(xs)}
    ranges = jr.grouped(ix, iy)
    ys = _sorted_y(ranges)
    conds = [sum(1 << pos[v] for v in ranges[yv]) for yv in ys]
    return xs, ys, conds


def maximal_leakage_oracle(jr: JointRange, x: Selector, y: Selector,
                           base: LogBase = 2, cap: int = DEFAULT_ORACLE_CAP) -> LeakageReport:
    """Maximal leakage by exhaustive search over every attribute partition.

    Enumerates all Bell(|[[X]]|) partitions and keeps the first (in
    restricted-growth order) with the largest ``|[[U]]| / min_y |[[U|Y=y]]|``.
    """
    xs, ys, conds = _indexed(jr, x, y, cap)
    best_k, best_m, best = 0, 1, None
    for blocks in partition_masks(len(xs)):
        k = len(blocks)
        m = min(sum(1 for b in blocks if b & c) for c in conds)
        if k * best_m > best_k * m:
            best_k, best_m, best = k, m, blocks
    partition = AttributePartition(masks_to_blocks(best, xs))
    return guessing_leakage(jr, partition, x, y, base)


def is_epsilon_identifiable(jr: JointRange, u_attr: AttributePartition, x: Selector,
                            y: Selector, epsilon: float, base: LogBase = 2) -> bool:
    """True iff ``L(U -> Y) <= epsilon``."""
    if epsilon < 0 or math.isnan(epsilon):
        raise DomainError(f"epsilon must be non-negative, got {epsilon}")
    rep = guessing_leakage(jr, u_attr, x, y, base)
    if rep.prior_cost == rep.min_posterior_cost:
        return True
    # slack for rounding when epsilon is itself a computed log
    return rep.leakage <= epsilon + 1e-12 * max(1.0, epsilon)


def _max_log(n_x: int, base: LogBase) -> float:
    return log_base(base)(n_x)


def convert_leakage_maximal(n_x: int, value: float, direction: str = TO_GUESSING,
                            base: LogBase = 2) -> float:
    """Convert between ``L(X -> Y)`` and ``L*(X -> Y)`` for fixed ``|[[X]]|``.

    Both are functions of ``min_y |[[X|Y=y]]|`` and satisfy
    ``b**L* + n_x * b**(-L) = n_x + 1``; this solves for the other one.

    Parameters
    ----------
    n_x : int
        ``|[[X]]|``.
    value : float
        The known quantity, in ``[0, log n_x]``.
    direction : str
        ``"L*->L"`` (default) or ``"L->L*"``.
    """
    if n_x < 1:
        raise DomainError("n_x must be a positive integer")
    try:
        direction = _DIRECTIONS[direction]
    except KeyError:
        raise DomainError(f"unknown direction {direction!r}") from None
    top = _max_log(n_x, base)
    tol = 1e-12 * max(1.0, top)
    if not (-tol <= value <= top + tol):
        raise DomainError(f"value {value} outside feasible interval [0, {top}] for n_x={n_x}")
    b = base_value(base)
    log = log_base(base)
    if direction == TO_GUESSING:
        denom = n_x + 1 - b ** value
        return max(0.0, log(n_x / max(denom, 1.0)))
    return max(0.0, log(n_x + 1 - n_x * b ** (-value)))


def identifiability_bound(n_x: int, epsilon: float, base: LogBase = 2) -> float:
    """Upper bound ``log(n_x (1 - b**-epsilon) + 1)`` on ``L*`` for epsilon-identifiable maps."""
    if epsilon < 0 or math.isnan(epsilon):
        raise DomainError(f"epsilon must be non-negative, got {epsilon}")
    if n_x < 1:
        raise DomainError("n_x must be a positive integer")
    b = base_value(base)
    return log_base(base)(n_x * (1 - b ** (-epsilon)) + 1)
