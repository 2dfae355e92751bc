"""Finite uncertain variables: joint ranges, conditional ranges and order-0 entropies.

A :class:`JointRange` is the set of realization tuples ``(X1(w), ..., Xk(w))``
over all uncertainties ``w``.  Everything else in the package is computed from
it by projection and grouping, so realizations are treated as opaque tokens
that only need equality and a stable order.
"""

from __future__ import annotations

import math
import numbers
from operator import itemgetter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError, EmptyConditionError, SelectorError

Selector = Union[str, Sequence[str]]
LogBase = Union[int, float, str]

__all__ = [
    "JointRange",
    "symbol_key",
    "log_base",
    "log_ratio",
    "marginal_range",
    "conditional_range",
    "conditional_ranges",
    "is_unrelated",
    "is_markov_chain",
    "hartley_entropy",
    "conditional_hartley_entropy",
    "zero_mutual_information",
]


def symbol_key(s):
    """Sort key giving a total order over mixed numeric/text symbols."""
    if isinstance(s, tuple):
        return (2, tuple(symbol_key(t) for t in s))
    if isinstance(s, numbers.Real) and not isinstance(s, bool):
        return (0, s)
    return (1, str(s))


def tuple_key(t: tuple):
    return tuple(symbol_key(s) for s in t)


_NUMERIC = {int, float}


def _natural_order_ok(items: list) -> bool:
    # Plain tuple comparison agrees with tuple_key when every column holds
    # only numbers or only strings.
    for col in zip(*items):
        kinds = set(map(type, col))
        if not (kinds <= _NUMERIC or kinds == {str}):
            return False
    return True


def canonical_sorted(items) -> list:
    """Sort tuples of symbols in canonical order."""
    items = list(items)
    if _natural_order_ok(items):
        return sorted(items)
    return sorted(items, key=tuple_key)


_LOGS = {
    2: math.log2,
    10: math.log10,
}


def log_base(base: LogBase = 2):
    """Return ``log`` in the requested base; accepts 2, 10, ``"e"`` or ``math.e``."""
    if base in ("e", "E") or base == math.e:
        return math.log
    if base in ("2", "10"):
        base = int(base)
    if base in _LOGS:
        return _LOGS[base]
    raise DomainError(f"unsupported log base {base!r}; use 2, e or 10")


def base_value(base: LogBase = 2) -> float:
    """Numeric value of a log base (``e`` -> 2.718...)."""
    if base in ("e", "E") or base == math.e:
        return math.e
    log_base(base)
    return float(base)


def log_ratio(num: int, den: int = 1, base: LogBase = 2) -> float:
    """``log(num / den)`` from exact integer counts."""
    log = log_base(base)
    if den == 1:
        return log(num)
    if num == den:
        return 0.0
    try:
        return log(num / den)
    except OverflowError:
        return log(num) - log(den)


@dataclass(frozen=True)
class JointRange:
    """Joint range of named uncertain variables.

    Parameters
    ----------
    variables : sequence of str
        Distinct variable names, one per tuple position.
    tuples : iterable of tuple
        Realization tuples.  Duplicates collapse; the stored order is canonical.
    groups : mapping, optional
        Aliases naming a tuple of variables, e.g. ``{"X": ("X_1", "X_2")}``,
        so a group can be selected like a single (vector-valued) variable.
    """

    variables: tuple
    tuples: tuple
    groups: tuple = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __init__(self, variables: Sequence[str], tuples: Iterable[tuple],
                 groups: Mapping[str, Sequence[str]] | None = None):
        variables = tuple(variables)
        if not variables:
            raise SelectorError("a joint range needs at least one variable")
        if not all(isinstance(v, str) for v in variables):
            raise SelectorError("variable names must be strings")
        if len(set(variables)) != len(variables):
            raise SelectorError(f"duplicate variable names in {variables}")
        rows = set()
        for t in tuples:
            t = tuple(t)
            if len(t) != len(variables):
                raise DomainError(f"tuple {t!r} has arity {len(t)}, expected {len(variables)}")
            rows.add(t)
        if not rows:
            raise DomainError("a joint range must contain at least one tuple")
        grp = {}
        for name, members in (groups or {}).items():
            if name in variables:
                raise SelectorError(f"group name {name!r} shadows a variable")
            members = tuple(members)
            unknown = [m for m in members if m not in variables]
            if unknown or not members:
                raise SelectorError(f"group {name!r} refers to unknown variables {unknown}")
            grp[name] = members
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "tuples", tuple(canonical_sorted(rows)))
        object.__setattr__(self, "groups", tuple(sorted(grp.items())))
        object.__setattr__(self, "_cache", {})

    def __len__(self):
        return len(self.tuples)

    def resolve(self, sel: Selector) -> tuple:
        """Map a selector (name, group name, or list of them) to column indices."""
        names = [sel] if isinstance(sel, str) else list(sel)
        if not names:
            raise SelectorError("empty variable selector")
        if all(type(n) is int for n in names):
            # already-resolved column indices
            if not all(0 <= n < len(self.variables) for n in names):
                raise SelectorError(f"column index out of range in {names}")
            return tuple(dict.fromkeys(names))
        groups = dict(self.groups)
        idx = []
        for name in names:
            if name in groups:
                members = groups[name]
            elif name in self.variables:
                members = (name,)
            else:
                raise SelectorError(f"unknown variable {name!r}; have {list(self.variables)}")
            for m in members:
                i = self.variables.index(m)
                if i not in idx:
                    idx.append(i)
        return tuple(idx)

    def project(self, idx: tuple) -> tuple:
        """Projected tuples, one per row of ``self.tuples`` (not deduplicated)."""
        key = ("p", idx)
        hit = self._cache.get(key)
        if hit is None:
            if len(idx) == 1:
                i = idx[0]
                hit = tuple((t[i],) for t in self.tuples)
            elif idx == tuple(range(len(self.variables))):
                hit = self.tuples
            else:
                hit = tuple(map(itemgetter(*idx), self.tuples))
            self._cache[key] = hit
        return hit

    def grouped(self, target: tuple, cond: tuple) -> dict:
        """``{cond value: frozenset of target values}`` over all realizable cond values."""
        key = ("g", target, cond)
        hit = self._cache.get(key)
        if hit is None:
            acc: dict = {}
            for c, t in zip(self.project(cond), self.project(target)):
                acc.setdefault(c, set()).add(t)
            hit = {c: frozenset(s) for c, s in acc.items()}
            self._cache[key] = hit
        return hit


def _disjoint(jr: JointRange, *sels: Selector) -> list:
    resolved = [jr.resolve(s) for s in sels]
    seen: set = set()
    for r in resolved:
        if seen.intersection(r):
            raise SelectorError(f"selectors {sels!r} overlap")
        seen.update(r)
    return resolved


def marginal_range(jr: JointRange, v: Selector) -> frozenset:
    """``[[V]]`` as a set of tuples (1-tuples for a single variable)."""
    idx = jr.resolve(v)
    key = ("m", idx)
    hit = jr._cache.get(key)
    if hit is None:
        hit = frozenset(jr.project(idx))
        jr._cache[key] = hit
    return hit


def conditional_ranges(jr: JointRange, target: Selector, cond: Selector) -> dict:
    """All conditional ranges ``[[target | cond = c]]`` keyed by ``c``."""
    t, c = _disjoint(jr, target, cond)
    return dict(jr.grouped(t, c))


def conditional_range(jr: JointRange, target: Selector, cond: Selector, value) -> frozenset:
    """``[[target | cond = value]]``.

    ``value`` is a tuple over the conditioning variables; a bare symbol is
    accepted when conditioning on one variable.  Raises
    :class:`EmptyConditionError` when ``value`` is not realizable.
    """
    ranges = conditional_ranges(jr, target, cond)
    if len(jr.resolve(cond)) == 1 and (value,) in ranges:
        value = (value,)
    try:
        return ranges[value]
    except KeyError:
        raise EmptyConditionError(f"{value!r} is not in the range of {cond!r}") from None


def is_unrelated(jr: JointRange, a: Selector, b: Selector) -> bool:
    """True iff ``[[A, B]] = [[A]] x [[B]]``."""
    ia, ib = _disjoint(jr, a, b)
    joint = marginal_range(jr, ia + ib)
    return len(joint) == len(marginal_range(jr, ia)) * len(marginal_range(jr, ib))


def is_markov_chain(jr: JointRange, a: Selector, b: Selector, c: Selector) -> bool:
    """True iff A - B - C: ``[[A | C=c, B=b]] = [[A | B=b]]`` for all ``(c, b)``."""
    ia, ib, ic = _disjoint(jr, a, b, c)
    given_b = jr.grouped(ia, ib)
    nb = len(ib)
    # condition tuple is (b..., c...) so the b-part is a prefix
    for bc, rng in jr.grouped(ia, ib + ic).items():
        if rng != given_b[bc[:nb]]:
            return False
    return True


def hartley_entropy(jr: JointRange, v: Selector, base: LogBase = 2) -> float:
    """``H0(V) = log |[[V]]|``."""
    return log_base(base)(len(marginal_range(jr, v)))


def conditional_hartley_entropy(jr: JointRange, target: Selector, cond: Selector,
                                base: LogBase = 2) -> float:
    """``H0(T|C) = max_c log |[[T | C=c]]|``."""
    ranges = conditional_ranges(jr, target, cond)
    return log_base(base)(max(len(r) for r in ranges.values()))


def zero_mutual_information(jr: JointRange, a: Selector, b: Selector,
                            base: LogBase = 2) -> float:
    """``I0(A;B) = H0(A) - H0(A|B)``."""
    return hartley_entropy(jr, a, base) - conditional_hartley_entropy(jr, a, b, base)
