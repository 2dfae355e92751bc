"""Empirical stochastic counterparts: Sibson-infinity leakage and guessing entropy.

Probabilities are kept as exact fractions of integer counts; conversion to
float happens only inside the final logarithm or sum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .uv import JointRange, LogBase, log_base


@dataclass(frozen=True)
class EmpiricalJoint:
    """Counts of observed ``(x, y)`` pairs."""

    counts: dict
    total: int

    def __post_init__(self):
        if not self.counts:
            raise DomainError("empirical joint has no observations")
        if any(int(c) != c or c < 1 for c in self.counts.values()):
            raise DomainError("counts must be positive integers")
        if sum(self.counts.values()) != self.total:
            raise DomainError("total does not match the sum of counts")

    def x_counts(self) -> Counter:
        acc: Counter = Counter()
        for (x, _), c in self.counts.items():
            acc[x] += c
        return acc

    def y_counts(self) -> Counter:
        acc: Counter = Counter()
        for (_, y), c in self.counts.items():
            acc[y] += c
        return acc

    def support(self) -> JointRange:
        """The joint range induced by the support of the counts."""
        return JointRange(("X", "Y"), self.counts)


def empirical_from_pairs(pairs: Iterable[tuple]) -> EmpiricalJoint:
    counts = Counter(tuple(p) for p in pairs)
    if not counts:
        raise DomainError("cannot build an empirical joint from no pairs")
    return EmpiricalJoint(dict(counts), sum(counts.values()))


def sibson_infinity_ratio(ej: EmpiricalJoint) -> Fraction:
    """``sum_y max_x P(y|x)`` as an exact fraction."""
    cx = ej.x_counts()
    best: dict = {}
    for (x, y), c in ej.counts.items():
        p = Fraction(c, cx[x])
        if p > best.get(y, 0):
            best[y] = p
    return sum(best.values(), Fraction(0))


def sibson_infinity_leakage(ej: EmpiricalJoint, base: LogBase = 2) -> float:
    """Stochastic maximal leakage ``log sum_y max_x P(y|x)``."""
    r = sibson_infinity_ratio(ej)
    if r == 1:
        return 0.0
    return log_base(base)(r.numerator / r.denominator)


def guessing_entropy(pmf: Sequence) -> float:
    """Expected number of guesses when guessing in order of decreasing probability.

    ``pmf`` may hold floats or fractions; it must be non-negative and sum to
    one within 1e-12.
    """
    ps = list(pmf)
    if not ps:
        raise DomainError("empty pmf")
    if any(p < 0 for p in ps):
        raise DomainError("pmf has negative entries")
    total = sum(ps)
    if abs(total - 1) > 1e-12:
        raise DomainError(f"pmf sums to {float(total)!r}, not 1")
    ps.sort(reverse=True)
    return float(sum(i * p for i, p in enumerate(ps, start=1)))


def _guess_cost(counts) -> Fraction:
    """Guessing entropy of the pmf proportional to ``counts``, exactly."""
    cs = sorted(counts, reverse=True)
    return Fraction(sum(i * c for i, c in enumerate(cs, start=1)), sum(cs))


def stochastic_guessing_leakage(ej: EmpiricalJoint) -> float:
    """``H_G(X) - sum_y P(y) H_G(X | Y=y)`` on the empirical distribution.

    Can be negative; no sign is enforced.
    """
    prior = _guess_cost(ej.x_counts().values())
    by_y: dict = {}
    for (_, y), c in ej.counts.items():
        by_y.setdefault(y, []).append(c)
    posterior = sum(
        (Fraction(sum(cs), ej.total) * _guess_cost(cs) for cs in by_y.values()),
        Fraction(0),
    )
    return float(prior - posterior)


def deterministic_channel(xs: Iterable, f) -> EmpiricalJoint:
    """One observation of ``(x, f(x))`` per ``x``."""
    return empirical_from_pairs((x, f(x)) for x in xs)


__all__ = [
    "EmpiricalJoint",
    "empirical_from_pairs",
    "sibson_infinity_ratio",
    "sibson_infinity_leakage",
    "guessing_entropy",
    "stochastic_guessing_leakage",
    "deterministic_channel",
]
