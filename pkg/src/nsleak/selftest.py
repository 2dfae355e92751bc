"""Instance generators and the oracle self-test behind ``nsleak selftest``."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .errors import DomainError
from .leakage import (
    DEFAULT_ORACLE_CAP,
    guessing_leakage,
    identity_leakage,
    maximal_leakage,
    maximal_leakage_oracle,
    worst_case_attribute,
)
from .overlap import one_shot_block_count, overlap_partition
from .uv import JointRange

EXHAUSTIVE_X = 4
EXHAUSTIVE_Y = 3


def all_joint_ranges(nx: int, ny: int) -> Iterator[JointRange]:
    """Every non-empty subset of ``range(nx) x range(ny)`` as an ``(X, Y)`` joint range."""
    grid = list(itertools.product(range(nx), range(ny)))
    for mask in range(1, 1 << len(grid)):
        yield JointRange(("X", "Y"), (grid[i] for i in range(len(grid)) if mask >> i & 1))


def random_channel(rng: random.Random, inputs, outputs, p: float = 0.5) -> dict:
    """Map each input to a non-empty random subset of ``outputs``."""
    outputs = list(outputs)
    chan = {}
    for a in inputs:
        picked = [b for b in outputs if rng.random() < p]
        chan[a] = picked or [rng.choice(outputs)]
    return chan


def random_joint_range(rng: random.Random, nx: int, ny: int, p: Optional[float] = None) -> JointRange:
    """``(X, Y)`` joint range with exactly ``nx`` values of X and at most ``ny`` of Y."""
    p = rng.uniform(0.1, 0.9) if p is None else p
    chan = random_channel(rng, range(nx), range(ny), p)
    return JointRange(("X", "Y"), ((a, b) for a, bs in chan.items() for b in bs))


def random_chain(rng: random.Random, sizes, p: Optional[float] = None) -> JointRange:
    """Joint range of a cascade ``V0 - V1 - ... - Vk`` built by composing random channels.

    Variables are named ``V0``, ``V1``, ...; every consecutive triple forms a
    Markov chain by construction.
    """
    p = rng.uniform(0.1, 0.9) if p is None else p
    rows = [(a,) for a in range(sizes[0])]
    for n_out in sizes[1:]:
        chan = random_channel(rng, range(max(sizes)), range(n_out), p)
        rows = [r + (b,) for r in rows for b in chan[r[-1]]]
    return JointRange(tuple(f"V{i}" for i in range(len(sizes))), rows)


def product_range(*ranges: JointRange, x: str = "X", y: str = "Y") -> JointRange:
    """Cartesian product of ``(X_i, Y_i)`` joint ranges, grouped as ``X`` and ``Y``.

    The factors are mutually unrelated by construction.
    """
    variables = []
    pieces = []
    for i, jr in enumerate(ranges, start=1):
        variables += [f"{x}{i}", f"{y}{i}"]
        ix, iy = jr.resolve(x), jr.resolve(y)
        pieces.append([(t[ix[0]], t[iy[0]]) for t in jr.tuples])
    tuples = (sum(combo, ()) for combo in itertools.product(*pieces))
    groups = {x: variables[0::2], y: variables[1::2]}
    return JointRange(variables, tuples, groups=groups)


def maximal_closed_form(n_x: int, min_cond: int) -> int:
    """``|[[X]]| - min_y |[[X|Y=y]]| + 1``: the argument of the maximal-leakage log."""
    return n_x - min_cond + 1


def _mutated_closed_form(n_x: int, min_cond: int) -> int:
    # negative control for the self-test: drops the +1
    return n_x - min_cond


@dataclass
class SelftestReport:
    checked: int = 0
    failures: int = 0
    counterexample: Optional[JointRange] = None
    message: str = ""
    suites: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def check_instance(jr: JointRange, cap: int = DEFAULT_ORACLE_CAP,
                   closed_form: Callable[[int, int], int] = maximal_closed_form) -> Optional[str]:
    """Run the oracle checks on one ``(X, Y)`` joint range; return a message on failure."""
    ident = identity_leakage(jr, "X", "Y")
    target = Fraction(closed_form(ident.prior_cost, ident.min_posterior_cost))
    oracle = maximal_leakage_oracle(jr, "X", "Y", cap=cap)
    if oracle.ratio != target:
        return f"maximal leakage oracle ratio {oracle.ratio} != closed form {target}"
    wc = guessing_leakage(jr, worst_case_attribute(jr, "X", "Y"), "X", "Y")
    if wc.ratio != target:
        return f"worst-case attribute ratio {wc.ratio} != closed form {target}"
    blocks = len(overlap_partition(jr, "X", "Y"))
    one_shot = one_shot_block_count(jr, "X", "Y", cap=cap)
    if one_shot != blocks:
        return f"one-shot oracle found {one_shot} blocks, overlap partition has {blocks}"
    return None


def shrink(jr: JointRange, fails: Callable[[JointRange], bool]) -> JointRange:
    """Greedily drop tuples while the failure persists."""
    current = jr
    changed = True
    while changed and len(current) > 1:
        changed = False
        for i in range(len(current)):
            cand = JointRange(current.variables, current.tuples[:i] + current.tuples[i + 1:])
            if fails(cand):
                current, changed = cand, True
                break
    return current


def _chain_violation(jr: JointRange) -> Optional[str]:
    # V1 - V2 - V3 is X - Y - Z; U = X is the attribute.
    l_y = identity_leakage(jr, "V1", "V2")
    l_z = identity_leakage(jr, "V1", "V3")
    if l_z.ratio > l_y.ratio:
        return f"guessing-leakage DPI violated: L(U->Z)={l_z.leakage} > L(U->Y)={l_y.leakage}"
    s_y = maximal_leakage(jr, "V1", "V2")
    s_z = maximal_leakage(jr, "V1", "V3")
    if s_z.prior_cost > s_y.prior_cost:
        return f"maximal-leakage DPI violated: {s_z.leakage} > {s_y.leakage}"
    return None


def run_selftest(cap: int = 6, n_random: int = 6000, n_chains: int = 1000, seed: int = 0,
                 closed_form: Callable[[int, int], int] = maximal_closed_form) -> SelftestReport:
    """Exhaustive and randomized oracle-equality checks.

    Exhaustive over every joint range inside ``min(cap, 4) x 3``; then
    ``n_random`` random instances with ``|[[X]]| <= cap`` and ``n_chains``
    random four-variable chains for the data-processing inequalities.
    """
    if not 1 <= cap <= DEFAULT_ORACLE_CAP:
        raise DomainError(f"selftest cap must be in 1..{DEFAULT_ORACLE_CAP}, got {cap}")
    rng = random.Random(seed)
    report = SelftestReport()

    def fails(j):
        return check_instance(j, cap, closed_form) is not None

    def instances():
        for j in all_joint_ranges(min(cap, EXHAUSTIVE_X), EXHAUSTIVE_Y):
            yield "exhaustive", j
        for _ in range(n_random):
            yield "random", random_joint_range(rng, rng.randint(1, cap), rng.randint(1, cap))

    for suite, jr in instances():
        report.checked += 1
        report.suites[suite] = report.suites.get(suite, 0) + 1
        msg = check_instance(jr, cap, closed_form)
        if msg:
            report.failures += 1
            if report.counterexample is None:
                report.counterexample = shrink(jr, fails)
                report.message = check_instance(report.counterexample, cap, closed_form) or msg
    for _ in range(n_chains):
        sizes = [rng.randint(1, cap) for _ in range(4)]
        jr = random_chain(rng, sizes)
        report.checked += 1
        report.suites["chains"] = report.suites.get("chains", 0) + 1
        msg = _chain_violation(jr)
        if msg:
            report.failures += 1
            if report.counterexample is None:
                report.counterexample, report.message = jr, msg
    return report


__all__ = [
    "all_joint_ranges",
    "random_channel",
    "random_joint_range",
    "random_chain",
    "product_range",
    "maximal_closed_form",
    "check_instance",
    "shrink",
    "run_selftest",
    "SelftestReport",
]
