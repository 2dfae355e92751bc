import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsleak.datasets import majority_vote_fixture
from nsleak.errors import DomainError, OracleScaleError, PartitionError
from nsleak.leakage import (
    AttributePartition,
    convert_leakage_maximal,
    guessing_leakage,
    identifiability_bound,
    identity_leakage,
    is_epsilon_identifiable,
    maximal_leakage,
    maximal_leakage_oracle,
    worst_case_attribute,
)
from nsleak.partitions import set_partitions
from nsleak.selftest import random_joint_range
from nsleak.uv import JointRange, conditional_range, hartley_entropy, marginal_range


def first_vote(jr):
    return AttributePartition.from_function(marginal_range(jr, "X"), lambda x: x[0])


def every_x(jr):
    return AttributePartition.identity(marginal_range(jr, "X"))


def test_single_voter_attribute():
    jr2, jr3 = majority_vote_fixture(2), majority_vote_fixture(3)
    assert guessing_leakage(jr2, first_vote(jr2), "X", "Y").leakage == 1.0
    assert guessing_leakage(jr3, first_vote(jr3), "X", "Y").leakage == 0.0


def test_all_votes_attribute_n4():
    jr = majority_vote_fixture(4)
    rep = guessing_leakage(jr, every_x(jr), "X", "Y")
    assert rep.leakage == pytest.approx(1.67807190511264, abs=1e-13)
    assert (rep.prior_cost, rep.min_posterior_cost) == (16, 5)
    assert rep.argmin_y == ((1,),) or rep.argmin_y == ((0,),)


def test_unrelated_leaks_nothing(product22):
    for blocks in set_partitions(sorted(marginal_range(product22, "X"))):
        assert guessing_leakage(product22, AttributePartition(blocks), "X", "Y").leakage == 0.0


def test_report_fields(asym3):
    rep = guessing_leakage(asym3, every_x(asym3), "X", "Y")
    assert rep.prior_cost == 3 and rep.min_posterior_cost == 1
    assert rep.argmin_y == (("y2",),)
    assert rep.leakage == math.log2(rep.ratio)


def test_partition_must_cover_x(asym3):
    with pytest.raises(PartitionError):
        guessing_leakage(asym3, AttributePartition([{("x1",)}, {("x2",)}]), "X", "Y")
    with pytest.raises(PartitionError):
        AttributePartition([{1, 2}, {2, 3}])
    with pytest.raises(PartitionError):
        AttributePartition([{1}, set()])


def test_partition_equality_ignores_block_order():
    assert AttributePartition([{3}, {1, 2}]) == AttributePartition([{2, 1}, {3}])
    assert AttributePartition([{3}, {1, 2}]).blocks[0] == frozenset({1, 2})


def test_maximal_leakage_examples(asym3, diagonal):
    assert maximal_leakage(asym3, "X", "Y").leakage == pytest.approx(math.log2(3))
    assert maximal_leakage(asym3, "Y", "X").leakage == 1.0
    jr3 = majority_vote_fixture(3)
    assert maximal_leakage(jr3, "X", "Y").leakage == pytest.approx(2.32192809488736, abs=1e-14)
    assert maximal_leakage(diagonal, "X", "Y").leakage == hartley_entropy(diagonal, "X")
    assert maximal_leakage(asym3, "X", "Y").argmin_y == (("y2",),)


def test_oracle_examples(asym3, product22):
    rep = maximal_leakage_oracle(asym3, "X", "Y")
    assert rep.ratio == 3
    # the only maximizer over the five partitions of {x1, x2, x3}
    assert rep.partition == every_x(asym3)
    jr3 = majority_vote_fixture(3)
    assert maximal_leakage_oracle(jr3, "X", "Y").ratio == maximal_leakage(jr3, "X", "Y").ratio == 5
    assert maximal_leakage_oracle(product22, "X", "Y").leakage == 0.0


def test_oracle_cap():
    jr = majority_vote_fixture(4)
    with pytest.raises(OracleScaleError):
        maximal_leakage_oracle(jr, "X", "Y")
    with pytest.raises(OracleScaleError):
        maximal_leakage_oracle(majority_vote_fixture(3), "X", "Y", cap=7)


def test_worst_case_attribute_majority_vote():
    jr = majority_vote_fixture(3)
    wc = worst_case_attribute(jr, "X", "Y")
    core = conditional_range(jr, "X", "Y", 0)
    assert core in wc.blocks
    assert len(wc) == 5 and all(len(b) == 1 for b in wc.blocks if b != core)
    assert guessing_leakage(jr, wc, "X", "Y").leakage == pytest.approx(math.log2(5))


def test_worst_case_attribute_small(asym3, diagonal):
    wc = worst_case_attribute(asym3, "X", "Y")
    assert wc == every_x(asym3)
    assert guessing_leakage(asym3, wc, "X", "Y").leakage == pytest.approx(math.log2(3))
    assert worst_case_attribute(diagonal, "X", "Y") == every_x(diagonal)


def test_worst_case_tie_break_is_smallest_y():
    jr = JointRange(("X", "Y"), [(0, "b"), (1, "a"), (2, "a"), (2, "b")])
    wc = worst_case_attribute(jr, "X", "Y")
    assert frozenset({(1,), (2,)}) in wc.blocks


def test_epsilon_identifiability(product22):
    assert is_epsilon_identifiable(product22, every_x(product22), "X", "Y", 0.0)
    jr3 = majority_vote_fixture(3)
    assert not is_epsilon_identifiable(jr3, every_x(jr3), "X", "Y", 0.5)
    assert is_epsilon_identifiable(jr3, every_x(jr3), "X", "Y", 1.0)
    assert is_epsilon_identifiable(jr3, first_vote(jr3), "X", "Y", 0.0)
    with pytest.raises(DomainError):
        is_epsilon_identifiable(jr3, first_vote(jr3), "X", "Y", -0.1)


def test_conversion_examples():
    assert convert_leakage_maximal(293, 8.13442632022093, "L*->L", 2) == pytest.approx(
        4.49431713628116, abs=1e-9)
    for n in (1, 2, 17, 293):
        assert convert_leakage_maximal(n, 0.0) == 0.0
    top = math.log2(293)
    assert convert_leakage_maximal(293, 8.19475685442225) == pytest.approx(top, abs=1e-9)
    assert convert_leakage_maximal(293, 4.49431713628116, "L->L*") == pytest.approx(
        8.13442632022093, abs=1e-9)


def test_conversion_domain():
    with pytest.raises(DomainError):
        convert_leakage_maximal(4, 2.5)
    with pytest.raises(DomainError):
        convert_leakage_maximal(4, -0.5)
    with pytest.raises(DomainError):
        convert_leakage_maximal(0, 0.0)
    with pytest.raises(DomainError):
        convert_leakage_maximal(4, 1.0, "sideways")


def test_conversion_monotone():
    grid = [i / 100 * math.log2(50) for i in range(101)]
    for direction in ("L*->L", "L->L*"):
        vals = [convert_leakage_maximal(50, v, direction) for v in grid]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_conversion_other_bases():
    jr = majority_vote_fixture(6)
    for base in ("e", 10):
        n = len(marginal_range(jr, "X"))
        ls = maximal_leakage(jr, "X", "Y", base).leakage
        l_id = identity_leakage(jr, "X", "Y", base).leakage
        assert convert_leakage_maximal(n, ls, "L*->L", base) == pytest.approx(l_id, rel=1e-9)


def test_identifiability_bound():
    assert identifiability_bound(10, 0.0) == 0.0
    assert identifiability_bound(4, 1.0) == pytest.approx(math.log2(3))
    assert identifiability_bound(4, 20.0) < math.log2(5)
    assert identifiability_bound(4, 20.0) > math.log2(4)
    assert identifiability_bound(4, 1.0, "e") == pytest.approx(math.log(4 * (1 - math.exp(-1)) + 1))
    with pytest.raises(DomainError):
        identifiability_bound(4, -1.0)


def x_relabel_classes(max_x, n_y):
    """One joint range per X-relabeling class with |[[X]]| <= max_x, [[Y]] inside range(n_y)."""
    subsets = [s for r in range(1, n_y + 1) for s in itertools.combinations(range(n_y), r)]
    for k in range(1, max_x + 1):
        for rows in itertools.combinations_with_replacement(subsets, k):
            yield JointRange(("X", "Y"), [(i, y) for i, ys in enumerate(rows) for y in ys])


def test_oracle_equality_exhaustive_5x4():
    count = 0
    for jr in x_relabel_classes(5, 4):
        closed = maximal_leakage(jr, "X", "Y")
        oracle = maximal_leakage_oracle(jr, "X", "Y")
        assert oracle.ratio == closed.ratio, jr
        count += 1
    assert count == math.comb(20, 5) - 1


def test_oracle_equality_random_under_cap():
    rng = random.Random(11)
    for _ in range(300):
        jr = random_joint_range(rng, rng.randint(6, 8), rng.randint(1, 6))
        assert maximal_leakage_oracle(jr, "X", "Y").ratio == maximal_leakage(jr, "X", "Y").ratio


def test_middle_inequality_all_partitions():
    rng = random.Random(5)
    for _ in range(150):
        jr = random_joint_range(rng, rng.randint(1, 5), rng.randint(1, 4))
        xs = sorted(marginal_range(jr, "X"))
        for blocks in set_partitions(xs):
            u = AttributePartition(blocks)
            for (y,) in marginal_range(jr, "Y"):
                cond = conditional_range(jr, "X", "Y", y)
                hit = sum(1 for b in u.blocks if b & cond)
                assert len(xs) - len(u) >= len(cond) - hit


@st.composite
def joint_and_partition(draw):
    nx = draw(st.integers(1, 6))
    rows = draw(st.lists(st.tuples(st.integers(0, nx - 1), st.integers(0, 4)), min_size=1, max_size=24))
    jr = JointRange(("X", "Y"), rows)
    xs = sorted(marginal_range(jr, "X"))
    labels = draw(st.lists(st.integers(0, 3), min_size=len(xs), max_size=len(xs)))
    return jr, AttributePartition.from_labels(dict(zip(xs, labels)))


@settings(max_examples=300, deadline=None)
@given(joint_and_partition())
def test_any_attribute_between_zero_and_maximal(case):
    jr, u = case
    rep = guessing_leakage(jr, u, "X", "Y")
    assert rep.leakage >= 0
    assert rep.ratio <= maximal_leakage(jr, "X", "Y").ratio
    assert rep.min_posterior_cost <= rep.prior_cost


@settings(max_examples=200, deadline=None)
@given(joint_and_partition())
def test_leakage_invariant_under_relabeling(case):
    jr, u = case
    relabeled = AttributePartition.from_labels({x: f"u{i * 7}" for x, i in u.labels().items()})
    assert guessing_leakage(jr, u, "X", "Y").leakage == guessing_leakage(jr, relabeled, "X", "Y").leakage
