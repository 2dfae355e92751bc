import math
import random

import pytest

from nsleak.datasets import (
    HUNGARIAN_COLUMNS,
    MAJORITY_VOTE_REFERENCE,
    RECORD,
    VALUE,
    QuantizerSpec,
    build_empirical,
    build_joint,
    load_table,
    majority_vote_fixture,
    max_distortion,
    uniform_quantize,
)
from nsleak.errors import DataError, DomainError, EmptyDataError, IngestionError, SelectorError
from nsleak.leakage import identity_leakage, maximal_leakage
from nsleak.uv import conditional_range, hartley_entropy, marginal_range


@pytest.fixture
def three_rows(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("age,bp\n40,120\n40,120\n55,130\n")
    return p


def test_load_small_csv(three_rows):
    t = load_table(three_rows)
    assert t.columns == ("age", "bp")
    assert len(t) == 3
    assert t.column("bp") == [120, 120, 130]
    assert t.index(1) == 1 and t.index("1") == 1
    with pytest.raises(SelectorError):
        t.index("chol")


def test_load_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(IngestionError):
        load_table(empty)
    with pytest.raises(IngestionError):
        load_table(tmp_path / "absent.csv")
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("a,b\n1,2\n3\n")
    with pytest.raises(IngestionError, match="row 3"):
        load_table(ragged)
    header_only = tmp_path / "h.csv"
    header_only.write_text("a,b\n")
    with pytest.raises(IngestionError):
        load_table(header_only)


def test_missing_markers_and_headerless(tmp_path):
    p = tmp_path / "h.data"
    p.write_text("28,1,2,130,132,0,2,185,0,0,-9,-9,-9,0\n"
                 "29,1,2,120,?,0,0,160,0,0,-9,-9,-9,0\n"
                 "31,0,2,-9.0,243,0,0,160,0,0.5,-9,-9,-9,0\n")
    t = load_table(p, columns=HUNGARIAN_COLUMNS)
    assert len(t) == 3
    assert t.column("chol") == [132, None, 243]
    assert t.column("trestbps") == [130, 120, None]
    assert t.column("oldpeak") == [0, 0, 0.5]
    # rows with a missing selected cell are dropped when building ranges
    assert len(marginal_range(build_joint(t, "age", "chol", sem=RECORD), "X")) == 2
    assert len(marginal_range(build_joint(t, "age", "trestbps", sem=RECORD), "X")) == 2


def test_string_cells_kept(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("who;what\nann;x\nbob;y\n")
    t = load_table(p, delimiter=";")
    assert t.column("who") == ["ann", "bob"]


def test_quantizer_examples():
    assert uniform_quantize(157, QuantizerSpec(10)) == 155
    assert uniform_quantize(5, QuantizerSpec(2)) == 5
    assert uniform_quantize(-3, QuantizerSpec(2)) == -3
    assert uniform_quantize(0.2, 0.5) == 0.25
    for bad in (0, -1, float("inf"), float("nan")):
        with pytest.raises(DomainError):
            QuantizerSpec(bad)


def test_max_distortion_examples():
    ints = list(range(-7, 40))
    assert max_distortion(ints, 2) == 1
    assert max_distortion(ints, 1) == 0.5
    assert max_distortion([0], 4) == 2
    with pytest.raises(DomainError):
        max_distortion([], 1)


def test_max_distortion_monotone_on_dense_integers():
    ys = list(range(90, 201))
    prev = 0.0
    for d in range(1, 51):
        cur = max_distortion(ys, d)
        assert cur >= prev
        assert cur == d / 2
        prev = cur


def test_max_distortion_can_drop_on_sparse_data():
    # a lone odd value sits at a bucket centre for delta = 2
    assert max_distortion([1], 1) == 0.5
    assert max_distortion([1], 2) == 0.0


def test_build_joint_semantics(three_rows):
    t = load_table(three_rows)
    v = build_joint(t, "age", "bp", sem=VALUE)
    r = build_joint(t, "age", "bp", sem=RECORD)
    assert len(v) == 2 and len(r) == 3
    assert hartley_entropy(r, "X") == math.log2(3)
    assert v.variables == ("X", "Y")
    q = build_joint(t, "age", "bp", QuantizerSpec(20), VALUE)
    assert marginal_range(q, "Y") == {(130.0,)}
    with pytest.raises(DomainError):
        build_joint(t, "age", "bp", sem="rows")
    with pytest.raises(SelectorError):
        build_joint(t, "age", "chol")


def test_build_joint_errors(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("a,b,c\n1,?,x\n2,-9,y\n")
    t = load_table(p)
    with pytest.raises(EmptyDataError):
        build_joint(t, "a", "b")
    with pytest.raises(DataError):
        build_joint(t, "a", "c", QuantizerSpec(1))


def test_record_mode_entropy_is_log_row_count():
    rng = random.Random(2)
    rows = [(rng.randint(30, 70), rng.randint(90, 200)) for _ in range(293)]
    from nsleak.datasets import Table
    t = Table(("age", "bp"), tuple(rows))
    for d in (1, 7, 25):
        jr = build_joint(t, "age", "bp", QuantizerSpec(d), RECORD)
        assert hartley_entropy(jr, "X") == math.log2(293)
        assert maximal_leakage(jr, "X", "Y").leakage <= math.log2(293)
    ej = build_empirical(t, "age", "bp", QuantizerSpec(3))
    assert ej.total == 293


def test_majority_fixture_shapes():
    jr3 = majority_vote_fixture(3)
    assert len(conditional_range(jr3, "X", "Y", 0)) == 4
    assert len(conditional_range(jr3, "X", "Y", 1)) == 4
    jr1 = majority_vote_fixture(1)
    assert marginal_range(jr1, "Y") == {(0,), (1,)}
    assert conditional_range(jr1, "X", "Y", 1) == {(1,)}
    assert maximal_leakage(majority_vote_fixture(5), "X", "Y").leakage == pytest.approx(
        4.08746284125034, abs=1e-13)
    for bad in (0, 21, 2.0):
        with pytest.raises(DomainError):
            majority_vote_fixture(bad)


@pytest.mark.parametrize("n", range(1, 16))
def test_majority_fixture_closed_forms(n):
    jr = majority_vote_fixture(n)
    n0 = math.ceil(n / 2) - 1
    zeros = sum(math.comb(n, k) for k in range(n0 + 1))
    assert len(conditional_range(jr, "X", "Y", 0)) == zeros
    l_all = identity_leakage(jr, "X", "Y").leakage
    assert l_all == pytest.approx(n - math.log2(zeros), abs=1e-12)
    if n % 2:
        assert l_all == 1.0
    else:
        assert 0 <= l_all <= 2


def test_reference_table_shape():
    assert sorted(MAJORITY_VOTE_REFERENCE) == list(range(1, 16))
    assert all(row[3] == 1.0 for row in MAJORITY_VOTE_REFERENCE.values())
