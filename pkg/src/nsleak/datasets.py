"""Tabular ingestion, uniform quantization and fixture joint ranges."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import DataError, DomainError, EmptyDataError, IngestionError, SelectorError
from .stochastic import EmpiricalJoint, empirical_from_pairs
from .uv import JointRange

UCI_HUNGARIAN_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "heart-disease/processed.hungarian.data"
)
# processed.hungarian.data has no header row; these are the UCI attribute names
HUNGARIAN_COLUMNS = (
    "age", "sex", "cp", "trestbps", "chol", "fbs", "restecg",
    "thalach", "exang", "oldpeak", "slope", "ca", "thal", "num",
)

RECORD = "record"
VALUE = "value"

# (L for U = X_1, L for U = X, L*, I*) in bits for n = 1..15 voters,
# as published with 15 significant digits.
MAJORITY_VOTE_REFERENCE = {
    1: (1.0, 1.0, 1.0, 1.0),
    2: (1.0, 2.0, 2.0, 1.0),
    3: (0.0, 1.0, 2.32192809488736, 1.0),
    4: (0.0, 1.67807190511264, 3.58496250072116, 1.0),
    5: (0.0, 1.0, 4.08746284125034, 1.0),
    6: (0.0, 1.5405683813627, 5.4262647547021, 1.0),
    7: (0.0, 1.0, 6.02236781302845, 1.0),
    8: (0.0, 1.46084118889197, 7.35755200461808, 1.0),
    9: (0.0, 1.0, 8.00562454919388, 1.0),
    10: (0.0, 1.40754296273192, 9.31967212094699, 1.0),
    11: (0.0, 1.0, 10.0014081943928, 1.0),
    12: (0.0, 1.36882294429602, 11.2940463132715, 1.0),
    13: (0.0, 1.0, 12.0003521774803, 1.0),
    14: (0.0, 1.33911272969743, 13.2745237550067, 1.0),
    15: (0.0, 1.0, 14.0000880524301, 1.0),
}


@dataclass(frozen=True)
class Table:
    """Rectangular table; missing cells are ``None``."""

    columns: tuple
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def index(self, col) -> int:
        if isinstance(col, int) and not isinstance(col, bool):
            if 0 <= col < len(self.columns):
                return col
        elif col in self.columns:
            return self.columns.index(col)
        elif isinstance(col, str) and col.isdigit() and int(col) < len(self.columns):
            return int(col)
        raise SelectorError(f"column {col!r} not found; have {list(self.columns)}")

    def column(self, col) -> list:
        i = self.index(col)
        return [r[i] for r in self.rows]


@dataclass(frozen=True)
class QuantizerSpec:
    delta: float

    def __post_init__(self):
        if not self.delta > 0 or math.isinf(self.delta):
            raise DomainError(f"quantizer step must be a positive finite number, got {self.delta}")


def _parse_cell(text: str, missing: set, missing_value: Optional[float]):
    s = text.strip()
    if s in missing:
        return None
    try:
        v = int(s)
    except ValueError:
        try:
            v = float(s)
        except ValueError:
            return s
        if math.isnan(v):
            return None
        if v.is_integer() and "e" not in s.lower():
            v = int(v)
    if missing_value is not None and v == missing_value:
        return None
    return v


def load_table(path, missing_marker: str = "-9", delimiter: str = ",",
               columns: Optional[Sequence[str]] = None) -> Table:
    """Read a delimiter-separated file.

    With ``columns=None`` the first row is the header; otherwise every row is
    data and ``columns`` names the positions.  Cells equal to
    ``missing_marker`` (textually or numerically), ``?`` or empty become
    ``None``.  Rows are kept even when they contain missing cells.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            raw = [r for r in csv.reader(fh, delimiter=delimiter) if any(c.strip() for c in r)]
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise IngestionError(f"{path} is empty")
    if columns is None:
        header = tuple(c.strip() for c in raw[0])
        body, first_line = raw[1:], 2
    else:
        header = tuple(columns)
        body, first_line = raw, 1
    if len(set(header)) != len(header):
        raise IngestionError(f"{path}: duplicate column names {header}")
    missing = {"", "?", missing_marker.strip()}
    try:
        missing_value = float(missing_marker)
    except ValueError:
        missing_value = None
    rows = []
    for lineno, r in enumerate(body, start=first_line):
        if len(r) != len(header):
            raise IngestionError(
                f"{path}: row {lineno} has {len(r)} fields, expected {len(header)}")
        rows.append(tuple(_parse_cell(c, missing, missing_value) for c in r))
    if not rows:
        raise IngestionError(f"{path} has a header but no data rows")
    return Table(header, tuple(rows))


def uniform_quantize(y: float, q) -> float:
    """Mid-rise uniform quantizer ``delta * (floor(y / delta) + 1/2)``."""
    if not isinstance(q, QuantizerSpec):
        q = QuantizerSpec(q)
    return q.delta * (math.floor(y / q.delta) + 0.5)


def max_distortion(ys: Sequence[float], q) -> float:
    """Largest ``|y - c(y)|`` over the observed values."""
    ys = list(ys)
    if not ys:
        raise DomainError("max_distortion needs at least one value")
    return max(abs(y - uniform_quantize(y, q)) for y in ys)


def complete_pairs(t: Table, x_col, y_col) -> list:
    """``(row index, x, y)`` for rows where both cells are present."""
    ix, iy = t.index(x_col), t.index(y_col)
    out = [(i, r[ix], r[iy]) for i, r in enumerate(t.rows)
           if r[ix] is not None and r[iy] is not None]
    if not out:
        raise EmptyDataError(f"no rows with both {x_col!r} and {y_col!r} present")
    return out


def _quantized(rows: list, q: Optional[QuantizerSpec]) -> list:
    if q is None:
        return rows
    try:
        return [(i, x, uniform_quantize(y, q)) for i, x, y in rows]
    except TypeError as exc:
        raise DataError(f"cannot quantize non-numeric values: {exc}") from None


def build_joint(t: Table, x_col, y_col, q: Optional[QuantizerSpec] = None,
                sem: str = VALUE) -> JointRange:
    """Joint range of ``(X, quantized Y)`` from two table columns.

    ``value`` semantics: variables ``("X", "Y")``, identical pairs collapse.
    ``record`` semantics: variables ``("row", "X_value", "Y")`` with the group
    ``X = (row, X_value)``, so every row is its own realization of ``X`` and
    ``|[[X]]|`` equals the number of complete rows.
    """
    rows = _quantized(complete_pairs(t, x_col, y_col), q)
    if sem == VALUE:
        return JointRange(("X", "Y"), ((x, y) for _, x, y in rows))
    if sem == RECORD:
        return JointRange(("row", "X_value", "Y"), rows, groups={"X": ("row", "X_value")})
    raise DomainError(f"unknown semantics {sem!r}; use 'record' or 'value'")


def build_empirical(t: Table, x_col, y_col, q: Optional[QuantizerSpec] = None) -> EmpiricalJoint:
    """Counts of ``(x, quantized y)`` value pairs over complete rows."""
    rows = _quantized(complete_pairs(t, x_col, y_col), q)
    return empirical_from_pairs((x, y) for _, x, y in rows)


def majority_vote(votes: Sequence[int]) -> int:
    """1 iff at least half of the votes are 1."""
    return int(2 * sum(votes) >= len(votes))


def majority_vote_fixture(n: int) -> JointRange:
    """All ``2**n`` ballots ``X = (X_1, ..., X_n)`` with their majority outcome ``Y``."""
    if not isinstance(n, int) or not 1 <= n <= 20:
        raise DomainError(f"number of voters must be in 1..20, got {n!r}")
    names = tuple(f"X_{i}" for i in range(1, n + 1))
    tuples = (v + (majority_vote(v),) for v in itertools.product((0, 1), repeat=n))
    return JointRange(names + ("Y",), tuples, groups={"X": names})
