"""Command-line front-end: ``nsleak {measure,sweep,vote,selftest}``.

Exit codes: 0 success, 2 configuration or selector error, 3 data error,
4 self-test failure or a vote row disagreeing with the embedded reference.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Optional, Sequence

from .datasets import (
    HUNGARIAN_COLUMNS,
    MAJORITY_VOTE_REFERENCE,
    RECORD,
    VALUE,
    QuantizerSpec,
    Table,
    build_empirical,
    build_joint,
    complete_pairs,
    load_table,
    majority_vote_fixture,
    max_distortion,
)
from .errors import DataError, NSLeakError
from .leakage import (
    AttributePartition,
    convert_leakage_maximal,
    identity_leakage,
    is_epsilon_identifiable,
    maximal_leakage,
)
from .overlap import maximin_information
from .selftest import _mutated_closed_form, maximal_closed_form, run_selftest
from .stochastic import sibson_infinity_leakage
from .uv import conditional_hartley_entropy, hartley_entropy, marginal_range, zero_mutual_information

log = logging.getLogger("nsleak")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_CHECK = 4

LOG_BASES = {"2": 2, "e": "e", "10": 10}
VOTE_DIGITS = 14


class ConfigError(NSLeakError, ValueError):
    """Invalid command-line configuration."""


def parse_delta_range(text: str) -> tuple:
    """``"a:b:s"`` -> ``(a, b, s)``; ``"a:b"`` uses step 1."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ConfigError(f"delta range must look like start:stop[:step], got {text!r}")
    try:
        vals = [Fraction(p.strip()) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"delta range must be numeric, got {text!r}") from None
    if len(vals) == 2:
        vals.append(Fraction(1))
    return tuple(vals)


@dataclass(frozen=True)
class RunConfig:
    input: str
    x_col: str
    y_col: str
    delta_range: Optional[tuple] = None     # (start, stop, step)
    log_base: object = 2
    semantics: str = VALUE
    output_format: str = "json"
    epsilon: Optional[float] = None
    columns: Optional[tuple] = None
    missing_marker: str = "-9"
    delimiter: str = ","

    def __post_init__(self):
        if self.semantics not in (RECORD, VALUE):
            raise ConfigError(f"semantics must be 'record' or 'value', got {self.semantics!r}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.output_format!r}")
        if self.epsilon is not None and not self.epsilon >= 0:
            raise ConfigError(f"epsilon must be non-negative, got {self.epsilon}")
        if self.delta_range is not None:
            start, stop, step = (Fraction(v) for v in self.delta_range)
            if start <= 0:
                raise ConfigError(f"delta range must start above 0, got {float(start)}")
            if step <= 0:
                raise ConfigError(f"delta step must be positive, got {float(step)}")
            if stop < start:
                raise ConfigError(f"delta range is empty: stop {float(stop)} < start {float(start)}")
            object.__setattr__(self, "delta_range", (start, stop, step))

    def deltas(self) -> list:
        """The quantizer steps, generated exactly and then converted to float."""
        if self.delta_range is None:
            return []
        start, stop, step = self.delta_range
        count = int((stop - start) / step) + 1
        return [float(start + i * step) for i in range(count)]

    def single_delta(self) -> Optional[float]:
        ds = self.deltas()
        if len(ds) > 1:
            raise ConfigError("measure takes a single delta, not a range")
        return ds[0] if ds else None


@dataclass(frozen=True)
class SweepRow:
    delta: float
    max_distortion: float
    l_star: float
    i_star: float
    sibson_inf: float
    l_identity: float

    def consistent(self, n_x: int, base=2, rel: float = 1e-9) -> bool:
        """``i_star <= l_star`` and ``l_identity`` agrees with the conversion from ``l_star``."""
        if self.i_star > self.l_star * (1 + rel) + rel:
            return False
        conv = convert_leakage_maximal(n_x, self.l_star, "L*->L", base)
        return abs(conv - self.l_identity) <= rel * max(1.0, abs(self.l_identity))


@dataclass(frozen=True)
class VoteRow:
    n: int
    l_individual: float
    l_all: float
    l_star: float
    i_star: float
    reference_match: Optional[bool]


def _load(cfg: RunConfig) -> Table:
    return load_table(cfg.input, missing_marker=cfg.missing_marker,
                      delimiter=cfg.delimiter, columns=cfg.columns)


def measure_table(t: Table, cfg: RunConfig, delta: Optional[float] = None) -> dict:
    q = QuantizerSpec(delta) if delta is not None else None
    jr = build_joint(t, cfg.x_col, cfg.y_col, q, cfg.semantics)
    base = cfg.log_base
    l_id = identity_leakage(jr, "X", "Y", base)
    rec = {
        "x_col": cfg.x_col,
        "y_col": cfg.y_col,
        "delta": delta,
        "semantics": cfg.semantics,
        "log_base": str(base),
        "n_x": len(marginal_range(jr, "X")),
        "n_y": len(marginal_range(jr, "Y")),
        "h0_x": hartley_entropy(jr, "X", base),
        "h0_x_given_y": conditional_hartley_entropy(jr, "X", "Y", base),
        "i0": zero_mutual_information(jr, "X", "Y", base),
        "l_identity": l_id.leakage,
        "l_star": maximal_leakage(jr, "X", "Y", base).leakage,
        "l_star_reverse": maximal_leakage(jr, "Y", "X", base).leakage,
        "i_star": maximin_information(jr, "X", "Y", base),
        "sibson_inf": sibson_infinity_leakage(build_empirical(t, cfg.x_col, cfg.y_col, q), base),
        "epsilon": cfg.epsilon,
        "epsilon_identifiable": None,
    }
    if cfg.epsilon is not None:
        ident = AttributePartition.identity(marginal_range(jr, "X"))
        rec["epsilon_identifiable"] = is_epsilon_identifiable(jr, ident, "X", "Y", cfg.epsilon, base)
    return rec


def cmd_measure(cfg: RunConfig) -> dict:
    """All measures for one (optionally quantized) pair of columns."""
    delta = cfg.single_delta()
    return measure_table(_load(cfg), cfg, delta)


def sweep_row(t: Table, cfg: RunConfig, delta: float) -> SweepRow:
    q = QuantizerSpec(delta)
    base = cfg.log_base
    jr = build_joint(t, cfg.x_col, cfg.y_col, q, cfg.semantics)
    ys = [y for _, _, y in complete_pairs(t, cfg.x_col, cfg.y_col)]
    try:
        dist = max_distortion(ys, q)
    except TypeError:
        raise DataError(f"column {cfg.y_col!r} has non-numeric values") from None
    return SweepRow(
        delta=delta,
        max_distortion=dist,
        l_star=maximal_leakage(jr, "X", "Y", base).leakage,
        i_star=maximin_information(jr, "X", "Y", base),
        # the stochastic measure always counts value pairs with multiplicity
        sibson_inf=sibson_infinity_leakage(build_empirical(t, cfg.x_col, cfg.y_col, q), base),
        l_identity=identity_leakage(jr, "X", "Y", base).leakage,
    )


def _sweep_task(args):
    t, cfg, delta = args
    return sweep_row(t, cfg, delta)


def cmd_sweep(cfg: RunConfig, jobs: int = 1) -> list:
    """One :class:`SweepRow` per quantizer step, sorted by step."""
    deltas = cfg.deltas()
    if not deltas:
        raise ConfigError("sweep needs --delta or --delta-range")
    t = _load(cfg)
    tasks = [(t, cfg, d) for d in deltas]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(a) for a in tasks]
    rows.sort(key=lambda r: r.delta)
    n_x = len(marginal_range(build_joint(t, cfg.x_col, cfg.y_col, None, cfg.semantics), "X"))
    for r in rows:
        if not r.consistent(n_x, cfg.log_base):
            log.warning("sweep row at delta=%s fails the consistency check", r.delta)
    return rows


def round_sig(v: float, digits: int = VOTE_DIGITS) -> Decimal:
    """Round the shortest decimal form of ``v`` to ``digits`` significant digits, half up.

    Working on the decimal string avoids double rounding when a reference
    value was itself printed with one more digit ending in 5.
    """
    d = Decimal(repr(float(v)))
    if d == 0:
        return d
    exp = d.adjusted() - digits + 1
    return d.quantize(Decimal(1).scaleb(exp), rounding=ROUND_HALF_UP)


def vote_row(n: int) -> VoteRow:
    jr = majority_vote_fixture(n)
    row = (
        identity_leakage(jr, "X_1", "Y").leakage,
        identity_leakage(jr, "X", "Y").leakage,
        maximal_leakage(jr, "X", "Y").leakage,
        maximin_information(jr, "X", "Y"),
    )
    ref = MAJORITY_VOTE_REFERENCE.get(n)
    match = None
    if ref is not None:
        match = all(round_sig(a) == round_sig(b) for a, b in zip(row, ref))
    return VoteRow(n, *row, match)


def cmd_vote(n_max: int) -> list:
    """Leakage of one voter, of all voters, maximal leakage and maximin information for n = 1..n_max."""
    if not isinstance(n_max, int) or not 1 <= n_max <= 20:
        raise ConfigError(f"n_max must be in 1..20, got {n_max!r}")
    return [vote_row(n) for n in range(1, n_max + 1)]


def cmd_selftest(cap: int = 6, inject_fault: bool = False, seed: int = 0, n_random: int = 6000,
                 n_chains: int = 1000):
    form = _mutated_closed_form if inject_fault else maximal_closed_form
    return run_selftest(cap=cap, n_random=n_random, n_chains=n_chains, seed=seed, closed_form=form)


# ---- output ---------------------------------------------------------------

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def render(records: Sequence[dict], fmt: str, single: bool = False) -> str:
    """Serialize records; output depends only on the records."""
    if fmt == "json":
        obj = records[0] if single else list(records)
        return json.dumps(obj, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if records:
        w.writerow(list(records[0]))
        for r in records:
            w.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def _emit(text: str, output: Optional[str]):
    if output and output != "-":
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _row_dict(row) -> dict:
    return {f.name: getattr(row, f.name) for f in fields(row)}


# ---- argument parsing -----------------------------------------------------

def _columns_arg(text: Optional[str]):
    if text is None:
        return None
    if text.strip().lower() == "hungarian":
        return HUNGARIAN_COLUMNS
    return tuple(c.strip() for c in text.split(","))


def _data_args(p: argparse.ArgumentParser, sweep: bool):
    p.add_argument("--input", required=True, help="delimited text file")
    p.add_argument("--x-col", required=True, help="private column (name or 0-based index)")
    p.add_argument("--y-col", required=True, help="released column (name or 0-based index)")
    p.add_argument("--delta", type=str, help="single quantizer step")
    if sweep:
        p.add_argument("--delta-range", help="start:stop:step (default 1:50:1)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--log-base", choices=sorted(LOG_BASES), default="2")
    p.add_argument("--semantics", choices=[RECORD, VALUE], default=RECORD if sweep else VALUE)
    p.add_argument("--epsilon", type=float, help="privacy budget for the identifiability verdict")
    p.add_argument("--columns", help="comma-separated names for a headerless file, or 'hungarian'")
    p.add_argument("--missing-marker", default="-9")
    p.add_argument("--delimiter", default=",")
    _out_args(p)


def _out_args(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nsleak", description="Non-stochastic leakage measures.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    _data_args(sub.add_parser("measure", help="all measures for one column pair"), sweep=False)
    _data_args(sub.add_parser("sweep", help="measures across quantizer steps"), sweep=True)
    pv = sub.add_parser("vote", help="majority-vote example")
    pv.add_argument("n_max", nargs="?", type=int, default=15)
    _out_args(pv)
    ps = sub.add_parser("selftest", help="oracle equality and property checks")
    ps.add_argument("--cap", type=int, default=6, help="largest |[[X]]| for random instances (<= 8)")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--random", type=int, default=6000, dest="n_random")
    ps.add_argument("--chains", type=int, default=1000, dest="n_chains")
    ps.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return ap


def config_from_args(ns) -> RunConfig:
    if ns.delta is not None and getattr(ns, "delta_range", None):
        raise ConfigError("give either --delta or --delta-range, not both")
    if ns.delta is not None:
        d = ns.delta
        rng = parse_delta_range(f"{d}:{d}:1")
    elif getattr(ns, "delta_range", None):
        rng = parse_delta_range(ns.delta_range)
    elif ns.command == "sweep":
        rng = parse_delta_range("1:50:1")
    else:
        rng = None
    return RunConfig(
        input=ns.input, x_col=ns.x_col, y_col=ns.y_col, delta_range=rng,
        log_base=LOG_BASES[ns.log_base], semantics=ns.semantics, output_format=ns.format,
        epsilon=ns.epsilon, columns=_columns_arg(ns.columns),
        missing_marker=ns.missing_marker, delimiter=ns.delimiter,
    )


def _run(ns) -> int:
    if ns.command == "vote":
        rows = cmd_vote(ns.n_max)
        _emit(render([_row_dict(r) for r in rows], ns.format), ns.output)
        bad = [r.n for r in rows if r.reference_match is False]
        if bad:
            print(f"vote rows disagree with the reference: {bad}", file=sys.stderr)
            return EXIT_CHECK
        return EXIT_OK
    if ns.command == "selftest":
        rep = cmd_selftest(ns.cap, ns.inject_fault, ns.seed, ns.n_random, ns.n_chains)
        suites = ", ".join(f"{k}={v}" for k, v in rep.suites.items())
        print(f"checked {rep.checked} instances ({suites}); failures: {rep.failures}")
        if rep.passed:
            print("PASS")
            return EXIT_OK
        print(f"FAIL: {rep.message}")
        cx = rep.counterexample
        print(f"counterexample variables={list(cx.variables)} tuples={list(cx.tuples)}")
        return EXIT_CHECK
    cfg = config_from_args(ns)
    if ns.command == "measure":
        _emit(render([cmd_measure(cfg)], cfg.output_format, single=True), ns.output)
    else:
        rows = cmd_sweep(cfg, jobs=max(1, ns.jobs))
        _emit(render([asdict(r) for r in rows], cfg.output_format), ns.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the config exit code
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return _run(ns)
    except DataError as exc:
        print(f"nsleak: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NSLeakError, OSError) as exc:
        print(f"nsleak: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
