"""Command-line front end.

Commands:
  check             run all three majorization characterizations on a pair
  zeta              tabulate the gap series and its quotient with derivatives
  trump             catalyzed majorization: given catalyst, or grid search
  probe-conjecture  one evidence record for the positivity conjecture
  selftest          seeded property suites

Exit codes: 0 Holds, 1 Fails, 2 Inconclusive, 3 the characterizations
disagree (a bug signal), 64 unusable input (bad flags, unparsable files,
invalid sequences).

Reports are deterministic: identical inputs and flags produce byte-identical
output. JSON reports use sorted keys and exact decimal or p/q strings for
numbers; no timestamps, no environment echoes. The seed is printed in every
report even where nothing random runs, so downstream tooling can always
record it.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import gmpy2

from ._format import canonical_json, jsonable, mpfr_to_str
from .catalysis import (
    CatalystSearchConfig,
    catalyst_search,
    conjecture_probe,
    trump_check,
)
from .orderings import majorize_hockey_stick, majorize_partial_sums
from .precision import MIN_PRECISION_BITS, to_mpfr, working_precision
from .selftest import run_selftest
from .sequences import Ell1Seq, SeqParseError, as_fraction, seq_from_obj, seq_to_obj
from .series import CMConfig, SequencePair, cm_test, gap_jet, mellin_gap_jet

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INCONCLUSIVE = 2
EXIT_DISAGREEMENT = 3
EXIT_USAGE = 64

_VERDICT_EXIT = {"holds": EXIT_HOLDS, "fails": EXIT_FAILS, "inconclusive": EXIT_INCONCLUSIVE}


class CLIError(Exception):
    """Unusable input; rendered to stderr with exit 64."""


class _Parser(argparse.ArgumentParser):
    # flag mistakes share the input-error exit code instead of argparse's 2,
    # which would collide with the Inconclusive exit
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """Flags shared by every command, already validated."""
    precision_bits: int = 128
    order_max: int = 24
    s_min: Fraction = Fraction(1001, 1000)
    s_max: Fraction = Fraction(1000)
    grid_points: int = 64
    fmt: str = "text"
    seed: int = 0
    normalize: bool = False

    def cm_config(self) -> CMConfig:
        return CMConfig(
            order_max=self.order_max,
            grid_points=self.grid_points,
            s_min=self.s_min,
            s_max=self.s_max,
            precision_bits=self.precision_bits,
        )


def _fraction_flag(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r} ({exc})")


def _add_shared_flags(p: argparse.ArgumentParser, default_format: str = "text") -> None:
    p.add_argument("--precision-bits", type=int, default=128,
                   help="working precision in bits (default 128, minimum 53)")
    p.add_argument("--order-max", type=int, default=24,
                   help="highest derivative order scanned (default 24)")
    p.add_argument("--s-min", type=_fraction_flag, default=Fraction(1001, 1000),
                   help="lower end of the s grid, must be > 1 (default 1.001)")
    p.add_argument("--s-max", type=_fraction_flag, default=Fraction(1000),
                   help="upper end of the s grid (default 1000)")
    p.add_argument("--grid-points", type=int, default=64,
                   help="number of grid points, geometrically spaced in s-1 (default 64)")
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                   default=default_format,
                   help=f"output format (default {default_format}; csv only for zeta)")
    p.add_argument("--seed", type=int, default=0,
                   help="random seed; echoed in every report (default 0)")
    p.add_argument("--normalize", action="store_true",
                   help="rescale each input sequence to total mass 1 before analysis")


def _run_config(args: argparse.Namespace) -> RunConfig:
    if args.precision_bits < MIN_PRECISION_BITS:
        raise CLIError(f"--precision-bits must be at least {MIN_PRECISION_BITS}")
    if args.order_max < 0:
        raise CLIError("--order-max must be nonnegative")
    if not 1 < args.s_min < args.s_max:
        raise CLIError("need 1 < --s-min < --s-max")
    if args.grid_points < 2:
        raise CLIError("--grid-points must be at least 2")
    return RunConfig(
        precision_bits=args.precision_bits,
        order_max=args.order_max,
        s_min=args.s_min,
        s_max=args.s_max,
        grid_points=args.grid_points,
        fmt=args.fmt,
        seed=args.seed,
        normalize=getattr(args, "normalize", False),
    )


# ---------------------------------------------------------------------------
# input files

def _load_seq(path: str, cfg: RunConfig) -> Ell1Seq:
    """Parse one sequence file. Decimal text is preserved exactly: JSON
    numbers parse into rationals via their decimal representation, and
    string entries like \"0.1\" go the same route."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CLIError(f"{path}: cannot read: {exc.strerror or exc}")
    try:
        obj = json.loads(text, parse_float=Fraction, parse_int=int)
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    try:
        s = seq_from_obj(obj)
    except SeqParseError as exc:
        raise CLIError(f"{path}: {exc}")
    if cfg.normalize:
        try:
            s = s.normalized()
        except ValueError as exc:
            raise CLIError(f"{path}: --normalize: {exc}")
    return s


def _load_pair(a_path: str, b_path: str, cfg: RunConfig) -> SequencePair:
    return SequencePair(_load_seq(a_path, cfg), _load_seq(b_path, cfg))


# ---------------------------------------------------------------------------
# report rendering

def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(canonical_json(jsonable(report)))
    else:
        _emit_text(report)


def _emit_text(report: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            sys.stdout.write(f"{pad}{key}:\n")
            _emit_text(value, indent + 1)
        elif isinstance(value, (list, tuple)):
            rendered = json.dumps(jsonable(list(value)))
            sys.stdout.write(f"{pad}{key}: {rendered}\n")
        else:
            sys.stdout.write(f"{pad}{key}: {jsonable(value)}\n")


def _require_not_csv(cfg: RunConfig, command: str) -> None:
    if cfg.fmt == "csv":
        raise CLIError(f"--format csv is not available for {command}; use text or json")


# ---------------------------------------------------------------------------
# check

def _classify(partial, hockey, cm_verdict) -> str:
    decisive = {"holds", "fails"}
    if partial.kind in decisive and hockey.kind in decisive and partial.kind != hockey.kind:
        return "disagreement"
    if cm_verdict.is_fails and partial.is_holds and hockey.kind != "fails":
        # a confirmed monotonicity violation cannot coexist with exact Holds
        return "disagreement"
    if partial.kind in decisive:
        return partial.kind
    return "inconclusive"


def cmd_check(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    _require_not_csv(cfg, "check")
    pair = _load_pair(args.a, args.b, cfg)

    partial = majorize_partial_sums(pair.a, pair.b)
    hockey = majorize_hockey_stick(pair.a, pair.b)
    cm = cm_test(pair, cfg.cm_config())
    classification = _classify(partial, hockey, cm.verdict)

    report = {
        "command": "check",
        "seed": cfg.seed,
        "precision_bits": cfg.precision_bits,
        "normalized": cfg.normalize,
        "a": seq_to_obj(pair.a),
        "b": seq_to_obj(pair.b),
        "partial_sums": partial.to_report(),
        "hockey_stick": hockey.to_report(),
        "cm": cm.to_report(),
        "classification": classification,
    }
    _emit(report, cfg.fmt)
    if classification == "disagreement":
        return EXIT_DISAGREEMENT
    return _VERDICT_EXIT[classification]


# ---------------------------------------------------------------------------
# zeta

def _sample_grid(cfg: RunConfig, samples: int) -> List[object]:
    """Geometric spacing of s-1 between the bounds, exactly `samples` rows."""
    with working_precision(cfg.precision_bits):
        if samples == 1:
            return [to_mpfr(cfg.s_min)]
        d_lo = to_mpfr(cfg.s_min - 1)
        d_hi = to_mpfr(cfg.s_max - 1)
        ratio = d_hi / d_lo
        return [1 + d_lo * ratio ** (gmpy2.mpfr(i) / (samples - 1)) for i in range(samples)]


ZETA_COLUMNS = ("s", "zeta", "f", "f_d1", "f_d2", "f_d3")


def cmd_zeta(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    if args.samples < 1:
        raise CLIError("--samples must be at least 1")
    pair = _load_pair(args.a, args.b, cfg)

    rows = []
    p = cfg.precision_bits
    for s0 in _sample_grid(cfg, args.samples):
        with working_precision(p):
            zeta_value = gap_jet(pair, s0, 0, p).value
            fj = mellin_gap_jet(pair, s0, 3, p)
            rows.append((
                mpfr_to_str(s0),
                mpfr_to_str(zeta_value),
                mpfr_to_str(fj.value),
                mpfr_to_str(fj.derivative(1)),
                mpfr_to_str(fj.derivative(2)),
                mpfr_to_str(fj.derivative(3)),
            ))

    if cfg.fmt == "json":
        report = {
            "command": "zeta",
            "seed": cfg.seed,
            "precision_bits": p,
            "rows": [dict(zip(ZETA_COLUMNS, row)) for row in rows],
        }
        sys.stdout.write(canonical_json(jsonable(report)))
    else:
        # csv and text share the tabular shape; text adds a seed comment
        if cfg.fmt == "text":
            sys.stdout.write(f"# command: zeta  seed: {cfg.seed}  precision_bits: {p}\n")
        sys.stdout.write(",".join(ZETA_COLUMNS) + "\n")
        for row in rows:
            sys.stdout.write(",".join(row) + "\n")
    return EXIT_HOLDS


# ---------------------------------------------------------------------------
# trump

def _search_config(args: argparse.Namespace) -> CatalystSearchConfig:
    try:
        return CatalystSearchConfig(
            dim_min=args.dim_min,
            dim_max=args.dim_max,
            grid_step=args.grid_step,
            refine_steps=args.refine_steps,
            parallelism=args.parallel,
            budget=args.budget,
        )
    except ValueError as exc:
        raise CLIError(str(exc))


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim-min", type=int, default=2, help="smallest catalyst dimension (default 2)")
    p.add_argument("--dim-max", type=int, default=2, help="largest catalyst dimension (default 2)")
    p.add_argument("--grid-step", type=_fraction_flag, default=Fraction(1, 20),
                   help="simplex grid step, a unit fraction such as 0.05 or 1/20")
    p.add_argument("--refine-steps", type=int, default=0,
                   help="local refinement rounds around the best candidate (default 0)")
    p.add_argument("--budget", type=int, default=100000,
                   help="maximum candidates to evaluate (default 100000)")
    p.add_argument("--parallel", type=int, default=1,
                   help="worker processes for the candidate scan (default 1)")


def cmd_trump(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    _require_not_csv(cfg, "trump")
    if args.catalyst_file and args.search:
        raise CLIError("--catalyst-file and --search are mutually exclusive")
    x = _load_seq(args.x, cfg)
    y = _load_seq(args.y, cfg)

    report = {
        "command": "trump",
        "seed": cfg.seed,
        "x": seq_to_obj(x),
        "y": seq_to_obj(y),
    }
    if args.search:
        search_cfg = _search_config(args)
        result = catalyst_search(x, y, search_cfg)
        report["mode"] = "search"
        report["grid_step"] = search_cfg.grid_step
        report["dims"] = [search_cfg.dim_min, search_cfg.dim_max]
        report["result"] = result.to_report()
        verdict_kind = result.verdict.kind
    else:
        if args.catalyst_file:
            c = _load_seq(args.catalyst_file, cfg)
            mode = "given"
        else:
            c = Ell1Seq((Fraction(1),))
            mode = "identity"
        verdict = trump_check(x, y, c)
        report["mode"] = mode
        report["catalyst"] = seq_to_obj(c)
        report["result"] = verdict.to_report()
        verdict_kind = verdict.kind
    _emit(report, cfg.fmt)
    return _VERDICT_EXIT[verdict_kind]


# ---------------------------------------------------------------------------
# probe-conjecture

_PROBE_EXIT = {
    "consistent": EXIT_HOLDS,
    "hypothesis-unmet": EXIT_FAILS,
    "counterexample-candidate": EXIT_INCONCLUSIVE,
}


def cmd_probe(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    _require_not_csv(cfg, "probe-conjecture")
    pair = _load_pair(args.a, args.b, cfg)
    record = conjecture_probe(
        pair,
        search_config=_search_config(args),
        cm_config=cfg.cm_config(),
        log_path=args.log,
    )
    report = {"command": "probe-conjecture", "seed": cfg.seed}
    report.update(record)
    _emit(report, cfg.fmt)
    return _PROBE_EXIT[record["flag"]]


# ---------------------------------------------------------------------------
# selftest

def cmd_selftest(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    _require_not_csv(cfg, "selftest")
    if args.cases < 0:
        raise CLIError("--cases must be nonnegative")
    if args.parallel < 1:
        raise CLIError("--parallel must be at least 1")
    result = run_selftest(cfg.seed, args.cases, parallelism=args.parallel)
    report = {"command": "selftest"}
    report.update(result)
    _emit(report, cfg.fmt)
    return EXIT_HOLDS if result["ok"] else EXIT_FAILS


# ---------------------------------------------------------------------------
# wiring

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="majorkit",
        description="decide and probe majorization between nonnegative summable sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="run all three characterizations on a pair")
    p.add_argument("a", help="JSON file for the candidate majorized sequence")
    p.add_argument("b", help="JSON file for the candidate majorizing sequence")
    _add_shared_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("zeta", help="tabulate the gap series and quotient derivatives")
    p.add_argument("a", help="JSON file for the first sequence")
    p.add_argument("b", help="JSON file for the second sequence")
    p.add_argument("--samples", type=int, default=9,
                   help="number of rows; s values geometrically spaced (default 9)")
    _add_shared_flags(p, default_format="csv")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("trump", help="catalyzed majorization check or search")
    p.add_argument("x", help="JSON file for the candidate trumped sequence")
    p.add_argument("y", help="JSON file for the candidate trumping sequence")
    p.add_argument("--catalyst-file", help="JSON file with a specific catalyst to try")
    p.add_argument("--search", action="store_true", help="grid-search for a catalyst")
    _add_search_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=cmd_trump)

    p = sub.add_parser("probe-conjecture",
                       help="emit one evidence record for the positivity conjecture")
    p.add_argument("a", help="JSON file for the first sequence")
    p.add_argument("b", help="JSON file for the second sequence")
    p.add_argument("--log", help="append the record to this JSONL evidence log")
    _add_search_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("selftest", help="run the seeded property suites")
    p.add_argument("--cases", type=int, default=25,
                   help="cases per suite (default 25)")
    p.add_argument("--parallel", type=int, default=1,
                   help="parallelism width handed to the suites (default 1)")
    _add_shared_flags(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        sys.stderr.write(f"majorkit: error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        # invalid sequences surfaced by library validation
        sys.stderr.write(f"majorkit: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
