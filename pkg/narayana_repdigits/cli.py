"""
Command line entry point.

    narayana-repdigits bounds --g 2,10
    narayana-repdigits reduce --step all --g 2-10 --threads 0
    narayana-repdigits search --g 2-10 --k-max 11500
    narayana-repdigits all --format markdown --out report.md

Exit status: 0 when every check passes, 1 on a mismatch with the published
values or an instance without a witness, 2 on a configuration error and 3
when the requested precision is exhausted.
"""
import argparse
import logging
import sys
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from mpmath import mp

from narayana_repdigits.diophantine.algebraic import MIN_PRECISION, HeightMode
from narayana_repdigits.diophantine.intervals import PrecisionExhausted
from narayana_repdigits.diophantine.matveev import (
    bound_chain, check_loglog_inequality, reduction_box
)
from narayana_repdigits.diophantine.recurrence import k_bound_from_growth, verify_growth
from narayana_repdigits.diophantine.reduction import (
    DEFAULT_PRECISION, M_LIMIT, PUBLISHED_CONCLUSIONS, PUBLISHED_TABLES,
    SweepReport, certify_sweep, sweep_step1, sweep_step2, sweep_step3
)
from narayana_repdigits.diophantine.search import (
    DEFAULT_K_MAX, DEFAULT_LENGTHS, SearchBox, search, verify_table1
)
from narayana_repdigits.report import (
    Document, OutputFormat, bounds_frame, solutions_frame, solutions_markdown,
    solutions_payload, sweep_markdown, sweeps_frame
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_PRECISION = 3

MAX_BASE = 36

# Slack allowed between a reduced bound and the published one
PUBLISHED_SLACK = 2

# Range of the growth check run with the bounds
GROWTH_K_MAX = 1000

STEPS = ("1", "2", "3", "all")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    bases: Tuple[int, ...] = tuple(range(2, 11))
    step: str = "all"
    precision_bits: int = DEFAULT_PRECISION
    M: Optional[int] = None
    k_max: Optional[int] = None
    ell_max: Optional[int] = None
    m_max: Optional[int] = None
    n_max: Optional[int] = None
    height_mode: HeightMode = HeightMode.PUBLISHED
    workers: int = 0
    m_limit: int = M_LIMIT
    output_format: OutputFormat = OutputFormat.JSON
    out: Optional[str] = None

    def validate(self) -> "RunConfig":
        if not self.bases:
            raise ConfigError("no bases given")
        bad = [g for g in self.bases if not 2 <= g <= MAX_BASE]
        if bad:
            raise ConfigError("bases must lie in [2, %d], got %s" % (MAX_BASE, bad))
        if self.step not in STEPS:
            raise ConfigError("step must be one of %s, got %r" % (", ".join(STEPS), self.step))
        if self.precision_bits < MIN_PRECISION:
            raise ConfigError("precision must be at least %d bits, got %d"
                              % (MIN_PRECISION, self.precision_bits))
        if self.M is not None and self.M < 1:
            raise ConfigError("M must be positive")
        if self.k_max is not None and self.k_max < 0:
            raise ConfigError("k_max must be non-negative, got %d" % self.k_max)
        for name in ("ell_max", "m_max", "n_max"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError("%s must be positive, got %d" % (name, value))
        if self.workers < 0:
            raise ConfigError("threads must be non-negative, got %d" % self.workers)
        if self.m_limit < 1:
            raise ConfigError("m-limit must be positive, got %d" % self.m_limit)
        return self

    def as_dict(self) -> dict:
        d = asdict(self)
        d["bases"] = list(self.bases)
        d["M"] = None if self.M is None else str(self.M)
        d["height_mode"] = self.height_mode.value
        d["output_format"] = self.output_format.value
        # output location does not change the results
        del d["out"]
        return d


@dataclass
class Outcome:
    document: Document
    mismatches: List[str] = field(default_factory=list)

    def mismatch(self, message, *args):
        message = message % args
        log.error(message)
        self.mismatches.append(message)


def parse_bases(text: str) -> Tuple[int, ...]:
    """ "2,3,10" or "2-10" or a mix of both. """
    bases = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = (int(p) for p in part.split("-", 1))
                bases.update(range(lo, hi + 1))
            else:
                bases.add(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError("invalid base list %r" % text)
    return tuple(sorted(bases))


def run_bounds(config: RunConfig, outcome: Outcome) -> Dict[int, dict]:
    reports = [bound_chain(g, config.height_mode) for g in config.bases]
    for r in reports:
        for c in r.checks:
            if not c.within_tolerance:
                outcome.mismatch("g=%d: %s recomputed %.4g exceeds displayed %.4g",
                                 r.g, c.name, c.recomputed, c.displayed)
    holds, worst = check_loglog_inequality()
    growth = verify_growth(GROWTH_K_MAX)
    checks = {
        "loglog_inequality": {"holds": holds, "tightest_g": worst},
        "growth": {
            "k_max": growth.k_max,
            "holds": bool(growth),
            "lower_failures": len(growth.lower_failures),
            "upper_failures": list(growth.upper_failures),
            "shift": growth.shift,
        },
    }
    if not holds:
        outcome.mismatch("log-log inequality fails near g=%g", worst)
    for r in reports:
        if not r.intermediate["n_stage_within_n_bound"]:
            outcome.mismatch("g=%d: third stage gives n < %.4g above n < %.4g",
                             r.g, r.intermediate["n_stage"], r.n_bound)
    outcome.document.add("bounds", [r.as_dict() for r in reports], bounds_frame(reports))
    outcome.document.add("checks", checks)
    return {r.g: r.as_dict() for r in reports}


def _compare(report: SweepReport, outcome: Outcome):
    if report.flagged:
        outcome.mismatch("g=%d step %d: %d instances without a witness",
                         report.g, report.step, len(report.flagged))
        return
    published = PUBLISHED_TABLES[report.step].get(report.g)
    if published is not None and report.table_bound > published.bound + PUBLISHED_SLACK:
        outcome.mismatch("g=%d step %d: bound %d exceeds published %d",
                         report.g, report.step, report.table_bound, published.bound)


def _certify(report: SweepReport, outcome: Outcome) -> dict:
    cert = certify_sweep(report)
    if not cert.ok:
        outcome.mismatch("g=%d step %d: witnesses change at %d bits",
                         report.g, report.step, cert.precision_bits)
    return cert._asdict()


def reduction_modulus(config: RunConfig) -> int:
    """
    M of the reduction: the override, else the largest k bound of the bound
    chain over the published bases 2..10 and the requested ones.
    """
    if config.M is not None:
        return config.M
    return reduction_box(sorted(set(range(2, 11)) | set(config.bases)))[1]


def run_reduce(config: RunConfig, outcome: Outcome) -> Dict[int, Tuple[int, int, int]]:
    """
    Run the requested reduction steps per base. Each step uses the bound of
    the previous one when it was run, else the override or the published
    conclusion. Returns the length bounds (l, m, n) per base.
    """
    steps = (1, 2, 3) if config.step == "all" else (int(config.step),)
    M = reduction_modulus(config)
    log.info("reduction with M = %.4g", M)
    common = dict(M=M, precision_bits=config.precision_bits, workers=config.workers)
    sweeps, summaries, lengths = [], [], {}
    for g in config.bases:
        ell = config.ell_max or PUBLISHED_CONCLUSIONS[1]
        m = config.m_max or PUBLISHED_CONCLUSIONS[2]
        n = config.n_max or PUBLISHED_CONCLUSIONS[3]
        for step in steps:
            if step == 1:
                report = sweep_step1(g, **common)
            elif step == 2:
                report = sweep_step2(g, ell_max=ell, **common)
            else:
                report = sweep_step3(g, ell_max=ell, m_max=m, m_limit=config.m_limit, **common)
            _compare(report, outcome)
            summary = report.summary()
            if report.ok:
                summary["certification"] = _certify(report, outcome)
                reduced = report.length_bound
                if step == 1:
                    ell = config.ell_max or reduced
                elif step == 2:
                    m = config.m_max or reduced
                else:
                    n = config.n_max or reduced
            sweeps.append(report)
            summaries.append(summary)
        lengths[g] = (ell, m, n)
    outcome.document.add("reduction", summaries, sweeps_frame(sweeps), sweep_markdown(sweeps))
    return lengths


def search_box(config: RunConfig, g: int,
               lengths: Optional[Tuple[int, int, int]] = None) -> SearchBox:
    """ Explicit overrides win over reduced lengths, which win over the defaults. """
    ell, m, n = lengths or DEFAULT_LENGTHS
    ell, m, n = config.ell_max or ell, config.m_max or m, config.n_max or n
    if config.k_max is not None:
        k_max = config.k_max
    elif lengths is not None:
        k_max = int(mp.ceil(k_bound_from_growth(max(ell, m, n), g)))
    else:
        k_max = DEFAULT_K_MAX
    return SearchBox(g, k_max=k_max, ell_max=ell, m_max=m, n_max=n)


def run_search(config: RunConfig, outcome: Outcome,
               lengths: Optional[Dict[int, Tuple[int, int, int]]] = None):
    results, boxes = {}, {}
    for g in config.bases:
        boxes[g] = search_box(config, g, (lengths or {}).get(g))
        results[g] = search(boxes[g], workers=config.workers)
    table1 = verify_table1(results, boxes)
    if not table1.values_match:
        outcome.mismatch("distinct values %s differ from published %s",
                         list(table1.values), list(table1.expected_values))
    for d in table1.discrepancies:
        if not d.known_erratum:
            outcome.mismatch("g=%d k=%d: [%s] %s", d.g, d.k, d.digits, d.kind)
    records = [r for g in sorted(results) for r in results[g]]
    box_limits = {g: {"k_max": b.k_max, "ell_max": b.ell_max, "m_max": b.m_max, "n_max": b.n_max}
                  for g, b in boxes.items()}
    outcome.document.add("search", {"boxes": box_limits, "solutions": solutions_payload(records),
                                    "table1": table1.as_dict()},
                         solutions_frame(records), solutions_markdown(records))
    return results


def cmd_bounds(config, outcome):
    run_bounds(config, outcome)


def cmd_reduce(config, outcome):
    run_reduce(config, outcome)


def cmd_search(config, outcome):
    run_search(config, outcome)


def cmd_all(config, outcome):
    run_bounds(config, outcome)
    lengths = run_reduce(replace(config, step="all"), outcome)
    run_search(config, outcome, lengths)


COMMANDS = {
    "bounds": cmd_bounds,
    "reduce": cmd_reduce,
    "search": cmd_search,
    "all": cmd_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", dest="bases", type=parse_bases, default=tuple(range(2, 11)),
                        help="bases, e.g. 2,3,10 or 2-10 (default 2-10)")
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION)
    common.add_argument("--M", dest="M", type=int,
                        help="bound on k used by the reduction (default: from the bound chain)")
    common.add_argument("--k-max", type=int)
    common.add_argument("--l-max", dest="ell_max", type=int)
    common.add_argument("--m-max", type=int)
    common.add_argument("--n-max", type=int)
    common.add_argument("--strict-heights", action="store_true",
                        help="use the exact height of a_N and of the digit term")
    common.add_argument("--threads", type=int, default=0, help="worker processes, 0 for all cores")
    common.add_argument("--m-limit", type=int, default=M_LIMIT)
    common.add_argument("--format", dest="output_format", default=OutputFormat.JSON.value,
                        choices=[f.value for f in OutputFormat])
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="narayana-repdigits",
        description="Narayana numbers that are products of three repdigits")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True
    commands.add_parser("bounds", parents=[common], help="recompute the bound chain")
    reduce = commands.add_parser("reduce", parents=[common], help="continued fraction reduction")
    reduce.add_argument("--step", choices=STEPS, default="all")
    reduce.add_argument("--all", dest="step", action="store_const", const="all",
                        help="same as --step all")
    commands.add_parser("search", parents=[common], help="exhaustive search in a box")
    commands.add_parser("all", parents=[common], help="bounds, reduction and search")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        bases=args.bases,
        step=getattr(args, "step", "all"),
        precision_bits=args.precision_bits,
        M=args.M,
        k_max=args.k_max,
        ell_max=args.ell_max,
        m_max=args.m_max,
        n_max=args.n_max,
        height_mode=HeightMode.STRICT if args.strict_heights else HeightMode.PUBLISHED,
        workers=args.threads,
        m_limit=args.m_limit,
        output_format=OutputFormat(args.output_format),
        out=args.out,
    ).validate()


def setup_logging(verbose: int, quiet: bool):
    if quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    # warnings follow the same verbosity
    logging.captureWarnings(True)


def main(argv=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    try:
        config = config_from_args(args)
    except ConfigError as err:
        log.error("%s", err)
        return EXIT_CONFIG

    outcome = Outcome(Document(config.as_dict()))
    try:
        COMMANDS[args.command](config, outcome)
    except PrecisionExhausted as err:
        log.error("precision exhausted: %s", err)
        return EXIT_PRECISION
    except ValueError as err:
        log.error("%s", err)
        return EXIT_CONFIG

    outcome.document.add("ok", not outcome.mismatches)
    outcome.document.add("mismatches", list(outcome.mismatches))
    for path in outcome.document.write(config.output_format, config.out, stdout or sys.stdout):
        log.info("wrote %s", path)
    return EXIT_MISMATCH if outcome.mismatches else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
