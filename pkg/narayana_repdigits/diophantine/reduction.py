"""
Continued fraction reduction of the absolute bounds.

For an inequality 0 < |u tau - v + mu| < A B^(-w) with u <= M, a convergent
p/q of tau with q > 6M and

    epsilon = ||mu q|| - M ||tau q|| > 0

shows that w < log(A q / epsilon) / log B. All quantities are enclosed in
intervals; a sign that cannot be decided raises `PrecisionExhausted`.

The three sweeps reduce the lengths l <= m <= n of the repdigits in turn:

    step 1:  mu = log((g-1)^3 a_N / (d1 d2 d3)) / log alpha,            A = 16 / log alpha, w = l
    step 2:  mu = log((g-1)^3 a_N / (d1 d2 d3 (g^l - 1))) / log alpha,   A = 8 / log alpha,  w = m
    step 3:  mu = log((g-1)^3 a_N / (d1 d2 d3 (g^l - 1)(g^m - 1))) / ..., A = 8 / log alpha,  w = n - 1

with tau = log g / log alpha throughout. mu only depends on the product
d1 d2 d3, so triples sharing a product form one instance.
"""
import logging
import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import gcd
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import pandas as pd
from mpmath import iv

from narayana_repdigits.diophantine.algebraic import (
    MIN_PRECISION, compute_constants, constant_intervals
)
from narayana_repdigits.diophantine.intervals import (
    PrecisionExhausted, certainly_positive, endpoints, fraction_endpoints,
    interval_precision, lower, nearest_int_distance, upper
)

log = logging.getLogger(__name__)

DEFAULT_PRECISION = 1200

# k < 8 n log g < 1.99e54 over 2 <= g <= 10
M_DEFAULT = 199 * 10 ** 52

# Convergents kept beyond the first one with q > 6M
EXTRA_CONVERGENTS = 40

# Numerators of A (A = numerator / log alpha) and the smallest w each
# inequality holds for
STEP_A = {1: 16, 2: 8, 3: 8}
STEP_MIN_W = {1: 5, 2: 4, 3: 3}

# Step 3 is also evaluated with m restricted to this limit
M_LIMIT = 183


class NoWitnessFound(LookupError):
    """ No available convergent gives epsilon > 0. """


class TableEntry(NamedTuple):
    q_index: int
    epsilon: float
    bound: int


def _table(q_index, epsilons, bounds):
    return {g: TableEntry(q_index[g], e, b)
            for g, e, b in zip(range(2, 11), epsilons, bounds)}


_Q_INDEX = {2: 118, 3: 100, 4: 110, 5: 115, 6: 90, 7: 106, 8: 112, 9: 102, 10: 96}

# Published reductions: convergent index, epsilon lower bound, length bound
PUBLISHED_TABLES = {
    1: _table(_Q_INDEX,
              (0.36, 0.26, 0.03, 0.01, 0.06, 0.001, 0.0019, 0.005, 0.01),
              (194, 121, 99, 87, 76, 72, 67, 62, 59)),
    2: _table(_Q_INDEX,
              (0.004, 0.0007, 0.0003, 0.001, 0.0002, 0.0005, 0.0001, 0.005, 0.001),
              (199, 125, 102, 88, 78, 72, 68, 62, 60)),
    3: _table({**_Q_INDEX, 3: 99},
              (0.00006, 0.002, 0.007, 0.0002, 0.0008, 0.002, 0.0005, 0.02, 0.009),
              (204, 124, 99, 89, 77, 71, 67, 61, 59)),
}

# Bounds carried into the search over all 2 <= g <= 10
PUBLISHED_CONCLUSIONS = {1: 194, 2: 200, 3: 205}


@dataclass(frozen=True)
class ReductionProblem:
    tau: iv.mpf
    mu: iv.mpf
    A: iv.mpf
    B: int
    M: int
    label: str = ""
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not certainly_positive(self.A):
            raise ValueError("A must be positive")
        if self.B <= 1:
            raise ValueError("B must exceed 1, got %s" % self.B)
        if self.M < 1:
            raise ValueError("M must be at least 1, got %s" % self.M)


@dataclass(frozen=True)
class ConvergentWitness:
    t: int
    p: int
    q: int
    epsilon: float
    w_bound: float

    @property
    def bound(self) -> int:
        return math.floor(self.w_bound)


def continued_fraction_convergents(x, q_target: int, extra: int = 0) -> List[Tuple[int, int]]:
    """
    Convergents of a certified positive real, in increasing q, up to the
    first with q > q_target and `extra` more after it.

    Partial quotients are taken from the exact expansions of both interval
    endpoints and kept only while they agree, so every real in the enclosure
    has the same convergents. A rational point enclosure terminates with its
    finite expansion.
    """
    lo, hi = fraction_endpoints(x)
    if lo <= 0:
        raise ValueError("expected a positive real")
    exact = lo == hi
    convergents = []
    p_prev, q_prev, p, q = 0, 1, 1, 0
    past = 0
    while True:
        a = math.floor(lo)
        if a != math.floor(hi):
            break
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        convergents.append((p, q))
        if q > q_target:
            if past >= extra:
                return convergents
            past += 1
        lo, hi = lo - a, hi - a
        if lo == 0 or hi == 0:
            if exact:
                return convergents
            break
        lo, hi = 1 / hi, 1 / lo

    if convergents and convergents[-1][1] > q_target:
        return convergents
    raise PrecisionExhausted("partial quotients undetermined before q > %s" % q_target)


def _scan(mu, candidates, log_A, log_B, label, tightest=False) -> ConvergentWitness:
    """
    First witness, or with `tightest` the one with the smallest integer bound.

    epsilon <= 1/2, so log(2 A q) / log B bounds every later witness from
    below; the scan stops once that cannot beat the best bound found.
    """
    best = None
    log_2A = log_A + iv.ln(2)
    for t, p, q, tau_term, log_q in candidates:
        if best is not None and math.floor(lower((log_2A + log_q) / log_B)) >= best.bound:
            break
        try:
            epsilon = nearest_int_distance(mu * q) - tau_term
        except PrecisionExhausted:
            if best is None:
                raise
            break
        if certainly_positive(epsilon):
            w = (log_A + log_q - iv.ln(epsilon)) / log_B
            witness = ConvergentWitness(t, p, q, lower(epsilon), upper(w))
            if not tightest:
                return witness
            if best is None or witness.bound < best.bound:
                best = witness
            continue
        _, hi = endpoints(epsilon)
        if hi > 0 and best is None:
            raise PrecisionExhausted("sign of epsilon undecided for %s at q_%d" % (label, t))
    if best is None:
        raise NoWitnessFound("no convergent gives epsilon > 0 for %s" % (label or "instance"))
    return best


def _candidates(tau, M, convergents):
    # convergents are numbered from 1, p_1/q_1 = a_0/1
    return [(t, p, q, M * abs(tau * q - p), iv.ln(q))
            for t, (p, q) in enumerate(convergents, 1) if q > 6 * M]


def dujella_petho(problem: ReductionProblem, convergents: Sequence[Tuple[int, int]],
                  tightest: bool = False) -> ConvergentWitness:
    """
    First convergent with q > 6M and epsilon > 0, scanning onward past
    convergents where epsilon <= 0. Every such convergent is a valid
    witness; `tightest` keeps the one giving the smallest bound.
    """
    with interval_precision(problem.precision_bits):
        candidates = _candidates(problem.tau, problem.M, convergents)
        return _scan(problem.mu, candidates, iv.ln(problem.A), iv.ln(problem.B),
                     problem.label, tightest)


def verify_witness(problem: ReductionProblem, witness: ConvergentWitness) -> bool:
    """ Re-check q > 6M, gcd(p, q) = 1 and epsilon > 0 from scratch. """
    if witness.q <= 6 * problem.M or gcd(witness.p, witness.q) != 1:
        return False
    with interval_precision(problem.precision_bits):
        epsilon = nearest_int_distance(problem.mu * witness.q) \
            - problem.M * abs(problem.tau * witness.q - witness.p)
        return certainly_positive(epsilon)


def digit_products(g: int) -> Dict[int, Tuple[Tuple[int, int, int], ...]]:
    """ Products d1 d2 d3 with 1 <= d1 <= d2 <= d3 <= g - 1 and their triples. """
    products = defaultdict(list)
    for triple in combinations_with_replacement(range(1, g), 3):
        products[triple[0] * triple[1] * triple[2]].append(triple)
    return {d: tuple(products[d]) for d in sorted(products)}


class ReductionContext:
    """
    Everything the sweeps of one base share: tau, the convergents of tau past
    6M, and logarithm tables from which each mu is a sum.
    """

    def __init__(self, g: int, precision_bits: int = DEFAULT_PRECISION,
                 M: int = M_DEFAULT, extra: int = EXTRA_CONVERGENTS):
        if not 2 <= g <= 36:
            raise ValueError("base must be in [2, 36], got %d" % g)
        if precision_bits < MIN_PRECISION:
            raise ValueError("precision_bits must be at least %d, got %d"
                             % (MIN_PRECISION, precision_bits))
        if M < 1:
            raise ValueError("M must be at least 1, got %d" % M)
        self.g = g
        self.precision_bits = precision_bits
        self.M = M
        with interval_precision(precision_bits):
            constants = constant_intervals(compute_constants(precision_bits))
            self.log_alpha = iv.ln(constants.alpha)
            self.log_g = iv.ln(g)
            self.tau = self.log_g / self.log_alpha
            self.mu_base = iv.ln((g - 1) ** 3 * constants.aN) / self.log_alpha
            self.convergents = continued_fraction_convergents(self.tau, 6 * M, extra)
            self.candidates = _candidates(self.tau, M, self.convergents)
            self.log_A = {step: iv.ln(numerator) - iv.ln(self.log_alpha)
                          for step, numerator in STEP_A.items()}
        self._log_product = {}
        self._log_repunit = {}
        log.debug("g=%d: %d convergents of tau, first q > 6M is q_%d",
                  g, len(self.convergents), self.candidates[0][0])

    def _scaled_log(self, cache, key, value):
        if key not in cache:
            cache[key] = iv.ln(value) / self.log_alpha
        return cache[key]

    def mu(self, product: int, lengths: Iterable[int] = ()):
        """ mu for digit product d1 d2 d3 and the lengths moved into eta_1. """
        with interval_precision(self.precision_bits):
            mu = self.mu_base - self._scaled_log(self._log_product, product, product)
            for j in lengths:
                mu = mu - self._scaled_log(self._log_repunit, j, self.g ** j - 1)
            return mu

    def problem(self, step: int, product: int, lengths: Iterable[int] = (),
                label: str = "") -> ReductionProblem:
        with interval_precision(self.precision_bits):
            A = iv.mpf(STEP_A[step]) / self.log_alpha
        return ReductionProblem(self.tau, self.mu(product, lengths), A, self.g,
                                self.M, label, self.precision_bits)

    def witness(self, step: int, product: int, lengths: Iterable[int] = (),
                label: str = "", tightest: bool = True) -> ConvergentWitness:
        mu = self.mu(product, lengths)
        with interval_precision(self.precision_bits):
            return _scan(mu, self.candidates, self.log_A[step], self.log_g, label, tightest)


@lru_cache(maxsize=4)
def reduction_context(g: int, precision_bits: int = DEFAULT_PRECISION,
                      M: int = M_DEFAULT) -> ReductionContext:
    return ReductionContext(g, precision_bits, M)


class InstanceRecord(NamedTuple):
    step: int
    product: int
    ell: Optional[int]
    m: Optional[int]
    witness: Optional[ConvergentWitness]

    @property
    def label(self) -> str:
        parts = ["d1*d2*d3=%d" % self.product]
        if self.ell is not None:
            parts.append("l=%d" % self.ell)
        if self.m is not None:
            parts.append("m=%d" % self.m)
        return " ".join(parts)

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(j for j in (self.ell, self.m) if j is not None)

    def sort_key(self):
        return self.product, self.ell or 0, self.m or 0


def _evaluate(task) -> List[InstanceRecord]:
    g, precision_bits, M, step, product, ell, m_values = task
    context = reduction_context(g, precision_bits, M)
    if step == 1:
        instances = [(None, None)]
    elif step == 2:
        instances = [(j, None) for j in range(1, ell + 1)]
    else:
        instances = [(ell, j) for j in m_values]

    records = []
    for l_, m_ in instances:
        record = InstanceRecord(step, product, l_, m_, None)
        try:
            witness = context.witness(step, product, record.lengths,
                                      "g=%d step %d %s" % (g, step, record.label))
        except NoWitnessFound as err:
            log.warning("g=%d step %d: %s", g, step, err)
            witness = None
        records.append(record._replace(witness=witness))
    return records


def _run(tasks: List[tuple], workers: int) -> List[InstanceRecord]:
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers == 1 or len(tasks) == 1:
        results = map(_evaluate, tasks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_evaluate, tasks))
    records = [r for chunk in results for r in chunk]
    return sorted(records, key=InstanceRecord.sort_key)


@dataclass
class SweepReport:
    step: int
    g: int
    M: int
    precision_bits: int
    ranges: Dict[str, int] = field(default_factory=dict)
    instances: List[InstanceRecord] = field(default_factory=list)
    m_limit: Optional[int] = None

    @property
    def solved(self) -> List[InstanceRecord]:
        return [r for r in self.instances if r.witness is not None]

    @property
    def flagged(self) -> List[InstanceRecord]:
        return [r for r in self.instances if r.witness is None]

    @property
    def worst(self) -> Optional[InstanceRecord]:
        solved = self.solved
        return max(solved, key=lambda r: r.witness.w_bound) if solved else None

    @property
    def smallest_epsilon(self) -> Optional[InstanceRecord]:
        solved = self.solved
        return min(solved, key=lambda r: r.witness.epsilon) if solved else None

    def _bound(self, w_bound):
        return max(math.floor(w_bound), STEP_MIN_W[self.step] - 1)

    @property
    def bound(self) -> Optional[int]:
        """ Reduced bound on w over all instances (the table value). """
        worst = self.worst
        return None if worst is None else self._bound(worst.witness.w_bound)

    @property
    def length_bound(self) -> Optional[int]:
        """ Bound on the repdigit length itself; step 3 reduces w = n - 1. """
        bound = self.bound
        if bound is None:
            return None
        return bound + 1 if self.step == 3 else bound

    @property
    def bound_within_m_limit(self) -> Optional[int]:
        if self.step != 3 or self.m_limit is None:
            return None
        solved = [r for r in self.solved if r.m <= self.m_limit]
        if not solved:
            return None
        return self._bound(max(r.witness.w_bound for r in solved))

    @property
    def table_bound(self) -> Optional[int]:
        """ Bound over the range the published table covers: m <= m_limit in step 3. """
        limited = self.bound_within_m_limit
        return self.bound if limited is None else limited

    @property
    def bound_half_A(self) -> Optional[int]:
        """ Step 3 bound with A = 4 / log alpha instead of 8 / log alpha. """
        worst = self.worst
        if self.step != 3 or worst is None:
            return None
        return self._bound(worst.witness.w_bound - math.log(2) / math.log(self.g))

    @property
    def ok(self) -> bool:
        return self.bound is not None and not self.flagged

    def summary(self) -> dict:
        worst, smallest = self.worst, self.smallest_epsilon
        summary = {
            "step": self.step,
            "g": self.g,
            "M": str(self.M),
            "precision_bits": self.precision_bits,
            "ranges": dict(self.ranges),
            "instances": len(self.instances),
            "flagged": [r.label for r in self.flagged],
            "bound": self.bound,
            "length_bound": self.length_bound,
            "worst": None if worst is None else {
                "label": worst.label,
                "q_index": worst.witness.t,
                "q": str(worst.witness.q),
                "epsilon": worst.witness.epsilon,
                "w_bound": worst.witness.w_bound,
            },
            "smallest_epsilon": None if smallest is None else {
                "label": smallest.label,
                "q_index": smallest.witness.t,
                "epsilon": smallest.witness.epsilon,
            },
        }
        if self.step == 3:
            summary["m_limit"] = self.m_limit
            summary["bound_within_m_limit"] = self.bound_within_m_limit
            summary["bound_half_A"] = self.bound_half_A
        summary["table_bound"] = self.table_bound
        published = PUBLISHED_TABLES[self.step].get(self.g)
        if published is not None:
            summary["published"] = published._asdict()
        return summary

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for r in self.instances:
            w = r.witness
            rows.append({
                "g": self.g,
                "step": self.step,
                "product": r.product,
                "ell": r.ell,
                "m": r.m,
                "q_index": None if w is None else w.t,
                "epsilon": None if w is None else w.epsilon,
                "w_bound": None if w is None else w.w_bound,
                "flagged": w is None,
            })
        return pd.DataFrame(rows, columns=["g", "step", "product", "ell", "m",
                                           "q_index", "epsilon", "w_bound", "flagged"])


def _sweep(step, g, M, precision_bits, workers, tasks, ranges, m_limit=None):
    if not 2 <= g <= 36:
        raise ValueError("base must be in [2, 36], got %d" % g)
    if workers < 0:
        raise ValueError("workers must be non-negative, got %d" % workers)
    log.info("g=%d step %d: %d tasks", g, step, len(tasks))
    report = SweepReport(step, g, M, precision_bits, ranges, _run(tasks, workers), m_limit)
    for r in report.flagged:
        log.warning("g=%d step %d: %s has no witness", g, step, r.label)
    log.info("g=%d step %d: bound %s", g, step, report.bound)
    return report


def sweep_step1(g: int, M: int = M_DEFAULT, precision_bits: int = DEFAULT_PRECISION,
                workers: int = 1) -> SweepReport:
    """ Bound l, the shortest repdigit length, for every digit product. """
    tasks = [(g, precision_bits, M, 1, d, None, None) for d in digit_products(g)]
    return _sweep(1, g, M, precision_bits, workers, tasks, {})


def sweep_step2(g: int, M: int = M_DEFAULT, ell_max: int = 194,
                precision_bits: int = DEFAULT_PRECISION, workers: int = 1) -> SweepReport:
    """ Bound m for every digit product and 1 <= l <= ell_max. """
    if ell_max < 1:
        raise ValueError("ell_max must be positive, got %d" % ell_max)
    tasks = [(g, precision_bits, M, 2, d, ell_max, None) for d in digit_products(g)]
    return _sweep(2, g, M, precision_bits, workers, tasks, {"ell_max": ell_max})


def sweep_step3(g: int, M: int = M_DEFAULT, ell_max: int = 194, m_max: int = 200,
                precision_bits: int = DEFAULT_PRECISION, workers: int = 1,
                m_limit: int = M_LIMIT) -> SweepReport:
    """
    Bound n for every digit product, 1 <= l <= ell_max and l <= m <= m_max.

    mu is symmetric in l and m, so pairs with m < l add nothing.
    """
    if ell_max < 1 or m_max < 1:
        raise ValueError("ell_max and m_max must be positive")
    tasks = [(g, precision_bits, M, 3, d, ell, tuple(range(ell, m_max + 1)))
             for d in digit_products(g)
             for ell in range(1, min(ell_max, m_max) + 1)]
    return _sweep(3, g, M, precision_bits, workers, tasks,
                  {"ell_max": ell_max, "m_max": m_max}, m_limit)


class Certification(NamedTuple):
    ok: bool
    precision_bits: int
    convergents_identical: bool
    checked: Tuple[Tuple[str, int, int], ...]   # label, index at both precisions


def certify_sweep(report: SweepReport, precision_bits: Optional[int] = None,
                  full: bool = False) -> Certification:
    """
    Recompute the convergents and the witnesses of the worst and the smallest
    epsilon instances (every instance with `full`) at doubled precision.
    """
    bits = precision_bits or 2 * report.precision_bits
    base = reduction_context(report.g, report.precision_bits, report.M)
    doubled = ReductionContext(report.g, bits, report.M)
    identical = doubled.convergents == base.convergents

    if full:
        records = report.solved
    else:
        records = [r for r in {report.worst, report.smallest_epsilon} if r is not None]
        records.sort(key=InstanceRecord.sort_key)
    checked, ok = [], identical
    for r in records:
        try:
            again = doubled.witness(report.step, r.product, r.lengths, r.label)
        except (NoWitnessFound, PrecisionExhausted) as err:
            log.warning("certification of %s failed: %s", r.label, err)
            checked.append((r.label, r.witness.t, -1))
            ok = False
            continue
        checked.append((r.label, r.witness.t, again.t))
        ok = ok and again.t == r.witness.t
    if not ok:
        log.warning("g=%d step %d does not certify at %d bits", report.g, report.step, bits)
    return Certification(ok, bits, identical, tuple(checked))
