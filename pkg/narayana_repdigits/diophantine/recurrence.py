"""
Exact Narayana numbers and certified checks of their growth.
"""
import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import pandas as pd
from mpmath import iv, mp

from narayana_repdigits.diophantine.algebraic import (
    MIN_PRECISION, CubicConstants, compute_constants, constant_intervals
)
from narayana_repdigits.diophantine.intervals import (
    PrecisionExhausted, certainly_less, endpoints, fraction_endpoints, interval_precision
)

log = logging.getLogger(__name__)

MAX_GROWTH_PRECISION = 4096

# Largest shift s tried when looking for alpha^(n - s) <= N_n
MAX_SHIFT = 8


class GrowthBoundWarning(Warning):
    pass


@dataclass(frozen=True)
class NarayanaTable:
    values: Tuple[int, ...]

    @property
    def k_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": range(len(self.values)),
                             "N_k": pd.Series(self.values, dtype=object)})

    def write_csv(self, path):
        self.to_frame().to_csv(path, index=False)


def narayana_upto(k_max: int) -> NarayanaTable:
    if k_max < 0:
        raise ValueError("k_max must be non-negative, got %d" % k_max)
    values = [0, 1, 1][:k_max + 1]
    for k in range(3, k_max + 1):
        values.append(values[k - 1] + values[k - 3])
    return NarayanaTable(tuple(values))


@dataclass(frozen=True)
class GrowthReport:
    """
    Outcome of checking alpha^(n-2) <= N_n <= alpha^(n-1) for 1 <= n <= k_max.

    `shift` is the smallest s >= 2 with alpha^(n-s) <= N_n over the whole
    range, i.e. the lower bound that does hold.
    """
    k_max: int
    lower_failures: Tuple[int, ...]
    upper_failures: Tuple[int, ...]
    shift: int
    precision_bits: int

    def __bool__(self):
        return not (self.lower_failures or self.upper_failures)


def _exact_endpoints(x):
    if isinstance(x, int):
        return Fraction(x), Fraction(x)
    return fraction_endpoints(x)


def _le(x, y) -> bool:
    """ Decide x <= y for enclosures, ints allowed on either side. """
    x_lo, x_hi = _exact_endpoints(x)
    y_lo, y_hi = _exact_endpoints(y)
    if x_hi <= y_lo:
        return True
    if x_lo > y_hi:
        return False
    raise PrecisionExhausted("comparison undecidable")


def _powers(alpha, lowest: int, highest: int) -> Dict[int, iv.mpf]:
    powers = {0: iv.mpf(1)}
    for e in range(1, highest + 1):
        powers[e] = powers[e - 1] * alpha
    inverse = 1 / alpha
    for e in range(-1, lowest - 1, -1):
        powers[e] = powers[e + 1] * inverse
    return powers


def _growth_at(k_max: int, bits: int) -> GrowthReport:
    c = compute_constants(bits)
    table = narayana_upto(k_max)
    with interval_precision(bits):
        alpha = constant_intervals(c).alpha
        powers = _powers(alpha, 1 - MAX_SHIFT, k_max)
        lower, upper, shift = [], [], 2
        for n in range(1, k_max + 1):
            value = iv.mpf(table[n])
            if not _le(powers[n - 2], value):
                lower.append(n)
            if not _le(value, powers[n - 1]):
                upper.append(n)
            s = shift
            while not _le(powers[n - s], value):
                s += 1
                if s > MAX_SHIFT:
                    raise ValueError("no lower growth bound with shift <= %d" % MAX_SHIFT)
            shift = s
    return GrowthReport(k_max, tuple(lower), tuple(upper), shift, bits)


def _failures(failures, shown: int = 5) -> str:
    """ "998 n (3, 4, 5, 6, 7, ...)" """
    if not failures:
        return "no n"
    head = ", ".join(str(n) for n in failures[:shown])
    return "%d n (%s%s)" % (len(failures), head, ", ..." if len(failures) > shown else "")


def verify_growth(k_max: int, c: Optional[CubicConstants] = None,
                  max_precision: int = MAX_GROWTH_PRECISION) -> GrowthReport:
    """
    Check the growth bounds with outward rounded enclosures.

    Undecidable comparisons double the precision up to `max_precision`. The
    returned report is true iff both bounds hold on the whole range.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive, got %d" % k_max)
    bits = c.precision_bits if c is not None else MIN_PRECISION
    while True:
        try:
            report = _growth_at(k_max, bits)
            break
        except PrecisionExhausted:
            if bits * 2 > max_precision:
                raise
            log.warning("growth check undecided at %d bits, retrying", bits)
            bits *= 2

    if not report:
        warnings.warn("growth bounds fail: lower for %s, upper for %s; "
                      "alpha^(n-%d) <= N_n holds for 1 <= n <= %d"
                      % (_failures(report.lower_failures), _failures(report.upper_failures),
                         report.shift, k_max),
                      GrowthBoundWarning)
    return report


def binet_residual(k: int, c: CubicConstants):
    """
    Upper bound on |N_k - a_N alpha^k| = |2 Re(b_N beta^k)|.

    The conjugate part is evaluated directly; the subtraction N_k - a_N alpha^k
    loses about k log2(alpha) bits and is only used as a consistency check.
    Raises `PrecisionExhausted` when the enclosure straddles alpha^(-k/2).
    """
    if k < 1:
        raise ValueError("k must be positive, got %d" % k)
    table = narayana_upto(k)
    with interval_precision(c.precision_bits):
        encl = constant_intervals(c)
        conjugate_part = 2 * (encl.bN * encl.beta ** k).real
        direct = table[k] - encl.aN * encl.alpha ** k
        if certainly_less(direct, conjugate_part) or certainly_less(conjugate_part, direct):
            raise ArithmeticError("Binet formula inconsistent at k=%d" % k)
        residual = abs(conjugate_part)
        bound = encl.alpha ** (iv.mpf(-k) / 2)
        if not (certainly_less(residual, bound) or certainly_less(bound, residual)):
            raise PrecisionExhausted("residual bound undecidable at k=%d" % k)
        _, hi = endpoints(residual)
    return hi


def k_bound_from_growth(n, g: int, shift: int = 3, c: Optional[CubicConstants] = None):
    """
    Bound on k from N_k = product of three repdigits of length <= n:
    alpha^(k - shift) <= N_k < g^(3n) gives k < shift + 3n log g / log alpha.
    """
    c = c or compute_constants(MIN_PRECISION)
    return shift + 3 * mp.mpf(n) * mp.log(g) / mp.log(c.alpha)
