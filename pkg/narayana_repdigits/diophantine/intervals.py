"""
Certified real arithmetic on top of the mpmath interval context.

All enclosures are `iv.mpf` intervals; every helper here either returns an
interval that contains the exact value or raises `PrecisionExhausted` when
the enclosure is too wide to take a decision.
"""
import math
from contextlib import contextmanager
from fractions import Fraction
from typing import Tuple

from mpmath import iv, mp


class PrecisionExhausted(ArithmeticError):
    """ Interval enclosure too wide to decide; retry at higher precision. """


@contextmanager
def interval_precision(bits: int):
    """ Temporarily set the working precision of the interval context. """
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def endpoints(x) -> Tuple[mp.mpf, mp.mpf]:
    """ Exact lower and upper endpoints of an interval (no rounding). """
    x = iv.convert(x)
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


def ball(mid, rad):
    """ Outward rounded enclosure of [mid - rad, mid + rad]. """
    rad = abs(mp.mpf(rad))
    return iv.mpf(mid) + iv.mpf([-rad, rad])


def radius(x) -> mp.mpf:
    """ Half width of `x`, rounded up. """
    _, width = endpoints(iv.convert(x).delta)
    return mp.ldexp(width, -1)


def midpoint(x) -> mp.mpf:
    lo, hi = endpoints(x)
    return mp.ldexp(mp.fadd(lo, hi, exact=True), -1)


def to_fraction(v) -> Fraction:
    """
    Exact rational value of a finite binary float.

    `mpf` values keep every bit of their mantissa whatever the global
    precision; Python numbers are converted exactly.
    """
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError("cannot convert %s to a fraction" % v)
        return Fraction(v)
    raw = getattr(v, "_mpf_", None)
    if raw is None:
        raw = mp.mpf(v)._mpf_
    if not mp.isfinite(mp.make_mpf(raw)):
        raise ValueError("cannot convert %s to a fraction" % v)
    sign, man, exp, _ = raw
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def fraction_endpoints(x) -> Tuple[Fraction, Fraction]:
    lo, hi = endpoints(x)
    return to_fraction(lo), to_fraction(hi)


def certainly_positive(x) -> bool:
    lo, _ = endpoints(x)
    return lo > 0


def certainly_negative(x) -> bool:
    _, hi = endpoints(x)
    return hi < 0


def certainly_less(x, y) -> bool:
    """ True only when every point of `x` lies below every point of `y`. """
    _, x_hi = endpoints(x)
    y_lo, _ = endpoints(y)
    return x_hi < y_lo


def certainly_less_equal(x, y) -> bool:
    _, x_hi = endpoints(x)
    y_lo, _ = endpoints(y)
    return x_hi <= y_lo


def upper(x) -> float:
    """ Upper endpoint as a float, for reports only. """
    return float(endpoints(x)[1])


def lower(x) -> float:
    return float(endpoints(x)[0])


def nearest_int_distance(x):
    """
    Enclosure of ||x||, the distance from x to the nearest integer.

    The whole interval must lie in one window [n - 1/2, n + 1/2], otherwise
    the nearest integer itself is undetermined.
    """
    lo, hi = fraction_endpoints(x)
    n = math.floor((lo + hi) / 2 + Fraction(1, 2))
    if lo < n - Fraction(1, 2) or hi > n + Fraction(1, 2):
        raise PrecisionExhausted("nearest integer of [%.15g, %.15g] is undetermined"
                                 % (float(lo), float(hi)))
    return abs(iv.convert(x) - n)
