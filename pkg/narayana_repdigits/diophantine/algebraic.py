"""
Characteristic roots of x^3 - x^2 - 1, the Binet coefficients of the
Narayana sequence and the logarithmic heights used by the bound engine.

    N_k = a_N * alpha^k + b_N * beta^k + c_N * gamma^k

with gamma and c_N the complex conjugates of beta and b_N.
"""
import enum
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Sequence

from mpmath import iv, mp

from narayana_repdigits.diophantine.intervals import (
    PrecisionExhausted, ball, certainly_negative, certainly_positive,
    endpoints, interval_precision, midpoint, radius
)

log = logging.getLogger(__name__)

MIN_PRECISION = 128

# Guard bits carried while the enclosures are formed
GUARD_BITS = 64

# x^3 - x^2 - 1 and the minimal polynomial 31x^3 - 3x - 1 of a_N
CHARACTERISTIC = (1, -1, 0, -1)
AN_MINIMAL = (31, 0, -3, -1)


class HeightMode(enum.Enum):
    """ Which bound on the height of a_N the linear forms use. """
    PUBLISHED = "published"  # h(a_N) < log(23) / 3 and h(eta_1) < 6 log g
    STRICT = "strict"        # h(a_N) = log(31) / 3 with the exact log(g - 1) term


@dataclass(frozen=True)
class CubicConstants:
    alpha: mp.mpf
    beta_re: mp.mpf
    beta_im: mp.mpf
    aN: mp.mpf
    bN_re: mp.mpf
    bN_im: mp.mpf
    precision_bits: int
    error_radius: mp.mpf


class ConstantIntervals(NamedTuple):
    alpha: iv.mpf
    beta: iv.mpc
    aN: iv.mpf
    bN: iv.mpc


def _phi(x):
    return x ** 3 - x ** 2 - 1


def _seed_alpha(bits):
    with mp.workprec(bits):
        roots = mp.polyroots(CHARACTERISTIC, maxsteps=200, extraprec=bits)
        real = [r for r in roots if abs(mp.im(r)) < mp.mpf(2) ** (-bits // 2)]
        return max(mp.re(r) for r in real)


def _certify_alpha(seed, bits):
    # phi is increasing on (2/3, inf), so a sign change brackets the root
    delta = mp.ldexp(1, -(bits - GUARD_BITS // 2))
    lo, hi = mp.fsub(seed, delta, exact=True), mp.fadd(seed, delta, exact=True)
    if not (certainly_negative(_phi(iv.mpf(lo))) and certainly_positive(_phi(iv.mpf(hi)))):
        raise PrecisionExhausted("could not bracket alpha at %d bits" % bits)
    return iv.mpf([lo, hi])


def _binet_coefficient(root):
    # residue of x / (x^3 - x^2 - 1) at the root, simplified with root^3 = root^2 + 1
    return root ** 2 / (root ** 3 + 2)


def _enclosures(alpha):
    beta_re = (1 - alpha) / 2
    # |beta|^2 = beta * gamma = 1 / alpha
    beta_im = iv.sqrt(1 / alpha - beta_re ** 2)
    beta = iv.mpc(beta_re, beta_im)
    return ConstantIntervals(alpha, beta, _binet_coefficient(alpha), _binet_coefficient(beta))


@lru_cache(maxsize=None)
def compute_constants(precision_bits: int) -> CubicConstants:
    """
    Certified constants of the Narayana recurrence.

    The dominant root is seeded with `mp.polyroots` and then bracketed by a
    sign change of x^3 - x^2 - 1 in interval arithmetic. Every other constant
    is derived from that bracket, so `error_radius` bounds the distance of
    each stored value from the exact one.
    """
    if precision_bits < MIN_PRECISION:
        raise ValueError("precision_bits must be at least %d, got %d"
                         % (MIN_PRECISION, precision_bits))
    bits = precision_bits + GUARD_BITS
    seed = _seed_alpha(bits)
    with interval_precision(bits):
        alpha = _certify_alpha(seed, bits)
        encl = _enclosures(alpha)
        parts = [encl.alpha, encl.beta.real, encl.beta.imag,
                 encl.aN, encl.bN.real, encl.bN.imag]
        mids = [midpoint(p) for p in parts]
        error_radius = max(radius(p) for p in parts)
    log.debug("constants at %d bits, error radius %s",
              precision_bits, mp.nstr(error_radius, 5))
    return CubicConstants(*mids, precision_bits=precision_bits,
                          error_radius=error_radius)


def constant_intervals(c: CubicConstants) -> ConstantIntervals:
    """ Enclosures (at the current `iv.prec`) of the stored constants. """
    r = c.error_radius
    return ConstantIntervals(
        alpha=ball(c.alpha, r),
        beta=iv.mpc(ball(c.beta_re, r), ball(c.beta_im, r)),
        aN=ball(c.aN, r),
        bN=iv.mpc(ball(c.bN_re, r), ball(c.bN_im, r)),
    )


def height_rational(p: int, q: int):
    """ Logarithmic height log max(|p|, q) of the reduced fraction p/q. """
    if q < 1:
        raise ValueError("denominator must be positive, got %d" % q)
    if gcd(abs(p), q) != 1:
        raise ValueError("%d/%d is not reduced" % (p, q))
    return mp.log(max(abs(p), q))


def height_alpha(c: CubicConstants):
    return mp.log(c.alpha) / 3


def height_polynomial(coefficients: Sequence[int]):
    """
    Logarithmic height of a root of an irreducible polynomial over Z,
    coefficients given from the leading one down:

        h = (log|a_0| + sum(log max(1, |root|))) / degree
    """
    coefficients = list(coefficients)
    if len(coefficients) < 2 or coefficients[0] == 0:
        raise ValueError("need a polynomial of degree at least one")
    degree = len(coefficients) - 1
    with mp.workdps(max(mp.dps, 30)):
        roots = mp.polyroots(coefficients, maxsteps=200, extraprec=60)
        total = mp.log(abs(coefficients[0]))
        total += mp.fsum(mp.log(max(1, abs(r))) for r in roots)
        return total / degree


def height_aN(mode: HeightMode = HeightMode.PUBLISHED):
    if mode is HeightMode.PUBLISHED:
        return mp.log(23) / 3
    return height_polynomial(AN_MINIMAL)


def conjugate_term_bound(c: CubicConstants, k_max: int = 1000):
    """
    Certified upper bound on max |b_N beta^k| over 1 <= k <= k_max.

    A value below one shows that the conjugate part of the Binet formula can
    never cancel the dominant term, which is what keeps the linear forms of
    the bound engine away from zero.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive, got %d" % k_max)
    with interval_precision(c.precision_bits):
        encl = constant_intervals(c)
        term = encl.bN
        best = mp.mpf(0)
        for _ in range(k_max):
            term = term * encl.beta
            _, hi = endpoints(abs(term))
            best = max(best, hi)
    if best >= 1:
        log.warning("conjugate term bound %s is not below one", mp.nstr(best, 8))
    return best
