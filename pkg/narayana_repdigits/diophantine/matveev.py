"""
Absolute bounds from linear forms in three logarithms.

The chain runs through three linear forms built from the Binet formula,

    Gamma_1: N_k = d1 d2 d3 (g^l - 1)(g^m - 1)(g^n - 1) / (g - 1)^3
             seen as (g - 1)^3 / (d1 d2 d3 a_N) * alpha^k * g^(-(l+m+n)) - 1
    Gamma_2: the same with the factor (g^l - 1) moved into eta_1
    Gamma_3: the same with (g^l - 1)(g^m - 1) moved into eta_1

each compared against Matveev's lower bound. The last stage leaves an
implicit inequality n < H log^3 n that is solved in closed form.

These are coarse bounds; they are evaluated in double-extended precision
(`np.longdouble`), not with certified intervals.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from narayana_repdigits.diophantine.algebraic import (
    MIN_PRECISION, HeightMode, compute_constants, height_aN
)

log = logging.getLogger(__name__)

# Constants as printed with the published derivation; recomputed values are
# compared against them with a relative slack of TOLERANCE.
DISPLAYED = {
    "stage1_constant": 5.6e13,
    "stage2_constant": 3.1e12,
    "stage3_constant": 9.31e12,
    "ell_coefficient": 4.5e14,
    "m_coefficient": 3.8e28,
    "n_implicit_coefficient": 3e42,
    "n_explicit_coefficient": 2.4e43,
    "n_theorem_coefficient": 5.91e49,
    "k_theorem_coefficient": 4.73e50,
    "log_h_constant": 95.6,
    "log_h_slope": 135.0,
}
TOLERANCE = 0.05

# Heights of eta_1 are bounded by PUBLISHED_KAPPA * log g in the published chain
PUBLISHED_KAPPA = 6

# Number of logarithms and degree of Q(alpha) in all three linear forms
FORM_LOGS = 3
FIELD_DEGREE = 3

# Exponent in the implicit inequality n < H (log n)^r of the last stage
IMPLICIT_POWER = 3

L = np.longdouble


@lru_cache(maxsize=None)
def log_alpha() -> np.longdouble:
    c = compute_constants(MIN_PRECISION)
    return L(mp.nstr(mp.log(c.alpha), 30))


@dataclass(frozen=True)
class LinearFormSpec:
    """ Inputs of Matveev's theorem for eta_1^b_1 ... eta_s^b_s - 1. """
    s: int
    degree: int
    A: Tuple[float, ...]
    B: float

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be positive, got %d" % self.s)
        if self.degree < 1:
            raise ValueError("degree must be positive, got %d" % self.degree)
        if len(self.A) != self.s:
            raise ValueError("expected %d values of A, got %d" % (self.s, len(self.A)))
        if any(a < 0.16 for a in self.A):
            raise ValueError("every A_i must be at least 0.16, got %s" % (self.A,))
        if self.B < 1:
            raise ValueError("B must be at least 1, got %s" % self.B)


def matveev_constant(s: int, degree: int) -> np.longdouble:
    """ 1.4 * 30^(s+3) * s^4.5 * D^2 * (1 + log D) """
    s, d = L(s), L(degree)
    return L("1.4") * L(30) ** (s + 3) * s ** L("4.5") * d ** 2 * (1 + np.log(d))


def matveev_rhs(spec: LinearFormSpec) -> np.longdouble:
    """ Lower bound on log |Lambda| for a non-zero linear form. """
    product = np.prod([L(a) for a in spec.A], dtype=L)
    return -matveev_constant(spec.s, spec.degree) * (1 + np.log(L(spec.B))) * product


def kappa(g: int, mode: HeightMode = HeightMode.PUBLISHED) -> np.longdouble:
    """
    h(eta_1) <= kappa * log g for the first linear form.

    In strict mode the height of (g - 1)^3 / (d1 d2 d3) is at most
    3 log(g - 1) and h(a_N) is the exact log(31) / 3.
    """
    if mode is HeightMode.PUBLISHED:
        return L(PUBLISHED_KAPPA)
    h = L(mp.nstr(height_aN(HeightMode.STRICT), 30)) + 3 * np.log(L(g - 1))
    return h / np.log(L(g))


def _check_base(g):
    if g < 2:
        raise ValueError("base must be at least 2, got %d" % g)


def _form_spec(g: int, n, height_factor) -> LinearFormSpec:
    log_g = np.log(L(g))
    return LinearFormSpec(
        s=FORM_LOGS, degree=FIELD_DEGREE,
        A=(FIELD_DEGREE * height_factor * log_g, log_alpha(), FIELD_DEGREE * log_g),
        B=k_bound_of_n(g, n),
    )


def stage_constants(g: int = 2, mode: HeightMode = HeightMode.PUBLISHED) -> Tuple[np.longdouble, ...]:
    """
    The three per-stage constants c_1, c_2, c_3 such that

        log|Gamma_1| > -c_1 (1 + log B) log^2 g
        log|Gamma_2| > -c_2 (1 + log B) log^2 g (3 kappa + 3 l)
        log|Gamma_3| > -c_3 (1 + log B) log^2 g (kappa + l + m)
    """
    base = matveev_constant(FORM_LOGS, FIELD_DEGREE) * FIELD_DEGREE ** 2 * log_alpha()
    return base * kappa(g, mode), base / 3, base


def k_bound_of_n(g: int, n) -> np.longdouble:
    """ k < 8 n log g """
    _check_base(g)
    return 8 * L(n) * np.log(L(g))


def small_case_k_bound(g: int, shift: int = 2) -> np.longdouble:
    """ k < shift + 3 log g / log alpha when all three repdigits are single digits. """
    _check_base(g)
    return shift + 3 * np.log(L(g)) / log_alpha()


def _matveev_bound(g, n, height_factor, upper_log):
    # log|Gamma| < upper_log - w log g  and  log|Gamma| > matveev_rhs
    spec = _form_spec(g, n, height_factor)
    return (upper_log - matveev_rhs(spec)) / np.log(L(g))


def derive_ell_bound(g: int, n, mode: HeightMode = HeightMode.PUBLISHED) -> np.longdouble:
    """ l from |Gamma_1| < 8 g^(-l). """
    _check_base(g)
    if n < 2:
        raise ValueError("n must be at least 2, got %s" % n)
    return _matveev_bound(g, n, kappa(g, mode), np.log(L(8)))


def derive_m_bound(g: int, n, ell_bound, mode: HeightMode = HeightMode.PUBLISHED) -> np.longdouble:
    """ m from |Gamma_2| < 4 g^(-m), with h(eta_1) < (kappa + l) log g. """
    _check_base(g)
    if n < 2:
        raise ValueError("n must be at least 2, got %s" % n)
    return _matveev_bound(g, n, kappa(g, mode) + L(ell_bound), np.log(L(4)))


def derive_n_stage(g: int, n, ell_bound, m_bound,
                   mode: HeightMode = HeightMode.PUBLISHED) -> np.longdouble:
    """ n from |Gamma_3| < 2 g^(1-n), with h(eta_1) < (kappa + l + m) log g. """
    _check_base(g)
    return 1 + _matveev_bound(g, n, kappa(g, mode) + L(ell_bound) + L(m_bound), np.log(L(2)))


def sanchez_luca_bound(r: int, H) -> np.longdouble:
    """
    If L < H (log L)^r with r >= 1 and H > (4 r^2)^r, then L < 2^r H (log H)^r.
    """
    H = L(H)
    if r < 1:
        raise ValueError("r must be at least 1, got %d" % r)
    if not H > L(4 * r * r) ** r:
        raise ValueError("H must exceed (4 r^2)^r = %d, got %s" % ((4 * r * r) ** r, H))
    return L(2) ** r * H * np.log(H) ** r


class ChainCoefficients(NamedTuple):
    """ Coefficients of the explicit bounds, independent of n. """
    ell: np.longdouble   # l < ell * log n * log^2 g
    m: np.longdouble     # m < m * log^2 n * log^4 g
    n: np.longdouble     # n < n * log^3 n * log^6 g


def chain_coefficients(g: int = 2, mode: HeightMode = HeightMode.PUBLISHED) -> ChainCoefficients:
    # 1 + log(8 n log g) < 8 log n absorbs the B term in every stage
    c1, c2, c3 = stage_constants(g, mode)
    k = kappa(g, mode)
    ell = 8 * c1
    m = 24 * c2 * (k + ell)
    n = 8 * c3 * (k + ell + m)
    return ChainCoefficients(ell, m, n)


def derive_n_bound(g: int, mode: HeightMode = HeightMode.PUBLISHED) -> Tuple[np.longdouble, np.longdouble]:
    """ Absolute (n_bound, k_bound) for base g. """
    _check_base(g)
    H = chain_coefficients(g, mode).n * np.log(L(g)) ** 6
    n_bound = sanchez_luca_bound(IMPLICIT_POWER, H)
    return n_bound, k_bound_of_n(g, n_bound)


class ConstantCheck(NamedTuple):
    name: str
    displayed: float
    recomputed: float

    @property
    def within_tolerance(self) -> bool:
        return self.recomputed <= self.displayed * (1 + TOLERANCE)


@dataclass
class BoundChainReport:
    g: int
    mode: HeightMode
    ell_bound: float
    m_bound: float
    n_bound: float
    k_bound: float
    intermediate: Dict[str, float] = field(default_factory=dict)
    checks: List[ConstantCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.within_tolerance for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "mode": self.mode.value,
            "ell_bound": self.ell_bound,
            "m_bound": self.m_bound,
            "n_bound": self.n_bound,
            "k_bound": self.k_bound,
            "intermediate": dict(self.intermediate),
            "checks": [
                {"name": c.name, "displayed": c.displayed, "recomputed": c.recomputed,
                 "within_tolerance": c.within_tolerance}
                for c in self.checks
            ],
            "ok": self.ok,
        }


def bound_chain(g: int, mode: HeightMode = HeightMode.PUBLISHED) -> BoundChainReport:
    """
    Run the full chain for base g and compare every intermediate constant with
    its displayed value.
    """
    _check_base(g)
    log_g = np.log(L(g))
    c1, c2, c3 = stage_constants(g, mode)
    coeff = chain_coefficients(g, mode)
    n_bound, k_bound = derive_n_bound(g, mode)
    ell_bound = derive_ell_bound(g, n_bound, mode)
    m_bound = derive_m_bound(g, n_bound, ell_bound, mode)
    # the third stage at n_bound must land back inside n_bound
    n_stage = derive_n_stage(g, n_bound, ell_bound, m_bound, mode)
    log_h = np.log(coeff.n * log_g ** 6)

    recomputed = [
        ("stage1_constant", c1),
        ("stage2_constant", c2),
        ("stage3_constant", c3),
        ("ell_coefficient", coeff.ell),
        ("m_coefficient", coeff.m),
        ("n_implicit_coefficient", coeff.n),
        ("n_explicit_coefficient", 2 ** IMPLICIT_POWER * coeff.n),
        ("n_theorem", n_bound),
        ("k_theorem", k_bound),
    ]
    theorem = {
        "n_theorem": DISPLAYED["n_theorem_coefficient"] * float(log_g ** 9),
        "k_theorem": DISPLAYED["k_theorem_coefficient"] * float(log_g ** 10),
    }
    checks = [ConstantCheck(name, theorem.get(name) or DISPLAYED[name], float(value))
              for name, value in recomputed]

    intermediate = {
        "kappa": float(kappa(g, mode)),
        "matveev_constant": float(matveev_constant(FORM_LOGS, FIELD_DEGREE)),
        "log_alpha": float(log_alpha()),
        "H": float(coeff.n * log_g ** 6),
        "log_H": float(log_h),
        "loglog_displayed_holds": bool(loglog_margin(g) > 0),
        "loglog_recomputed_holds": bool(
            DISPLAYED["log_h_slope"] * log_g - np.log(coeff.n) - 6 * np.log(log_g) > 0),
        "n_stage": float(n_stage),
        "n_stage_within_n_bound": bool(n_stage <= n_bound),
    }
    report = BoundChainReport(g, mode, float(ell_bound), float(m_bound), float(n_bound),
                              float(k_bound), intermediate, checks)
    for c in checks:
        if not c.within_tolerance:
            log.warning("g=%d: %s recomputed as %.4g, displayed %.4g",
                        g, c.name, c.recomputed, c.displayed)
    log.info("g=%d: n < %.3g, k < %.3g", g, report.n_bound, report.k_bound)
    return report


def loglog_margin(g, constant: Optional[float] = None):
    """ 135 log g - (95.6 + 6 log log g), elementwise over g. """
    constant = DISPLAYED["log_h_constant"] if constant is None else constant
    log_g = np.log(np.asarray(g, dtype=L))
    return DISPLAYED["log_h_slope"] * log_g - (constant + 6 * np.log(log_g))


def check_loglog_inequality(grid: Optional[Sequence[float]] = None,
                            constant: Optional[float] = None) -> Tuple[bool, float]:
    """
    Check 95.6 + 6 log log g < 135 log g on a grid of g in [2, 10^6].

    Returns whether it holds everywhere and the g with the smallest margin.
    """
    if grid is None:
        grid = np.concatenate([np.arange(2, 1001, dtype=L),
                               np.geomspace(1000, 1e6, 10000, dtype=L)])
    grid = np.asarray(grid, dtype=L)
    margin = loglog_margin(grid, constant)
    worst = int(np.argmin(margin))
    return bool(np.all(margin > 0)), float(grid[worst])


def reduction_box(bases: Iterable[int] = range(2, 11)) -> Tuple[int, int]:
    """
    Largest displayed (n, k) bounds over `bases`, rounded up to integers.

    The k bound is the M of the continued fraction reduction.
    """
    bases = list(bases)
    if not bases:
        raise ValueError("no bases given")
    n_max = k_max = 0
    for g in bases:
        _check_base(g)
        log_g = mp.log(g)
        n_max = max(n_max, int(mp.ceil(mp.mpf(DISPLAYED["n_theorem_coefficient"]) * log_g ** 9)))
        k_max = max(k_max, int(mp.ceil(mp.mpf(DISPLAYED["k_theorem_coefficient"]) * log_g ** 10)))
    return n_max, k_max
