"""
Exhaustive search for Narayana numbers that are a product of three repdigits.

For every k in the box, the repdigit divisors a <= b of N_k with
a^3 <= N_k and a b^2 <= N_k are enumerated and the cofactor c = N_k / (a b)
is tested for being a repdigit. Everything is exact integer arithmetic.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import pandas as pd

from narayana_repdigits.diophantine.recurrence import narayana_upto
from narayana_repdigits.diophantine.repdigit import (
    Repdigit, enumerate_repdigits, make, recognize
)

log = logging.getLogger(__name__)

DEFAULT_K_MAX = 11500
DEFAULT_LENGTHS = (194, 200, 205)

# Tasks handed to each worker cover this many indices
CHUNK = 500


@dataclass(frozen=True)
class SearchBox:
    g: int
    k_max: int = DEFAULT_K_MAX
    ell_max: int = DEFAULT_LENGTHS[0]
    m_max: int = DEFAULT_LENGTHS[1]
    n_max: int = DEFAULT_LENGTHS[2]
    digit_min: int = 1
    digit_max: Optional[int] = None

    def __post_init__(self):
        if self.g < 2:
            raise ValueError("base must be at least 2, got %d" % self.g)
        if self.k_max < 0:
            raise ValueError("k_max must be non-negative, got %d" % self.k_max)
        if min(self.ell_max, self.m_max, self.n_max) < 1:
            raise ValueError("length bounds must be positive")
        if self.digit_max is None:
            object.__setattr__(self, "digit_max", self.g - 1)
        if not 1 <= self.digit_min <= self.digit_max <= self.g - 1:
            raise ValueError("digit range [%d, %d] outside [1, %d]"
                             % (self.digit_min, self.digit_max, self.g - 1))

    @property
    def max_length(self) -> int:
        return max(self.ell_max, self.m_max, self.n_max)

    def lengths_admissible(self, lengths: Iterable[int]) -> bool:
        """ Sorted lengths l <= m <= n must satisfy the three bounds. """
        ell, m, n = sorted(lengths)
        return ell <= self.ell_max and m <= self.m_max and n <= self.n_max

    def digit_admissible(self, digit: int) -> bool:
        return self.digit_min <= digit <= self.digit_max


class SolutionRecord(NamedTuple):
    g: int
    k: int
    value: int
    factors: Tuple[Repdigit, Repdigit, Repdigit]

    @property
    def notation(self) -> str:
        """ [a,b,c]_g with each factor written in base g """
        return "[%s]_%d" % (",".join(str(f) for f in self.factors), self.g)

    @property
    def digits(self) -> str:
        return ",".join(str(f) for f in self.factors)

    def sort_key(self):
        return (self.k,) + tuple(f.value for f in self.factors)


def _repdigits(box: SearchBox) -> List[Repdigit]:
    return [r for r in enumerate_repdigits(box.g, box.max_length)
            if box.digit_admissible(r.digit)]


def _as_repdigit(value: int, box: SearchBox) -> Optional[Repdigit]:
    found = recognize(value, box.g)
    if found is None or not box.digit_admissible(found[0]) or found[1] > box.max_length:
        return None
    return make(found[0], found[1], box.g)


def _search_values(box: SearchBox, indexed_values: Sequence[Tuple[int, int]]) -> List[SolutionRecord]:
    repdigits = _repdigits(box)
    if not repdigits:
        return []
    cap = repdigits[-1].value ** 3
    records = []
    for k, v in indexed_values:
        if v < 1 or v > cap:
            continue
        for i, a in enumerate(repdigits):
            if a.value ** 3 > v:
                break
            if v % a.value:
                continue
            rest = v // a.value
            for b in repdigits[i:]:
                if b.value * b.value > rest:
                    break
                if rest % b.value:
                    continue
                c = _as_repdigit(rest // b.value, box)
                if c is None:
                    continue
                if box.lengths_admissible((a.length, b.length, c.length)):
                    records.append(SolutionRecord(box.g, k, v, (a, b, c)))
    return records


def _search_task(task) -> List[SolutionRecord]:
    box, chunk = task
    return _search_values(box, chunk)


def _check(records: Iterable[SolutionRecord]):
    # recompute every factor from (digit, length) and multiply again
    for r in records:
        product = 1
        for f in r.factors:
            product *= make(f.digit, f.length, f.base).value
        if product != r.value:
            raise ArithmeticError("record %s does not multiply to %d" % (r.notation, r.value))


def search(box: SearchBox, values: Optional[Sequence[int]] = None,
           workers: int = 1) -> List[SolutionRecord]:
    """
    All factorizations N_k = a b c into base-g repdigits inside `box`, with
    value(a) <= value(b) <= value(c), sorted by (k, a, b, c).

    `values` replaces the Narayana table (index k -> value) when given.
    """
    if workers < 0:
        raise ValueError("workers must be non-negative, got %d" % workers)
    if values is None:
        values = narayana_upto(box.k_max).values
    indexed = [(k, values[k]) for k in range(1, min(box.k_max, len(values) - 1) + 1)]
    chunks = [indexed[i:i + CHUNK] for i in range(0, len(indexed), CHUNK)]

    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(chunks) <= 1:
        found = [_search_values(box, chunk) for chunk in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            found = list(executor.map(_search_task, [(box, chunk) for chunk in chunks]))
    records = sorted((r for part in found for r in part), key=SolutionRecord.sort_key)
    _check(records)
    log.info("g=%d: %d factorizations for k <= %d", box.g, len(records), box.k_max)
    return records


def brute_force(box: SearchBox, values: Optional[Sequence[int]] = None) -> List[SolutionRecord]:
    """ Every product of three repdigits in the box, matched against the table. """
    if values is None:
        values = narayana_upto(box.k_max).values
    positions: Dict[int, List[int]] = {}
    for k in range(1, min(box.k_max, len(values) - 1) + 1):
        positions.setdefault(values[k], []).append(k)
    records = []
    for a, b, c in combinations_with_replacement(_repdigits(box), 3):
        product = a.value * b.value * c.value
        if product in positions and box.lengths_admissible((a.length, b.length, c.length)):
            records.extend(SolutionRecord(box.g, k, product, (a, b, c))
                           for k in positions[product])
    return sorted(records, key=SolutionRecord.sort_key)


_ALL = range(2, 11)

# Published factorizations, "for g = a, ..., b" ranges written out per base
_PUBLISHED_ROWS = [
    ((1, 2, 3), [("1,1,1", _ALL)]),
    ((4,), [("1,1,2", range(3, 11))]),
    ((5,), [("1,1,11", (2,)), ("1,1,3", range(4, 11))]),
    ((6,), [("1,1,11", (3,)), ("1,1,4", range(5, 11)), ("1,2,2", range(3, 11))]),
    ((7,), [("1,1,11", (5,)), ("1,2,3", range(4, 11)), ("1,1,6", range(7, 11))]),
    ((8,), [("1,11,11", (2,)), ("1,1,111", (3,)), ("1,1,11", (8,)), ("1,1,9", (10,)),
            ("1,3,3", range(4, 11))]),
    ((9,), [("1,1,111", (3,))]),
    ((11,), [("1,1,44", (6,)), ("1,2,22", (6,)), ("1,4,11", (6,)), ("2,2,11", (6,)),
             ("1,4,7", range(8, 11)), ("2,2,7", range(8, 11))]),
    ((13,), [("2,2,33", (4,)), ("2,3,22", (4,)), ("1,1,66", (9,)), ("1,2,33", (9,)),
             ("1,3,22", (9,)), ("1,6,11", (9,)), ("2,3,11", (9,)),
             ("2,5,6", range(7, 11)), ("3,4,5", range(6, 11))]),
    ((14,), [(f, (10,)) for f in ("1,1,88", "1,2,44", "1,4,22", "1,8,11", "2,2,22", "2,4,11")]),
    ((15,), [("1,1,333", (6,)), ("1,3,111", (6,))]),
    ((16,), [("1,11,111111", (2,)), ("1,3,333", (4,)), ("3,3,111", (4,)), ("3,3,33", (6,)),
             ("1,3,77", (8,)), ("1,7,33", (8,)), ("3,7,11", (8,)), ("3,7,9", (10,))]),
]


def _expand(rows) -> Dict[int, Dict[int, Set[str]]]:
    table = {g: {} for g in _ALL}
    for ks, entries in rows:
        for digits, bases in entries:
            for g in bases:
                for k in ks:
                    table[g].setdefault(k, set()).add(digits)
    return table


PUBLISHED_TABLE1 = _expand(_PUBLISHED_ROWS)

PUBLISHED_VALUES = frozenset({1, 2, 3, 4, 6, 9, 13, 28, 60, 88, 129, 189})

# 111 in base 3 is 13; the entry is listed again, correctly, under k = 9
KNOWN_ERRATA = frozenset({(3, 8, "1,1,111")})


class Discrepancy(NamedTuple):
    g: int
    k: int
    digits: str
    kind: str   # "missing": published, not found; "unexpected": found, not published
    known_erratum: bool


@dataclass
class Table1Report:
    bases: Tuple[int, ...]
    values: Tuple[int, ...]
    expected_values: Tuple[int, ...]
    discrepancies: List[Discrepancy] = field(default_factory=list)

    @property
    def values_match(self) -> bool:
        return self.values == self.expected_values

    @property
    def ok(self) -> bool:
        return self.values_match and all(d.known_erratum for d in self.discrepancies)

    def as_dict(self) -> dict:
        return {
            "bases": list(self.bases),
            "values": list(self.values),
            "expected_values": list(self.expected_values),
            "values_match": self.values_match,
            "discrepancies": [d._asdict() for d in self.discrepancies],
            "ok": self.ok,
        }


def _published_in_box(box: Optional[SearchBox], k: int, digits: str) -> bool:
    if box is None:
        return True
    factors = digits.split(",")
    return (k <= box.k_max
            and box.lengths_admissible(len(f) for f in factors)
            and all(box.digit_admissible(int(f[0], box.g)) for f in factors))


def verify_table1(results: Dict[int, List[SolutionRecord]],
                  boxes: Optional[Dict[int, SearchBox]] = None) -> Table1Report:
    """
    Compare search results per base with the published factorizations.

    With `boxes`, only published entries the box of their base can reach
    are expected. Discrepancies are collected, not raised; the distinct
    values are compared with the published set when every base 2..10 was
    searched in full.
    """
    table = narayana_upto(max(max(ks) for ks, _ in _PUBLISHED_ROWS))
    bases = tuple(sorted(results))
    boxes = boxes or {}
    discrepancies = []
    expected_values = set()
    for g in bases:
        found: Dict[int, Set[str]] = {}
        for r in results[g]:
            found.setdefault(r.k, set()).add(r.digits)
        published: Dict[int, Set[str]] = {}
        for k, entries in PUBLISHED_TABLE1.get(g, {}).items():
            kept = {d for d in entries if _published_in_box(boxes.get(g), k, d)}
            if kept:
                published[k] = kept
            if kept - {d for gg, kk, d in KNOWN_ERRATA if (gg, kk) == (g, k)}:
                expected_values.add(table[k])
        for k in sorted(set(found) | set(published)):
            for digits in sorted(published.get(k, set()) - found.get(k, set())):
                discrepancies.append(Discrepancy(g, k, digits, "missing",
                                                 (g, k, digits) in KNOWN_ERRATA))
            for digits in sorted(found.get(k, set()) - published.get(k, set())):
                discrepancies.append(Discrepancy(g, k, digits, "unexpected",
                                                 (g, k, digits) in KNOWN_ERRATA))

    values = tuple(sorted({r.value for g in bases for r in results[g]}))
    if set(_ALL) <= set(bases) and not boxes:
        expected = tuple(sorted(PUBLISHED_VALUES))
    else:
        expected = tuple(sorted(expected_values))
    report = Table1Report(bases, values, expected, discrepancies)
    for d in discrepancies:
        if d.known_erratum:
            log.info("g=%d k=%d: published [%s] is a known erratum (%s)", d.g, d.k, d.digits, d.kind)
        else:
            log.warning("g=%d k=%d: [%s] %s", d.g, d.k, d.digits, d.kind)
    return report


def records_frame(records: Iterable[SolutionRecord]) -> pd.DataFrame:
    rows = [{
        "g": r.g, "k": r.k, "N_k": r.value,
        "a": r.factors[0].value, "b": r.factors[1].value, "c": r.factors[2].value,
        "lengths": "%d,%d,%d" % tuple(f.length for f in r.factors),
        "notation": r.notation,
    } for r in records]
    return pd.DataFrame(rows, columns=["g", "k", "N_k", "a", "b", "c", "lengths", "notation"])
