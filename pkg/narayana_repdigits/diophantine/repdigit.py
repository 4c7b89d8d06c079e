"""
Repdigits d * (g^l - 1) / (g - 1) in base g, with exact integer arithmetic.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple


@dataclass(frozen=True, order=True)
class Repdigit:
    """ Compares and orders by (value, base); digit and length follow from those. """
    value: int
    digit: int = field(compare=False)
    length: int = field(compare=False)
    base: int

    def __str__(self):
        return str(self.digit) * self.length if self.base <= 10 \
            else "(%d)x%d" % (self.digit, self.length)


def _check_base(base: int):
    if base < 2:
        raise ValueError("base must be at least 2, got %d" % base)


def repunit(length: int, base: int) -> int:
    return (base ** length - 1) // (base - 1)


def make(digit: int, length: int, base: int) -> Repdigit:
    _check_base(base)
    if not 1 <= digit <= base - 1:
        raise ValueError("digit must be in [1, %d], got %d" % (base - 1, digit))
    if length < 1:
        raise ValueError("length must be positive, got %d" % length)
    return Repdigit(digit * repunit(length, base), digit, length, base)


def recognize(v: int, base: int) -> Optional[Tuple[int, int]]:
    """ (digit, length) if `v` is a repdigit in `base`, else None. """
    _check_base(base)
    if v < 1:
        raise ValueError("value must be positive, got %d" % v)
    digit = v % base
    if digit == 0:
        return None
    length = 0
    while v:
        v, r = divmod(v, base)
        if r != digit:
            return None
        length += 1
    return digit, length


def enumerate_repdigits(base: int, max_length: int) -> List[Repdigit]:
    """ All repdigits with at most `max_length` digits, by increasing value. """
    _check_base(base)
    if max_length < 1:
        raise ValueError("max_length must be positive, got %d" % max_length)
    return sorted(make(d, length, base)
                  for length in range(1, max_length + 1)
                  for d in range(1, base))
