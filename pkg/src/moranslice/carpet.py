"""Combinatorial skeleton of the Moran-type Sierpinski carpet.

Level ``i`` of the construction uses the base-3 system (8 maps) when the
controlling sequence has a 0 at position ``i`` and the base-4 system (12 maps)
when it has a 1.  Everything here is exact: cell corners are ``Fraction``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .errors import InvalidDigit, ParseError

Digit = tuple[int, int]

OMEGA_0: tuple[Digit, ...] = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2))
OMEGA_1: tuple[Digit, ...] = (
    (0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 3),
    (2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (3, 3),
)

BASES = (3, 4)
_OMEGA = (OMEGA_0, OMEGA_1)


def digit_set(level_tag: int) -> frozenset[Digit]:
    """Allowed digits (d1, d2) at a level of the given tag."""
    if level_tag not in (0, 1):
        raise InvalidDigit(f"level tag must be 0 or 1, got {level_tag!r}")
    return frozenset(_OMEGA[level_tag])


def digits_ordered(level_tag: int) -> tuple[Digit, ...]:
    return _OMEGA[level_tag]


def base(level_tag: int) -> int:
    return BASES[level_tag]


def check_digit(level_tag: int, d: Digit) -> None:
    if tuple(d) not in _OMEGA[level_tag]:
        raise InvalidDigit(f"digit {tuple(d)} not allowed at a level with tag {level_tag}")


_SIGMA_RE = re.compile(r"^([01]*)\(([01]+)\)$")


@dataclass(frozen=True)
class MoranSequence:
    """Eventually periodic 0/1 sequence: ``prefix`` then ``period`` forever."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period or set(self.period) - {"0", "1"} or set(self.prefix) - {"0", "1"}:
            raise ParseError(f"bad sequence prefix={self.prefix!r} period={self.period!r}")

    @classmethod
    def parse(cls, text: str) -> "MoranSequence":
        """Parse ``"110(0)"``-style strings (prefix, then parenthesised period)."""
        m = _SIGMA_RE.match(text.strip())
        if m is None:
            raise ParseError(f"sequence {text!r} must look like PREFIX(PERIOD), e.g. '(01)' or '110(0)'")
        return cls(m.group(1), m.group(2))

    def __str__(self):
        return f"{self.prefix}({self.period})"

    def tag(self, i: int) -> int:
        """The 1-based term sigma_i."""
        if i < 1:
            raise IndexError("sequence positions start at 1")
        if i <= len(self.prefix):
            return int(self.prefix[i - 1])
        return int(self.period[(i - len(self.prefix) - 1) % len(self.period)])

    def tags(self, k: int) -> tuple[int, ...]:
        return tuple(self.tag(i) for i in range(1, k + 1))

    def counts(self, k: int) -> tuple[int, int]:
        if k < 0:
            raise ValueError("k must be nonnegative")
        p = len(self.prefix)
        if k <= p:
            ones = self.prefix[:k].count("1")
            return k - ones, ones
        ones = self.prefix.count("1")
        full, rest = divmod(k - p, len(self.period))
        ones += full * self.period.count("1") + self.period[:rest].count("1")
        return k - ones, ones

    @cached_property
    def frequencies(self) -> tuple[Fraction, Fraction]:
        f1 = Fraction(self.period.count("1"), len(self.period))
        return 1 - f1, f1

    def is_purely_periodic(self) -> bool:
        return self.prefix == ""


def sigma_counts(sigma: MoranSequence, k: int) -> tuple[int, int]:
    return sigma.counts(k)


def scale(sigma: MoranSequence, k: int) -> int:
    """Inverse side length 3**n0(k) * 4**n1(k) of a level-k cell."""
    n0, n1 = sigma.counts(k)
    return 3**n0 * 4**n1


def log_scale(sigma: MoranSequence, k: int) -> float:
    n0, n1 = sigma.counts(k)
    return n0 * math.log(3) + n1 * math.log(4)


def dimension_ratio(c0, c1) -> float:
    """(c0 log 8 + c1 log 12) / (c0 log 3 + c1 log 4).

    Integer weights are reduced by their gcd first, so proportional inputs
    give bit-identical floats.
    """
    c0, c1 = Fraction(c0), Fraction(c1)
    if c0 < 0 or c1 < 0 or c0 + c1 == 0:
        raise ValueError("weights must be nonnegative and not both zero")
    den = math.lcm(c0.denominator, c1.denominator)
    i0, i1 = int(c0 * den), int(c1 * den)
    g = math.gcd(i0, i1)
    i0, i1 = i0 // g, i1 // g
    return (i0 * math.log(8) + i1 * math.log(12)) / (i0 * math.log(3) + i1 * math.log(4))


def carpet_dimension(sigma: MoranSequence) -> float:
    f0, f1 = sigma.frequencies
    return dimension_ratio(f0, f1)


@dataclass(frozen=True)
class Rect:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    @property
    def side(self) -> Fraction:
        return self.x_hi - self.x_lo

    def contains(self, other: "Rect") -> bool:
        return (self.x_lo <= other.x_lo and other.x_hi <= self.x_hi
                and self.y_lo <= other.y_lo and other.y_hi <= self.y_hi)


UNIT_SQUARE = Rect(Fraction(0), Fraction(1), Fraction(0), Fraction(1))


def cell_rect(word: Sequence[Digit], sigma: MoranSequence) -> Rect:
    """Image of the unit square under the composed contractions for ``word``.

    The outermost map belongs to the first letter, so the lower-left corner
    is sum_i d_i / (b_1 ... b_i) componentwise.
    """
    x = y = Fraction(0)
    side = Fraction(1)
    for i, d in enumerate(word, start=1):
        t = sigma.tag(i)
        check_digit(t, d)
        side /= BASES[t]
        x += d[0] * side
        y += d[1] * side
    return Rect(x, x + side, y, y + side)


def iter_words(sigma: MoranSequence, n: int) -> Iterator[tuple[Digit, ...]]:
    """All valid words of length n, lexicographic in the digit-set order."""
    return product(*(_OMEGA[t] for t in sigma.tags(n)))


def cell_count(sigma: MoranSequence, n: int) -> int:
    n0, n1 = sigma.counts(n)
    return 8**n0 * 12**n1
