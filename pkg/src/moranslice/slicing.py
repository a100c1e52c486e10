"""Lines L_a : y = (M/N) x + a, the intercept interval J = [-M/N, 1], and
intercept dynamics under the interval maps T_d.

Two independent ways of counting level-n cells met by L_a live here:
:func:`count_oracle` (geometric, cell squares against the line) and
:func:`count_via_interval_maps` (pull the intercept through T_d and keep
the words whose image stays in J).
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .carpet import BASES, Digit, MoranSequence, Rect, cell_rect, check_digit, digits_ordered, scale
from .errors import BudgetExceeded, InvalidDigit, OutOfRange, ParseError

_RAT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")

DEFAULT_CELL_BUDGET = 10**7


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer, optional leading minus."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RAT_RE.match(str(text))
    if m is None:
        raise ParseError(f"not a rational literal: {text!r} (expected 'p/q' or an integer)")
    den = int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Slope:
    """Slope M/N in lowest terms, M >= 0, N >= 1."""

    M: int
    N: int

    def __post_init__(self):
        if self.N < 1 or self.M < 0:
            raise ParseError(f"slope must satisfy M >= 0, N >= 1; got {self.M}/{self.N}")
        if math.gcd(self.M, self.N) != 1:
            raise ParseError(f"slope not in lowest terms: {self.M}/{self.N}")

    @classmethod
    def parse(cls, text: str) -> "Slope":
        m = _RAT_RE.match(str(text))
        if m is None or m.group(1).startswith("-"):
            raise ParseError(f"slope must be 'M/N' with M >= 0, N >= 1; got {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 1))

    def __str__(self):
        return f"{self.M}/{self.N}"

    @property
    def value(self) -> Fraction:
        return Fraction(self.M, self.N)

    @property
    def order(self) -> int:
        return self.N + self.M

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return Fraction(-self.M, self.N), Fraction(1)

    def contains(self, a) -> bool:
        lo, hi = self.interval
        return lo <= a <= hi

    def lattice_interval(self, i: int) -> tuple[Fraction, Fraction]:
        """Endpoints of I_i = ((-M-1+i)/N, (-M+i)/N), 1-based."""
        return Fraction(-self.M - 1 + i, self.N), Fraction(-self.M + i, self.N)


def _check_intercept(a, slope: Slope) -> Fraction:
    a = Fraction(a)
    if not slope.contains(a):
        lo, hi = slope.interval
        raise OutOfRange(f"intercept {format_rational(a)} outside [{format_rational(lo)}, {format_rational(hi)}]")
    return a


def interval_map_forward(level_tag: int, d: Digit, x, slope: Slope) -> Fraction:
    check_digit(level_tag, d)
    return BASES[level_tag] * Fraction(x) + d[0] * slope.value - d[1]


def interval_map_inverse(level_tag: int, d: Digit, x, slope: Slope) -> Fraction:
    check_digit(level_tag, d)
    return (Fraction(x) - d[0] * slope.value + d[1]) / BASES[level_tag]


@dataclass(frozen=True)
class GreedyExpansion:
    """Containing index ``k`` (1-based) and sequence-adapted digits of an intercept."""

    k: int
    digits: tuple[int, ...]
    boundary_flag: bool

    def __str__(self):
        return f"k={self.k} digits={''.join(map(str, self.digits))}"


def greedy_expand(a, sigma: MoranSequence, slope: Slope, depth: int) -> GreedyExpansion:
    """Greedy mixed-radix digits of ``a`` within its lattice interval.

    At level i the digit is taken from {0, .., b_i - 1} where b_i is 3 or 4
    according to sigma_i.  ``a = 1`` is assigned the last interval with
    all-maximal digits.  The flag is set when ``a`` admits a terminating
    expansion by ``depth`` (equivalently N * a * 3^n0 * 4^n1 is an integer),
    i.e. some local intercept hits a subinterval endpoint.
    """
    a = _check_intercept(a, slope)
    M, N = slope.M, slope.N
    if a == 1:
        k = N + M
    else:
        k = math.floor(N * a) + M + 1
    r = N * a - (k - M - 1)
    digits = []
    for t in sigma.tags(depth):
        b = BASES[t]
        r *= b
        xi = min(math.floor(r), b - 1)
        digits.append(xi)
        r -= xi
    flag = (N * a * scale(sigma, depth)).denominator == 1
    return GreedyExpansion(k, tuple(digits), flag)


def expansion_value(exp: GreedyExpansion, sigma: MoranSequence, slope: Slope) -> Fraction:
    """Finite sum (-M-1+k)/N + (1/N) sum_i xi_i / (b_1 ... b_i)."""
    total = Fraction(0)
    w = Fraction(1)
    for t, xi in zip(sigma.tags(len(exp.digits)), exp.digits):
        b = BASES[t]
        if not 0 <= xi < b:
            raise InvalidDigit(f"expansion digit {xi} not below base {b}")
        w /= b
        total += xi * w
    return Fraction(-slope.M - 1 + exp.k, slope.N) + total / slope.N


def truncation_bound(sigma: MoranSequence, slope: Slope, n: int) -> Fraction:
    return Fraction(1, slope.N * scale(sigma, n))


@dataclass(frozen=True)
class GammaLattice:
    points: tuple[Fraction, ...]
    i0: int


def gamma_lattice(a, slope: Slope) -> GammaLattice:
    """The N+M points a + i/N in J, sorted; ``i0`` is the 1-based rank of a.

    Point i lies in the closure of I_i.  When a is itself a lattice point
    (a multiple of 1/N) the closed interval holds N+M+1 such points; the
    half-open convention of the greedy index is used to keep N+M of them.
    """
    a = _check_intercept(a, slope)
    M, N = slope.M, slope.N
    i0 = N + M if a == 1 else math.floor(N * a) + M + 1
    pts = tuple(a + Fraction(i - i0, N) for i in range(1, N + M + 1))
    return GammaLattice(pts, i0)


def line_cell_intersects(rect: Rect, slope: Slope, a) -> bool:
    """Closed square against closed line; touching counts."""
    s = slope.value
    return rect.y_lo - s * rect.x_hi <= a <= rect.y_hi - s * rect.x_lo


def count_oracle_sequence(a, sigma: MoranSequence, slope: Slope, max_depth: int,
                          cell_budget: int = DEFAULT_CELL_BUDGET, backend: str | None = None) -> list[int]:
    """[N_0, ..., N_d] by pruned descent; d < max_depth if the budget ran out."""
    a = _check_intercept(a, slope)
    return kernels.oracle_level_counts(a.numerator, a.denominator, slope.M, slope.N,
                                       sigma.tags(max_depth), cell_budget, backend=backend)


def count_oracle(a, sigma: MoranSequence, slope: Slope, n: int,
                 cell_budget: int = DEFAULT_CELL_BUDGET) -> int:
    """Number of level-n cells whose closed square meets L_a."""
    counts = count_oracle_sequence(a, sigma, slope, n, cell_budget)
    if len(counts) <= n:
        raise BudgetExceeded(f"oracle budget of {cell_budget} cell tests exhausted at depth {len(counts)}")
    return counts[n]


def count_via_interval_maps(a, sigma: MoranSequence, slope: Slope, n: int) -> int:
    """Number of words w of length n with T_w(a) in the closed interval J.

    Words sharing a local intercept are merged, so the state is a multiset of
    at most N+M+1 rationals per level.
    """
    a = _check_intercept(a, slope)
    lo, hi = slope.interval
    state = Counter({a: 1})
    for t in sigma.tags(n):
        nxt = Counter()
        for x, mult in state.items():
            for d in digits_ordered(t):
                y = BASES[t] * x + d[0] * slope.value - d[1]
                if lo <= y <= hi:
                    nxt[y] += mult
        state = nxt
    return sum(state.values())


def clip_line(slope: Slope, a) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None:
    """Endpoints of L_a inside the unit square, or None if they miss."""
    a = Fraction(a)
    s = slope.value
    if s == 0:
        if 0 <= a <= 1:
            return (Fraction(0), a), (Fraction(1), a)
        return None
    x0 = max(Fraction(0), -a / s)
    x1 = min(Fraction(1), (1 - a) / s)
    if x0 > x1:
        return None
    return (x0, s * x0 + a), (x1, s * x1 + a)


def words_meeting_line(a, sigma: MoranSequence, slope: Slope, n: int) -> Sequence[tuple[Digit, ...]]:
    """Explicit list of level-n words whose cell meets L_a (small n only)."""
    out = [()]
    for t in sigma.tags(n):
        out = [w + (d,) for w in out for d in digits_ordered(t)
               if line_cell_intersects(cell_rect(w + (d,), sigma), slope, a)]
    return out
