"""Finite-depth pressure, Lyapunov growth, cylinder measures and the
dimension bounds for level sets of slice dimension.

For a word x of length k over the sequence-adapted alphabet (3 letters at
0-levels, 4 at 1-levels) write A_x = A^{x_1}_{sigma_1} ... A^{x_k}_{sigma_k}
and ||.|| for the entry sum.  The raw pressure at depth k is

    (1/k) log sum_x ||A_x||^q

and the normalized pressure divides by (n0(k) log 3 + n1(k) log 4) / k, so
that it equals 1 at q = 0 and tends to the carpet dimension at q = 1.

Everything exact (norms, their multiplicities, the q = 1 sum) is computed in
integers; logarithms are taken last.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .carpet import BASES, MoranSequence, carpet_dimension, log_scale, scale
from .errors import BudgetExceeded, InvalidDigit
from .matrices import build_matrix_semantic, family_lists, matmul, sum_matrix
from .slicing import Slope

DEFAULT_WORD_BUDGET = 2 * 10**7


@dataclass(frozen=True)
class NormSpectrum:
    """Distinct norms ||A_x|| over all words of length k and their multiplicities."""

    k: int
    norms: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def word_count(self) -> int:
        return sum(self.counts)

    def norm_sum(self) -> int:
        return sum(v * c for v, c in zip(self.norms, self.counts))


def _check_budget(sigma: MoranSequence, k: int, budget: int) -> None:
    words = scale(sigma, k)
    if words > budget:
        raise BudgetExceeded(f"{words} words at depth {k} exceeds the enumeration budget {budget}")


@lru_cache(maxsize=32)
def _spectrum(sigma: MoranSequence, slope: Slope, k: int) -> NormSpectrum:
    hist = kernels.norm_histogram(family_lists(slope), sigma.tags(k))
    items = sorted(hist.items())
    return NormSpectrum(k, tuple(v for v, _ in items), tuple(c for _, c in items))


def norm_spectrum(sigma: MoranSequence, slope: Slope, k: int, budget: int = DEFAULT_WORD_BUDGET) -> NormSpectrum:
    _check_budget(sigma, k, budget)
    return _spectrum(sigma, slope, k)


@lru_cache(maxsize=32)
def _log_terms(spectrum: NormSpectrum) -> tuple[np.ndarray, np.ndarray]:
    lv = np.array([math.log(v) for v in spectrum.norms])
    lc = np.array([math.log(c) for c in spectrum.counts])
    return lv, lc


def log_partition(q: float, spectrum: NormSpectrum) -> float:
    """log sum_x ||A_x||^q, stable log-sum-exp in a fixed order."""
    lv, lc = _log_terms(spectrum)
    t = lc + q * lv
    m = float(t.max())
    return m + math.log(math.fsum(np.exp(t - m)))


def fast_norm_sum(sigma: MoranSequence, slope: Slope, k: int) -> int:
    """sum_x ||A_x|| as the entry sum of prod_i (sum_j A^j_{sigma_i}); exact, any k."""
    n = slope.order
    P = [[int(r == c) for c in range(n)] for r in range(n)]
    S = (sum_matrix(0, slope), sum_matrix(1, slope))
    for t in sigma.tags(k):
        P = matmul(P, S[t])
    return sum(map(sum, P))


def enumerated_norm_sum(sigma: MoranSequence, slope: Slope, k: int, budget: int = DEFAULT_WORD_BUDGET) -> int:
    return norm_spectrum(sigma, slope, k, budget).norm_sum()


def pressure_estimate(q: float, sigma: MoranSequence, slope: Slope, k: int,
                      budget: int = DEFAULT_WORD_BUDGET) -> tuple[float, float]:
    """(raw, normalized) pressure at depth k.

    q = 0 uses the word-count identity and returns normalized 1.0 exactly;
    q = 1 uses linearity of the entry sum and has no depth limit.  Other q
    enumerate all words (subject to ``budget``).
    """
    if k < 1:
        raise ValueError("depth k must be at least 1")
    ls = log_scale(sigma, k)
    if q == 0:
        return ls / k, 1.0
    if q == 1:
        logz = math.log(fast_norm_sum(sigma, slope, k))
    else:
        logz = log_partition(q, norm_spectrum(sigma, slope, k, budget))
    return logz / k, logz / ls


@dataclass(frozen=True)
class PressureCurve:
    qs: tuple[float, ...]
    k: int
    raw: tuple[float, ...]
    normalized: tuple[float, ...]

    def rows(self):
        return [{"q": q, "k": self.k, "raw": r, "normalized": p}
                for q, r, p in zip(self.qs, self.raw, self.normalized)]


def pressure_curve(qs: Iterable[float], sigma: MoranSequence, slope: Slope, k: int,
                   budget: int = DEFAULT_WORD_BUDGET) -> PressureCurve:
    qs = tuple(float(q) for q in qs)
    vals = [pressure_estimate(q, sigma, slope, k, budget) for q in qs]
    return PressureCurve(qs, k, tuple(v[0] for v in vals), tuple(v[1] for v in vals))


def _word_matrix(word: Sequence[int], sigma: MoranSequence, slope: Slope) -> list[list[int]]:
    n = slope.order
    P = [[int(r == c) for c in range(n)] for r in range(n)]
    for i, x in enumerate(word, start=1):
        t = sigma.tag(i)
        if not 0 <= x < BASES[t]:
            raise InvalidDigit(f"symbol {x} at position {i} not in alphabet of size {BASES[t]}")
        P = matmul(P, build_matrix_semantic(t, x, slope).entries)
    return P


def word_norm(word: Sequence[int], sigma: MoranSequence, slope: Slope) -> int:
    return sum(map(sum, _word_matrix(word, sigma, slope)))


def lyapunov_estimate(word: Sequence[int], sigma: MoranSequence, slope: Slope, k: int) -> float:
    """(1/k) log ||A_{x_1 ... x_k}|| for the length-k prefix of ``word``."""
    if k < 1 or len(word) < k:
        raise ValueError(f"need a prefix of length k={k} >= 1, got {len(word)} symbols")
    return math.log(word_norm(word[:k], sigma, slope)) / k


def cylinder_measure(word: Sequence[int], q: float, sigma: MoranSequence, slope: Slope,
                     budget: int = DEFAULT_WORD_BUDGET) -> float:
    """||A_w||^q / sum_{|x|=|w|} ||A_x||^q."""
    n = len(word)
    if q == 0:
        word_norm(word, sigma, slope)  # validates symbols
        return 1.0 / scale(sigma, n)
    if n == 0:
        return 1.0
    spectrum = norm_spectrum(sigma, slope, n, budget)
    return math.exp(q * math.log(word_norm(word, sigma, slope)) - log_partition(q, spectrum))


def measure_total(q: float, sigma: MoranSequence, slope: Slope, n: int, budget: int = DEFAULT_WORD_BUDGET) -> float:
    """Sum of cylinder weights over all words of length n, from the norm spectrum."""
    spectrum = norm_spectrum(sigma, slope, n, budget)
    logz = log_partition(q, spectrum)
    lv, lc = _log_terms(spectrum)
    return math.fsum(np.exp(lc + q * lv - logz))


def spectrum_upper_bound(alpha: float, sigma: MoranSequence, slope: Slope, k: int,
                         q_grid: Sequence[float], budget: int = DEFAULT_WORD_BUDGET) -> tuple[float, float]:
    """min over the grid of -q*alpha + normalized pressure; returns (bound, minimizing q).

    Bounds the Hausdorff dimension of the intercepts whose slice has box
    dimension alpha, assuming that box dimension exists.
    """
    if not q_grid:
        raise ValueError("q grid must be nonempty")
    best = None
    for q in q_grid:
        v = -q * alpha + pressure_estimate(q, sigma, slope, k, budget)[1]
        if best is None or v < best[0]:
            best = (v, float(q))
    return best


CHORDS = ("limit", "finite")


def chord_endpoint(sigma: MoranSequence, slope: Slope, k: int, chord: str = "limit") -> float:
    """Value s of the chord 1 + (s-1) q at q = 1.

    ``limit`` takes the carpet dimension; ``finite`` takes the depth-k
    normalized pressure at q = 1, which overshoots it by O(1/k).
    """
    if chord == "limit":
        return carpet_dimension(sigma)
    if chord == "finite":
        return pressure_estimate(1, sigma, slope, k)[1]
    raise ValueError(f"chord must be one of {CHORDS}, got {chord!r}")


def witness_margins(sigma: MoranSequence, slope: Slope, k: int, q_grid: Sequence[float],
                    budget: int = DEFAULT_WORD_BUDGET, chord: str = "limit") -> list[tuple[float, float]]:
    """[(q, normalized pressure - ((s-1) q + 1))], s from :func:`chord_endpoint`."""
    if any(not 0 <= q <= 1 for q in q_grid):
        raise ValueError("witness grid must lie in [0, 1]")
    s = chord_endpoint(sigma, slope, k, chord)
    return [(float(q), pressure_estimate(q, sigma, slope, k, budget)[1] - ((s - 1) * q + 1)) for q in q_grid]


def concavity_witness(sigma: MoranSequence, slope: Slope, k: int, q_grid: Sequence[float],
                      budget: int = DEFAULT_WORD_BUDGET, chord: str = "limit") -> tuple[float, float] | None:
    """Grid point where the normalized pressure falls below the chord 1 + (s-1) q.

    Returns (q, margin) with the most negative margin, or None.
    """
    margins = witness_margins(sigma, slope, k, q_grid, budget, chord)
    q, m = min(margins, key=lambda t: t[1])
    return (q, m) if m < 0 else None
