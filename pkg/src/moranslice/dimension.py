"""Finite-depth box-dimension estimates for slices, and the harness that
checks matrix-product counts against the geometric oracle.

The quantities of interest are limsup/liminf of log N_k / log(3^n0 4^n1);
we only ever report the finite sequence and windowed max/min over its tail.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .carpet import MoranSequence, cell_count, dimension_ratio, log_scale
from .errors import OutOfRange, VerificationFailure, WindowTooLarge
from .matrices import matrix_count_sequence
from .slicing import DEFAULT_CELL_BUDGET, Slope, count_oracle_sequence, format_rational, greedy_expand

METHODS = ("matrix", "oracle", "both")


@dataclass
class DimensionEstimate:
    depths: list[int]
    counts: list[int]
    estimates: list[float]
    window_max: float
    window_min: float
    oracle_counts: list[int] | None = None
    boundary: bool = False
    capped: bool = False


def estimate_ratio(count: int, sigma: MoranSequence, k: int) -> float:
    if count <= 0:
        return float("-inf")
    return math.log(count) / log_scale(sigma, k)


def tail_bounds(est: DimensionEstimate, window: int) -> tuple[float, float]:
    """(min, max) of the estimates over the last ``window`` depths."""
    if window < 1 or window > len(est.estimates):
        raise WindowTooLarge(f"window {window} not in 1..{len(est.estimates)}")
    tail = est.estimates[-window:]
    return min(tail), max(tail)


def box_dim_sequence(a, sigma: MoranSequence, slope: Slope, max_depth: int, method: str = "matrix",
                     window: int = 5, cell_budget: int = DEFAULT_CELL_BUDGET) -> DimensionEstimate:
    """Counts N_k and estimates for k = 1..max_depth.

    ``method="oracle"`` may stop early when the cell budget runs out
    (``capped`` is then set).  With ``method="both"`` the matrix counts are
    reported and compared against the oracle at every depth the oracle
    reached; a disagreement at a non-boundary intercept raises
    :class:`VerificationFailure`.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    oracle = None
    boundary = greedy_expand(a, sigma, slope, max_depth).boundary_flag
    if method in ("matrix", "both"):
        counts, boundary = matrix_count_sequence(a, sigma, slope, max_depth)
    if method in ("oracle", "both"):
        oracle = count_oracle_sequence(a, sigma, slope, max_depth, cell_budget)
    if method == "oracle":
        counts = oracle
    if method == "both" and not boundary:
        for k, (m, o) in enumerate(zip(counts, oracle)):
            if m != o:
                raise VerificationFailure(k, m, o, {"a": format_rational(Fraction(a)), "sigma": str(sigma),
                                                    "slope": str(slope)})
    depths = list(range(1, len(counts)))
    counts = counts[1:]
    ests = [estimate_ratio(c, sigma, k) for k, c in zip(depths, counts)]
    capped = len(depths) < max_depth
    if not ests:
        return DimensionEstimate([], [], [], float("nan"), float("nan"), oracle, boundary, capped)
    w = min(window, len(ests))
    tail = ests[-w:]
    return DimensionEstimate(depths, counts, ests, max(tail), min(tail),
                             oracle[1:] if oracle is not None else None, boundary, capped)


def carpet_control_sequence(sigma: MoranSequence, max_depth: int) -> list[float]:
    """log(cell count) / log(inverse side) at k = 1..max_depth (no line)."""
    return [math.log(cell_count(sigma, k)) / log_scale(sigma, k) for k in range(1, max_depth + 1)]


def carpet_control_exact(sigma: MoranSequence, k: int) -> float:
    """Same ratio, evaluated through gcd-reduced level counts.

    At depths where n0(k)/k and n1(k)/k equal the limiting frequencies this
    is bit-identical to :func:`carpet.carpet_dimension`.
    """
    return dimension_ratio(*sigma.counts(k))


@dataclass
class VerificationSuite:
    slopes: Sequence[Slope]
    sigmas: Sequence[MoranSequence]
    seed: int = 0
    samples: int = 25
    depth: int = 7
    intercepts: Sequence[Fraction] = ()
    max_denominator: int = 200
    cell_budget: int = DEFAULT_CELL_BUDGET


@dataclass
class VerificationReport:
    records: list[dict] = field(default_factory=list)
    checked: int = 0
    skipped: int = 0
    mismatches: int = 0

    @property
    def passed(self) -> bool:
        return self.mismatches == 0


def sample_intercepts(slope: Slope, rng: random.Random, max_denominator: int):
    lo, hi = slope.interval
    while True:
        q = rng.randint(1, max_denominator)
        yield Fraction(rng.randint(math.ceil(lo * q), math.floor(hi * q)), q)


def _verify_one(sample_id: int, a: Fraction, sigma: MoranSequence, slope: Slope, depth: int, budget: int) -> dict:
    mc, boundary = matrix_count_sequence(a, sigma, slope, depth)
    oc = count_oracle_sequence(a, sigma, slope, depth, budget)
    n = len(oc)
    mismatch = next((k for k in range(n) if mc[k] != oc[k]), None)
    status = "skipped-boundary" if boundary else ("mismatch" if mismatch is not None else "pass")
    return {
        "sample": sample_id, "slope": str(slope), "sigma": str(sigma), "a": format_rational(a),
        "depth": n - 1, "status": status, "boundary": boundary,
        "matrix": mc[1:n], "oracle": oc[1:], "first_mismatch": mismatch if not boundary else None,
    }


def verify_matrix_counts(suite: VerificationSuite) -> VerificationReport:
    """Compare matrix-product and oracle counts over a seeded sample of intercepts.

    For each (slope, sigma) pair, ``suite.samples`` non-boundary intercepts
    are drawn (boundary draws are kept in the report as skipped), followed by
    any explicitly listed intercepts.  Deterministic for a given seed.
    """
    rng = random.Random(suite.seed)
    report = VerificationReport()
    sid = 0
    for slope in suite.slopes:
        for sigma in suite.sigmas:
            todo = []
            good = 0
            for a in sample_intercepts(slope, rng, suite.max_denominator):
                if good >= suite.samples:
                    break
                todo.append(a)
                if not greedy_expand(a, sigma, slope, suite.depth).boundary_flag:
                    good += 1
            for a in suite.intercepts:
                a = Fraction(a)
                if not slope.contains(a):
                    raise OutOfRange(f"intercept {format_rational(a)} outside J for slope {slope}")
                todo.append(a)
            for a in todo:
                rec = _verify_one(sid, a, sigma, slope, suite.depth, suite.cell_budget)
                sid += 1
                report.records.append(rec)
                if rec["status"] == "skipped-boundary":
                    report.skipped += 1
                else:
                    report.checked += 1
                    report.mismatches += rec["status"] == "mismatch"
    return report
