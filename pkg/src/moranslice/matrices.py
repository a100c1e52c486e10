"""Transfer matrices A_t^j and exact counting products.

Entry (p, q) of A_t^j counts digits d of the level-t system whose interval
map sends the j-th subinterval of I_p (thirds for t = 0, quarters for t = 1)
onto I_q.  Two builders are provided: :func:`build_matrix_semantic` compares
the interval images directly, :func:`build_matrix_closed_form` counts integer
solutions of the linear congruence the images reduce to.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .carpet import BASES, MoranSequence, digits_ordered
from .errors import BoundaryWarning, InvalidLabel, OrderMismatch
from .slicing import Slope, gamma_lattice, greedy_expand


@dataclass(frozen=True)
class TransferMatrix:
    level_tag: int
    label: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.entries)

    def row_sum(self, p: int) -> int:
        """Entry sum of row p (1-based)."""
        return sum(self.entries[p - 1])

    def norm(self) -> int:
        return sum(map(sum, self.entries))

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def format(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.entries)


def _check_label(level_tag: int, j: int) -> None:
    if level_tag not in (0, 1):
        raise InvalidLabel(f"level tag must be 0 or 1, got {level_tag!r}")
    if not 0 <= j < BASES[level_tag]:
        raise InvalidLabel(f"label j={j} out of range for tag {level_tag} (0..{BASES[level_tag] - 1})")


def subinterval(level_tag: int, p: int, j: int, slope: Slope) -> tuple[Fraction, Fraction]:
    """Open subinterval J_p^j (tag 0) or K_p^j (tag 1) as (lo, hi)."""
    b = BASES[level_tag]
    lo = Fraction(-slope.M - 1 + p, slope.N) + Fraction(j, b * slope.N)
    return lo, lo + Fraction(1, b * slope.N)


@lru_cache(maxsize=None)
def build_matrix_semantic(level_tag: int, j: int, slope: Slope) -> TransferMatrix:
    _check_label(level_tag, j)
    n = slope.order
    b = BASES[level_tag]
    s = slope.value
    targets = {slope.lattice_interval(q): q for q in range(1, n + 1)}
    rows = []
    for p in range(1, n + 1):
        lo, hi = subinterval(level_tag, p, j, slope)
        row = [0] * n
        for d in digits_ordered(level_tag):
            image = (b * lo + d[0] * s - d[1], b * hi + d[0] * s - d[1])
            q = targets.get(image)
            if q is not None:
                row[q - 1] += 1
        rows.append(tuple(row))
    return TransferMatrix(level_tag, j, tuple(rows))


@lru_cache(maxsize=None)
def build_matrix_closed_form(level_tag: int, j: int, slope: Slope) -> TransferMatrix:
    """Count d with d1*M - d2*N == (b-1)(M+1) + q - b*p - j, b the level base."""
    _check_label(level_tag, j)
    n = slope.order
    b = BASES[level_tag]
    M, N = slope.M, slope.N
    lhs = {}
    for d1, d2 in digits_ordered(level_tag):
        v = d1 * M - d2 * N
        lhs[v] = lhs.get(v, 0) + 1
    rows = tuple(
        tuple(lhs.get((b - 1) * (M + 1) + q - b * p - j, 0) for q in range(1, n + 1))
        for p in range(1, n + 1)
    )
    return TransferMatrix(level_tag, j, rows)


def matrix_family(level_tag: int, slope: Slope, closed_form: bool = False) -> tuple[TransferMatrix, ...]:
    build = build_matrix_closed_form if closed_form else build_matrix_semantic
    return tuple(build(level_tag, j, slope) for j in range(BASES[level_tag]))


def family_lists(slope: Slope):
    """``mats[t][j]`` as nested lists, the layout the kernels take."""
    return [[m.to_lists() for m in matrix_family(t, slope)] for t in (0, 1)]


def row_times(v: Sequence[int], A: TransferMatrix) -> list[int]:
    n = A.order
    if len(v) != n:
        raise OrderMismatch(f"vector of length {len(v)} against matrix of order {n}")
    out = [0] * n
    for r, vr in enumerate(v):
        if vr:
            row = A.entries[r]
            for c in range(n):
                out[c] += vr * row[c]
    return out


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    if len(A[0]) != len(B):
        raise OrderMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    cols = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in A]


def product_norm(matrices: Sequence[TransferMatrix], start_row: int, order: int | None = None) -> int:
    """Entry sum of e_{start_row} A_1 A_2 ... (exact integers; empty product gives 1)."""
    if order is None:
        if not matrices:
            return 1
        order = matrices[0].order
    if not 1 <= start_row <= order:
        raise OrderMismatch(f"start row {start_row} outside 1..{order}")
    v = [0] * order
    v[start_row - 1] = 1
    for A in matrices:
        v = row_times(v, A)
    return sum(v)


def matrix_count_sequence(a, sigma: MoranSequence, slope: Slope, max_depth: int) -> tuple[list[int], bool]:
    """([N_0, ..., N_max_depth] via the matrix product, boundary flag)."""
    exp = greedy_expand(a, sigma, slope, max_depth)
    lattice = gamma_lattice(a, slope)
    if lattice.i0 != exp.k:
        raise AssertionError(f"lattice rank {lattice.i0} disagrees with greedy index {exp.k}")
    v = [0] * slope.order
    v[exp.k - 1] = 1
    counts = [1]
    for t, xi in zip(sigma.tags(max_depth), exp.digits):
        v = row_times(v, build_matrix_semantic(t, xi, slope))
        counts.append(sum(v))
    return counts, exp.boundary_flag


def matrix_count(a, sigma: MoranSequence, slope: Slope, n: int) -> int:
    """N_n via || e_{i0} A^{xi_1} ... A^{xi_n} ||.

    Warns with :class:`BoundaryWarning` when ``a`` has a terminating
    expansion by depth n; the value is still returned.
    """
    counts, boundary = matrix_count_sequence(a, sigma, slope, n)
    if boundary:
        warnings.warn(f"intercept {a} lies on a subinterval boundary by depth {n}", BoundaryWarning, stacklevel=2)
    return counts[n]


def sum_matrix(level_tag: int, slope: Slope) -> list[list[int]]:
    """Sum over labels j of A_t^j."""
    fam = matrix_family(level_tag, slope)
    n = slope.order
    return [[sum(A.entries[r][c] for A in fam) for c in range(n)] for r in range(n)]


def diff_families(slope: Slope) -> list[dict]:
    """Entrywise differences between the two builders; empty when they agree."""
    out = []
    for t in (0, 1):
        for j in range(BASES[t]):
            a = build_matrix_semantic(t, j, slope)
            b = build_matrix_closed_form(t, j, slope)
            for p, (ra, rb) in enumerate(zip(a.entries, b.entries), start=1):
                for q, (x, y) in enumerate(zip(ra, rb), start=1):
                    if x != y:
                        out.append({"tag": t, "j": j, "p": p, "q": q, "semantic": x, "closed_form": y})
    return out
