"""Pure-Python versions of the hot loops.

Same contracts as the compiled ``_ckernels`` module, with unbounded Python
integers, so they double as the fallback when a problem would overflow int64.
"""
from collections import Counter

_OMEGA = (
    ((0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2)),
    ((0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (3, 3)),
)
_BASE = (3, 4)


def oracle_level_counts(P, Q, M, N, tags, budget):
    """Count level-n cells whose closed square meets y = (M/N) x + P/Q.

    Breadth-first over levels, keeping only intersecting cells.  A cell at
    level n is stored as integer corner (X, Y) in units of 1/D with D the
    inverse side length.  Stops before a level whose projected number of
    child tests would push the running total past ``budget``.

    Returns [N_0, N_1, ...] for every level fully processed.
    """
    counts = [1]
    frontier = [(0, 0)]
    D = 1
    visited = 0
    for t in tags:
        b = _BASE[t]
        omega = _OMEGA[t]
        if visited + len(frontier) * len(omega) > budget:
            break
        visited += len(frontier) * len(omega)
        D *= b
        target = P * N * D
        nxt = []
        for X, Y in frontier:
            Xb = X * b
            Yb = Y * b
            for d1, d2 in omega:
                Xc = Xb + d1
                Yc = Yb + d2
                if Q * (N * Yc - M * (Xc + 1)) <= target <= Q * (N * (Yc + 1) - M * Xc):
                    nxt.append((Xc, Yc))
        frontier = nxt
        counts.append(len(frontier))
    return counts


def _vecmat(v, A):
    n = len(v)
    return [sum(v[r] * A[r][c] for r in range(n)) for c in range(n)]


def norm_histogram(mats, tags):
    """Histogram {norm: multiplicity} of entry-sum norms of A_x over all words x.

    ``mats[t][j]`` is the matrix for tag ``t`` and label ``j``.  Products are
    built depth-first so each tree edge costs one matrix product; at the
    leaves only the entry sum is needed, computed as column sums of the
    prefix product dotted with row sums of the last factor.
    """
    k = len(tags)
    hist = Counter()
    if k == 0:
        n = len(mats[0][0])
        hist[n] += 1
        return hist
    n = len(mats[tags[0]][0])
    rowsums = [[[sum(row) for row in A] for A in mats[t]] for t in (0, 1)]

    def rec(level, prod):
        t = tags[level]
        if level == k - 1:
            colsum = [sum(prod[r][c] for r in range(n)) for c in range(n)]
            for rs in rowsums[t]:
                hist[sum(c * s for c, s in zip(colsum, rs))] += 1
            return
        for A in mats[t]:
            rec(level + 1, [_vecmat(row, A) for row in prod])

    ident = [[int(r == c) for c in range(n)] for r in range(n)]
    rec(0, ident)
    return hist
