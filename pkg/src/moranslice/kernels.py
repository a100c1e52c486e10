"""Backend selection for the two hot loops.

The compiled extension is used when it imported and the problem fits in
int64; otherwise the pure-Python implementation runs.  Set
``MORANSLICE_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from collections import Counter

import numpy as np

from . import _pykernels

try:
    if os.environ.get("MORANSLICE_PURE"):
        raise ImportError("pure backend forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

HAVE_COMPILED = _ckernels is not None
_I64_SAFE = 2**62


def backend_name() -> str:
    return "compiled" if HAVE_COMPILED else "python"


def oracle_level_counts(P: int, Q: int, M: int, N: int, tags, budget: int, backend: str | None = None):
    tags = list(tags)
    D = 1
    for t in tags:
        D *= 3 if t == 0 else 4
    fits = Q * (N + M) * (D + 1) + abs(P) * N * D < _I64_SAFE and budget < _I64_SAFE
    use = backend or ("compiled" if HAVE_COMPILED and fits else "python")
    if use == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled backend not available")
        if not fits:
            raise OverflowError("problem does not fit the int64 kernel")
        return _ckernels.oracle_level_counts(P, Q, M, N, tags, budget)
    return _pykernels.oracle_level_counts(P, Q, M, N, tags, budget)


def _as_array(mats):
    n = len(mats[0][0])
    arr = np.zeros((2, 4, n, n), dtype=np.int64)
    for t in (0, 1):
        for j, A in enumerate(mats[t]):
            arr[t, j] = A
    return arr


def norm_histogram(mats, tags, backend: str | None = None) -> Counter:
    """{entry-sum norm of A_x: number of words x} over all words of len(tags)."""
    tags = list(tags)
    n = len(mats[0][0])
    bound = n
    for t in tags:
        bound *= 8 if t == 0 else 12
    fits = bound < _I64_SAFE
    use = backend or ("compiled" if HAVE_COMPILED and fits else "python")
    if use == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled backend not available")
        if not fits:
            raise OverflowError("problem does not fit the int64 kernel")
        norms = _ckernels.word_norms(_as_array(mats), tags)
        vals, cnts = np.unique(norms, return_counts=True)
        return Counter({int(v): int(c) for v, c in zip(vals, cnts)})
    return _pykernels.norm_histogram(mats, tags)
