"""Hot loop for the exhaustive 2-cocycle check.

The check visits every triple of a finite group, so it is the one place in
the package where small machine integers dominate. Two implementations:

* ``_first_violation_numba``: ``@njit`` triple loop with early exit.
* ``_first_violation_numpy``: per-row broadcast, no compiler needed.

The backend is chosen at import: numba when importable, unless the
environment variable ``TWISTLAT_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("TWISTLAT_DISABLE_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
except ImportError:
    njit = None


def _first_violation_numpy(table: np.ndarray, add: np.ndarray, n: int) -> int:
    """Flat index i*s*s + j*s + k of the first failing triple, or -1.

    The cocycle condition (additive, mod n) is
    a[i,j] + a[i+j,k] == a[j,k] + a[i,j+k].
    """
    s = table.shape[0]
    for i in range(s):
        lhs = table[i][:, None] + table[add[i]]
        rhs = table + table[i][add]
        bad = np.nonzero((lhs - rhs) % n)
        if bad[0].size:
            return i * s * s + int(bad[0][0]) * s + int(bad[1][0])
    return -1


if njit is not None:

    @njit(cache=True, nogil=True)
    def _first_violation_numba(table, add, n):
        s = table.shape[0]
        for i in range(s):
            for j in range(s):
                ij = add[i, j]
                a_ij = table[i, j]
                for k in range(s):
                    if (a_ij + table[ij, k] - table[j, k] - table[i, add[j, k]]) % n != 0:
                        return i * s * s + j * s + k
        return -1

    BACKEND = "numba"
    first_violation = _first_violation_numba
else:
    _first_violation_numba = None
    BACKEND = "numpy"
    first_violation = _first_violation_numpy


def group_addition_table(m: int, k: int) -> np.ndarray:
    """Index table of (Z/m)^k, elements in lexicographic (row-major) order."""
    elems = group_elements(m, k)
    s = elems.shape[0]
    sums = (elems[:, None, :] + elems[None, :, :]) % m
    weights = m ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (sums @ weights).astype(np.int64).reshape(s, s)


def group_elements(m: int, k: int) -> np.ndarray:
    """All elements of (Z/m)^k as rows, last coordinate fastest."""
    grids = np.indices((m,) * k).reshape(k, -1).T
    return grids.astype(np.int64)
