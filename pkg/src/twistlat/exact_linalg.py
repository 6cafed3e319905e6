"""Exact integer and rational linear algebra.

Matrices are numpy arrays of ``dtype=object`` holding Python ``int`` (an
"int matrix") or :class:`fractions.Fraction` (a "rational matrix"), so
``@``, slicing and ``np.block`` work while every entry keeps arbitrary
precision. Nothing here touches machine-word arithmetic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Integral, Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InvariantViolation, SingularMatrixError

__all__ = [
    "FiniteAbelianGroup",
    "SmithDecomposition",
    "as_int_matrix",
    "as_rat_matrix",
    "cokernel_of",
    "det",
    "diag",
    "exterior_power",
    "hermite_normal_form",
    "identity",
    "int_inverse",
    "inverse",
    "is_integral",
    "is_perfect_square",
    "is_unimodular",
    "random_unimodular",
    "smith_normal_form",
    "to_int_matrix",
    "zeros",
]


def _to_int(x) -> int:
    if type(x) is int:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, Integral):
        return int(x)
    if isinstance(x, Rational) and x.denominator == 1:
        return int(x.numerator)
    if isinstance(x, str):
        return int(x.strip())
    raise TypeError(f"not an integer entry: {x!r}")


def _to_fraction(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (Integral, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not a rational entry: {x!r}")


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _build(rows: Sequence[Sequence], conv) -> np.ndarray:
    rows = [list(r) for r in rows]
    if not rows:
        raise InputError("matrix must have at least one row")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("ragged matrix rows")
    out = np.empty((len(rows), width), dtype=object)
    if width:
        out[:, :] = [[conv(x) for x in r] for r in rows]
    return _freeze(out)


def _plain_ints(m: np.ndarray) -> bool:
    if m.dtype.kind in "iu":
        return True
    return m.dtype == object and all(type(x) is int for x in m.flat)


def as_int_matrix(m) -> np.ndarray:
    """Coerce nested sequences or an array into a read-only int matrix."""
    if isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise InputError(f"expected a 2-d matrix, got ndim={m.ndim}")
        if _plain_ints(m) and 0 not in m.shape:
            out = np.empty(m.shape, dtype=object)
            out[:, :] = m.tolist()
            return _freeze(out)
        m = m.tolist()
    return _build(m, _to_int)


def as_rat_matrix(m) -> np.ndarray:
    if isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise InputError(f"expected a 2-d matrix, got ndim={m.ndim}")
        m = m.tolist()
    return _build(m, _to_fraction)


def is_integral(m: np.ndarray) -> bool:
    return all(_is_int_like(x) for x in np.asarray(m).flat)


def _is_int_like(x) -> bool:
    if type(x) is int:
        return True
    if isinstance(x, Integral):
        return True
    return isinstance(x, Rational) and x.denominator == 1


def to_int_matrix(m: np.ndarray) -> np.ndarray:
    """Convert a rational matrix with integral entries to an int matrix."""
    if not is_integral(m):
        raise InputError("matrix has non-integral entries")
    return as_int_matrix(m)


def identity(k: int) -> np.ndarray:
    out = np.zeros((k, k), dtype=object)
    for i in range(k):
        out[i, i] = 1
    return _freeze(out)


def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return _freeze(out)


def diag(entries: Iterable) -> np.ndarray:
    entries = list(entries)
    out = np.empty((len(entries), len(entries)), dtype=object)
    out.fill(0)
    for i, x in enumerate(entries):
        out[i, i] = x
    return _freeze(out)


def _bareiss_det(rows: list[list[int]]) -> int:
    n = len(rows)
    a = [r[:] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(m) -> int | Fraction:
    """Exact determinant. Fraction-free Bareiss when all entries are integral."""
    a = np.asarray(m, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"determinant needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1
    if is_integral(a):
        return _bareiss_det([[_to_int(x) for x in row] for row in a.tolist()])
    # rational: clear denominators, then integer determinant
    den = 1
    for x in a.flat:
        den = math.lcm(den, _to_fraction(x).denominator)
    scaled = [[_to_int(_to_fraction(x) * den) for x in row] for row in a.tolist()]
    return Fraction(_bareiss_det(scaled), den**n)


def inverse(m) -> np.ndarray:
    """Exact inverse over the rationals (Gauss-Jordan on Fractions)."""
    a = np.asarray(m, dtype=object)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise InputError(f"inverse needs a square matrix, got shape {a.shape}")
    aug = [[_to_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a.tolist())]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv_p = 1 / aug[c][c]
        aug[c] = [x * inv_p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return _freeze(np.array([row[n:] for row in aug], dtype=object))


def is_unimodular(m) -> bool:
    a = np.asarray(m, dtype=object)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and is_integral(a) and abs(det(a)) == 1


def int_inverse(m) -> np.ndarray:
    """Inverse of a unimodular int matrix, as an int matrix."""
    if not is_unimodular(m):
        raise InputError("matrix is not unimodular")
    return to_int_matrix(inverse(m))


# --- normal forms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SmithDecomposition:
    """``U @ A @ V == D`` with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    shape: tuple[int, int]

    @property
    def diagonal(self) -> tuple[int, ...]:
        k = min(self.shape)
        return tuple(int(self.D[i, i]) for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def check(self, a) -> bool:
        a = as_int_matrix(a)
        if not np.array_equal(self.U @ a @ self.V, self.D):
            return False
        if abs(det(self.U)) != 1 or abs(det(self.V)) != 1:
            return False
        d = self.diagonal
        off = self.D.copy()
        for i in range(len(d)):
            off[i, i] = 0
        if any(x != 0 for x in off.flat):
            return False
        if any(x < 0 for x in d):
            return False
        return all(d[i + 1] % d[i] == 0 if d[i] else d[i + 1] == 0 for i in range(len(d) - 1))


def smith_normal_form(a) -> SmithDecomposition:
    """Smith normal form with transforms, ``U @ A @ V = D``.

    The diagonal is nonnegative (signs go into U) and forms a divisibility
    chain with zeros last.
    """
    a = as_int_matrix(a)
    m, n = a.shape
    D = [list(r) for r in a.tolist()]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = D[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SmithDecomposition(
        U=as_int_matrix(U), D=as_int_matrix(D), V=as_int_matrix(V), shape=(m, n)
    )


def hermite_normal_form(g) -> np.ndarray:
    """Column Hermite normal form of a full-row-rank int matrix.

    Returns the square lower-triangular basis ``H`` of the lattice spanned by
    the columns of ``g``: positive diagonal and ``0 <= H[i, j] < H[i, i]``
    for ``j < i``. Two generating sets span the same lattice iff their HNFs
    are equal.
    """
    g = as_int_matrix(g)
    k, m = g.shape
    cols = [list(c) for c in g.T.tolist()]
    for i in range(k):
        while True:
            live = [j for j in range(i, len(cols)) if cols[j][i] != 0]
            if not live:
                raise InputError("generators do not span a full-rank lattice")
            piv = min(live, key=lambda j: abs(cols[j][i]))
            cols[i], cols[piv] = cols[piv], cols[i]
            p = cols[i][i]
            done = True
            for j in range(i + 1, len(cols)):
                x = cols[j][i]
                if x:
                    q = x // p
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
                    if cols[j][i]:
                        done = False
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
        p = cols[i][i]
        for j in range(i):
            q = cols[j][i] // p
            if q:
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
    h = np.array(cols[:k], dtype=object).T
    return as_int_matrix(h)


# --- exterior powers, squares ------------------------------------------------


def exterior_power(a, k: int) -> np.ndarray:
    """k-th exterior power: the C(r,k) x C(r,k) matrix of k x k minors.

    Row and column index sets run over ``itertools.combinations`` order
    (lexicographic).
    """
    a = as_int_matrix(a)
    r = a.shape[0]
    if a.shape[1] != r:
        raise InputError("exterior power needs a square matrix")
    if not 0 <= k <= r:
        raise InputError(f"k={k} out of range for a {r}x{r} matrix")
    subsets = list(combinations(range(r), k))
    rows = a.tolist()
    out = np.empty((len(subsets), len(subsets)), dtype=object)
    for p, rset in enumerate(subsets):
        for q, cset in enumerate(subsets):
            out[p, q] = _bareiss_det([[rows[i][j] for j in cset] for i in rset]) if k else 1
    return _freeze(out)


def is_perfect_square(m: int) -> bool:
    m = _to_int(m)
    if m < 0:
        raise InputError(f"perfect-square test needs m >= 0, got {m}")
    s = math.isqrt(m)
    return s * s == m


# --- finite abelian groups ---------------------------------------------------


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group by its invariant factors d1 | d2 | ... (all >= 2).

    The trivial group is the empty chain.
    """

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(_to_int(d) for d in self.factors)
        object.__setattr__(self, "factors", fs)
        if any(d < 2 for d in fs):
            raise InputError(f"invariant factors must be >= 2: {fs}")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise InputError(f"invariant factors must form a divisibility chain: {fs}")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Canonical form of a direct sum of cyclic groups Z/o1 + Z/o2 + ..."""
        orders = [_to_int(o) for o in orders]
        if any(o < 1 for o in orders):
            raise InputError(f"cyclic orders must be positive: {orders}")
        orders = [o for o in orders if o > 1]
        if not orders:
            return cls(())
        snf = smith_normal_form(diag(orders))
        return cls(tuple(d for d in snf.diagonal if d != 1))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def rank(self) -> int:
        return len(self.factors)

    def count_killed_by(self, m: int) -> int:
        """Number of elements x with m*x = 0."""
        return math.prod(math.gcd(m, d) for d in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.factors)


def cokernel_of(a) -> FiniteAbelianGroup:
    """Invariant factors of Z^r / A Z^r for a nonsingular square int matrix."""
    a = as_int_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InputError("cokernel_of needs a square matrix")
    snf = smith_normal_form(a)
    diagonal = snf.diagonal
    if 0 in diagonal:
        raise SingularMatrixError("matrix is singular; cokernel is infinite")
    group = FiniteAbelianGroup(tuple(d for d in diagonal if d != 1))
    if group.order != abs(det(a)):
        raise InvariantViolation("cokernel order differs from |det|")
    return group


# --- random instances --------------------------------------------------------


def random_unimodular(k: int, rng: random.Random, steps: int | None = None,
                      bound: int = 2) -> np.ndarray:
    """Random element of GL_k(Z) as a product of elementary matrices."""
    m = [[int(i == j) for j in range(k)] for i in range(k)]
    if k == 1:
        return as_int_matrix([[rng.choice((1, -1))]])
    for _ in range(steps if steps is not None else 3 * k):
        i, j = rng.sample(range(k), 2)
        q = rng.randint(-bound, bound)
        m[i] = [x + q * y for x, y in zip(m[i], m[j])]
        if rng.random() < 0.2:
            m[i], m[j] = m[j], m[i]
    return as_int_matrix(m)
