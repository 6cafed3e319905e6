"""Twist classes as finite data.

An n-torsion twist is an anti-symmetric matrix mod n (the map X[n] -> X^[n]
read through the standard pairing <x, xi> = xi^T x). Alternating pairings
and bilinear 2-cocycles on (Z/m)^k are stored additively: the root of unity
exp(2 pi i t / n) is the exponent t in Z/n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InputError, NotIsotropic
from .exact_linalg import (
    FiniteAbelianGroup,
    as_int_matrix,
    identity,
    smith_normal_form,
    zeros,
)

J2 = ((0, 1), (-1, 0))


def _reduce(m, n: int) -> np.ndarray:
    return as_int_matrix(as_int_matrix(m) % n)


def _is_alternating_mod(m: np.ndarray, n: int) -> bool:
    if m.shape[0] != m.shape[1]:
        return False
    if any(x % n for x in (m + m.T).flat):
        return False
    return all(m[i, i] % n == 0 for i in range(m.shape[0]))


@dataclass(frozen=True, eq=False)
class AntisymTwist:
    n: int
    g: int
    A: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"modulus must be >= 1, got {self.n}")
        a = _reduce(self.A, self.n)
        if a.shape != (2 * self.g, 2 * self.g):
            raise InputError(f"twist of genus {self.g} needs a {2 * self.g}x{2 * self.g} matrix")
        object.__setattr__(self, "A", a)

    @property
    def is_antisymmetric(self) -> bool:
        return _is_alternating_mod(self.A, self.n)


@dataclass(frozen=True, eq=False)
class AlternatingForm:
    n: int
    E: np.ndarray

    def __post_init__(self):
        e = _reduce(self.E, self.n)
        if not _is_alternating_mod(e, self.n):
            raise InputError("pairing matrix is not alternating mod n")
        object.__setattr__(self, "E", e)

    @property
    def k(self) -> int:
        return self.E.shape[0]


@dataclass(frozen=True, eq=False)
class BilinearCocycle:
    """a(s, t) = s^T beta t  (mod n)."""

    n: int
    beta: np.ndarray

    def __post_init__(self):
        b = _reduce(self.beta, self.n)
        if b.shape[0] != b.shape[1]:
            raise InputError("cocycle matrix must be square")
        object.__setattr__(self, "beta", b)

    @property
    def k(self) -> int:
        return self.beta.shape[0]

    def table(self, m: int) -> np.ndarray:
        """Full exponent table on (Z/m)^k; well defined when n | m * beta."""
        elems = kernels.group_elements(m, self.k)
        beta = np.array(self.beta.tolist(), dtype=np.int64)
        return (elems @ beta @ elems.T) % self.n


# --- twists with prescribed image -------------------------------------------


def image_mod_n(A, n: int) -> FiniteAbelianGroup:
    """Subgroup A (Z/n)^k of (Z/n)^k, via SNF of the block matrix [A | n I].

    With e_i the diagonal of that SNF, (Z/n)^k / image = sum Z/e_i, and the
    image itself is sum Z/(n / e_i).
    """
    A = as_int_matrix(A)
    k = A.shape[0]
    block = np.concatenate([A, n * identity(k)], axis=1)
    e = smith_normal_form(block).diagonal
    return FiniteAbelianGroup.from_cyclic_orders(n // d for d in e)


def antisym_with_image(targets: Sequence[int], n: int, g: int) -> AntisymTwist:
    """Block-diagonal twist diag((n/a_1) J2, ..., (n/a_r) J2, 0, ..., 0).

    Its image in (Z/n)^2g is (Z/a_1)^2 + ... + (Z/a_r)^2.
    """
    targets = [int(a) for a in targets]
    if len(targets) > g:
        raise InputError(f"{len(targets)} targets do not fit in genus {g}")
    for a in targets:
        if a < 1 or n % a:
            raise InputError(f"target {a} does not divide n={n}")
    A = np.array(zeros(2 * g, 2 * g))
    for i, a in enumerate(targets):
        c = n // a
        A[2 * i, 2 * i + 1] = c * J2[0][1]
        A[2 * i + 1, 2 * i] = c * J2[1][0]
    return AntisymTwist(n, g, A)


def isotropy_check(t: AntisymTwist) -> bool:
    """Graph {(x, A x)} isotropic for the n-th power pairing <=> A + A^T = 0 mod n."""
    return not any(x % t.n for x in (t.A + t.A.T).flat)


# --- cocycles and pairings ----------------------------------------------------


def pairing_of_cocycle(c: BilinearCocycle) -> AlternatingForm:
    """e(s, t) = a(s, t) - a(t, s), i.e. E = beta - beta^T."""
    return AlternatingForm(c.n, c.beta - c.beta.T)


def cocycle_from_pairing(e: AlternatingForm) -> BilinearCocycle:
    """Canonical lift: beta = strict lower triangle of E."""
    beta = np.array(zeros(e.k, e.k))
    for i in range(e.k):
        for j in range(i):
            beta[i, j] = e.E[i, j]
    return BilinearCocycle(e.n, beta)


def verify_cocycle_table(n: int, m: int, k: int, table) -> bool:
    """Exhaustively check a normalised 2-cocycle table on (Z/m)^k.

    ``table[s, t]`` is the exponent of a(s, t) in Z/n, with elements indexed
    in lexicographic order (see :func:`kernels.group_elements`).
    """
    size = m**k
    if size > 4096:
        raise InputError(f"group of order {size} too large for an exhaustive check")
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (size, size):
        raise InputError(f"table shape {table.shape} does not match |G| = {size}")
    table = table % n
    if table[0].any() or table[:, 0].any():
        return False
    add = kernels.group_addition_table(m, k)
    return kernels.first_violation(table, add, n) < 0


def twist_from_pairing(e: AlternatingForm) -> AntisymTwist:
    """Read an alternating pairing on (Z/n)^2g as the twist matrix."""
    if e.k % 2:
        raise InputError("twists live on even rank")
    t = AntisymTwist(e.n, e.k // 2, e.E)
    if not isotropy_check(t):
        raise NotIsotropic("pairing is not anti-symmetric")
    return t
