"""Isogenies as nonsingular integer matrices between rank-2g lattices.

Symplectic sign convention used throughout the package: on the block basis
``(L, L*)`` the standard form is ``S = [[0, I], [-I, 0]]``, i.e.
``E((x, xi), (y, eta)) = eta(x) - xi(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, NotAnnihilatedByN, SingularMatrixError
from .exact_linalg import (
    FiniteAbelianGroup,
    as_int_matrix,
    cokernel_of,
    det,
    identity,
    inverse,
    is_perfect_square,
    to_int_matrix,
    zeros,
)

CONVENTION = "S = [[0, I], [-I, 0]] on (L, L*); E((x,xi),(y,eta)) = eta(x) - xi(y)"


def is_spectrally_paired(group: FiniteAbelianGroup) -> bool:
    """True iff ``group`` is a sum of squares (Z/a)^2.

    On invariant factors this is: even length and d1 = d2, d3 = d4, ...
    """
    fs = group.factors
    return len(fs) % 2 == 0 and all(fs[i] == fs[i + 1] for i in range(0, len(fs), 2))


@dataclass(frozen=True, eq=False)
class LatticeIsogeny:
    g: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_int_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.shape != (2 * self.g, 2 * self.g):
            raise InputError(f"isogeny of genus {self.g} needs a {2 * self.g}x{2 * self.g} matrix")
        if det(m) == 0:
            raise SingularMatrixError("isogeny matrix must be nonsingular")

    @classmethod
    def from_matrix(cls, matrix) -> "LatticeIsogeny":
        m = as_int_matrix(matrix)
        if m.shape[0] % 2:
            raise InputError("lattice rank must be even")
        return cls(m.shape[0] // 2, m)


class IsogenyInvariants(NamedTuple):
    degree: int
    kernel: FiniteAbelianGroup
    principal: bool
    spectrally_paired: bool


def kernel_and_degree(f: LatticeIsogeny) -> IsogenyInvariants:
    degree = abs(det(f.matrix))
    kernel = cokernel_of(f.matrix)
    return IsogenyInvariants(degree, kernel, is_perfect_square(degree), is_spectrally_paired(kernel))


def standard_symplectic_form(g: int) -> np.ndarray:
    """``[[0, I_2g], [-I_2g, 0]]`` of size 4g."""
    k = 2 * g
    return as_int_matrix(np.block([[zeros(k, k), identity(k)], [-identity(k), zeros(k, k)]]))


def complement_isogeny(F, n: int) -> np.ndarray:
    """The isogeny F' with F F' = F' F = n I, i.e. ``n * F^-1``."""
    F = as_int_matrix(F)
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if F.shape[0] != F.shape[1] or det(F) == 0:
        raise SingularMatrixError("F must be square and nonsingular")
    cand = inverse(F) * n
    try:
        return to_int_matrix(cand)
    except InputError:
        raise NotAnnihilatedByN(
            f"n={n} does not kill coker(F) = {cokernel_of(F)}"
        ) from None


@dataclass(frozen=True, eq=False)
class ExtendedIsogeny:
    """The 4g x 4g map ``[[0, F], [-n F'^T, 0]]`` on X x X^ -> Y x Y^.

    Construct via :func:`extend_isogeny`; direct construction does not
    validate the block shape, so forged matrices can be fed to the checker.
    """

    g: int
    n: int
    matrix: np.ndarray

    @property
    def F(self) -> np.ndarray:
        k = 2 * self.g
        return self.matrix[:k, k:]

    @property
    def lower_block(self) -> np.ndarray:
        k = 2 * self.g
        return self.matrix[k:, :k]


def extend_isogeny(F, n: int) -> ExtendedIsogeny:
    F = as_int_matrix(F)
    Fc = complement_isogeny(F, n)
    k = F.shape[0]
    if k % 2:
        raise InputError("lattice rank must be even")
    phi = np.block([[zeros(k, k), F], [-n * Fc.T, zeros(k, k)]])
    return ExtendedIsogeny(k // 2, n, as_int_matrix(phi))


def verify_conformal_symplectic(phi: ExtendedIsogeny) -> bool:
    """Phi^T S Phi == n^2 S, exactly."""
    m = as_int_matrix(phi.matrix)
    if m.shape != (4 * phi.g, 4 * phi.g):
        return False
    S = standard_symplectic_form(phi.g)
    return bool(np.array_equal(m.T @ S @ m, phi.n**2 * S))
