"""Degree bookkeeping for the isogeny KS(W) -> KS(V) induced by W in V.

As Z-modules the even Clifford algebra is the even exterior algebra, so the
kernel order is the product of |det(wedge^2j A)| over positive even grades,
where A represents W in V. By Sylvester-Franke each grade contributes
|det A|^C(r-1, 2j-1); these exponents sum to 2^(r-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError, SingularMatrixError
from .exact_linalg import as_int_matrix, det, exterior_power, is_perfect_square


@dataclass(frozen=True)
class GradeRecord:
    grade: int
    rank: int  # C(r, grade), the rank of wedge^grade
    det: int  # |det wedge^grade A|
    exponent: int  # C(r-1, grade-1), so det == d**exponent


@dataclass(frozen=True)
class KSDegreeReport:
    r: int
    d: int
    closed_form: int
    oracle_value: int
    per_grade: tuple[GradeRecord, ...]

    @property
    def agrees(self) -> bool:
        return self.closed_form == self.oracle_value

    @property
    def principal(self) -> bool:
        return is_perfect_square(self.closed_form)


def even_clifford_rank(r: int) -> int:
    if r < 1:
        raise InputError(f"rank must be >= 1, got {r}")
    return sum(math.comb(r, 2 * j) for j in range(r // 2 + 1))


def ks_degree(d: int, r: int) -> int:
    """d ** 2**(r-2)."""
    if r < 2:
        raise InputError(f"rank must be >= 2, got {r}")
    if d < 1:
        raise InputError(f"index must be positive, got {d}")
    return d ** (2 ** (r - 2))


def exterior_kernel_oracle(A) -> KSDegreeReport:
    """Kernel order computed grade by grade from minors (grade 0 excluded)."""
    A = as_int_matrix(A)
    r = A.shape[0]
    if A.shape[1] != r:
        raise InputError("oracle needs a square matrix")
    d = abs(det(A))
    if d == 0:
        raise SingularMatrixError("A must be nonsingular")
    if r < 2:
        raise InputError(f"rank must be >= 2, got {r}")
    grades = []
    total = 1
    for j in range(1, r // 2 + 1):
        k = 2 * j
        dk = abs(det(exterior_power(A, k)))
        grades.append(GradeRecord(k, math.comb(r, k), dk, math.comb(r - 1, k - 1)))
        total *= dk
    return KSDegreeReport(r, d, ks_degree(d, r), total, tuple(grades))
