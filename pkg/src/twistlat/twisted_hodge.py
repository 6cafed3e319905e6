"""Lattice model of the symplectic variety attached to a twisted abelian variety.

Everything lives on ``L + L*`` (rank 4g), coordinates ``(x, xi)``. A twist
by a B-field B (antisymmetric, n B integral) changes the complex structure
to ``J_B = [[J, 0], [B J + J^T B, -J^T]]``; the covering map
``M = [[n I, 0], [n B, I]]`` intertwines the split structure with ``J_B``.
The same variety is the quotient of X x X^ by the graph of ``-n B mod n``;
:func:`presentations_agree` checks the two descriptions match as lattices.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from .cocycle_pairing import AntisymTwist, isotropy_check
from .errors import InputError, InvariantViolation, NotIsotropic, SingularMatrixError
from .exact_linalg import (
    FiniteAbelianGroup,
    as_int_matrix,
    as_rat_matrix,
    det,
    hermite_normal_form,
    identity,
    inverse,
    is_integral,
    random_unimodular,
    smith_normal_form,
    to_int_matrix,
    zeros,
)
from .isogeny_lattice import standard_symplectic_form


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    g: int
    J: np.ndarray

    def __post_init__(self):
        J = as_rat_matrix(self.J)
        object.__setattr__(self, "J", J)
        k = 2 * self.g
        if J.shape != (k, k):
            raise InputError(f"complex structure of genus {self.g} must be {k}x{k}")
        if not np.array_equal(J @ J, -identity(k)):
            raise InputError("J^2 != -I")


@dataclass(frozen=True, eq=False)
class BField:
    g: int
    n: int
    B: np.ndarray

    def __post_init__(self):
        B = as_rat_matrix(self.B)
        object.__setattr__(self, "B", B)
        if B.shape != (2 * self.g, 2 * self.g):
            raise InputError(f"B-field of genus {self.g} has wrong shape {B.shape}")
        if not np.array_equal(B.T, -B):
            raise InputError("B-field must be antisymmetric")
        if self.n < 1 or not is_integral(B * self.n):
            raise InputError(f"n*B must be integral for n={self.n}")

    @property
    def nB(self) -> np.ndarray:
        return to_int_matrix(self.B * self.n)


@dataclass(frozen=True, eq=False)
class TwistedComplexStructure:
    g: int
    n: int
    J_alpha: np.ndarray

    @property
    def S(self) -> np.ndarray:
        return standard_symplectic_form(self.g)


@dataclass(frozen=True, eq=False)
class QuotientLatticeModel:
    """Lattice L_A = Z^4g + (1/n){(u, A u)}; its basis is ``numerators / n``
    with ``numerators`` in column Hermite normal form."""

    g: int
    n: int
    numerators: np.ndarray

    @property
    def basis(self) -> np.ndarray:
        return as_rat_matrix(self.numerators) * Fraction(1, self.n)

    @property
    def index(self) -> int:
        """[L_A : Z^4g] = n^4g / |det numerators|."""
        return self.n ** (4 * self.g) // abs(det(self.numerators))


def standard_complex_structure(g: int) -> ComplexStructure:
    """``[[0, -I_g], [I_g, 0]]``."""
    return ComplexStructure(g, np.block([[zeros(g, g), -identity(g)], [identity(g), zeros(g, g)]]))


def build_J_alpha(cs: ComplexStructure, b: BField) -> TwistedComplexStructure:
    if cs.g != b.g:
        raise InputError("genus mismatch between J and B")
    J, B = cs.J, b.B
    Ja = np.block([[J, zeros(*J.shape)], [B @ J + J.T @ B, -J.T]])
    return TwistedComplexStructure(cs.g, b.n, as_rat_matrix(Ja))


def split_structure(cs: ComplexStructure) -> np.ndarray:
    """blockdiag(J, -J^T), the structure of the untwisted product."""
    J = cs.J
    return as_rat_matrix(np.block([[J, zeros(*J.shape)], [zeros(*J.shape), -J.T]]))


def pi_tilde(n: int, b: BField) -> np.ndarray:
    """``(x, xi) -> (n x, xi + n B x)`` as the int matrix [[n I, 0], [n B, I]]."""
    if n != b.n:
        raise InputError(f"n={n} does not match the B-field order {b.n}")
    k = 2 * b.g
    return as_int_matrix(np.block([[n * identity(k), zeros(k, k)], [b.nB, identity(k)]]))


def intertwines(M, src, dst) -> bool:
    """M @ src == dst @ M, exactly."""
    M = as_rat_matrix(M)
    return bool(np.array_equal(M @ src, dst @ M))


@dataclass(frozen=True, eq=False)
class TorusKernel:
    """Finite kernel of a torus map, as numerators over a common denominator."""

    group: FiniteAbelianGroup
    denominator: int
    points: frozenset[tuple[int, ...]]

    @property
    def representatives(self) -> tuple[tuple[Fraction, ...], ...]:
        """Kernel points as rational vectors in [0, 1)^k, sorted."""
        L = self.denominator
        return tuple(sorted(tuple(Fraction(c, L) for c in p) for p in self.points))

    def same_points(self, denominator: int, points) -> bool:
        """Compare with another point set given over ``denominator``."""
        if denominator == self.denominator:
            return self.points == frozenset(points)
        L = math.lcm(self.denominator, denominator)
        mine = {tuple(c * (L // self.denominator) for c in p) for p in self.points}
        theirs = {tuple(c * (L // denominator) for c in p) for p in points}
        return mine == theirs


def _small(*arrays, limit: int = 2**40) -> bool:
    return all(abs(int(x)) < limit for a in arrays for x in np.asarray(a, dtype=object).flat)


def torus_map_kernel(M) -> TorusKernel:
    """Kernel of the torus map R^k/Z^k -> R^k/Z^k induced by M.

    That is M^-1 Z^k / Z^k. With U M V = D, M^-1 Z^k = V D^-1 Z^k, so the
    points are V (t_1/d_1, ..., t_k/d_k) reduced into [0, 1).
    """
    M = as_int_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise SingularMatrixError("torus map needs a square matrix")
    snf = smith_normal_form(M)
    d = snf.diagonal
    if 0 in d:
        raise SingularMatrixError("torus map needs a nonsingular matrix")
    group = FiniteAbelianGroup(tuple(x for x in d if x != 1))
    k = len(d)
    L = d[-1]
    # integer numerators over the exponent L
    steps = [L // x for x in d]
    dtype = np.int64 if _small(snf.V, [L * k]) else object
    V = np.array(snf.V.tolist(), dtype=dtype)
    grid = np.indices(d).reshape(k, -1).astype(dtype) * np.array(steps, dtype=dtype)[:, None]
    pts = (V @ grid) % L
    points = frozenset(map(tuple, pts.T.tolist()))
    if len(points) != group.order:
        raise InvariantViolation("kernel enumeration disagrees with the group order")
    return TorusKernel(group, L, points)


def graph_points(A, n: int) -> frozenset[tuple[int, ...]]:
    """Numerators over n of {(u/n, (A u mod n)/n) : u in (Z/n)^k}."""
    A = as_int_matrix(A)
    k = A.shape[0]
    dtype = np.int64 if _small(A, [n * k]) else object
    us = np.indices((n,) * k).reshape(k, -1).astype(dtype)
    images = (np.array(A.tolist(), dtype=dtype) @ us) % n
    return frozenset(map(tuple, np.concatenate([us, images]).T.tolist()))


def twist_of_bfield(b: BField) -> AntisymTwist:
    """The induced map on n-torsion, ``-n B`` reduced mod n."""
    return AntisymTwist(b.n, b.g, -b.nB)


def quotient_lattice(n: int, twist: AntisymTwist) -> QuotientLatticeModel:
    if twist.n != n:
        raise InputError(f"twist modulus {twist.n} != n={n}")
    if not isotropy_check(twist):
        raise NotIsotropic("graph of a non-antisymmetric map is not isotropic")
    key = tuple(twist.A.flat)
    model = QuotientLatticeModel(twist.g, n, _graph_lattice_hnf(n, twist.g, key))
    if model.index != n ** (2 * twist.g):
        raise InvariantViolation(f"quotient lattice has index {model.index}")
    return model


@lru_cache(maxsize=8192)
def _graph_lattice_hnf(n: int, g: int, entries: tuple[int, ...]) -> np.ndarray:
    # n * L_A is spanned by n Z^4g and the graph columns (u, A u)
    k = 2 * g
    A = as_int_matrix(np.array(entries, dtype=object).reshape(k, k))
    graph = np.concatenate([identity(k), A], axis=0)
    return hermite_normal_form(np.concatenate([n * identity(2 * k), graph], axis=1))


def presentations_agree(n: int, b: BField, twist: AntisymTwist | None = None) -> bool:
    """True iff the covering map sends the quotient lattice onto Z^4g.

    ``twist`` defaults to the one induced by ``b``; pass another to test a
    mismatched pair. Works on numerators: M (H / n) = Z^4g iff M H is
    divisible by n and |det(M H)| = n^4g.
    """
    if twist is None:
        twist = twist_of_bfield(b)
    model = quotient_lattice(n, twist)
    image = pi_tilde(n, b) @ model.numerators
    if any(x % n for x in image.flat):
        return False
    return abs(det(image)) == n ** (4 * b.g)


def is_symplectic_isomorphism(psi, src: TwistedComplexStructure,
                              dst: TwistedComplexStructure) -> bool:
    return symplectic_report(psi, src, dst).symplectic_isomorphism


class SymplecticReport(NamedTuple):
    unimodular: bool
    preserves_form: bool
    intertwines: bool

    @property
    def symplectic_isomorphism(self) -> bool:
        return self.unimodular and self.preserves_form and self.intertwines


def symplectic_report(psi, src: TwistedComplexStructure,
                      dst: TwistedComplexStructure) -> SymplecticReport:
    """The three conditions separately: |det| = 1, psi^T S psi = S, psi J_src = J_dst psi."""
    psi = as_int_matrix(psi)
    size = 4 * src.g
    if src.g != dst.g or psi.shape != (size, size):
        raise InputError("dimension mismatch")
    S = src.S
    return SymplecticReport(
        unimodular=abs(det(psi)) == 1,
        preserves_form=bool(np.array_equal(psi.T @ S @ psi, S)),
        intertwines=intertwines(psi, src.J_alpha, dst.J_alpha),
    )


# --- random exact instances ----------------------------------------------------


def random_complex_structure(g: int, rng: random.Random) -> ComplexStructure:
    """Standard J conjugated by a random unimodular matrix (so J^2 = -I exactly)."""
    P = random_unimodular(2 * g, rng)
    J0 = standard_complex_structure(g).J
    return ComplexStructure(g, as_rat_matrix(P) @ J0 @ inverse(P))


def random_bfield(g: int, n: int, rng: random.Random, bound: int = 2) -> BField:
    k = 2 * g
    nB = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            x = rng.randint(-bound, bound)
            nB[i][j], nB[j][i] = x, -x
    return BField(g, n, as_rat_matrix(nB) * Fraction(1, n))


def antisymmetric_integer_matrices(k: int, bound: int):
    """Every antisymmetric k x k int matrix with entries in [-bound, bound]."""
    slots = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for values in product(range(-bound, bound + 1), repeat=len(slots)):
        m = [[0] * k for _ in range(k)]
        for (i, j), x in zip(slots, values):
            m[i][j], m[j][i] = x, -x
        yield m
