"""Factor a principal isogeny into spectrally paired pieces.

Work happens on the diagonal model ``diag(a_1, ..., a_2g)`` of the kernel.
The output is a multiplier ``N`` and integer matrices ``F_1, ..., F_l``
with ``F_1 @ ... @ F_l == N * diag(a)`` and every ``coker(F_i)`` of the
form (Z/b_1)^2 + (Z/b_2)^2 + ...

Genus two uses the three-factor split

    diag(a1, a2, a3, a4) = (d1 I) . diag(1, 1, d2 d3, d2 d3) . diag(1, d2, 1, d4)

(``d_i = a_i / a_(i-1)``), then splits the last factor through
``gcd(d2, d4)`` and the square identity

    x * diag(1, 1, 1, x^2) = diag(1, 1, x, x) . diag(1, x, 1, x) . diag(x, 1, 1, x).

Higher genus peels off the last three coordinates and recurses on a
``2g - 2`` sub-problem, renormalised to an invariant-factor chain by Smith
normal form; the unimodular transforms are absorbed into the outermost
sub-factors, which leaves every cokernel unchanged. The sub-problem's
multiplier ``N'`` is carried to the two peeled-off coordinates by the extra
paired factor ``diag(1, ..., 1, N', N')``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import GenusTooSmall, InputError, InvariantViolation, NotCoprime, NotPrincipal
from .exact_linalg import (
    as_int_matrix,
    cokernel_of,
    det,
    diag,
    identity,
    int_inverse,
    is_perfect_square,
    smith_normal_form,
)
from .isogeny_lattice import is_spectrally_paired


@dataclass(frozen=True)
class InvariantFactorChain:
    """2g positive integers a_1 | a_2 | ... | a_2g (ones allowed)."""

    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if not a or len(a) % 2:
            raise InputError(f"chain must have even positive length, got {len(a)}")
        if any(x < 1 for x in a):
            raise InputError(f"chain entries must be positive: {a}")
        if any(a[i + 1] % a[i] for i in range(len(a) - 1)):
            raise InputError(f"chain must satisfy a_i | a_(i+1): {a}")

    @property
    def g(self) -> int:
        return len(self.a) // 2

    @property
    def degree(self) -> int:
        return math.prod(self.a)

    @property
    def steps(self) -> tuple[int, ...]:
        """The ratios d_i = a_i / a_(i-1), with a_0 = 1."""
        prev = (1,) + self.a[:-1]
        return tuple(x // p for x, p in zip(self.a, prev))

    def matrix(self) -> np.ndarray:
        return diag(self.a)


@dataclass(frozen=True, eq=False)
class DecompositionCertificate:
    N: int
    factors: tuple[np.ndarray, ...]
    chain: InvariantFactorChain
    prime: int | None = field(default=None)


class Verdict(NamedTuple):
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def _is_identity(m: np.ndarray) -> bool:
    return bool(np.array_equal(m, identity(m.shape[0])))


def genus_two_split(steps: Sequence[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three raw genus-two factors for ratios (d1, d2, d3, d4).

    Their product is diag(d1, d1 d2, d1 d2 d3, d1 d2 d3 d4).
    """
    d1, d2, d3, d4 = (int(x) for x in steps)
    return (
        diag([d1] * 4),
        diag([1, 1, d2 * d3, d2 * d3]),
        diag([1, d2, 1, d4]),
    )


def square_split(x: int, position: int, size: int = 4) -> tuple[np.ndarray, ...]:
    """Factors of ``x * diag(1, .., x^2 at position, .., 1)``.

    Built on the identity for position 3 (0-based) of a 4x4 block, permuted
    by swapping ``position`` with 3. ``size`` embeds the block into the
    leading corner of a larger identity.
    """
    pattern = ((1, 1, x, x), (1, x, 1, x), (x, 1, 1, x))
    out = []
    for entries in pattern:
        e = list(entries)
        e[position], e[3] = e[3], e[position]
        out.append(diag(e + [1] * (size - 4)))
    return tuple(out)


def _embed(m: np.ndarray, size: int) -> np.ndarray:
    k = m.shape[0]
    out = np.array(identity(size))
    out[:k, :k] = m
    return as_int_matrix(out)


def _decompose_base(a: Sequence[int]) -> tuple[int, list[np.ndarray]]:
    d1, d2, d3, d4 = InvariantFactorChain(tuple(a)).steps
    first, second, third = genus_two_split((d1, d2, d3, d4))
    factors = [first, second]
    if not is_perfect_square(d2 * d4):
        raise InvariantViolation(f"d2*d4 = {d2 * d4} not a square for chain {tuple(a)}")
    g = math.gcd(d2, d4)
    alpha, beta = math.isqrt(d2 // g), math.isqrt(d4 // g)
    if alpha * alpha * g != d2 or beta * beta * g != d4:
        raise InvariantViolation(f"gcd split failed for d2={d2}, d4={d4}")
    factors.append(diag([1, g, 1, g]))
    N = 1
    for x, pos in ((alpha, 1), (beta, 3)):
        if x > 1:
            factors.extend(square_split(x, pos))
            N *= x
    check = identity(4)
    for f in factors:
        check = check @ f
    if not np.array_equal(check, N * diag(a)):
        raise InvariantViolation(f"base factors do not recompose for chain {tuple(a)}")
    return N, [f for f in factors if not _is_identity(f)]


def _decompose(a: Sequence[int]) -> tuple[int, list[np.ndarray]]:
    size = len(a)
    if size == 4:
        return _decompose_base(a)
    last = a[-1] // a[-2]
    sub = [x * last for x in a[: size - 3]] + [a[size - 3]]
    if not is_perfect_square(math.prod(sub)):
        raise InvariantViolation(f"peeled sub-problem {sub} has non-square product")
    snf = smith_normal_form(diag(sub))
    chain = list(snf.diagonal)
    # diag(sub) = U^-1 diag(chain) V^-1
    u_inv, v_inv = int_inverse(snf.U), int_inverse(snf.V)
    sub_n, sub_factors = _decompose(chain)
    if sub_factors:
        sub_factors[0] = u_inv @ sub_factors[0]
        sub_factors[-1] = sub_factors[-1] @ v_inv
    else:
        sub_factors = [u_inv @ v_inv]
    factors = [_embed(as_int_matrix(f), size) for f in sub_factors]
    # the sub-problem's multiplier must also reach the two trailing coordinates
    factors.append(diag([1] * (size - 2) + [sub_n, sub_n]))
    factors.append(diag([1] * (size - 2) + [a[-1], a[-1]]))
    factors.append(diag([1] * (size - 3) + [last, 1, last]))
    return last * sub_n, [f for f in factors if not _is_identity(f)]


def factor_count_bound(chain: InvariantFactorChain) -> int:
    top = max(chain.a)
    return 3 + 5 * (chain.g - 2) + 2 * math.ceil(math.log2(top)) if top > 1 else 3 + 5 * (chain.g - 2)


def decompose_principal_chain(chain: InvariantFactorChain | Sequence[int],
                              p: int | None = None) -> DecompositionCertificate:
    """Decompose ``diag(chain)`` into spectrally paired factors.

    Raises GenusTooSmall for g < 2, NotPrincipal if the product of the chain
    is not a square, NotCoprime if ``p`` divides an entry.
    """
    if not isinstance(chain, InvariantFactorChain):
        chain = InvariantFactorChain(tuple(chain))
    if chain.g < 2:
        raise GenusTooSmall(f"decomposition needs genus >= 2, got g={chain.g}")
    if not is_perfect_square(chain.degree):
        raise NotPrincipal(f"degree {chain.degree} of chain {chain.a} is not a perfect square")
    if p is not None:
        if p < 2:
            raise InputError(f"prime must be >= 2, got {p}")
        if any(math.gcd(x, p) != 1 for x in chain.a):
            raise NotCoprime(f"{p} divides an entry of {chain.a}")

    N, factors = _decompose(list(chain.a))
    cert = DecompositionCertificate(N, tuple(as_int_matrix(f) for f in factors), chain, p)

    verdict = verify_decomposition(cert)
    if not verdict:
        raise InvariantViolation(f"decomposition of {chain.a} failed verification: {verdict.reason}")
    if len(cert.factors) > factor_count_bound(chain):
        raise InvariantViolation(f"{len(cert.factors)} factors exceeds bound for {chain.a}")
    if p is not None:
        if math.gcd(N, p) != 1 or any(math.gcd(det(f), p) != 1 for f in cert.factors):
            raise InvariantViolation(f"decomposition of {chain.a} is not prime to {p}")
    return cert


def verify_decomposition(cert: DecompositionCertificate) -> Verdict:
    """Independent certificate check: recomposition and pairing of each factor."""
    size = len(cert.chain.a)
    if cert.N < 1:
        return Verdict(False, "nonpositive-multiplier")
    product = identity(size)
    for i, f in enumerate(cert.factors):
        f = np.asarray(f, dtype=object)
        if f.shape != (size, size):
            return Verdict(False, f"factor-{i}-shape")
        if det(f) == 0:
            return Verdict(False, f"factor-{i}-singular")
        if not is_spectrally_paired(cokernel_of(f)):
            return Verdict(False, f"factor-{i}-not-paired")
        product = product @ f
    if not np.array_equal(product, cert.N * cert.chain.matrix()):
        return Verdict(False, "product-mismatch")
    return Verdict(True, "ok")
