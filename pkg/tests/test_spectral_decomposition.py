import math
import random

import numpy as np
import pytest

from sweeps import principal_chains
from twistlat.errors import GenusTooSmall, InputError, NotCoprime, NotPrincipal
from twistlat.exact_linalg import cokernel_of, det, diag
from twistlat.isogeny_lattice import is_spectrally_paired
from twistlat.spectral_decomposition import (
    DecompositionCertificate,
    InvariantFactorChain,
    decompose_principal_chain,
    factor_count_bound,
    genus_two_split,
    square_split,
    verify_decomposition,
)


def _factors(cert):
    return [f.tolist() for f in cert.factors]


def test_already_paired_chain():
    cert = decompose_principal_chain((1, 1, 2, 2))
    assert cert.N == 1
    assert _factors(cert) == [diag([1, 1, 2, 2]).tolist()]


def test_square_identity_chain():
    cert = decompose_principal_chain((1, 1, 1, 4))
    assert cert.N == 2
    assert _factors(cert) == [
        diag([1, 1, 2, 2]).tolist(),
        diag([1, 2, 1, 2]).tolist(),
        diag([2, 1, 1, 2]).tolist(),
    ]
    prod = cert.factors[0] @ cert.factors[1] @ cert.factors[2]
    assert np.array_equal(prod, diag([2, 2, 2, 8]))


def test_gcd_factor_already_paired():
    cert = decompose_principal_chain((1, 2, 2, 4))
    assert cert.N == 1
    assert _factors(cert) == [diag([1, 1, 2, 2]).tolist(), diag([1, 2, 1, 2]).tolist()]


@pytest.mark.parametrize(
    "chain, exc",
    [
        ((1, 1, 1, 2), NotPrincipal),
        ((2, 2), GenusTooSmall),
        ((1, 4), GenusTooSmall),
        ((1, 2, 3, 6), InputError),  # 2 does not divide 3
        ((1, 1, 3, 3), None),
    ],
)
def test_errors(chain, exc):
    if exc is None:
        decompose_principal_chain(chain)
    else:
        with pytest.raises(exc):
            decompose_principal_chain(chain)


def test_not_coprime():
    with pytest.raises(NotCoprime):
        decompose_principal_chain((1, 1, 3, 3), p=3)


def test_verify_rejects_unpaired_factor():
    cert = decompose_principal_chain((1, 1, 1, 4))
    forged = DecompositionCertificate(cert.N, (diag([1, 1, 1, 4]),) + cert.factors[1:], cert.chain)
    verdict = verify_decomposition(forged)
    assert not verdict
    assert verdict.reason == "factor-0-not-paired"


def test_verify_rejects_wrong_multiplier():
    cert = decompose_principal_chain((1, 1, 2, 2))
    verdict = verify_decomposition(DecompositionCertificate(3, cert.factors, cert.chain))
    assert not verdict
    assert verdict.reason == "product-mismatch"


def test_verify_accepts():
    assert verify_decomposition(decompose_principal_chain((1, 1, 2, 2)))


def test_genus_two_split_random_steps():
    rng = random.Random(5)
    for _ in range(100):
        d = [rng.randint(1, 12) for _ in range(4)]
        a = [math.prod(d[: i + 1]) for i in range(4)]
        f1, f2, f3 = genus_two_split(d)
        assert np.array_equal(f1 @ f2 @ f3, diag(a))


@pytest.mark.parametrize("position", [0, 1, 2, 3])
@pytest.mark.parametrize("x", [1, 2, 3, 5])
def test_square_split(position, x):
    target = [1, 1, 1, 1]
    target[position] = x * x
    fs = square_split(x, position)
    assert np.array_equal(fs[0] @ fs[1] @ fs[2], x * diag(target))
    for f in fs:
        assert is_spectrally_paired(cokernel_of(f))


def _check(cert, p=None):
    assert verify_decomposition(cert)
    assert len(cert.factors) <= factor_count_bound(cert.chain)
    if p is not None:
        assert math.gcd(cert.N, p) == 1
        assert all(math.gcd(det(f), p) == 1 for f in cert.factors)


def test_genus_two_sweep():
    chains = list(principal_chains(2, 16))
    assert len(chains) > 20
    for chain in chains:
        _check(decompose_principal_chain(chain))


def test_genus_three_sweep():
    for chain in principal_chains(3, 8):
        _check(decompose_principal_chain(chain))


def test_genus_four_sample():
    for chain in [(1,) * 7 + (4,), (1, 1, 1, 2, 2, 2, 2, 4), (1, 2, 2, 2, 2, 4, 4, 4), (1,) * 7 + (9,)]:
        _check(decompose_principal_chain(chain))


@pytest.mark.parametrize("p", [3, 5])
def test_prime_to_p(p):
    for g, top in ((2, 16), (3, 8)):
        for chain in principal_chains(g, top, coprime_to=p):
            _check(decompose_principal_chain(chain, p=p), p)


def test_chain_type():
    c = InvariantFactorChain((1, 2, 2, 4))
    assert c.g == 2
    assert c.steps == (1, 2, 1, 2)
    assert c.degree == 16
    with pytest.raises(InputError):
        InvariantFactorChain((1, 2, 3))
    assert np.array_equal(c.matrix(), diag([1, 2, 2, 4]))
