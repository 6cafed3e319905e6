"""End-to-end lattice witness that a principal isogeny is a chain of
spectrally paired ones, each carrying a twist that realises its kernel.

For every factor F of the decomposition the report records the kernel,
the block twist with that kernel as image, its isotropy, and whether the
extended isogeny [[0, F], [-n F'^T, 0]] scales the symplectic form by n^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cocycle_pairing import AntisymTwist, antisym_with_image, image_mod_n, isotropy_check
from .errors import InputError
from .exact_linalg import FiniteAbelianGroup, cokernel_of
from .isogeny_lattice import CONVENTION, extend_isogeny, is_spectrally_paired, verify_conformal_symplectic
from .serialize import encode_group, encode_matrix
from .spectral_decomposition import DecompositionCertificate, InvariantFactorChain, decompose_principal_chain

N_POLICIES = ("exponent", "lcm")


@dataclass(frozen=True, eq=False)
class FactorRecord:
    matrix: np.ndarray
    kernel: FiniteAbelianGroup
    n: int
    twist: AntisymTwist
    image_matches: bool
    isotropic: bool
    conformal_symplectic: bool

    @property
    def ok(self) -> bool:
        return self.image_matches and self.isotropic and self.conformal_symplectic

    def to_dict(self) -> dict:
        return {
            "matrix": encode_matrix(self.matrix),
            "kernel": encode_group(self.kernel),
            "n": str(self.n),
            "twist": encode_matrix(self.twist.A),
            "image_matches_kernel": self.image_matches,
            "isotropic": self.isotropic,
            "conformal_symplectic": self.conformal_symplectic,
        }


@dataclass(frozen=True, eq=False)
class WitnessReport:
    chain: InvariantFactorChain
    certificate: DecompositionCertificate
    n_policy: str
    factors: tuple[FactorRecord, ...]

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.factors)

    def to_dict(self) -> dict:
        return {
            "chain": [str(a) for a in self.chain.a],
            "prime": None if self.certificate.prime is None else str(self.certificate.prime),
            "N": str(self.certificate.N),
            "n_policy": self.n_policy,
            "convention": CONVENTION,
            "factors": [f.to_dict() for f in self.factors],
            "all_verdicts": self.ok,
        }


def run_witness_pipeline(chain: InvariantFactorChain | Sequence[int], n_policy: str = "exponent",
                         p: int | None = None) -> WitnessReport:
    if n_policy not in N_POLICIES:
        raise InputError(f"n_policy must be one of {N_POLICIES}")
    cert = decompose_principal_chain(chain, p)
    g = cert.chain.g
    kernels = [cokernel_of(f) for f in cert.factors]
    common = math.lcm(*(k.exponent for k in kernels)) if kernels else 1
    records = []
    for f, ker in zip(cert.factors, kernels):
        if not is_spectrally_paired(ker):
            raise InputError(f"factor kernel {ker} is not spectrally paired")
        n = ker.exponent if n_policy == "exponent" else common
        twist = antisym_with_image(ker.factors[0::2], n, g)
        records.append(FactorRecord(
            matrix=f,
            kernel=ker,
            n=n,
            twist=twist,
            image_matches=image_mod_n(twist.A, n) == ker,
            isotropic=isotropy_check(twist),
            conformal_symplectic=verify_conformal_symplectic(extend_isogeny(f, n)),
        ))
    return WitnessReport(cert.chain, cert, n_policy, tuple(records))
