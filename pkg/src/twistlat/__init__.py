"""Exact lattice computations for twisted abelian varieties.

Submodules:

* :mod:`twistlat.exact_linalg` - Smith/Hermite forms, determinants, exterior powers
* :mod:`twistlat.isogeny_lattice` - isogenies as integer matrices, extended isogenies
* :mod:`twistlat.spectral_decomposition` - principal isogenies as spectrally paired chains
* :mod:`twistlat.cocycle_pairing` - twists, alternating pairings, 2-cocycles
* :mod:`twistlat.twisted_hodge` - twisted complex structures and quotient lattices
* :mod:`twistlat.kuga_satake` - Kuga-Satake degree bookkeeping
* :mod:`twistlat.witness` and :mod:`twistlat.cli` - end-to-end pipeline and CLI
"""

from .exact_linalg import FiniteAbelianGroup, cokernel_of, smith_normal_form
from .spectral_decomposition import decompose_principal_chain, verify_decomposition
from .witness import run_witness_pipeline

__all__ = [
    "FiniteAbelianGroup",
    "cokernel_of",
    "decompose_principal_chain",
    "run_witness_pipeline",
    "smith_normal_form",
    "verify_decomposition",
]

__version__ = "0.1.0"
