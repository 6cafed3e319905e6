import random
from fractions import Fraction

import numpy as np
import pytest

from twistlat.cocycle_pairing import AntisymTwist, antisym_with_image
from twistlat.errors import InputError, NotIsotropic, SingularMatrixError
from twistlat.exact_linalg import (
    as_rat_matrix,
    det,
    diag,
    hermite_normal_form,
    identity,
    int_inverse,
    random_unimodular,
    zeros,
)
from twistlat.twisted_hodge import (
    BField,
    ComplexStructure,
    antisymmetric_integer_matrices,
    build_J_alpha,
    graph_points,
    intertwines,
    is_symplectic_isomorphism,
    pi_tilde,
    presentations_agree,
    quotient_lattice,
    random_bfield,
    random_complex_structure,
    split_structure,
    standard_complex_structure,
    symplectic_report,
    torus_map_kernel,
    twist_of_bfield,
)

CS1 = standard_complex_structure(1)
J = CS1.J


def _bfield(nB, n):
    k = len(nB)
    return BField(k // 2, n, as_rat_matrix(nB) * Fraction(1, n))


def test_types_validate():
    with pytest.raises(InputError):
        ComplexStructure(1, [[1, 0], [0, 1]])
    with pytest.raises(InputError):
        BField(1, 2, [[0, Fraction(1, 3)], [Fraction(-1, 3), 0]])
    with pytest.raises(InputError):
        BField(1, 2, [[1, 0], [0, 0]])


def test_J_alpha_untwisted():
    ta = build_J_alpha(CS1, BField(1, 1, zeros(2, 2)))
    assert np.array_equal(ta.J_alpha, split_structure(CS1))


def test_J_alpha_half_J():
    b = BField(1, 2, -J / 2)
    ta = build_J_alpha(CS1, b)
    Z = zeros(2, 2)
    assert np.array_equal(ta.J_alpha, np.block([[J, Z], [Z, J]]))


def test_pi_tilde_examples():
    assert np.array_equal(pi_tilde(1, BField(1, 1, zeros(2, 2))), identity(4))
    M = pi_tilde(2, BField(1, 2, -J / 2))
    Z = zeros(2, 2)
    assert np.array_equal(M, np.block([[2 * identity(2), Z], [-J, identity(2)]]))
    with pytest.raises(InputError):
        pi_tilde(3, BField(1, 2, -J / 2))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_random_identities(g):
    rng = random.Random(100 + g)
    for _ in range(100 if g < 3 else 20):
        cs = random_complex_structure(g, rng)
        n = rng.randint(1, 6)
        b = random_bfield(g, n, rng, bound=5)
        ta = build_J_alpha(cs, b)
        assert np.array_equal(ta.J_alpha @ ta.J_alpha, -identity(4 * g))
        assert intertwines(pi_tilde(n, b), split_structure(cs), ta.J_alpha)


def test_torus_kernel_examples():
    assert torus_map_kernel(identity(4)).group.order == 1
    k = torus_map_kernel(pi_tilde(2, BField(1, 2, zeros(2, 2))))
    assert k.group.factors == (2, 2)
    h = Fraction(1, 2)
    assert set(k.representatives) == {(x, y, 0, 0) for x in (0, h) for y in (0, h)}
    b = BField(1, 2, -J / 2)
    k = torus_map_kernel(pi_tilde(2, b))
    assert k.group.order == 4
    # (x, -2 B x) = (x, J x) mod 1
    assert set(k.representatives) == {(0, 0, 0, 0), (h, 0, 0, h), (0, h, h, 0), (h, h, h, h)}
    with pytest.raises(SingularMatrixError):
        torus_map_kernel(diag([1, 0]))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("g", [1, 2])
def test_kernel_is_graph_exhaustive(n, g):
    # every antisymmetric nB with entries in [-2, 2]
    for nB in antisymmetric_integer_matrices(2 * g, 2):
        b = _bfield(nB, n)
        ker = torus_map_kernel(pi_tilde(n, b))
        assert ker.group.order == n ** (2 * g)
        assert ker.same_points(n, graph_points(twist_of_bfield(b).A, n))
        assert presentations_agree(n, b)


def test_quotient_lattice_examples():
    m = quotient_lattice(2, AntisymTwist(2, 1, zeros(2, 2)))
    assert m.index == 4
    assert np.array_equal(m.basis, as_rat_matrix(diag([1, 1, 2, 2])) * Fraction(1, 2))

    m = quotient_lattice(2, AntisymTwist(2, 1, [[0, 1], [-1, 0]]))
    assert m.index == 4
    graph = np.concatenate([identity(2), as_rat_matrix([[0, 1], [-1, 0]])], axis=0)
    oracle = hermite_normal_form(np.concatenate([2 * identity(4), graph], axis=1))
    assert np.array_equal(m.numerators, oracle)
    assert abs(det(m.basis)) == Fraction(1, 4)

    with pytest.raises(NotIsotropic):
        quotient_lattice(3, AntisymTwist(3, 1, [[0, 1], [1, 0]]))


def test_quotient_lattice_index_on_lemma_twists():
    for n in range(1, 5):
        divs = [a for a in range(1, n + 1) if n % a == 0]
        for g in (1, 2):
            for a in divs:
                for b in divs:
                    t = antisym_with_image([a, b][:g], n, g)
                    assert quotient_lattice(n, t).index == n ** (2 * g)


def test_presentations_examples():
    assert presentations_agree(1, BField(1, 1, zeros(2, 2)))
    assert presentations_agree(2, BField(1, 2, -J / 2))
    assert not presentations_agree(2, BField(1, 2, zeros(2, 2)), AntisymTwist(2, 1, [[0, 1], [1, 0]]))


def test_presentations_reject_forgeries():
    rng = random.Random(9)
    forged = 0
    while forged < 50:
        g, n = rng.choice([1, 2]), rng.choice([2, 3, 4])
        b = random_bfield(g, n, rng)
        A = twist_of_bfield(b).A
        other = random_bfield(g, n, rng)
        fake = twist_of_bfield(other)
        if np.array_equal(fake.A, A):
            continue
        assert not presentations_agree(n, b, fake)
        forged += 1


# --- symplectic isomorphism checker ---------------------------------------------


def _structures(n=2):
    B = -J / 2
    return build_J_alpha(CS1, BField(1, n, B)), build_J_alpha(CS1, BField(1, n, -B))


def test_identity_accepted():
    src, _ = _structures()
    assert is_symplectic_isomorphism(identity(4), src, src)


def test_sign_flip_fails_only_the_form():
    src, dst = _structures()
    psi = diag([-1, -1, 1, 1])
    rep = symplectic_report(psi, src, dst)
    assert rep.unimodular and rep.intertwines
    assert not rep.preserves_form
    S = src.S
    assert np.array_equal(psi.T @ S @ psi, -S)
    assert not is_symplectic_isomorphism(psi, src, dst)


def test_non_unimodular_rejected():
    src, _ = _structures()
    rep = symplectic_report(2 * identity(4), src, src)
    assert not rep.unimodular
    assert not is_symplectic_isomorphism(2 * identity(4), src, src)


def test_dimension_mismatch():
    src, _ = _structures()
    with pytest.raises(InputError):
        symplectic_report(identity(2), src, src)


def _transport(P):
    """blockdiag(P, P^-T): takes (J, B) to (P J P^-1, P^-T B P^-1)."""
    Pi = int_inverse(P)
    k = P.shape[0]
    return np.block([[P, zeros(k, k)], [zeros(k, k), Pi.T]]).astype(object), Pi


def test_transport_is_symplectic_and_transitive():
    rng = random.Random(4)
    for _ in range(20):
        g = rng.choice([1, 2])
        n = rng.randint(1, 4)
        cs, b = random_complex_structure(g, rng), random_bfield(g, n, rng)
        structs, psis = [build_J_alpha(cs, b)], []
        for _ in range(2):
            P = random_unimodular(2 * g, rng)
            psi, Pi = _transport(P)
            cs = ComplexStructure(g, as_rat_matrix(P) @ cs.J @ Pi)
            b = BField(g, n, as_rat_matrix(Pi.T) @ b.B @ Pi)
            structs.append(build_J_alpha(cs, b))
            psis.append(psi)
        assert is_symplectic_isomorphism(psis[0], structs[0], structs[1])
        assert is_symplectic_isomorphism(psis[1], structs[1], structs[2])
        assert is_symplectic_isomorphism(psis[1] @ psis[0], structs[0], structs[2])
