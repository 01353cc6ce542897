import itertools
import math

import numpy as np
import pytest

from chiport import bases
from chiport.bases import (
    CHI_POINT,
    BasisError,
    BasisParams,
    OrthonormalBasis,
    bell_basis,
    chi00_state,
    chi_bar_closed_form,
    chi_bar_state,
    chi_basis,
    parametrized_two_qubit_basis,
    pauli_operator,
    pi_bar_basis,
    pi_basis_on_A1A2A3B2,
    reference_state,
    subspace_basis_8,
)
from chiport.qstate import InvariantViolation, StateVector, apply_local_operator, partial_trace

S = 1 / math.sqrt(2)
R = 1 / (2 * math.sqrt(2))


def assert_orthonormal(basis, tol=1e-10):
    assert np.abs(basis.gram() - np.eye(len(basis))).max() < tol


def ket_amps(terms, n=4):
    amps = np.zeros(2 ** n, dtype=complex)
    for bits, c in terms.items():
        amps[int(bits, 2)] = c
    return amps


def test_pauli_matrices():
    np.testing.assert_array_equal(pauli_operator(0).matrix, np.eye(2))
    np.testing.assert_array_equal(pauli_operator(1).matrix, [[0, 1], [1, 0]])
    s1, s2, s3 = (pauli_operator(i).matrix for i in (1, 2, 3))
    # 2x2 products written out by hand: s1 s2 = i s3, so s1 s2 s3 = i I
    np.testing.assert_allclose(s1 @ s2, 1j * np.array([[1, 0], [0, -1]]))
    np.testing.assert_allclose(s1 @ s2 @ s3, 1j * np.eye(2))
    for i in range(4):
        m = pauli_operator(i).matrix
        np.testing.assert_allclose(m, m.conj().T)
        np.testing.assert_allclose(m @ m, np.eye(2))


@pytest.mark.parametrize("bad", [-1, 4, 1.5, "1", True])
def test_pauli_range(bad):
    with pytest.raises(BasisError):
        pauli_operator(bad)


def test_bell_basis():
    b = bell_basis()
    np.testing.assert_allclose(b[0].amplitudes, [S, 0, 0, S])
    np.testing.assert_allclose(b[1].amplitudes, [0, S, S, 0])
    assert_orthonormal(b)
    assert b.complete


def test_J_basis_at_quarter_pi():
    b = parametrized_two_qubit_basis("J", math.pi / 4, math.pi / 4)
    expected = [[S, 0, 0, S], [0, S, S, 0], [0, -S, S, 0], [-S, 0, 0, S]]
    np.testing.assert_allclose(b.matrix(), expected, atol=1e-15)


def test_Jprime_swaps_sin_and_cos():
    b = parametrized_two_qubit_basis("Jprime", 0.3, 0.2)
    np.testing.assert_allclose(b[1].amplitudes, [0, math.sin(0.2), math.cos(0.2), 0])
    np.testing.assert_allclose(b[2].amplitudes, [0, math.cos(0.2), -math.sin(0.2), 0])
    b = parametrized_two_qubit_basis("Jprime", math.pi / 4, math.pi / 4)
    np.testing.assert_allclose(b[1].amplitudes, [0, S, S, 0], atol=1e-15)


@pytest.mark.parametrize("kind", ["J", "Jprime"])
def test_parametrized_bases_orthonormal(rng, kind):
    for _ in range(50):
        t, f = rng.uniform(1e-3, math.pi / 2 - 1e-3, size=2)
        assert_orthonormal(parametrized_two_qubit_basis(kind, t, f))


@pytest.mark.parametrize("theta, phi", [(0.0, 0.3), (0.3, math.pi / 2), (-0.1, 0.2)])
def test_parametrized_angle_range(theta, phi):
    with pytest.raises(BasisError):
        parametrized_two_qubit_basis("J", theta, phi)


@pytest.mark.parametrize(
    "args",
    [(0.5, 0.5, 0.4, 0.2), (0.5, 0.3, 0.4, 0.4), (0.0, 0.3, 0.4, 0.2), (0.5, 0.3, 0.4, math.pi / 2)],
)
def test_basis_params_validation(args):
    with pytest.raises(BasisError):
        BasisParams(*args)


def test_chi_point_gives_chi00():
    expected = ket_amps({
        "0000": R, "0011": -R, "0101": -R, "0110": R,
        "1001": R, "1010": R, "1100": R, "1111": R,
    })
    np.testing.assert_allclose(chi_bar_state(CHI_POINT).amplitudes, expected, atol=1e-15)
    np.testing.assert_array_equal(chi00_state().amplitudes, expected)


def test_chi_bar_small_differences_factorize():
    p = BasisParams(0.5 + 1e-6, 0.5, 0.7 + 1e-6, 0.7)
    s = chi_bar_state(p)
    limit = ket_amps({"0000": 0.5, "0110": 0.5, "1001": 0.5, "1111": 0.5})
    np.testing.assert_allclose(s.amplitudes, limit, atol=1e-5)
    # a3 = b2 and a4 = b1 in every term: Bell pairs on A3B2 and A4B1, so that marginal is pure
    lim = StateVector(limit, bases.CHANNEL_LABELS)
    rho = partial_trace(lim, ("A3", "B2"))
    assert abs(np.trace(rho.matrix @ rho.matrix) - 1) < 1e-12
    np.testing.assert_allclose(lim.amplitudes, bases.bell_pair_product(("A3", "A4", "B2", "B1"))
                               .reorder(bases.CHANNEL_LABELS).amplitudes, atol=1e-15)


def test_chi_bar_0011_coefficient(rng):
    for _ in range(20):
        p = BasisParams.random(rng)
        got = chi_bar_state(p).amplitudes[0b0011]
        assert abs(got - (-0.5 * math.sin(p.theta1 - p.theta2))) < 1e-12


def test_chi_bar_definition_matches_closed_form(rng):
    for _ in range(100):
        p = BasisParams.random(rng)
        np.testing.assert_allclose(chi_bar_state(p).amplitudes, chi_bar_closed_form(p).amplitudes, atol=1e-12)


def test_specialization_depends_only_on_differences(rng):
    for _ in range(10):
        d = math.pi / 4
        t2 = rng.uniform(0.01, math.pi / 4 - 0.01)
        f2 = rng.uniform(0.01, math.pi / 4 - 0.01)
        p = BasisParams(t2 + d, t2, f2 + d, f2)
        np.testing.assert_allclose(chi_bar_state(p).amplitudes, chi00_state().amplitudes, atol=1e-12)


def test_chi_basis():
    b = chi_basis()
    assert len(b) == 16
    assert_orthonormal(b)
    assert np.all(np.isclose(np.abs(b[0].amplitudes[b[0].amplitudes != 0]), R))
    assert abs(np.vdot(b[0].amplitudes, b[4 * 3 + 1].amplitudes)) < 1e-15


def test_chi_basis_on_A3B1_also_orthonormal():
    assert_orthonormal(chi_basis(("A3", "B1")))


def test_chi_basis_on_A3B2_is_not_a_basis():
    with pytest.raises(InvariantViolation):
        chi_basis(("A3", "B2"))


def test_pi_bar_basis_orthonormal(rng):
    for _ in range(20):
        b = pi_bar_basis(BasisParams.random(rng))
        assert len(b) == 16
        assert_orthonormal(b)


def test_pi_bar_at_chi_point_matches_partial_basis_pattern():
    # expanding half-sum |K'>|K> at the chi point gives the same sign pattern as the A1A2A3B2 basis
    np.testing.assert_allclose(pi_bar_basis(CHI_POINT)[0].amplitudes, pi_basis_on_A1A2A3B2()[0].amplitudes,
                               atol=1e-15)


def test_pi_bar_transfer_identity(rng):
    """<Pi00|chi_bar> acts as a quarter of the identity from A1A2 onto B1B2."""
    for _ in range(10):
        p = BasisParams.random(rng)
        pi00 = pi_bar_basis(p)[0].tensor()
        chi = chi_bar_state(p).tensor()
        m = np.einsum("abcd,cdef->efab", pi00.conj(), chi).reshape(4, 4)
        jp = parametrized_two_qubit_basis("Jprime", p.theta2, p.phi2).matrix()
        oracle = sum(np.outer(k, k.conj()) for k in jp) / 4
        np.testing.assert_allclose(m, oracle, atol=1e-12)
        np.testing.assert_allclose(m, np.eye(4) / 4, atol=1e-12)


def test_partial_basis_member():
    b = pi_basis_on_A1A2A3B2()
    assert b.labels == ("A1", "A2", "A3", "B2")
    assert b[0].amplitudes[0b0011] == pytest.approx(R)
    assert b[0].amplitudes[0b1100] == pytest.approx(-R)
    assert_orthonormal(b)


def test_subspace_basis_8():
    b = subspace_basis_8()
    assert len(b) == 8 and not b.complete
    assert_orthonormal(b)
    extra = apply_local_operator(pauli_operator(1), ["A3"], chi00_state())
    overlaps = np.abs(b.matrix().conj() @ extra.amplitudes)
    assert overlaps.max() > 0.1


def test_reference_states():
    bp = reference_state("BellPairProduct")
    assert set(np.flatnonzero(bp.amplitudes)) == {0b0000, 0b0101, 0b1010, 0b1111}
    np.testing.assert_allclose(bases.bell_pair_product().amplitudes, bp.amplitudes)
    assert abs(np.linalg.norm(reference_state("GHZ4").amplitudes) - 1) < 1e-15
    w = reference_state("W4")
    for q in w.labels:
        np.testing.assert_allclose(partial_trace(w, [q]).matrix, np.diag([0.75, 0.25]), atol=1e-15)
    with pytest.raises(BasisError):
        reference_state("GHZ3")


def test_non_orthonormal_basis_rejected():
    a = StateVector([1, 0], ("X",))
    b = StateVector([S, S], ("X",))
    with pytest.raises(InvariantViolation):
        OrthonormalBasis("bad", (a, b))


def test_from_differences():
    p = BasisParams.from_differences(0.3, 0.5)
    assert p.theta_difference == pytest.approx(0.3)
    assert p.phi_difference == pytest.approx(0.5)


def test_every_pair_of_pauli_indices_used_once():
    keys = [divmod(k, 4) for k in range(16)]
    assert keys == list(itertools.product(range(4), repeat=2))
