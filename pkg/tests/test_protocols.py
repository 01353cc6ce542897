import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from chiport import protocols
from chiport.bases import (
    BasisParams,
    bell_state,
    reference_state,
)
from chiport.protocols import (
    SUCCESS_FIDELITY,
    ProtocolError,
    ProtocolTranscript,
    RecordedOutcome,
    coop_joint_probabilities,
    coop_table,
    cooperative_branches,
    correction_search,
    dense_code_capacity_check,
    dense_code_D0,
    dense_code_restricted,
    dense_code_S0,
    derived_tables,
    e0_table,
    general_feasibility,
    partial_family_table,
    partial_feasibility,
    partial_transfer_map,
    restricted_encoding_gram,
    t0_table,
    teleport_cooperative_ghz_style,
    teleport_partial_channel,
    teleport_standard,
    teleport_two_qubit,
)
from chiport.qstate import InvariantViolation, StateVector, apply_local_operator

from conftest import haar, states

FIXTURE = Path(__file__).parent / "fixtures" / "correction_tables.json"
S = 1 / math.sqrt(2)


def family_input(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    a /= np.linalg.norm(a)
    amps = a[0] * bell_state(0).amplitudes + a[1] * bell_state(1).amplitudes
    return StateVector(amps, ("A1", "A2"))


# standard teleportation


def test_t0_zero_state_outcome_3():
    t = teleport_standard(StateVector.basis("0", ("Q",)), outcome=3)
    assert t.corrections == (("B", 3),)
    assert t.fidelity == pytest.approx(1.0, abs=1e-12)
    assert t.classical_bits == 2


def test_t0_table_is_pauli_inverse():
    assert t0_table().entries == {i: (i,) for i in range(4)}


@pytest.mark.parametrize("outcome", range(4))
def test_t0_every_outcome(rng, outcome):
    psi = haar(rng, ("Q",))
    t = teleport_standard(psi, outcome=outcome)
    assert t.fidelity > SUCCESS_FIDELITY
    assert t.outcome_probability == pytest.approx(0.25, abs=1e-12)


def test_t0_rejects_two_qubits(rng):
    with pytest.raises(ProtocolError):
        teleport_standard(haar(rng, ("P", "Q")))


# two-qubit teleportation


def test_e0_table_shape():
    table = e0_table()
    assert table.total
    assert table.entries == {k: divmod(k, 4) for k in range(16)}


def test_e0_table_same_for_random_parameters(rng):
    for _ in range(3):
        assert e0_table(BasisParams.random(rng)).entries == e0_table().entries


def test_e0_example_outcome_6(rng):
    psi = StateVector.basis("01", ("A1", "A2"))
    t = teleport_two_qubit(psi, outcome=6)
    assert t.corrections == (("B1", 1), ("B2", 2))
    assert t.fidelity == pytest.approx(1.0, abs=1e-12)
    assert t.outcome_probability == pytest.approx(1 / 16)


def test_e0_generic_parameters(rng):
    p = BasisParams.random(rng)
    for k in range(16):
        t = teleport_two_qubit(haar(rng, ("A1", "A2")), p, outcome=k)
        assert t.fidelity > SUCCESS_FIDELITY
        assert t.channel.startswith("chi_bar(")


def test_e0_seed_reproducible(rng):
    psi = haar(rng, ("A1", "A2"))
    a = [teleport_two_qubit(psi, seed=s).outcome_key for s in range(30)]
    b = [teleport_two_qubit(psi, seed=s).outcome_key for s in range(30)]
    assert a == b


# correction search


def test_correction_search_finds_pauli(rng):
    psi = haar(rng, ("B1", "B2"))
    bent = apply_local_operator(protocols.pauli_string((2, 3)), ("B1", "B2"), psi)
    assert correction_search(bent, psi) == (2, 3)


def test_correction_search_none():
    # |0> and |+> are not related by any Pauli up to phase
    assert correction_search(StateVector.basis("0", ("B",)), StateVector([S, S], ("B",))) is None


# partial channel


def test_partial_transfer_map_terms():
    m = 4 * partial_transfer_map()
    expected_image = {0: (0, 1), 1: (1, 1), 2: (1, -1j), 3: (0, 1)}
    for k, (target, phase) in expected_image.items():
        out = m @ bell_state(k).amplitudes
        np.testing.assert_allclose(out, phase * bell_state(target).amplitudes, atol=1e-10)
        assert abs(abs(phase) - 1) < 1e-15


def test_partial_family_table_fixed():
    got = partial_family_table().entries
    assert got[0] == (0, 0) and got[2] == (2, 3) and got[15] == (2, 2)
    assert partial_family_table().total


def test_partial_family_inputs_faithful(rng):
    for _ in range(20):
        psi = family_input(rng)
        report = partial_feasibility(psi)
        assert report.in_family and report.verdict == "faithful"
        t, _ = teleport_partial_channel(psi, seed=int(rng.integers(1 << 30)))
        assert t.fidelity > SUCCESS_FIDELITY


def test_partial_general_input_not_faithful():
    psi = bell_state(2)
    report = partial_feasibility(psi)
    assert report.verdict == "not faithful"
    assert not report.in_family
    assert not report.general_feasible
    assert not general_feasibility().total


def test_partial_degrades_on_psi2():
    """Psi2 maps onto Psi1 on A4B1, so the best fidelity is |<Psi1|Psi2>|^2 = 0."""
    fids = [teleport_partial_channel(bell_state(2), outcome=k)[0].fidelity for k in range(16)]
    assert max(fids) < 1 - 1e-3


# cooperative teleportation


def bracket(a, b, k):
    """Hand-written B1B2B3 amplitudes of the k-th branch, times 4."""
    even = np.zeros(8, dtype=complex)
    odd = np.zeros(8, dtype=complex)
    for bits, c in {"000": 1, "011": -1, "101": -1, "110": 1}.items():
        even[int(bits, 2)] = c
    for bits in ("001", "010", "100", "111"):
        odd[int(bits, 2)] = 1
    return {0: a * even + b * odd, 1: a * odd + b * even, 2: a * odd - b * even, 3: a * even - b * odd}[k]


def test_cooperative_branches(rng):
    psi = haar(rng, ("Q",))
    a, b = psi.amplitudes
    rows = cooperative_branches(psi)
    for k, phase in enumerate((1, 1, 1j, 1)):
        np.testing.assert_allclose(rows[k], phase * bracket(a, b, k) / 4, atol=1e-12)


def test_cooperative_joint_uniform(rng):
    probs = coop_joint_probabilities(haar(rng, ("Q",)))
    assert len(probs) == 16
    assert all(p == pytest.approx(1 / 16, abs=1e-12) for p in probs.values())


def test_cooperative_table_total():
    table = coop_table()
    assert table.total and len(table.entries) == 16
    assert table.entries[(1, 0, 1)] == (3,)


def test_cooperative_every_key(rng):
    psi = haar(rng, ("Q",))
    for key in coop_table().entries:
        t = teleport_cooperative_ghz_style(psi, outcome=key)
        assert t.fidelity > SUCCESS_FIDELITY
        assert t.classical_bits == 4


# dense coding


@pytest.mark.parametrize("scheme, size", [(dense_code_D0, 16), (dense_code_S0, 16), (dense_code_restricted, 8)])
def test_dense_coding_decodes_every_message(scheme, size):
    for m in range(size):
        r = scheme(m, seed=m)
        assert r.success and r.probability == pytest.approx(1.0, abs=1e-10)


def test_dense_coding_examples():
    r = dense_code_D0(9)
    assert r.decoded == 9 and r.encoding == (("A3", 2), ("A4", 1))
    assert r.classical_bits == 4 and r.particles_sent == 2 and r.decoding == "joint"
    r = dense_code_S0(9)
    assert [o.index for o in r.outcomes] == [2, 1] and r.decoding == "local"
    assert dense_code_restricted(5).classical_bits == 3


def test_dense_coding_bad_message():
    with pytest.raises(ProtocolError):
        dense_code_D0(16)
    with pytest.raises(ProtocolError):
        dense_code_restricted(8)


def test_restricted_alphabet_matters():
    full = restricted_encoding_gram()
    off = np.abs(full - np.diag(np.diag(full)))
    assert off.max() > 0.5  # sigma^1 / sigma^2 on A3 collide with B2 encodings
    restricted = restricted_encoding_gram((0, 3))
    np.testing.assert_allclose(restricted, np.eye(8), atol=1e-12)


@pytest.mark.parametrize("state, rank", [("BellPairProduct", 16), ("GHZ4", 8), ("W4", 8)])
def test_capacity_reference_states(state, rank):
    # the Bell pairs sit on (A3,B1),(A4,B2) so the senders A3,A4 hold one half each
    channel = reference_state(state)
    report = dense_code_capacity_check(channel, ("A3", "A4") if state == "BellPairProduct" else None)
    assert report.rank == rank
    assert report.perfect_decoding == (rank == 16)


def test_capacity_chi():
    from chiport.bases import chi00_state

    report = dense_code_capacity_check(chi00_state())
    assert report.rank == 16 and report.perfect_decoding


# transcripts and tables


def test_transcript_bits_invariant():
    rec = RecordedOutcome("bell", 0, 0.25, 4)
    with pytest.raises(InvariantViolation):
        ProtocolTranscript("x", 0, "c", (rec,), 3, (), None, None, 0.25)
    with pytest.raises(InvariantViolation):
        ProtocolTranscript("x", 0, "c", (rec,), 2, (), None, 1.5, 0.25)


def test_tables_match_fixture():
    assert derived_tables() == json.loads(FIXTURE.read_text())


@settings(max_examples=30, deadline=None)
@given(states(2))
def test_e0_any_input(psi):
    for k in (0, 7, 13):
        assert teleport_two_qubit(psi, outcome=k).fidelity > SUCCESS_FIDELITY


@settings(max_examples=30, deadline=None)
@given(states(1))
def test_t0_any_input(psi):
    assert teleport_standard(psi, seed=1).fidelity > SUCCESS_FIDELITY

