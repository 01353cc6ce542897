"""Executable teleportation and dense-coding protocols.

Each run builds the full register, samples the sender's measurement from a
seeded PCG64 stream, looks the receiver's Pauli fix-up in a correction table
and records everything in an immutable transcript. The tables are not typed
in by hand: :func:`correction_search` derives them by trying each Pauli
correction against fixed probe inputs.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from . import bases
from .bases import (
    BasisParams,
    OrthonormalBasis,
    bell_basis,
    bell_state,
    chi00_state,
    computational_basis,
    pauli_operator,
)
from .measurement import ZERO_PROB, generator, project
from .qstate import (
    INVARIANT_TOL,
    InvariantViolation,
    LocalOperator,
    QStateError,
    StateVector,
    apply_local_operator,
    fidelity,
    tensor_product,
)

SUCCESS_FIDELITY = 1 - 1e-9


class ProtocolError(QStateError):
    pass


@dataclass(frozen=True)
class RecordedOutcome:
    basis: str
    index: int
    probability: float
    size: int  # number of possible outcomes of this measurement


@dataclass(frozen=True, eq=False)
class ProtocolTranscript:
    protocol: str
    seed: int | None
    channel: str
    outcomes: tuple[RecordedOutcome, ...]
    classical_bits: int
    corrections: tuple[tuple[str, int], ...]
    final_state: StateVector | None
    fidelity: float | None
    outcome_probability: float

    def __post_init__(self):
        expected = sum(round(math.log2(o.size)) for o in self.outcomes)
        if self.classical_bits != expected:
            raise InvariantViolation(
                f"{self.protocol}: {self.classical_bits} classical bits for {expected} bits of outcomes"
            )
        if self.fidelity is not None and not 0.0 <= self.fidelity <= 1.0:
            raise InvariantViolation(f"fidelity {self.fidelity} outside [0, 1]")

    @property
    def outcome_key(self) -> tuple[int, ...]:
        return tuple(o.index for o in self.outcomes)

    def to_dict(self) -> dict:
        d = {
            "protocol": self.protocol,
            "seed": self.seed,
            "channel": self.channel,
            "outcomes": [
                {"basis": o.basis, "index": o.index, "probability": o.probability} for o in self.outcomes
            ],
            "classical_bits": self.classical_bits,
            "corrections": [{"target": t, "pauli": p} for t, p in self.corrections],
            "fidelity": self.fidelity,
            "outcome_probability": self.outcome_probability,
        }
        if self.final_state is not None:
            d["final_state"] = {
                "labels": list(self.final_state.labels),
                "amplitudes": [[float(a.real), float(a.imag)] for a in self.final_state.amplitudes],
            }
        return d


# ---------------------------------------------------------------------------
# correction tables


def pauli_string(indices: Sequence[int]) -> LocalOperator:
    op = pauli_operator(indices[0])
    for i in indices[1:]:
        op = op.kron(pauli_operator(i))
    return op


def _matches(conditional: StateVector, target: StateVector, paulis: Sequence[int]) -> bool:
    fixed = apply_local_operator(pauli_string(paulis), conditional.labels, conditional)
    return fidelity(fixed, target.relabel(conditional.labels)) > SUCCESS_FIDELITY


def correction_search(conditional: StateVector, target: StateVector) -> tuple[int, ...] | None:
    """First Pauli string (lexicographic) taking ``conditional`` onto ``target``.

    ``target`` is compared position by position, so its labels may differ
    from the receiver's. Works for any register size; the protocols use one
    and two qubits.
    """
    if target.num_qubits != conditional.num_qubits:
        raise ProtocolError("conditional and target registers differ in size")
    for paulis in itertools.product(range(4), repeat=conditional.num_qubits):
        if _matches(conditional, target, paulis):
            return paulis
    return None


def _joint_search(pairs: Sequence[tuple[StateVector, StateVector]]) -> tuple[int, ...] | None:
    """A single correction that works for every (conditional, target) pair."""
    n = pairs[0][0].num_qubits
    for paulis in itertools.product(range(4), repeat=n):
        if all(_matches(c, t, paulis) for c, t in pairs):
            return paulis
    return None


@dataclass(frozen=True)
class CorrectionTable:
    """Outcome key -> Pauli indices for ``targets`` (None marks no fix exists)."""

    name: str
    targets: tuple[str, ...]
    entries: dict[Hashable, tuple[int, ...] | None] = field(default_factory=dict)

    def __post_init__(self):
        for key, value in self.entries.items():
            if value is not None and len(value) != len(self.targets):
                raise ProtocolError(f"{self.name}: entry {key} has wrong length")

    def lookup(self, key) -> tuple[tuple[str, int], ...] | None:
        if key not in self.entries:
            raise ProtocolError(f"{self.name}: outcome {key} missing from correction table")
        value = self.entries[key]
        return None if value is None else tuple(zip(self.targets, value))

    @property
    def total(self) -> bool:
        return all(v is not None for v in self.entries.values())

    def to_json(self) -> dict:
        def key_str(k):
            return ",".join(map(str, k)) if isinstance(k, tuple) else str(k)

        return {
            "name": self.name,
            "targets": list(self.targets),
            "entries": {key_str(k): (None if v is None else list(v)) for k, v in self.entries.items()},
        }


def derive_table(
    name: str,
    targets: Sequence[str],
    keys: Sequence[Hashable],
    conditional: Callable[[StateVector, Hashable], StateVector | None],
    probes: Sequence[StateVector],
) -> CorrectionTable:
    """Search one correction per outcome that restores every probe at once.

    Probes for which an outcome has zero probability place no constraint
    on that outcome.
    """
    entries = {}
    for key in keys:
        pairs = [(c, p) for p in probes if (c := conditional(p, key)) is not None]
        entries[key] = _joint_search(pairs) if pairs else None
    return CorrectionTable(name, tuple(targets), entries)


def _haar_state(rng: np.random.Generator, labels: Sequence[str]) -> StateVector:
    z = rng.normal(size=2 ** len(labels)) + 1j * rng.normal(size=2 ** len(labels))
    return StateVector.from_amplitudes(z, labels, normalize=True)


def random_state(labels: Sequence[str], seed: int) -> StateVector:
    """Haar-random pure state drawn from the PCG64 stream of ``seed``."""
    return _haar_state(generator(seed), labels)


def _probes(labels: Sequence[str]) -> list[StateVector]:
    # three generic states: any map fixing all of them is the identity up to phase
    rng = generator(20240601)
    return [_haar_state(rng, labels) for _ in range(3)]


# ---------------------------------------------------------------------------
# measurement helpers


def _conditional(s: StateVector, basis: OrthonormalBasis, targets, index: int) -> StateVector | None:
    amps, rest = project(s, basis, targets)
    row = amps[index]
    p = float(np.vdot(row, row).real)
    return None if p < ZERO_PROB else StateVector(row / math.sqrt(p), rest)


def outcome_probabilities(s: StateVector, basis: OrthonormalBasis, targets=None) -> np.ndarray:
    amps, _ = project(s, basis, targets)
    return np.sum(np.abs(amps) ** 2, axis=1)


def _measure(
    s: StateVector,
    basis: OrthonormalBasis,
    targets,
    rng: np.random.Generator,
    forced: int | None = None,
) -> tuple[RecordedOutcome, StateVector | None]:
    """Sample (or force) one outcome; only the chosen post-state is built."""
    amps, rest = project(s, basis, targets)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    if probs.sum() < 1 - 1e-9:
        raise ProtocolError(f"basis {basis.name} does not cover the state")
    if forced is None:
        live = np.where(probs < ZERO_PROB, 0.0, probs)
        cdf = np.cumsum(live / live.sum())
        k = int(min(np.searchsorted(cdf, rng.random(), side="right"), np.flatnonzero(live)[-1]))
    else:
        k = int(forced)
        if probs[k] < ZERO_PROB:
            raise ProtocolError(f"forced outcome {k} has zero probability")
    p = float(probs[k])
    post = StateVector(amps[k] / math.sqrt(p), rest) if rest else None
    return RecordedOutcome(basis.name, k, p, len(basis)), post


def _apply_corrections(state: StateVector, corrections) -> StateVector:
    for label, i in corrections:
        state = apply_local_operator(pauli_operator(i), (label,), state)
    return state


def _check_input(psi: StateVector, n: int, labels: tuple[str, ...]) -> StateVector:
    if psi.num_qubits != n:
        raise ProtocolError(f"expected a {n}-qubit input, got {psi.num_qubits}")
    return psi.relabel(labels)


# ---------------------------------------------------------------------------
# standard one-qubit teleportation


def _t0_setup(psi: StateVector) -> StateVector:
    return tensor_product(psi.relabel(("A1",)), bell_state(0, ("A2", "B")))


@functools.cache
def t0_table() -> CorrectionTable:
    basis = bell_basis(("A1", "A2"))
    return derive_table(
        "T0", ("B",), range(4),
        lambda p, k: _conditional(_t0_setup(p), basis, None, k),
        _probes(("A1",)),
    )


def teleport_standard(psi: StateVector, seed: int = 0, outcome: int | None = None) -> ProtocolTranscript:
    """Teleport one qubit A1 -> B over a Bell pair A2B."""
    psi = _check_input(psi, 1, ("A1",))
    state = _t0_setup(psi)
    rec, cond = _measure(state, bell_basis(("A1", "A2")), None, generator(seed), outcome)
    corrections = t0_table().lookup(rec.index)
    final = _apply_corrections(cond, corrections)
    return ProtocolTranscript(
        "teleport1", seed, "bell:A2B", (rec,), 2, corrections, final,
        fidelity(final, psi.relabel(("B",))), rec.probability,
    )


# ---------------------------------------------------------------------------
# two-qubit teleportation through chi_bar


chi_bar_state = functools.cache(bases.chi_bar_state)  # states are immutable, so sharing is safe


def _e0_setup(psi: StateVector, p: BasisParams) -> StateVector:
    return tensor_product(psi.relabel(("A1", "A2")), chi_bar_state(p))


pi_bar_basis = functools.cache(bases.pi_bar_basis)


@functools.cache
def e0_table(p: BasisParams = bases.CHI_POINT) -> CorrectionTable:
    basis = pi_bar_basis(p)
    return derive_table(
        "E0", ("B1", "B2"), range(16),
        lambda s, k: _conditional(_e0_setup(s, p), basis, None, k),
        _probes(("A1", "A2")),
    )


def teleport_two_qubit(
    psi: StateVector, p: BasisParams = bases.CHI_POINT, seed: int = 0, outcome: int | None = None
) -> ProtocolTranscript:
    psi = _check_input(psi, 2, ("A1", "A2"))
    state = _e0_setup(psi, p)
    rec, cond = _measure(state, pi_bar_basis(p), None, generator(seed), outcome)
    corrections = e0_table(p).lookup(rec.index)
    final = _apply_corrections(cond, corrections)
    channel = "chi00" if p == bases.CHI_POINT else (
        f"chi_bar(theta1={p.theta1!r},theta2={p.theta2!r},phi1={p.phi1!r},phi2={p.phi2!r})"
    )
    return ProtocolTranscript(
        "teleport2", seed, channel, (rec,), 4, corrections, final,
        fidelity(final, psi.relabel(("B1", "B2"))), rec.probability,
    )


# ---------------------------------------------------------------------------
# teleporting A1A2 -> A4B1 via the A3B2 side of chi00

PARTIAL_TARGETS = ("A1", "A2", "A3", "B2")
PARTIAL_RECEIVER = ("A4", "B1")


def _partial_setup(psi: StateVector) -> StateVector:
    return tensor_product(psi.relabel(("A1", "A2")), chi00_state())


pi_partial_basis = functools.cache(bases.pi_basis_on_A1A2A3B2)


def partial_transfer_map() -> np.ndarray:
    """4x4 matrix of <Pi00|chi00>, sending A1A2 amplitudes to A4B1 amplitudes."""
    pi00 = pi_partial_basis()[0].tensor()  # A1 A2 A3 B2
    chi = chi00_state().tensor()  # A3 A4 B1 B2
    return np.einsum("xyzw,zuvw->uvxy", pi00.conj(), chi).reshape(4, 4)


def family_probes() -> list[StateVector]:
    """Span{Psi0, Psi1}: both members plus two superpositions fixing relative phase."""
    b0, b1 = bell_state(0), bell_state(1)
    probes = [b0, b1]
    for phase in (1, 1j):
        probes.append(StateVector.from_amplitudes(b0.amplitudes + phase * b1.amplitudes, b0.labels, True))
    return probes


def general_probes() -> list[StateVector]:
    """Two linearly independent inputs that no common table can serve."""
    return [bell_state(1), bell_state(2)]


def _partial_conditional(s: StateVector, k: int) -> StateVector | None:
    return _conditional(_partial_setup(s), pi_partial_basis(), PARTIAL_TARGETS, k)


@functools.cache
def partial_family_table() -> CorrectionTable:
    return derive_table("partial_family", PARTIAL_RECEIVER, range(16), _partial_conditional, family_probes())


@functools.cache
def general_feasibility() -> CorrectionTable:
    """Table search over the general probes; any None entry certifies infeasibility."""
    return derive_table("partial_general", PARTIAL_RECEIVER, range(16), _partial_conditional, general_probes())


def in_bell01_span(psi: StateVector, tol: float = 1e-9) -> bool:
    psi = psi.relabel(("A1", "A2"))
    weight = abs(bell_state(0).inner(psi)) ** 2 + abs(bell_state(1).inner(psi)) ** 2
    return weight > 1 - tol


@dataclass(frozen=True)
class PartialOutcome:
    index: int
    probability: float
    conditional: StateVector | None
    own_correction: tuple[int, ...] | None  # best fix for this very input
    table_correction: tuple[int, ...] | None  # fix from the family table
    table_fidelity: float | None


@dataclass(frozen=True)
class FeasibilityReport:
    outcomes: tuple[PartialOutcome, ...]
    in_family: bool
    family_table_faithful: bool  # every possible outcome restored by the family table
    recoverable_per_input: bool  # every possible outcome fixable by some Pauli for this input
    general_feasible: bool

    @property
    def verdict(self) -> str:
        return "faithful" if self.family_table_faithful else "not faithful"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "in_family": self.in_family,
            "family_table_faithful": self.family_table_faithful,
            "recoverable_per_input": self.recoverable_per_input,
            "general_feasible": self.general_feasible,
            "outcomes": [
                {
                    "index": o.index,
                    "probability": o.probability,
                    "own_correction": None if o.own_correction is None else list(o.own_correction),
                    "table_correction": None if o.table_correction is None else list(o.table_correction),
                    "table_fidelity": o.table_fidelity,
                }
                for o in self.outcomes
            ],
        }


def partial_feasibility(psi: StateVector) -> FeasibilityReport:
    psi = _check_input(psi, 2, ("A1", "A2"))
    target = psi.relabel(PARTIAL_RECEIVER)
    table = partial_family_table()
    probs = outcome_probabilities(_partial_setup(psi), pi_partial_basis(), PARTIAL_TARGETS)
    rows = []
    for k in range(16):
        cond = _partial_conditional(psi, k)
        if cond is None:
            rows.append(PartialOutcome(k, float(probs[k]), None, None, None, None))
            continue
        fix = table.entries[k]
        fid = None
        if fix is not None:
            fid = fidelity(_apply_corrections(cond, zip(PARTIAL_RECEIVER, fix)), target)
        rows.append(PartialOutcome(k, float(probs[k]), cond, correction_search(cond, target), fix, fid))
    live = [r for r in rows if r.conditional is not None]
    return FeasibilityReport(
        tuple(rows),
        in_bell01_span(psi),
        all(r.table_fidelity is not None and r.table_fidelity > SUCCESS_FIDELITY for r in live),
        all(r.own_correction is not None for r in live),
        general_feasibility().total,
    )


def teleport_partial_channel(
    psi: StateVector, seed: int = 0, outcome: int | None = None
) -> tuple[ProtocolTranscript, FeasibilityReport]:
    """Run the A3B2 -> A4B1 variant; the sampled outcome is fixed with the family table.

    Outcomes the table cannot fix are left uncorrected, so the transcript's
    fidelity shows the degraded result; the report says which outcomes those are.
    """
    psi = _check_input(psi, 2, ("A1", "A2"))
    state = _partial_setup(psi)
    rec, cond = _measure(state, pi_partial_basis(), PARTIAL_TARGETS, generator(seed), outcome)
    corrections = partial_family_table().lookup(rec.index) or ()
    final = _apply_corrections(cond.reorder(PARTIAL_RECEIVER), corrections)
    transcript = ProtocolTranscript(
        "teleport2-partial", seed, "chi00:A3B2->A4B1", (rec,), 4, corrections, final,
        fidelity(final, psi.relabel(PARTIAL_RECEIVER)), rec.probability,
    )
    return transcript, partial_feasibility(psi)


# ---------------------------------------------------------------------------
# cooperative one-qubit teleportation over chi00 on A2B1B2B3

COOP_CHANNEL = ("A2", "B1", "B2", "B3")
COOP_KEYS = tuple(itertools.product(range(4), range(2), range(2)))


def _coop_setup(psi: StateVector) -> StateVector:
    return tensor_product(psi.relabel(("A1",)), chi00_state(COOP_CHANNEL))


def cooperative_branches(psi: StateVector) -> np.ndarray:
    """Rows k: <Psi^k|_{A1A2} (psi (x) chi00) as amplitudes over B1B2B3."""
    state = _coop_setup(_check_input(psi, 1, ("A1",)))
    amps, _ = project(state, bell_basis(("A1", "A2")))
    return amps


def _coop_conditional(psi: StateVector, key) -> StateVector | None:
    i, b1, b2 = key
    state = _coop_setup(psi)
    stage = _conditional(state, bell_basis(("A1", "A2")), None, i)
    if stage is None:
        return None
    stage = _conditional(stage, computational_basis(("B1",)), None, b1)
    if stage is None:
        return None
    return _conditional(stage, computational_basis(("B2",)), None, b2)


@functools.cache
def coop_table() -> CorrectionTable:
    return derive_table("cooperative", ("B3",), COOP_KEYS, _coop_conditional, _probes(("A1",)))


def teleport_cooperative_ghz_style(
    psi: StateVector, seed: int = 0, outcome: tuple[int, int, int] | None = None
) -> ProtocolTranscript:
    """A1 -> B3 with B1 and B2 measuring in the computational basis."""
    psi = _check_input(psi, 1, ("A1",))
    rng = generator(seed)
    forced = outcome or (None, None, None)
    state = _coop_setup(psi)
    r_bell, state = _measure(state, bell_basis(("A1", "A2")), None, rng, forced[0])
    r_b1, state = _measure(state, computational_basis(("B1",)), None, rng, forced[1])
    r_b2, state = _measure(state, computational_basis(("B2",)), None, rng, forced[2])
    key = (r_bell.index, r_b1.index, r_b2.index)
    corrections = coop_table().lookup(key)
    final = _apply_corrections(state, corrections)
    return ProtocolTranscript(
        "teleport-coop", seed, "chi00:A2B1B2B3", (r_bell, r_b1, r_b2), 4, corrections, final,
        fidelity(final, psi.relabel(("B3",))),
        r_bell.probability * r_b1.probability * r_b2.probability,
    )


def coop_joint_probabilities(psi: StateVector) -> dict[tuple[int, int, int], float]:
    """Probability of every (i, b1, b2), from the full 16-way projection."""
    state = _coop_setup(_check_input(psi, 1, ("A1",)))
    amps, _ = project(state, bell_basis(("A1", "A2")))
    amps = amps.reshape(4, 2, 2, 2)  # i, b1, b2, b3
    probs = np.sum(np.abs(amps) ** 2, axis=3)
    return {key: float(probs[key]) for key in COOP_KEYS}


# ---------------------------------------------------------------------------
# dense coding


@dataclass(frozen=True)
class DenseCodeResult:
    scheme: str
    message: int
    decoded: int
    probability: float
    classical_bits: int
    particles_sent: int
    decoding: str  # "joint" or "local"
    encoding: tuple[tuple[str, int], ...]
    outcomes: tuple[RecordedOutcome, ...]
    seed: int = 0

    @property
    def success(self) -> bool:
        return self.decoded == self.message

    def to_dict(self) -> dict:
        return {
            "protocol": f"densecode-{self.scheme}",
            "seed": self.seed,
            "channel": {"d0": "chi00", "s0": "bell_pair_product", "restricted": "chi00"}[self.scheme],
            "outcomes": [
                {"basis": o.basis, "index": o.index, "probability": o.probability} for o in self.outcomes
            ],
            "classical_bits": self.classical_bits,
            "corrections": [],
            "fidelity": None,
            "message": self.message,
            "decoded": self.decoded,
            "probability": self.probability,
            "particles_sent": self.particles_sent,
            "decoding": self.decoding,
            "encoding": [{"target": t, "pauli": p} for t, p in self.encoding],
        }


def _check_message(message: int, size: int) -> int:
    if not isinstance(message, (int, np.integer)) or not 0 <= message < size:
        raise ProtocolError(f"message must be an integer in 0..{size - 1}, got {message!r}")
    return int(message)


def _encode(state: StateVector, encoding) -> StateVector:
    return _apply_corrections(state, encoding)


chi_basis = functools.cache(bases.chi_basis)
subspace_basis_8 = functools.cache(bases.subspace_basis_8)


def dense_code_D0(message: int, seed: int = 0) -> DenseCodeResult:
    """Four bits over chi00; B1B2 must decode jointly on all four particles."""
    message = _check_message(message, 16)
    i, j = divmod(message, 4)
    encoding = (("A3", i), ("A4", j))
    state = _encode(chi00_state(), encoding)
    rec, _ = _measure(state, chi_basis(), None, generator(seed))
    return DenseCodeResult("d0", message, rec.index, rec.probability, 4, 2, "joint", encoding, (rec,), seed)


def dense_code_S0(message: int, seed: int = 0) -> DenseCodeResult:
    """Two independent Bell-pair codings on A3B1 and A4B2, each read locally."""
    message = _check_message(message, 16)
    i, j = divmod(message, 4)
    encoding = (("A3", i), ("A4", j))
    state = _encode(bases.bell_pair_product(), encoding)
    rng = generator(seed)
    r1, state = _measure(state, bell_basis(("A3", "B1")), None, rng)
    r2, _ = _measure(state, bell_basis(("A4", "B2")), None, rng)
    decoded = 4 * r1.index + r2.index
    return DenseCodeResult(
        "s0", message, decoded, r1.probability * r2.probability, 4, 2, "local", encoding, (r1, r2), seed
    )


def dense_code_restricted(message: int, seed: int = 0) -> DenseCodeResult:
    """Three bits across A3B2 -> A4B1: A3 only uses sigma^0 or sigma^3."""
    message = _check_message(message, 8)
    top, j = divmod(message, 4)
    encoding = (("A3", 3 * top), ("B2", j))
    state = _encode(chi00_state(), encoding)
    rec, _ = _measure(state, subspace_basis_8(), None, generator(seed))
    return DenseCodeResult(
        "restricted", message, rec.index, rec.probability, 3, 2, "joint", encoding, (rec,), seed
    )


def restricted_encoding_gram(a3_paulis: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """Gram matrix of sigma^a_{A3} sigma^j_{B2} chi00 over the given A3 alphabet."""
    m = np.array([s.amplitudes for s in bases.subspace_states(a3_paulis)])
    return m.conj() @ m.T


@dataclass(frozen=True)
class CapacityReport:
    channel_labels: tuple[str, ...]
    senders: tuple[str, ...]
    rank: int
    singular_values: np.ndarray
    orthogonal: bool

    @property
    def perfect_decoding(self) -> bool:
        return self.rank == 16 and self.orthogonal

    def to_dict(self) -> dict:
        return {
            "senders": list(self.senders),
            "rank": self.rank,
            "orthogonal": self.orthogonal,
            "perfect_decoding": self.perfect_decoding,
            "singular_values": [float(x) for x in self.singular_values],
        }


def dense_code_capacity_check(channel: StateVector, senders: Sequence[str] | None = None) -> CapacityReport:
    """Rank of the 16 Pauli encodings sigma^i x sigma^j of the two sender qubits."""
    if channel.num_qubits != 4:
        raise ProtocolError("capacity check needs a 4-qubit channel")
    senders = tuple(channel.labels[:2] if senders is None else senders)
    family = np.array([
        apply_local_operator(bases.pauli_pair(i, j), senders, channel).amplitudes
        for i, j in itertools.product(range(4), repeat=2)
    ])
    sv = np.linalg.svd(family, compute_uv=False)
    gram = family.conj() @ family.T
    return CapacityReport(
        channel.labels, senders, int(np.sum(sv > INVARIANT_TOL)), sv,
        bool(np.abs(gram - np.eye(16)).max() < INVARIANT_TOL),
    )


def derived_tables() -> dict[str, dict]:
    """Every correction table, JSON-ready, keyed by protocol."""
    return {
        "T0": t0_table().to_json(),
        "E0": e0_table().to_json(),
        "partial_family": partial_family_table().to_json(),
        "partial_general": general_feasibility().to_json(),
        "cooperative": coop_table().to_json(),
    }
