"""Named states and measurement bases of the four-qubit channel family.

Two-qubit bases ``|J>`` and ``|J'>`` are rotated Bell-like bases controlled by
angles (theta, phi). Their correlated sum over two pairs of qubits gives the
channel ``chi_bar``; at equal angle differences of pi/4 it becomes the fixed
state ``chi00`` whose Pauli images form the dense-coding basis.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .qstate import (
    INVARIANT_TOL,
    InvariantViolation,
    LocalOperator,
    QStateError,
    StateVector,
    apply_local_operator,
    tensor_product,
)

ANGLE_GAP = 1e-9
SQRT2 = math.sqrt(2.0)

CHANNEL_LABELS = ("A3", "A4", "B1", "B2")
SENDER_LABELS = ("A1", "A2", "A3", "A4")
PARTIAL_LABELS = ("A1", "A2", "A3", "B2")

_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_PAULI_OPS = tuple(LocalOperator(m, name=f"s{k}") for k, m in enumerate(_PAULI))

# sign patterns over 4-bit kets, overall factor 1/(2*sqrt(2))
_CHI00_SIGNS = {
    "0000": 1, "0011": -1, "0101": -1, "0110": 1,
    "1001": 1, "1010": 1, "1100": 1, "1111": 1,
}
_PI00_SIGNS = {
    "0000": 1, "0011": 1, "0101": -1, "0110": 1,
    "1001": 1, "1010": 1, "1100": -1, "1111": 1,
}


class BasisError(QStateError):
    pass


def check_pauli(i: int) -> int:
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i <= 3:
        raise BasisError(f"Pauli index must be an integer in 0..3, got {i!r}")
    return int(i)


def pauli_operator(i: int) -> LocalOperator:
    """sigma^0 (identity) through sigma^3, with sigma^2 = [[0, -i], [i, 0]]."""
    return _PAULI_OPS[check_pauli(i)]


def pauli_pair(i: int, j: int) -> LocalOperator:
    return pauli_operator(i).kron(pauli_operator(j))


def _check_angle(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 < x < math.pi / 2:
        raise BasisError(f"{name}={x!r} lies outside the open interval (0, pi/2)")
    return x


@dataclass(frozen=True)
class BasisParams:
    theta1: float
    theta2: float
    phi1: float
    phi2: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "phi1", "phi2"):
            object.__setattr__(self, name, _check_angle(getattr(self, name), name))
        if abs(self.theta1 - self.theta2) < ANGLE_GAP:
            raise BasisError("theta1 and theta2 must differ")
        if abs(self.phi1 - self.phi2) < ANGLE_GAP:
            raise BasisError("phi1 and phi2 must differ")

    @property
    def theta_difference(self) -> float:
        return self.theta1 - self.theta2

    @property
    def phi_difference(self) -> float:
        return self.phi1 - self.phi2

    @classmethod
    def from_differences(cls, theta_diff: float, phi_diff: float | None = None) -> BasisParams:
        """Angles placed symmetrically about pi/4 with the requested differences."""
        phi_diff = theta_diff if phi_diff is None else phi_diff

        def split(d):
            lo = (math.pi / 2 - d) / 2
            return lo + d, lo

        t1, t2 = split(theta_diff)
        p1, p2 = split(phi_diff)
        return cls(t1, t2, p1, p2)

    @classmethod
    def random(cls, rng: np.random.Generator, equal_differences: bool = False) -> BasisParams:
        while True:
            a = rng.uniform(0.02, math.pi / 2 - 0.02, size=4)
            if equal_differences:
                d = a[0] - a[1]
                a[3] = a[2] - d
                if not 0.0 < a[3] < math.pi / 2:
                    continue
            try:
                return cls(*a)
            except BasisError:
                continue


CHI_POINT = BasisParams(3 * math.pi / 8, math.pi / 8, 3 * math.pi / 8, math.pi / 8)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Ordered orthonormal states on a common register.

    Fewer states than the register dimension make a subspace basis; the
    measurement layer reports the leftover weight separately.
    """

    name: str
    states: tuple[StateVector, ...]

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise BasisError("a basis needs at least one state")
        labels = states[0].labels
        if any(s.labels != labels for s in states):
            raise BasisError(f"basis {self.name} mixes label sets")
        if len(states) > states[0].dim:
            raise BasisError(f"basis {self.name} has more states than dimensions")
        object.__setattr__(self, "states", states)
        rows = np.array([s.amplitudes for s in states])
        rows.flags.writeable = False
        object.__setattr__(self, "_rows", rows)
        if np.abs(self.gram() - np.eye(len(states))).max() > INVARIANT_TOL:
            raise InvariantViolation(f"basis {self.name} is not orthonormal")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.states[0].labels

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def complete(self) -> bool:
        return len(self.states) == self.dim

    def matrix(self) -> np.ndarray:
        """Rows are the basis kets (read-only)."""
        return self._rows

    def gram(self) -> np.ndarray:
        m = self.matrix()
        return m.conj() @ m.T

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k: int) -> StateVector:
        return self.states[k]


def _signed_state(signs: dict[str, int], labels: Sequence[str]) -> StateVector:
    amps = np.zeros(16, dtype=complex)
    for bits, sign in signs.items():
        amps[int(bits, 2)] = sign / (2 * SQRT2)
    return StateVector(amps, tuple(labels))


def computational_basis(labels: Sequence[str]) -> OrthonormalBasis:
    n = len(labels)
    states = [StateVector.basis(format(k, f"0{n}b"), labels) for k in range(2 ** n)]
    return OrthonormalBasis("computational", tuple(states))


def bell_state(i: int = 0, labels: Sequence[str] = ("A1", "A2")) -> StateVector:
    """(sigma^i x I)(|00> + |11>)/sqrt(2)."""
    return _bell_state(check_pauli(i), tuple(labels))


@functools.lru_cache(maxsize=256)
def _bell_state(i: int, labels: tuple[str, ...]) -> StateVector:
    phi0 = StateVector(np.array([1, 0, 0, 1]) / SQRT2, labels)
    return apply_local_operator(pauli_operator(i), labels[:1], phi0)


def bell_basis(labels: Sequence[str] = ("A1", "A2")) -> OrthonormalBasis:
    return _bell_basis(tuple(labels))


@functools.lru_cache(maxsize=64)
def _bell_basis(labels: tuple[str, ...]) -> OrthonormalBasis:
    return OrthonormalBasis("bell", tuple(bell_state(i, labels) for i in range(4)))


def parametrized_two_qubit_basis(
    kind: Literal["J", "Jprime"], theta: float, phi: float, labels: Sequence[str] = ("X1", "X2")
) -> OrthonormalBasis:
    theta = _check_angle(theta, "theta")
    phi = _check_angle(phi, "phi")
    ct, st, cp, sp = math.cos(theta), math.sin(theta), math.cos(phi), math.sin(phi)
    # columns: |00>, |01>, |10>, |11>
    if kind == "J":
        rows = [[ct, 0, 0, st], [0, cp, sp, 0], [0, -sp, cp, 0], [-st, 0, 0, ct]]
    elif kind == "Jprime":
        rows = [[ct, 0, 0, st], [0, sp, cp, 0], [0, cp, -sp, 0], [-st, 0, 0, ct]]
    else:
        raise BasisError(f"unknown basis kind {kind!r}")
    return OrthonormalBasis(kind, tuple(StateVector(r, tuple(labels)) for r in rows))


def _paired_sum(left: OrthonormalBasis, right: OrthonormalBasis, labels: Sequence[str]) -> StateVector:
    amps = sum(np.kron(a.amplitudes, b.amplitudes) for a, b in zip(left.states, right.states)) / 2
    return StateVector(amps, tuple(labels))


def chi_bar_state(p: BasisParams) -> StateVector:
    """Half the sum over J of |J>_{A3A4} (x) |J'>_{B1B2}."""
    j = parametrized_two_qubit_basis("J", p.theta1, p.phi1)
    jp = parametrized_two_qubit_basis("Jprime", p.theta2, p.phi2)
    return _paired_sum(j, jp, CHANNEL_LABELS)


def chi_bar_closed_form(p: BasisParams) -> StateVector:
    """Expanded amplitudes of :func:`chi_bar_state`, written out term by term."""
    dt, dp = p.theta_difference, p.phi_difference
    terms = {
        "0000": math.cos(dt), "1111": math.cos(dt),
        "0011": -math.sin(dt), "1100": math.sin(dt),
        "0101": -math.sin(dp), "1010": math.sin(dp),
        "0110": math.cos(dp), "1001": math.cos(dp),
    }
    amps = np.zeros(16, dtype=complex)
    for bits, c in terms.items():
        amps[int(bits, 2)] = c / 2
    return StateVector(amps, CHANNEL_LABELS)


def chi00_state(labels: Sequence[str] = CHANNEL_LABELS) -> StateVector:
    return _signed_state(_CHI00_SIGNS, labels)


def pauli_family(seed: StateVector, targets: Sequence[str], name: str) -> OrthonormalBasis:
    """(sigma^i x sigma^j) on ``targets`` applied to ``seed``, ordered 4*i + j."""
    states = tuple(
        apply_local_operator(pauli_pair(i, j), targets, seed)
        for i, j in itertools.product(range(4), repeat=2)
    )
    return OrthonormalBasis(name, states)


def chi_basis(pair: Sequence[str] = ("A3", "A4")) -> OrthonormalBasis:
    """The 16 states sigma^i_{pair[0]} sigma^j_{pair[1]} |chi00>."""
    return pauli_family(chi00_state(), pair, "chi")


def pi_bar_basis(p: BasisParams) -> OrthonormalBasis:
    jp = parametrized_two_qubit_basis("Jprime", p.theta2, p.phi2)
    j = parametrized_two_qubit_basis("J", p.theta1, p.phi1)
    seed = _paired_sum(jp, j, SENDER_LABELS)
    return pauli_family(seed, ("A1", "A2"), "pi_bar")


def pi_basis_on_A1A2A3B2() -> OrthonormalBasis:
    return pauli_family(_signed_state(_PI00_SIGNS, PARTIAL_LABELS), ("A1", "A2"), "pi_partial")


def subspace_states(a3_paulis: Sequence[int] = (0, 3)) -> list[StateVector]:
    """sigma^a_{A3} sigma^j_{B2} |chi00> for a in ``a3_paulis``, j in 0..3 (not checked)."""
    chi = chi00_state()
    return [
        apply_local_operator(pauli_pair(a, j), ("A3", "B2"), chi)
        for a in a3_paulis
        for j in range(4)
    ]


def subspace_basis_8() -> OrthonormalBasis:
    return OrthonormalBasis("chi_subspace8", tuple(subspace_states((0, 3))))


def reference_state(kind: Literal["GHZ4", "W4", "BellPairProduct"],
                    labels: Sequence[str] = CHANNEL_LABELS) -> StateVector:
    amps = np.zeros(16, dtype=complex)
    if kind == "GHZ4":
        amps[[0b0000, 0b1111]] = 1 / SQRT2
    elif kind == "W4":
        amps[[0b0001, 0b0010, 0b0100, 0b1000]] = 0.5
    elif kind == "BellPairProduct":
        amps[[0b0000, 0b0101, 0b1010, 0b1111]] = 0.5
    else:
        raise BasisError(f"unknown reference state {kind!r}")
    return StateVector(amps, tuple(labels))


def bell_pair_product(labels: Sequence[str] = CHANNEL_LABELS) -> StateVector:
    """Bell pairs on (labels[0], labels[2]) and (labels[1], labels[3]), built by tensoring."""
    a, b, c, d = labels
    return tensor_product(bell_state(0, (a, c)), bell_state(0, (b, d))).reorder(labels)
