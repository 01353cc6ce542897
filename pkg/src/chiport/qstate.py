"""Dense states and operators on small labelled qubit registers.

Amplitudes are indexed with the leftmost label as the most significant bit,
so ``|0110>`` over ``(A3, A4, B1, B2)`` sits at index ``0b0110``. Every
operation returns a fresh value; nothing here mutates its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 6
INVARIANT_TOL = 1e-10
IDENTITY_TOL = 1e-12


class QStateError(ValueError):
    """Base class for register and label errors."""


class LabelCollision(QStateError):
    pass


class LabelError(QStateError):
    """Unknown, repeated or otherwise invalid particle labels."""


class ArityMismatch(QStateError):
    pass


class InvariantViolation(QStateError):
    """A value failed a normalization, hermiticity or positivity check."""


def _check_labels(labels: Sequence[str], n: int) -> tuple[str, ...]:
    labels = tuple(labels)
    if len(labels) != n:
        raise LabelError(f"expected {n} labels, got {len(labels)}")
    if len(set(labels)) != n:
        raise LabelError(f"labels must be distinct: {labels}")
    return labels


def _num_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise QStateError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise QStateError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit ceiling")
    return n


def _positions(labels: tuple[str, ...], targets: Iterable[str]) -> list[int]:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise LabelError(f"repeated target labels: {targets}")
    try:
        return [labels.index(t) for t in targets]
    except ValueError:
        missing = [t for t in targets if t not in labels]
        raise LabelError(f"unknown labels {missing}; register is {labels}") from None


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``len(labels)`` qubits."""

    amplitudes: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = _num_qubits(amps.size)
        object.__setattr__(self, "labels", _check_labels(self.labels, n))
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > INVARIANT_TOL:
            raise InvariantViolation(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, labels: Sequence[str], normalize: bool = False) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm < IDENTITY_TOL:
                raise InvariantViolation("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps, tuple(labels))

    @classmethod
    def basis(cls, bits: str, labels: Sequence[str]) -> StateVector:
        """Computational basis state, e.g. ``StateVector.basis("01", ("X", "Y"))``."""
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps, tuple(labels))

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        """Amplitudes as an ``(2,) * n`` array, axis k belonging to ``labels[k]``."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.labels)

    def relabel(self, labels: Sequence[str]) -> StateVector:
        # amplitudes are already validated and read-only, so only the labels need checking
        out = object.__new__(StateVector)
        object.__setattr__(out, "labels", _check_labels(tuple(labels), self.num_qubits))
        object.__setattr__(out, "amplitudes", self.amplitudes)
        return out

    def reorder(self, labels: Sequence[str]) -> StateVector:
        """Same physical state with its axes permuted into ``labels`` order."""
        if sorted(labels) != sorted(self.labels):
            raise LabelError(f"{tuple(labels)} is not a permutation of {self.labels}")
        perm = _positions(self.labels, labels)
        return StateVector(np.transpose(self.tensor(), perm).reshape(-1), tuple(labels))

    def inner(self, other: StateVector) -> complex:
        """<self|other>, after aligning ``other`` to this register's label order."""
        if set(other.labels) != set(self.labels):
            raise LabelError(f"label sets differ: {self.labels} vs {other.labels}")
        return complex(np.vdot(self.amplitudes, other.reorder(self.labels).amplitudes))

    def __repr__(self):
        return f"StateVector(labels={self.labels}, amplitudes={np.round(self.amplitudes, 6)})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QStateError(f"density matrix must be square, got shape {m.shape}")
        n = _num_qubits(m.shape[0])
        object.__setattr__(self, "labels", _check_labels(self.labels, n))
        if np.abs(m - m.conj().T).max() > INVARIANT_TOL:
            raise InvariantViolation("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > INVARIANT_TOL:
            raise InvariantViolation(f"density matrix trace {tr!r} differs from 1")
        if np.linalg.eigvalsh(m).min() < -INVARIANT_TOL:
            raise InvariantViolation("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def tensor(self) -> np.ndarray:
        """Matrix as a ``(2,) * 2n`` array: n ket axes then n bra axes."""
        return self.matrix.reshape((2,) * (2 * self.num_qubits))


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """Matrix acting on ``arity`` qubits; gates are checked for unitarity."""

    matrix: np.ndarray
    is_gate: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QStateError(f"operator must be square, got shape {m.shape}")
        _num_qubits(m.shape[0])
        if self.is_gate and np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() > INVARIANT_TOL:
            raise InvariantViolation(f"operator {self.name or ''} flagged as a gate is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def kron(self, other: LocalOperator) -> LocalOperator:
        return LocalOperator(np.kron(self.matrix, other.matrix), self.is_gate and other.is_gate,
                             f"{self.name}{other.name}")


def tensor_product(u: StateVector, v: StateVector) -> StateVector:
    clash = set(u.labels) & set(v.labels)
    if clash:
        raise LabelCollision(f"labels {sorted(clash)} appear in both factors")
    return StateVector(np.outer(u.amplitudes, v.amplitudes).reshape(-1), u.labels + v.labels)


def tensor_all(*states: StateVector) -> StateVector:
    out = states[0]
    for s in states[1:]:
        out = tensor_product(out, s)
    return out


def apply_local_operator(op: LocalOperator, targets: Sequence[str], s: StateVector) -> StateVector:
    """Apply ``op`` to ``targets`` (in the order given), identity elsewhere."""
    if isinstance(targets, str):
        targets = (targets,)
    pos = _positions(s.labels, targets)
    if op.arity != len(pos):
        raise ArityMismatch(f"operator acts on {op.arity} qubits, {len(pos)} targets given")
    k = len(pos)
    gate = op.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(gate, s.tensor(), axes=(list(range(k, 2 * k)), pos))
    # tensordot puts the gate's output axes first; move them back into place
    out = np.moveaxis(out, list(range(k)), pos)
    amps = out.reshape(-1)
    if not op.is_gate:
        return StateVector.from_amplitudes(amps, s.labels, normalize=True)
    return StateVector(amps, s.labels)


def partial_trace(rho: DensityOperator | StateVector, keep: Sequence[str]) -> DensityOperator:
    """Reduce to the ``keep`` labels, returned in the order given."""
    if isinstance(keep, str):
        keep = (keep,)
    keep = tuple(keep)
    if isinstance(rho, StateVector):
        pos = _positions(rho.labels, keep)
        if not pos or len(pos) == rho.num_qubits:
            raise LabelError("keep must be a nonempty proper subset of the register")
        rest = [i for i in range(rho.num_qubits) if i not in pos]
        psi = np.transpose(rho.tensor(), pos + rest).reshape(2 ** len(pos), -1)
        return DensityOperator(psi @ psi.conj().T, keep)
    pos = _positions(rho.labels, keep)
    n = rho.num_qubits
    if not pos or len(pos) == n:
        raise LabelError("keep must be a nonempty proper subset of the register")
    rest = [i for i in range(n) if i not in pos]
    t = np.transpose(rho.tensor(), pos + rest + [n + i for i in pos] + [n + i for i in rest])
    dk, dr = 2 ** len(pos), 2 ** len(rest)
    m = np.einsum("arbr->ab", t.reshape(dk, dr, dk, dr))
    return DensityOperator(m, keep)


def partial_transpose(
    rho: DensityOperator | np.ndarray, subsystem: Sequence[str], labels: Sequence[str] | None = None
) -> np.ndarray:
    """Transpose the ``subsystem`` factors; result is a plain matrix.

    A bare matrix (e.g. an earlier partial transpose, which need not be a
    density operator) is accepted together with its ``labels``.
    """
    if isinstance(subsystem, str):
        subsystem = (subsystem,)
    if isinstance(rho, DensityOperator):
        matrix, labels = rho.matrix, rho.labels
    else:
        if labels is None:
            raise LabelError("labels are required for a bare matrix")
        matrix, labels = np.asarray(rho, dtype=complex), tuple(labels)
        if matrix.shape != (2 ** len(labels),) * 2:
            raise QStateError(f"matrix shape {matrix.shape} does not fit {len(labels)} qubits")
    pos = _positions(tuple(labels), subsystem)
    n = len(labels)
    if not pos or len(pos) == n:
        raise LabelError("subsystem must be a nonempty proper subset of the register")
    axes = list(range(2 * n))
    for p in pos:
        axes[p], axes[n + p] = n + p, p
    return np.transpose(matrix.reshape((2,) * (2 * n)), axes).reshape(matrix.shape)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, clipped into [0, 1]."""
    return float(min(1.0, abs(a.inner(b)) ** 2))
