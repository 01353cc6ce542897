"""Entropy and negativity diagnostics for four-qubit pure states."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qstate import (
    INVARIANT_TOL,
    DensityOperator,
    InvariantViolation,
    QStateError,
    StateVector,
    partial_trace,
    partial_transpose,
)

EIG_CUTOFF = 1e-12


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy in bits; eigenvalues at or below 1e-12 contribute nothing."""
    w = np.linalg.eigvalsh(rho.matrix)
    if w.min() < -INVARIANT_TOL:
        raise InvariantViolation(f"eigenvalue {w.min():.3g} is negative")
    w = w[w > EIG_CUTOFF]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def binary_entropy(p: float) -> float:
    return -sum(x * math.log2(x) for x in (p, 1.0 - p) if x > EIG_CUTOFF)


def chi_bar_pair_entropy(theta_difference: float) -> float:
    """Closed-form entropy of rho_{A3B2} for chi_bar with equal angle differences."""
    return binary_entropy(math.cos(theta_difference) ** 2)


def chi_bar_pair_spectrum(theta_difference: float, phi_difference: float) -> np.ndarray:
    """Eigenvalues of rho_{A3B2} for arbitrary angle differences.

    rho splits into two 2x2 blocks, one on {|00>, |11>} and one on
    {|01>, |10>}; their eigenvalues are (c_t +- c_f)^2 / 4 and
    (s_t +- s_f)^2 / 4.
    """
    ct, cf = math.cos(theta_difference), math.cos(phi_difference)
    st, sf = math.sin(theta_difference), math.sin(phi_difference)
    return np.array([(ct + cf) ** 2, (ct - cf) ** 2, (st + sf) ** 2, (st - sf) ** 2]) / 4


def negativity(rho: DensityOperator, side: Sequence[str]) -> float:
    """Sum of |negative eigenvalues| of the partial transpose, (||rho^T||_1 - 1) / 2."""
    w = np.linalg.eigvalsh(partial_transpose(rho, side))
    return float(np.abs(w[w < 0]).sum())


@dataclass(frozen=True)
class BipartitionReport:
    """Entanglement across one cut.

    ``entropy`` is the von Neumann entropy of the left side's marginal of
    the state under study (for a pure state this is the entanglement
    entropy of the cut); ``negativity`` is taken across the cut.
    """

    partition: tuple[tuple[str, ...], tuple[str, ...]]
    entropy: float
    negativity: float

    def __post_init__(self):
        left, right = self.partition
        if self.entropy > min(len(left), len(right)) + INVARIANT_TOL or self.entropy < -INVARIANT_TOL:
            raise InvariantViolation(f"entropy {self.entropy} out of range for cut {self.partition}")
        if self.negativity < -INVARIANT_TOL:
            raise InvariantViolation(f"negative negativity {self.negativity}")

    def as_row(self) -> dict:
        return {
            "left": "".join(self.partition[0]),
            "right": "".join(self.partition[1]),
            "entropy": self.entropy,
            "negativity": self.negativity,
        }


def cut_report(rho: DensityOperator, left: Sequence[str]) -> BipartitionReport:
    left = tuple(left)
    right = tuple(x for x in rho.labels if x not in left)
    return BipartitionReport(
        (left, right),
        von_neumann_entropy(partial_trace(rho, left)),
        negativity(rho, right),
    )


def _require_four(s: StateVector):
    if s.num_qubits != 4:
        raise QStateError(f"expected a 4-qubit state, got {s.num_qubits} qubits")


def pairwise_entanglement_report(s: StateVector) -> list[BipartitionReport]:
    """1|1 cut of every two-qubit marginal; PPT is exact separability there."""
    _require_four(s)
    rho = s.density()
    out = []
    for a, b in itertools.combinations(s.labels, 2):
        out.append(cut_report(partial_trace(rho, (a, b)), (a,)))
    return out


def bipartition_report(s: StateVector) -> list[BipartitionReport]:
    """All 1|3 and 2|2 cuts of a pure state (each unordered cut once)."""
    rho = s.density()
    labels = s.labels
    out = []
    for size in range(1, s.num_qubits // 2 + 1):
        for left in itertools.combinations(labels, size):
            if 2 * size == s.num_qubits and labels[0] not in left:
                continue
            out.append(cut_report(rho, left))
    return out


@dataclass(frozen=True)
class LossEntry:
    """What survives after ``lost`` is traced out of a four-qubit state."""

    lost: str
    remaining: tuple[str, ...]
    remainder_entropy: float
    single_qubit_entropies: dict[str, float]
    splits: list[BipartitionReport]
    second_loss: dict[str, BipartitionReport] = field(default_factory=dict)

    def max_second_loss_negativity(self) -> float:
        return max(r.negativity for r in self.second_loss.values())


def loss_report(s: StateVector) -> list[LossEntry]:
    _require_four(s)
    rho = s.density()
    out = []
    for lost in s.labels:
        remaining = tuple(x for x in s.labels if x != lost)
        sigma = partial_trace(rho, remaining)
        singles = {x: von_neumann_entropy(partial_trace(sigma, (x,))) for x in remaining}
        splits = [cut_report(sigma, (x,)) for x in remaining]
        second = {}
        for lost2 in remaining:
            pair = tuple(x for x in remaining if x != lost2)
            second[lost2] = cut_report(partial_trace(sigma, pair), pair[:1])
        out.append(LossEntry(lost, remaining, von_neumann_entropy(sigma), singles, splits, second))
    return out
