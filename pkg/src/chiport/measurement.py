"""Projective measurement of a sub-register in an orthonormal basis."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bases import OrthonormalBasis
from .qstate import ArityMismatch, LabelError, QStateError, StateVector, _positions

ZERO_PROB = 1e-12
DEFICIT_TOL = 1e-9
REMAINDER = -1


class IncompleteBasisSample(QStateError):
    """Sampling was requested from a basis that misses part of the state."""


@dataclass(frozen=True)
class MeasurementOutcome:
    """One measurement result.

    ``post_state`` is the normalized state of the unmeasured labels. It is
    None for outcomes of (numerically) zero probability, for the remainder
    entry of a subspace basis, and when the whole register was measured.
    """

    basis_name: str
    index: int
    probability: float
    post_state: StateVector | None

    @property
    def is_remainder(self) -> bool:
        return self.index == REMAINDER


def generator(seed: int) -> np.random.Generator:
    """PCG64 stream for ``seed``; every sampler in the package goes through here."""
    return np.random.Generator(np.random.PCG64(seed))


def _contract(s: StateVector, basis: OrthonormalBasis, targets: Sequence[str] | None):
    targets = tuple(basis.labels if targets is None else targets)
    if len(targets) != len(basis.labels):
        raise ArityMismatch(f"basis acts on {len(basis.labels)} qubits, {len(targets)} targets given")
    pos = _positions(s.labels, targets)
    rest = [i for i in range(s.num_qubits) if i not in pos]
    psi = np.transpose(s.tensor(), pos + rest).reshape(basis.dim, -1)
    # row k: unnormalized <e_k|s> over the remaining labels
    return basis.matrix().conj() @ psi, tuple(s.labels[i] for i in rest)


def project(s: StateVector, basis: OrthonormalBasis, targets: Sequence[str] | None = None):
    """Raw contractions ``<e_k|s>`` (rows) and the labels they live on."""
    return _contract(s, basis, targets)


def outcome_distribution(
    s: StateVector, basis: OrthonormalBasis, targets: Sequence[str] | None = None
) -> list[MeasurementOutcome]:
    """Every outcome with its probability and conditional state.

    ``targets`` names the register qubits the basis acts on, position by
    position; by default the basis' own labels. For a subspace basis a final
    entry with index ``REMAINDER`` carries the unprojected weight.
    """
    amps, rest = _contract(s, basis, targets)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    out = []
    for k, (row, p) in enumerate(zip(amps, probs)):
        post = None
        if p > ZERO_PROB and rest:
            post = StateVector(row / np.sqrt(p), rest)
        out.append(MeasurementOutcome(basis.name, k, float(p), post))
    if not basis.complete:
        out.append(MeasurementOutcome(basis.name, REMAINDER, float(max(0.0, 1.0 - probs.sum())), None))
    return out


def _probabilities(s: StateVector, basis: OrthonormalBasis, targets) -> np.ndarray:
    amps, _ = _contract(s, basis, targets)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    deficit = 1.0 - probs.sum()
    if deficit > DEFICIT_TOL:
        raise IncompleteBasisSample(f"basis {basis.name} misses weight {deficit:.3g} of the state")
    probs[probs < ZERO_PROB] = 0.0
    return probs / probs.sum()


def _inverse_cdf(probs: np.ndarray, u):
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, u, side="right")
    # guard roundoff at the top of the cdf, never landing on a zero-weight index
    return np.minimum(idx, np.flatnonzero(probs)[-1])


def sample_outcome(
    s: StateVector,
    basis: OrthonormalBasis,
    targets: Sequence[str] | None = None,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> MeasurementOutcome:
    """Draw one outcome by inverse CDF over ascending indices.

    Pass either ``seed`` (a fresh PCG64 stream) or an existing ``rng``.
    """
    if rng is None:
        if seed is None:
            raise ValueError("sample_outcome needs a seed or a generator")
        rng = generator(seed)
    probs = _probabilities(s, basis, targets)
    k = int(_inverse_cdf(probs, rng.random()))
    return outcome_distribution(s, basis, targets)[k]


def sample_counts(
    s: StateVector, basis: OrthonormalBasis, targets: Sequence[str] | None, shots: int, seed: int
) -> np.ndarray:
    """Histogram of ``shots`` independent draws from one seeded stream."""
    if shots < 1:
        raise ValueError("shots must be positive")
    probs = _probabilities(s, basis, targets)
    idx = _inverse_cdf(probs, generator(seed).random(shots))
    return np.bincount(idx, minlength=len(basis))


def reduced_after_measurement(outcomes: Sequence[MeasurementOutcome]) -> np.ndarray:
    """Outcome-averaged density matrix of the unmeasured labels."""
    kept = [o for o in outcomes if o.post_state is not None]
    if not kept:
        raise LabelError("no outcome carries a post-measurement state")
    return sum(o.probability * np.outer(o.post_state.amplitudes, o.post_state.amplitudes.conj())
               for o in kept)
