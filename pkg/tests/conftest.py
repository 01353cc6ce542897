import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from chiport.qstate import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def haar(rng, labels):
    z = rng.normal(size=2 ** len(labels)) + 1j * rng.normal(size=2 ** len(labels))
    return StateVector(z / np.linalg.norm(z), tuple(labels))


def brute_partial_trace(matrix, n, keep):
    """Sum over matched traced-out indices, one matrix element at a time."""
    rest = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def index(kbits, rbits):
        bits = [0] * n
        for q, b in zip(keep, kbits):
            bits[q] = b
        for q, b in zip(rest, rbits):
            bits[q] = b
        return int("".join(map(str, bits)), 2)

    for a, ka in enumerate(itertools.product((0, 1), repeat=len(keep))):
        for b, kb in enumerate(itertools.product((0, 1), repeat=len(keep))):
            for r in itertools.product((0, 1), repeat=len(rest)):
                out[a, b] += matrix[index(ka, r), index(kb, r)]
    return out


@st.composite
def states(draw, n=2, labels=None):
    labels = labels or tuple(f"Q{k}" for k in range(n))
    parts = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=2 ** (n + 1), max_size=2 ** (n + 1)))
    z = np.array(parts[::2]) + 1j * np.array(parts[1::2])
    if np.linalg.norm(z) < 1e-3:
        z = np.zeros(2 ** n, dtype=complex)
        z[0] = 1
    return StateVector(z / np.linalg.norm(z), labels)
