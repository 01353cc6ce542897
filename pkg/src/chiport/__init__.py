"""Statevector toolkit for two-qubit teleportation and dense coding over a four-qubit channel."""

__version__ = "0.1.0"
