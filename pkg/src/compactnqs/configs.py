"""Spin-configuration conventions shared by every module.

A configuration of N spins is a length-N integer array with entries +1/-1.
The equivalent qubit string is q = (1 - v)/2, and dense state vectors index
basis states by the integer whose binary digits are q with q_1 (site 0) as
the most significant bit.
"""

from __future__ import annotations

import numpy as np


def as_spins(values) -> np.ndarray:
    """Validate and return a +1/-1 spin configuration as an int array."""
    v = np.asarray(values, dtype=np.int64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d spin configuration, got shape {v.shape}")
    if not np.all(np.abs(v) == 1):
        raise ValueError("spin entries must be +1 or -1")
    return v


def spins_to_qubits(v: np.ndarray) -> np.ndarray:
    return (1 - np.asarray(v)) // 2


def qubits_to_spins(q: np.ndarray) -> np.ndarray:
    return 1 - 2 * np.asarray(q)


def config_index(v) -> int:
    """Dense-vector index of a spin configuration (site 0 most significant)."""
    q = spins_to_qubits(as_spins(v))
    idx = 0
    for bit in q:
        idx = (idx << 1) | int(bit)
    return idx


def index_to_spins(idx: int, n: int) -> np.ndarray:
    q = (idx >> np.arange(n - 1, -1, -1)) & 1
    return qubits_to_spins(q.astype(np.int64))


def all_configs(n: int) -> np.ndarray:
    """All 2^n spin configurations as a (2^n, n) array, in index order."""
    idx = np.arange(1 << n, dtype=np.int64)
    q = (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1
    return 1 - 2 * q


def zero_magnetization_configs(n: int) -> np.ndarray:
    """Spin configurations with equally many up and down spins, in index order."""
    if n % 2:
        raise ValueError("zero magnetization needs an even number of spins")
    configs = all_configs(n)
    return configs[configs.sum(axis=1) == 0]


def zero_magnetization_mask(n: int) -> np.ndarray:
    """Boolean mask over dense indices selecting the zero-magnetization sector."""
    return all_configs(n).sum(axis=1) == 0
