"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from compactnqs import (Graph, HiddenUnit, JastrowState, NqsNetwork,
                        random_connected_graph)

PAULI_DENSE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(0, j) for j in range(1, n)])


def random_jastrow_state(n: int, rng: np.random.Generator,
                         scale: float = 0.4) -> JastrowState:
    g = random_connected_graph(n, rng)
    c = rng.uniform(-scale, scale, n) + 1j * rng.uniform(-scale, scale, n)
    V = np.zeros((n, n), dtype=complex)
    for s, t in g.sorted_edges():
        V[s, t] = rng.uniform(-scale, scale) + 1j * rng.uniform(-scale, scale)
    return JastrowState(g, c, V)


def random_network(n: int, rng: np.random.Generator, n_units: int = None,
                   zero_free: bool = False) -> NqsNetwork:
    if n_units is None:
        n_units = int(rng.integers(1, n + 1))
    units = []
    for _ in range(n_units):
        size = int(rng.integers(1, n + 1))
        sites = rng.choice(n, size=size, replace=False)
        if zero_free:
            mats = {int(j): np.exp(rng.normal(scale=0.4, size=(2, 2))
                                   + 1j * rng.normal(scale=0.4, size=(2, 2)))
                    for j in sites}
        else:
            mats = {int(j): rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                    for j in sites}
        units.append(HiddenUnit(mats))
    if zero_free:
        diag = np.exp(rng.normal(scale=0.3, size=(n, 2))
                      + 1j * rng.normal(scale=0.3, size=(n, 2)))
    else:
        diag = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return NqsNetwork(n, tuple(units), diag)


def brute_force_independence_numbers(g: Graph):
    """Exhaustive subset scan: (max independent size, min cover size)."""
    masks = g._masks
    best_is = 0
    best_cover = g.n
    for subset in range(1 << g.n):
        members = [v for v in range(g.n) if (subset >> v) & 1]
        independent = all(not (masks[a] >> b) & 1
                          for i, a in enumerate(members) for b in members[i + 1:])
        if independent:
            best_is = max(best_is, len(members))
        covered = all((subset >> s) & 1 or (subset >> t) & 1 for s, t in g.edges)
        if covered:
            best_cover = min(best_cover, len(members))
    return best_is, best_cover


def dense_generator(cm, row: int) -> np.ndarray:
    """Dense matrix of one tableau row, built independently from its Paulis."""
    mat = np.array([[1.0 + 0.0j]])
    text = cm.row_pauli(row)
    sign, letters = text[0], text[1:]
    for ch in letters:
        mat = np.kron(mat, PAULI_DENSE[ch])
    return -mat if sign == "-" else mat


def random_single_qubit_gate(rng: np.random.Generator, kind: str) -> np.ndarray:
    if kind == "diagonal":
        return np.diag(rng.normal(size=2) + 1j * rng.normal(size=2))
    if kind == "antidiagonal":
        q = np.zeros((2, 2), dtype=complex)
        q[0, 1] = rng.normal() + 1j * rng.normal()
        q[1, 0] = rng.normal() + 1j * rng.normal()
        return q
    return rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
