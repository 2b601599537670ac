"""Jastrow states over graphs and their compact tensor-network constructions.

Three routes produce networks whose amplitudes are proportional to the same
Jastrow state: one hidden unit per edge (sparse), one perfectly correlated
hidden unit per site (extensive), and one hidden unit per vertex of an
ordered vertex cover.  Graph states are built with the same cover machinery
using the controlled-phase edge matrix directly, and single-spin gates at
univalent sites extend the family further.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .configs import as_spins
from .errors import AmplitudeOverflowError
from .graphs import Graph, OrderedVertexCover, neighborhood, validate_cover
from .nqs import (HADAMARD_COUPLING, IDENTITY_COUPLING, HiddenUnit, NqsNetwork,
                  absorb_gate, boltzmann_coupling, _pair, _unpair)


@dataclass(frozen=True)
class JastrowState:
    """Complex Boltzmann-form pair state: biases c plus strictly upper
    triangular pair interactions V supported on the edges of a graph."""

    graph: Graph
    c: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        n = self.graph.n
        c = np.array(self.c, dtype=complex)
        V = np.array(self.V, dtype=complex)
        if c.shape != (n,):
            raise ValueError(f"bias vector must have length {n}")
        if V.shape != (n, n):
            raise ValueError(f"interaction matrix must be {n}x{n}")
        if np.any(np.tril(V) != 0):
            raise ValueError("interaction matrix must be strictly upper triangular")
        support = {(s, t) for s, t in zip(*np.nonzero(V))}
        if not support <= self.graph.edges:
            extra = sorted(support - self.graph.edges)[0]
            raise ValueError(f"interaction at non-edge {extra}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "V", V)

    @property
    def n(self) -> int:
        return self.graph.n

    def amplitude(self, v) -> complex:
        return jastrow_amplitude(self, v)

    def amplitudes(self, configs: np.ndarray) -> np.ndarray:
        return jastrow_amplitudes(self, configs)

    def to_json_dict(self) -> dict:
        entries = [{"s": int(s) + 1, "t": int(t) + 1,
                    "re": float(self.V[s, t].real), "im": float(self.V[s, t].imag)}
                   for s, t in self.graph.sorted_edges() if self.V[s, t] != 0]
        return {"graph": self.graph.to_json_dict(),
                "c": [_pair(z) for z in self.c],
                "V": entries}

    @staticmethod
    def from_json_dict(d: dict) -> "JastrowState":
        g = Graph.from_json_dict(d["graph"])
        c = np.array([_unpair(z) for z in d["c"]])
        V = np.zeros((g.n, g.n), dtype=complex)
        for entry in d["V"]:
            V[entry["s"] - 1, entry["t"] - 1] = complex(entry["re"], entry["im"])
        return JastrowState(g, c, V)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json(text: str) -> "JastrowState":
        return JastrowState.from_json_dict(json.loads(text))


def jastrow_amplitude(state: JastrowState, v) -> complex:
    """exp(sum_j c_j v_j + sum_edges V_st v_s v_t)."""
    v = as_spins(v)
    if v.size != state.n:
        raise ValueError(f"configuration length {v.size} != {state.n}")
    return complex(jastrow_amplitudes(state, v[None, :])[0])


def jastrow_amplitudes(state: JastrowState, configs: np.ndarray) -> np.ndarray:
    configs = np.asarray(configs, dtype=float)
    if configs.ndim == 1:
        configs = configs[None, :]
    energy = configs @ state.c + np.einsum("bi,ij,bj->b", configs, state.V, configs)
    with np.errstate(over="ignore"):
        amp = np.exp(energy)
    if not np.all(np.isfinite(amp)):
        max_arg = float(np.abs(energy).max())
        raise AmplitudeOverflowError(
            f"Jastrow amplitude overflow; largest energy |.| = {max_arg:.3g}",
            max_abs_arg=max_arg)
    return amp


def _bias_diag(c: np.ndarray) -> np.ndarray:
    return np.stack([np.exp(c), np.exp(-c)], axis=1)


def _asech(z: np.ndarray) -> np.ndarray:
    return np.arccosh(1.0 / z)


def sparse_nqs(state: JastrowState, solution: str = "asym") -> NqsNetwork:
    """One hidden unit per edge, coupling exactly its two endpoints.

    ``solution`` picks the pair of weights realising each edge factor:
    "asym" splits it between the endpoints, "sqrt" uses the symmetric
    square-root form (undefined where tanh V = 1).  Amplitudes are
    proportional to the Jastrow state; biases sit in the diagonal factors.
    """
    if solution not in ("asym", "sqrt"):
        raise ValueError("solution must be 'asym' or 'sqrt'")
    units = []
    for s, t in state.graph.sorted_edges():
        vst = state.V[s, t]
        if solution == "asym":
            plus = _asech(np.exp(-vst))
            minus = _asech(np.exp(vst))
            ws, wt = 0.5 * (plus + minus), 0.5 * (plus - minus)
        else:
            root = np.sqrt(np.tanh(vst))
            if abs(root - 1.0) < 1e-14:
                raise ValueError(
                    f"edge ({s}, {t}): tanh(V) = 1 makes the symmetric "
                    "weight diverge; use the asym solution")
            ws = wt = np.arctanh(root)
        if not (np.isfinite(ws) and np.isfinite(wt)):
            raise ValueError(f"edge ({s}, {t}): divergent hidden-unit weight")
        units.append(HiddenUnit({s: boltzmann_coupling(ws),
                                 t: boltzmann_coupling(wt)}))
    return NqsNetwork(state.n, tuple(units), _bias_diag(state.c))


def extensive_nqs(state: JastrowState, soften: Optional[float] = None) -> NqsNetwork:
    """One system-extensive hidden unit per site, perfectly correlated with it.

    Exact mode (``soften=None``) stores the perfect correlation as an
    identity coupling and reproduces the Jastrow amplitudes exactly up to a
    global constant.  With ``soften=S`` the correlation is a finite
    Boltzmann weight S, trading exactness for nonzero matrix entries.
    """
    w = 0.5 * (state.V + state.V.T)
    units = []
    for i in range(state.n):
        self_coupling = (IDENTITY_COUPLING.copy() if soften is None
                         else boltzmann_coupling(float(soften)))
        couplings = {i: self_coupling}
        for j in range(state.n):
            if j != i and w[i, j] != 0:
                couplings[j] = boltzmann_coupling(w[i, j])
        units.append(HiddenUnit(couplings))
    return NqsNetwork(state.n, tuple(units), _bias_diag(state.c))


def _cover_network(graph: Graph, cover: OrderedVertexCover,
                   edge_matrix: Callable[[int, int], np.ndarray],
                   diag: np.ndarray) -> NqsNetwork:
    """Shared cover construction: one perfectly correlated hidden unit per
    cover vertex, each absorbing the edge matrices of its not-yet-processed
    neighbours.  ``edge_matrix(c, l)`` is read with rows indexed by the spin
    at cover vertex c and columns by the spin at l.
    """
    validate_cover(graph, cover.vertices)
    units = []
    processed = set()
    for cj in cover:
        couplings = {cj: IDENTITY_COUPLING.copy()}
        for l in sorted(neighborhood(graph, cj) - processed):
            couplings[l] = edge_matrix(cj, l)
        processed.add(cj)
        units.append(HiddenUnit(couplings))
    return NqsNetwork(graph.n, tuple(units), diag)


def graph2nqs(state: JastrowState, cover: OrderedVertexCover) -> NqsNetwork:
    """Cover construction for a Jastrow state: M = |cover| hidden units.

    Each cover vertex becomes a hidden unit perfectly correlated with its
    visible unit; the full pair factor e^{V_st v_s v_t} of every edge rides
    on the coupling matrix at the edge's other endpoint.
    """
    def edge_matrix(cj: int, l: int) -> np.ndarray:
        vst = state.V[min(cj, l), max(cj, l)]
        return boltzmann_coupling(vst)

    return _cover_network(state.graph, cover, edge_matrix, _bias_diag(state.c))


def graph_state_nqs(graph: Graph, cover: OrderedVertexCover) -> NqsNetwork:
    """Cover construction for the graph state of ``graph``.

    Every edge carries the controlled-phase factor, +1 unless both ends are
    spin-down, which is exactly the Hadamard-type matrix [[1,1],[1,-1]]; the
    resulting amplitudes equal the graph-state amplitudes.
    """
    return _cover_network(graph, cover, lambda cj, l: HADAMARD_COUPLING.copy(),
                          np.ones((graph.n, 2), dtype=complex))


@dataclass(frozen=True)
class VmjState:
    """Jastrow state plus single-spin operators applied at chosen sites.

    Non-(anti-)diagonal gates must sit at sites that are univalent in the
    cover construction of the base state; diagonal and anti-diagonal gates
    may sit anywhere.
    """

    base: JastrowState
    gates: Dict[int, np.ndarray]
    cover: OrderedVertexCover

    def __post_init__(self):
        fixed = {}
        for j, q in self.gates.items():
            q = np.asarray(q, dtype=complex)
            if q.shape != (2, 2):
                raise ValueError(f"gate at site {j} must be 2x2")
            fixed[int(j)] = q
        object.__setattr__(self, "gates", fixed)


def vmj_nqs(state: VmjState) -> NqsNetwork:
    """Cover construction of the base state with all gates absorbed.

    Keeps the hidden-unit count of the underlying Jastrow network;
    illegal gate placements surface as GateAbsorptionError.
    """
    net = graph2nqs(state.base, state.cover)
    for j in sorted(state.gates):
        net = absorb_gate(net, j, state.gates[j])
    return net


@dataclass(frozen=True)
class CftState:
    """Chiral-boson reference state for the periodic XXZ chain.

    Amplitudes vanish outside the zero-magnetization sector; inside it they
    carry alternating-sublattice signs and pair factors
    |sin(pi (j - k)/N)|^(alpha v_j v_k).  The same data is exposed as a
    JastrowState (on the complete graph, signs encoded as imaginary biases)
    that agrees with the evaluator on the sector up to a global phase.
    """

    n: int
    alpha: float

    def __post_init__(self):
        if self.n % 2 or self.n <= 0:
            raise ValueError("chain length must be positive and even")

    def _pair_matrix(self) -> np.ndarray:
        V = np.zeros((self.n, self.n))
        for k in range(self.n):
            for j in range(k + 1, self.n):
                V[k, j] = self.alpha * np.log(abs(np.sin(np.pi * (j - k) / self.n)))
        return V

    def amplitude(self, v) -> complex:
        v = as_spins(v)
        return complex(self.amplitudes(v[None, :])[0])

    def amplitudes(self, configs: np.ndarray) -> np.ndarray:
        configs = np.asarray(configs, dtype=float)
        if configs.ndim == 1:
            configs = configs[None, :]
        V = self._pair_matrix()
        energy = np.einsum("bi,ij,bj->b", configs, V, configs)
        signs = configs[:, 0::2].prod(axis=1)  # odd sites in 1-based labels
        sector = configs.sum(axis=1) == 0
        return np.where(sector, signs * np.exp(energy), 0.0).astype(complex)

    def jastrow(self) -> JastrowState:
        """Equivalent Jastrow data, valid on the zero-magnetization sector.

        The sublattice sign prod_odd v_j equals prod_odd e^{-i pi v_j / 2}
        up to a global phase, so it becomes a -i pi/2 bias on those sites.
        """
        edges = [(s, t) for s in range(self.n) for t in range(s + 1, self.n)]
        graph = Graph.from_edges(self.n, edges)
        c = np.zeros(self.n, dtype=complex)
        c[0::2] = -0.5j * np.pi
        return JastrowState(graph, c, self._pair_matrix().astype(complex))
