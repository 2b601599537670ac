"""Check-matrix stabilizer formalism and the reduction of any stabilizer
state to a graph state dressed with single-qubit Cliffords, feeding the
cover construction to produce a compact network with at most N-1 hidden
units.  Also houses the named code fixtures used as worked examples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import TableauError
from .graphs import Graph, OrderedVertexCover, min_vertex_cover
from .jastrow import graph_state_nqs
from .nqs import NqsNetwork, HiddenUnit, HADAMARD_COUPLING, absorb_gate

_PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_PAULI = {v: k for k, v in _PAULI_BITS.items()}

GATE_I = np.eye(2, dtype=complex)
GATE_X = np.array([[0, 1], [1, 0]], dtype=complex)
GATE_Z = np.array([[1, 0], [0, -1]], dtype=complex)
GATE_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
GATE_S = np.array([[1, 0], [0, 1j]], dtype=complex)
GATE_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)


def _phase_exponent_sum(x1, z1, x2, z2) -> int:
    """Exponent of i (mod 4) in the sitewise product P(x1,z1) . P(x2,z2)."""
    x1 = np.asarray(x1, dtype=np.int64)
    z1 = np.asarray(z1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    z2 = np.asarray(z2, dtype=np.int64)
    g = np.zeros_like(x1)
    is_y = (x1 == 1) & (z1 == 1)
    is_x = (x1 == 1) & (z1 == 0)
    is_z = (x1 == 0) & (z1 == 1)
    g[is_y] = z2[is_y] - x2[is_y]
    g[is_x] = z2[is_x] * (2 * x2[is_x] - 1)
    g[is_z] = x2[is_z] * (1 - 2 * z2[is_z])
    return int(g.sum()) % 4


@dataclass(frozen=True)
class CheckMatrix:
    """Stabilizer tableau: N x N bit blocks X and Z plus sign bits s.

    Row a encodes the generator (-1)^{s_a} prod_j P(x_aj, z_aj) with the bit
    pairs 00, 10, 11, 01 meaning I, X, Y, Z.  Operations copy, mutate the
    copy and return it.
    """

    n: int
    x: np.ndarray
    z: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=np.uint8) % 2
        z = np.array(self.z, dtype=np.uint8) % 2
        s = np.array(self.s, dtype=np.uint8) % 2
        if x.shape != (self.n, self.n) or z.shape != (self.n, self.n):
            raise TableauError(f"X and Z blocks must be {self.n}x{self.n}")
        if s.shape != (self.n,):
            raise TableauError(f"sign vector must have length {self.n}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "s", s)

    @staticmethod
    def zero_state(n: int) -> "CheckMatrix":
        return CheckMatrix(n, np.zeros((n, n), dtype=np.uint8),
                           np.eye(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    def copy(self) -> "CheckMatrix":
        return CheckMatrix(self.n, self.x.copy(), self.z.copy(), self.s.copy())

    def commutes(self) -> bool:
        sym = (self.x @ self.z.T + self.z @ self.x.T) % 2
        return not np.any(sym)

    def rank(self) -> int:
        rows = [int.from_bytes(np.packbits(np.concatenate([self.x[a], self.z[a]])).tobytes(), "big")
                for a in range(self.n)]
        basis = []
        for r in rows:
            for b in basis:
                r = min(r, r ^ b)
            if r:
                basis.append(r)
        return len(basis)

    def is_valid(self) -> bool:
        return self.commutes() and self.rank() == self.n

    def validate(self) -> None:
        if not self.commutes():
            raise TableauError("generators do not all commute")
        if self.rank() != self.n:
            raise TableauError("generator rows are linearly dependent")

    def apply_h(self, j: int) -> "CheckMatrix":
        """Hadamard on qubit j: flip sign where the row holds Y, swap x <-> z."""
        cm = self.copy()
        cm.s[:] ^= cm.x[:, j] & cm.z[:, j]
        cm.x[:, j], cm.z[:, j] = cm.z[:, j].copy(), cm.x[:, j].copy()
        return cm

    def apply_s(self, j: int) -> "CheckMatrix":
        """Phase gate on qubit j: flip sign where the row holds Y, z ^= x."""
        cm = self.copy()
        cm.s[:] ^= cm.x[:, j] & cm.z[:, j]
        cm.z[:, j] ^= cm.x[:, j]
        return cm

    def apply_z(self, j: int) -> "CheckMatrix":
        cm = self.copy()
        cm.s[:] ^= cm.x[:, j]
        return cm

    def apply_cz(self, j: int, k: int) -> "CheckMatrix":
        """Controlled phase between qubits j and k.

        The sign flips exactly for rows holding {X,Y} on one qubit and
        {Y,X} on the other (an X at both sites with differing z bits),
        which is the unique rule consistent with dense conjugation.
        """
        if j == k:
            raise ValueError("controlled phase needs two distinct qubits")
        cm = self.copy()
        cm.s[:] ^= cm.x[:, j] & cm.x[:, k] & (cm.z[:, j] ^ cm.z[:, k])
        cm.z[:, j] ^= cm.x[:, k]
        cm.z[:, k] ^= cm.x[:, j]
        return cm

    def row_add(self, a: int, b: int) -> "CheckMatrix":
        """Replace generator a by the product (row a) . (row b), a != b."""
        if a == b:
            raise ValueError("adding a row to itself would zero the generator")
        cm = self.copy()
        _row_mul_inplace(cm.x, cm.z, cm.s, a, b)
        return cm

    def row_pauli(self, a: int) -> str:
        body = "".join(_BITS_PAULI[(int(self.x[a, j]), int(self.z[a, j]))]
                       for j in range(self.n))
        return ("-" if self.s[a] else "+") + body

    def to_text(self) -> str:
        return "\n".join(self.row_pauli(a) for a in range(self.n))

    @staticmethod
    def from_text(text: str) -> "CheckMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        return from_pauli_strings(lines)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "generators": [self.row_pauli(a) for a in range(self.n)]}

    @staticmethod
    def from_json_dict(d: dict) -> "CheckMatrix":
        cm = from_pauli_strings(d["generators"])
        if cm.n != int(d["n"]):
            raise TableauError("generator length disagrees with declared qubit count")
        return cm

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json(text: str) -> "CheckMatrix":
        return CheckMatrix.from_json_dict(json.loads(text))


def _row_mul_inplace(x, z, s, a: int, b: int) -> None:
    g = _phase_exponent_sum(x[a], z[a], x[b], z[b])
    total = (2 * int(s[a]) + 2 * int(s[b]) + g) % 4
    if total % 2:
        raise TableauError("rows anticommute; cannot form their product")
    s[a] = (total // 2) % 2
    x[a] ^= x[b]
    z[a] ^= z[b]


def from_pauli_strings(rows: Sequence[str]) -> CheckMatrix:
    """Parse generators like '+XZZIZ' (sign character optional, default +)."""
    parsed = []
    for row in rows:
        row = row.strip()
        sign = 0
        if row and row[0] in "+-":
            sign = 1 if row[0] == "-" else 0
            row = row[1:]
        bits = []
        for ch in row.upper():
            if ch not in _PAULI_BITS:
                raise TableauError(f"unknown Pauli letter {ch!r}")
            bits.append(_PAULI_BITS[ch])
        parsed.append((sign, bits))
    n = len(parsed)
    if any(len(bits) != n for _, bits in parsed):
        raise TableauError(f"need exactly {n} letters per generator for {n} qubits")
    x = np.array([[b[0] for b in bits] for _, bits in parsed], dtype=np.uint8)
    z = np.array([[b[1] for b in bits] for _, bits in parsed], dtype=np.uint8)
    s = np.array([sign for sign, _ in parsed], dtype=np.uint8)
    return CheckMatrix(n, x, z, s)


@dataclass(frozen=True)
class LocalCliffordLayer:
    """One single-qubit gate per qubit (explicit 2x2 matrices with name tags)
    plus the qubit permutation the extraction used internally."""

    gates: Tuple[np.ndarray, ...]
    tags: Tuple[str, ...]
    permutation: Tuple[int, ...]

    def h_sites(self) -> frozenset:
        return frozenset(j for j, tag in enumerate(self.tags) if "H" in tag)

    def is_identity(self, j: int) -> bool:
        return self.tags[j] == "I"


@dataclass(frozen=True)
class GraphStateForm:
    """Result of the graph-state extraction: the stabilizer state equals the
    layer's gates applied qubit-wise to the graph state of ``graph``."""

    graph: Graph
    layer: LocalCliffordLayer

    @property
    def h_sites(self) -> frozenset:
        return self.layer.h_sites()


def _compose(tagged_gates) -> Tuple[np.ndarray, str]:
    """Multiply (tag, matrix) pairs given in application order."""
    mat = GATE_I
    names: List[str] = []
    for tag, gate in tagged_gates:
        mat = gate @ mat
        names.append(tag)
    if not names:
        return GATE_I, "I"
    # matrix product reads right to left; show the same order
    return mat, "·".join(reversed(names)) if len(names) > 1 else names[0]


def to_graph_state(cm: CheckMatrix) -> GraphStateForm:
    """Reduce a stabilizer tableau to graph-state form [1|theta], s = 0.

    Gaussian elimination over the X block (with tracked spin swaps), then
    elimination of the lower-right Z block, Hadamards on the trailing
    qubits, phase gates wherever the Z diagonal is set, and sign-fixing Z
    gates.  Returns the graph in the original qubit labels together with
    the inverse gate layer, so that applying the layer to the graph state
    reproduces the input stabilizer state.  The Hadamard sites always form
    an independent set of the extracted graph.
    """
    cm.validate()
    n = cm.n
    x, z, s = cm.x.copy(), cm.z.copy(), cm.s.copy()
    perm = list(range(n))  # position -> original qubit

    def swap_rows(a, b):
        if a != b:
            x[[a, b]] = x[[b, a]]
            z[[a, b]] = z[[b, a]]
            s[[a, b]] = s[[b, a]]

    def swap_cols(a, b):
        if a != b:
            x[:, [a, b]] = x[:, [b, a]]
            z[:, [a, b]] = z[:, [b, a]]
            perm[a], perm[b] = perm[b], perm[a]

    # reduced echelon form of the X block, pivots scanned left to right
    rank = 0
    pivot_cols = []
    for c in range(n):
        hit = [i for i in range(rank, n) if x[i, c]]
        if not hit:
            continue
        swap_rows(rank, hit[0])
        for i in range(n):
            if i != rank and x[i, c]:
                _row_mul_inplace(x, z, s, i, rank)
        pivot_cols.append(c)
        rank += 1
    for k, c in enumerate(pivot_cols):
        swap_cols(k, c)

    # identity block in the lower-right of Z, clearing those columns above
    rr = n - 1
    for c in range(n - 1, rank - 1, -1):
        hit = [i for i in range(rr, rank - 1, -1) if z[i, c]]
        if not hit:
            raise TableauError("tableau inconsistent: trailing Z block is singular")
        swap_rows(rr, hit[0])
        for i in range(n):
            if i != rr and z[i, c]:
                _row_mul_inplace(x, z, s, i, rr)
        rr -= 1

    # Hadamards turn the trailing pure-Z rows into graph-state rows
    h_positions = list(range(rank, n))
    for c in h_positions:
        s[:] ^= x[:, c] & z[:, c]
        x[:, c], z[:, c] = z[:, c].copy(), x[:, c].copy()

    if not np.array_equal(x, np.eye(n, dtype=np.uint8)):
        raise TableauError("graph-state reduction failed to reach an identity X block")
    if not np.array_equal(z, z.T):
        raise TableauError("extracted adjacency is not symmetric")
    if np.any(z[rank:, rank:]):
        raise TableauError("Hadamard sites are not independent")

    s_positions = [c for c in range(n) if z[c, c]]
    for c in s_positions:
        s[:] ^= x[:, c] & z[:, c]
        z[:, c] ^= x[:, c]

    z_positions = [c for c in range(n) if s[c]]
    for c in z_positions:
        s[:] ^= x[:, c]

    assert not np.any(s) and not np.any(np.diag(z))

    edges = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if z[i, j]]
    graph = Graph.from_edges(n, edges)

    gates = [None] * n
    tags = [None] * n
    for pos in range(n):
        applied = []
        if pos in h_positions:
            applied.append(("H", GATE_H))
        if pos in s_positions:
            applied.append(("S", GATE_S))
        if pos in z_positions:
            applied.append(("Z", GATE_Z))
        inverse = [( {"H": "H", "S": "S†", "Z": "Z"}[tag], gate.conj().T)
                   for tag, gate in reversed(applied)]
        mat, tag = _compose(inverse)
        gates[perm[pos]] = mat
        tags[perm[pos]] = tag
    layer = LocalCliffordLayer(tuple(gates), tuple(tags), tuple(perm))
    return GraphStateForm(graph, layer)


def stabilizer_cover(graph: Graph, h_sites: frozenset) -> OrderedVertexCover:
    """Ordered cover whose prefix is the (non-isolated) Hadamard sites,
    completed by a minimum cover of the rest of the graph."""
    prefix = tuple(sorted(v for v in h_sites if graph.degree(v) > 0))
    residual_edges = [(a, b) for a, b in graph.edges
                      if a not in h_sites and b not in h_sites]
    residual = Graph.from_edges(graph.n, residual_edges)
    rest = tuple(sorted(min_vertex_cover(residual).vertices))
    return OrderedVertexCover(prefix + rest)


def stabilizer_to_vmj_nqs(cm: CheckMatrix) -> NqsNetwork:
    """Compact network for any stabilizer state, M <= N - 1 hidden units.

    Extracts the graph-state form, runs the cover construction with the
    Hadamard sites leading the cover (they end up univalent there), and
    absorbs the inverse gate layer: Hadamards at univalent or uncoupled
    sites, diagonal gates anywhere.
    """
    form = to_graph_state(cm)
    cover = stabilizer_cover(form.graph, form.h_sites)
    net = graph_state_nqs(form.graph, cover)
    for qubit in range(cm.n):
        if not form.layer.is_identity(qubit):
            net = absorb_gate(net, qubit, form.layer.gates[qubit])
    return net


# ---------------------------------------------------------------------------
# named fixtures

def steane_state() -> CheckMatrix:
    """Seven-qubit code space plus the all-Y operator, pinning the logical
    superposition with relative phase -i."""
    return from_pauli_strings([
        "+IIIXXXX",
        "+IXXIIXX",
        "+XIXIXIX",
        "+IIIZZZZ",
        "+IZZIIZZ",
        "+ZIZIZIZ",
        "+YYYYYYY",
    ])


def five_qubit_code_state() -> CheckMatrix:
    """[[5,1,3]] code with the logical-zero stabilizer appended."""
    return from_pauli_strings([
        "+XZZXI",
        "+IXZZX",
        "+XIXZZ",
        "+ZXIXZ",
        "+ZZZZZ",
    ])


def shor_state() -> CheckMatrix:
    """Nine-qubit Shor code with the logical-plus stabilizer appended."""
    return from_pauli_strings([
        "+ZZIIIIIII",
        "+IZZIIIIII",
        "+IIIZZIIII",
        "+IIIIZZIII",
        "+IIIIIIZZI",
        "+IIIIIIIZZ",
        "+XXXXXXIII",
        "+IIIXXXXXX",
        "+XXXXXXXXX",
    ])


def toric_spin(L: int, kind: str, i: int, j: int) -> int:
    """Spin index of the horizontal ('h') or vertical ('v') bond at vertex
    (i, j) of the L x L periodic lattice."""
    base = 2 * ((i % L) * L + (j % L))
    return base if kind == "h" else base + 1


def _toric_generator_rows(L: int):
    n = 2 * L * L
    rows = []

    def pure(kind_bits, spins):
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        block = x if kind_bits == "x" else z
        for sp in spins:
            block[sp] = 1
        return x, z

    for i in range(L):
        for j in range(L):
            star = [toric_spin(L, "h", i, j), toric_spin(L, "h", i, j - 1),
                    toric_spin(L, "v", i, j), toric_spin(L, "v", i - 1, j)]
            rows.append(pure("z", star))
    for i in range(L):
        for j in range(L):
            plaq = [toric_spin(L, "h", i, j), toric_spin(L, "h", i + 1, j),
                    toric_spin(L, "v", i, j), toric_spin(L, "v", i, j + 1)]
            rows.append(pure("x", plaq))
    rows.append(pure("x", [toric_spin(L, "h", 0, j) for j in range(L)]))
    rows.append(pure("x", [toric_spin(L, "v", i, 0) for i in range(L)]))
    return n, rows


def toric_state(L: int) -> CheckMatrix:
    """Equal superposition of all closed-loop configurations on the L x L
    periodic lattice: star and plaquette generators plus the two
    non-contractible loop operators, with the two dependent rows dropped.
    """
    if L < 2:
        raise ValueError("lattice size must be at least 2")
    n, rows = _toric_generator_rows(L)
    kept_x, kept_z = [], []
    basis = []
    for x, z in rows:
        word = int.from_bytes(np.packbits(np.concatenate([x, z])).tobytes(), "big")
        for b in basis:
            word = min(word, word ^ b)
        if word:
            basis.append(word)
            kept_x.append(x)
            kept_z.append(z)
    assert len(kept_x) == n
    return CheckMatrix(n, np.array(kept_x), np.array(kept_z),
                       np.zeros(n, dtype=np.uint8))


def toric_direct_nqs(L: int) -> NqsNetwork:
    """Direct network for the closed-loop superposition: one hidden unit per
    star, enforcing even parity of its four spins through Hadamard-type
    couplings (M = half the spin count)."""
    if L < 2:
        raise ValueError("lattice size must be at least 2")
    n = 2 * L * L
    units = []
    for i in range(L):
        for j in range(L):
            star = [toric_spin(L, "h", i, j), toric_spin(L, "h", i, j - 1),
                    toric_spin(L, "v", i, j), toric_spin(L, "v", i - 1, j)]
            units.append(HiddenUnit({sp: HADAMARD_COUPLING.copy() for sp in star}))
    return NqsNetwork(n, tuple(units))
