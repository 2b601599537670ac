"""Brute-force ground truth: dense 2^N state vectors, overlaps, comparison up
to a global scale, exact XXZ ground states on the zero-magnetization sector,
and random stabilizer instances paired with their dense vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .configs import all_configs, zero_magnetization_mask
from .errors import CapabilityError

DENSE_LIMIT = 20


@dataclass(frozen=True)
class DenseState:
    """Full state vector over 2^n basis states (site 0 = most significant bit,
    qubit value 0 meaning spin +1)."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


AmplitudeSource = Union[DenseState, np.ndarray, Callable]


def dense_from(evaluator, n: int) -> DenseState:
    """Tabulate an amplitude evaluator over all 2^n configurations.

    Accepts anything with a vectorised ``amplitudes((2^n, n) array)`` method,
    or a plain callable applied per configuration.
    """
    if n > DENSE_LIMIT:
        raise CapabilityError(f"dense tabulation limited to {DENSE_LIMIT} sites (got {n})")
    configs = all_configs(n)
    if hasattr(evaluator, "amplitudes"):
        amps = np.asarray(evaluator.amplitudes(configs), dtype=complex)
    else:
        amps = np.array([evaluator(v) for v in configs], dtype=complex)
    return DenseState(n, amps)


def _vector(a: AmplitudeSource) -> np.ndarray:
    if isinstance(a, DenseState):
        return a.amplitudes
    return np.asarray(a, dtype=complex)


def overlap(a: AmplitudeSource, b: AmplitudeSource) -> float:
    """Normalised squared inner product |<a|b>|^2 / (<a|a><b|b>)."""
    va, vb = _vector(a), _vector(b)
    if va.shape != vb.shape:
        raise ValueError("states must have the same dimension")
    na, nb = np.vdot(va, va).real, np.vdot(vb, vb).real
    if na == 0 or nb == 0:
        raise ValueError("overlap of a zero vector is undefined")
    return float(abs(np.vdot(va, vb)) ** 2 / (na * nb))


@dataclass(frozen=True)
class ProportionalResult:
    equal: bool
    deviation: float
    index: Optional[int]
    scale: complex

    def __bool__(self):
        return self.equal


def proportional_equal(a: AmplitudeSource, b: AmplitudeSource,
                       tol: float = 1e-10) -> ProportionalResult:
    """Compare two amplitude vectors up to one global complex constant.

    ``b`` is rescaled by the ratio at a's largest-magnitude entry; reported
    is max |a - scale*b| / max|a| together with the worst index, which also
    flags support mismatches (zero amplitude facing a nonzero one).
    """
    va, vb = _vector(a), _vector(b)
    if va.shape != vb.shape:
        raise ValueError("states must have the same dimension")
    amax = float(np.abs(va).max())
    bmax = float(np.abs(vb).max())
    if amax == 0 or bmax == 0:
        raise ValueError("cannot compare a zero vector")
    k = int(np.argmax(np.abs(va)))
    if abs(vb[k]) <= tol * bmax:
        return ProportionalResult(False, float("inf"), k, 0.0)
    scale = va[k] / vb[k]
    dev = np.abs(va - scale * vb) / amax
    idx = int(np.argmax(dev))
    worst = float(dev[idx])
    return ProportionalResult(worst <= tol, worst, idx if worst > tol else None, scale)


def _sector_basis(n: int):
    masks = [1 << (n - 1 - j) for j in range(n)]
    sector = [idx for idx in range(1 << n) if bin(idx).count("1") == n // 2]
    position = {idx: k for k, idx in enumerate(sector)}
    return masks, sector, position


def xxz_ground_state(n: int, delta: float, gauge: bool = False
                     ) -> Tuple[DenseState, float]:
    """Ground state of sum_j (X_j X_j+1 + Y_j Y_j+1 + delta Z_j Z_j+1) with
    periodic boundaries, restricted to the zero-magnetization sector.

    ``gauge=True`` flips the sign of the spin-exchange term (the alternating
    sublattice rotation), making the matrix stoquastic so the returned
    amplitudes are non-negative.
    """
    if n % 2 or n <= 0:
        raise ValueError("chain length must be positive and even")
    if n > 16:
        raise CapabilityError(f"exact diagonalisation limited to 16 sites (got {n})")
    masks, sector, position = _sector_basis(n)
    dim = len(sector)
    off = -2.0 if gauge else 2.0

    rows, cols, vals = [], [], []
    diag = np.zeros(dim)
    for k, idx in enumerate(sector):
        for j in range(n):
            jp = (j + 1) % n
            b1 = (idx >> (n - 1 - j)) & 1
            b2 = (idx >> (n - 1 - jp)) & 1
            diag[k] += delta * (1 - 2 * b1) * (1 - 2 * b2)
            if b1 != b2:
                idx2 = idx ^ masks[j] ^ masks[jp]
                rows.append(k)
                cols.append(position[idx2])
                vals.append(off)
    ham = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    ham += scipy.sparse.diags(diag)

    if dim <= 2048:
        energies, vectors = scipy.linalg.eigh(ham.toarray())
        energy, vec = float(energies[0]), vectors[:, 0]
    else:
        energies, vectors = scipy.sparse.linalg.eigsh(
            ham, k=1, which="SA", v0=np.ones(dim))
        energy, vec = float(energies[0]), vectors[:, 0]

    # fix the arbitrary eigenvector sign so results are reproducible
    pivot = int(np.argmax(np.abs(vec)))
    if vec[pivot] < 0:
        vec = -vec

    full = np.zeros(1 << n, dtype=complex)
    full[np.array(sector)] = vec
    return DenseState(n, full), energy


def project_zero_magnetization(state: DenseState) -> DenseState:
    """Zero out all amplitudes outside the zero-magnetization sector."""
    amps = state.amplitudes.copy()
    amps[~zero_magnetization_mask(state.n)] = 0.0
    return DenseState(state.n, amps)


def _pauli_row_action(n: int, xrow, zrow, sign: int):
    """Vectorised action of one tableau row on dense vectors.

    Returns (xmask, phase array) so that (T psi)[idx ^ xmask] = phase[idx] * psi[idx].
    """
    xmask = 0
    zmask = 0
    n_y = 0
    for j in range(n):
        bit = 1 << (n - 1 - j)
        if xrow[j]:
            xmask |= bit
        if zrow[j]:
            zmask |= bit
        if xrow[j] and zrow[j]:
            n_y += 1
    idx = np.arange(1 << n, dtype=np.uint64)
    parity = np.bitwise_count(idx & np.uint64(zmask)) & 1
    phase = np.where(parity, -1.0 + 0.0j, 1.0 + 0.0j)
    phase *= (1j) ** (n_y % 4)
    if sign:
        phase = -phase
    return xmask, phase


def apply_generator_dense(psi: np.ndarray, n: int, xrow, zrow, sign: int) -> np.ndarray:
    xmask, phase = _pauli_row_action(n, xrow, zrow, sign)
    out = np.empty_like(psi)
    idx = np.arange(1 << n)
    out[idx ^ xmask] = phase * psi
    return out


def dense_stabilizer_state(cm, seed: int = 0) -> DenseState:
    """Dense vector of a stabilizer state via projection.

    Applies prod_a (1 + T_a)/2 to a pseudo-random complex vector and
    normalises, retrying with a fresh vector if the projection collapses.
    """
    n = cm.n
    if n > DENSE_LIMIT:
        raise CapabilityError(f"dense stabilizer vector limited to {DENSE_LIMIT} qubits")
    rng = np.random.default_rng(seed)
    actions = [_pauli_row_action(n, cm.x[a], cm.z[a], int(cm.s[a])) for a in range(n)]
    idx = np.arange(1 << n)
    for _ in range(16):
        psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        for xmask, phase in actions:
            moved = np.empty_like(psi)
            moved[idx ^ xmask] = phase * psi
            psi = 0.5 * (psi + moved)
        norm = np.linalg.norm(psi)
        if norm > 1e-8:
            return DenseState(n, psi / norm)
    raise RuntimeError("projector kept annihilating the random vector")


def apply_gate_dense(state: DenseState, j: int, q) -> DenseState:
    """Apply a single-site 2x2 operator to the full vector."""
    if not 0 <= j < state.n:
        raise ValueError(f"site {j} out of range")
    q = np.asarray(q, dtype=complex)
    if q.shape != (2, 2):
        raise ValueError("gate must be 2x2")
    psi = state.amplitudes.reshape(1 << j, 2, -1)
    out = np.einsum("ab,ibk->iak", q, psi)
    return DenseState(state.n, out.reshape(-1))


def apply_cz_dense(state: DenseState, j: int, k: int) -> DenseState:
    if j == k:
        raise ValueError("controlled phase needs two distinct sites")
    idx = np.arange(1 << state.n, dtype=np.uint64)
    bj = (idx >> np.uint64(state.n - 1 - j)) & np.uint64(1)
    bk = (idx >> np.uint64(state.n - 1 - k)) & np.uint64(1)
    phase = np.where((bj & bk).astype(bool), -1.0, 1.0)
    return DenseState(state.n, state.amplitudes * phase)


_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
_S = np.array([[1.0, 0.0], [0.0, 1.0j]], dtype=complex)


def random_stabilizer(n: int, seed: int):
    """Random stabilizer state as a (CheckMatrix, DenseState) pair.

    A random H/S/CZ circuit of depth 3n^2 is applied simultaneously to the
    all-zeros tableau and to the dense vector, so the pair is consistent up
    to global phase by construction.
    """
    from .stabilizer import CheckMatrix

    if n > 10:
        raise CapabilityError(f"random stabilizer pairs limited to 10 qubits (got {n})")
    rng = np.random.default_rng(seed)
    cm = CheckMatrix.zero_state(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    state = DenseState(n, psi)
    for _ in range(3 * n * n):
        kind = rng.integers(0, 3) if n > 1 else rng.integers(0, 2)
        if kind == 0:
            j = int(rng.integers(0, n))
            cm = cm.apply_h(j)
            state = apply_gate_dense(state, j, _H)
        elif kind == 1:
            j = int(rng.integers(0, n))
            cm = cm.apply_s(j)
            state = apply_gate_dense(state, j, _S)
        else:
            j, k = rng.choice(n, size=2, replace=False)
            cm = cm.apply_cz(int(j), int(k))
            state = apply_cz_dense(state, int(j), int(k))
    return cm, state


def save_dense(state: DenseState, path: str) -> None:
    """Binary export: one JSON header line, then little-endian interleaved
    (re, im) doubles in index order."""
    header = json.dumps({"n": state.n, "count": 1 << state.n,
                         "layout": "interleaved-re-im-float64-le"})
    inter = np.empty(2 << state.n, dtype="<f8")
    inter[0::2] = state.amplitudes.real
    inter[1::2] = state.amplitudes.imag
    with open(path, "wb") as fh:
        fh.write(header.encode() + b"\n")
        fh.write(inter.tobytes())


def load_dense(path: str) -> DenseState:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        raw = np.frombuffer(fh.read(), dtype="<f8")
    n = int(header["n"])
    amps = raw[0::2] + 1j * raw[1::2]
    return DenseState(n, amps)


def save_dense_csv(state: DenseState, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("index,re,im\n")
        for i, z in enumerate(state.amplitudes):
            fh.write(f"{i},{z.real!r},{z.imag!r}\n")
