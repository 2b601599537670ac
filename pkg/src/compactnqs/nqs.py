"""Tensor-network NQS data model and amplitude evaluation.

A network is a set of hidden units, each holding a sparse map from visible
sites to 2x2 complex coupling matrices, plus per-site diagonal bias factors.
Coupling matrices are plain (2, 2) complex arrays with rows indexed by the
hidden value (+1 then -1) and columns by the visible value (+1 then -1); an
absent coupling behaves as the all-ones matrix.

The module also provides the complex-RBM parameterisation and the exact
conversions between the two pictures, single-spin gate absorption, and the
single-hidden-unit hyperedge phase factor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .configs import as_spins
from .errors import AmplitudeOverflowError, GateAbsorptionError

IDENTITY_COUPLING = np.eye(2, dtype=complex)
ALL_ONES_COUPLING = np.ones((2, 2), dtype=complex)
HADAMARD_COUPLING = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex)


def boltzmann_coupling(w: complex) -> np.ndarray:
    """Coupling matrix exp(w * h * v): [[e^w, e^-w], [e^-w, e^w]]."""
    ew, emw = np.exp(w), np.exp(-w)
    return np.array([[ew, emw], [emw, ew]], dtype=complex)


def _as_coupling(m) -> np.ndarray:
    c = np.asarray(m, dtype=complex)
    if c.shape != (2, 2):
        raise ValueError(f"coupling matrix must be 2x2, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("coupling matrix entries must be finite")
    return c


@dataclass(frozen=True)
class HiddenUnit:
    """One hidden unit: sparse map visible site -> 2x2 coupling matrix."""

    couplings: Dict[int, np.ndarray]

    def __post_init__(self):
        if not self.couplings:
            raise ValueError("a hidden unit needs at least one coupling")
        fixed = {int(j): _as_coupling(c) for j, c in self.couplings.items()}
        object.__setattr__(self, "couplings", fixed)

    def sites(self) -> Tuple[int, ...]:
        return tuple(sorted(self.couplings))


@dataclass(frozen=True)
class NqsNetwork:
    """NQS tensor network: hidden units plus per-site diagonal bias factors."""

    n_visible: int
    hidden: Tuple[HiddenUnit, ...] = ()
    visible_diag: np.ndarray = None

    def __post_init__(self):
        if self.n_visible <= 0:
            raise ValueError("n_visible must be positive")
        object.__setattr__(self, "hidden", tuple(self.hidden))
        diag = self.visible_diag
        if diag is None:
            diag = np.ones((self.n_visible, 2), dtype=complex)
        diag = np.array(diag, dtype=complex)
        if diag.shape != (self.n_visible, 2):
            raise ValueError(f"visible_diag must have shape ({self.n_visible}, 2)")
        if not np.all(np.isfinite(diag)):
            raise ValueError("visible_diag entries must be finite")
        object.__setattr__(self, "visible_diag", diag)
        for unit in self.hidden:
            for j in unit.couplings:
                if not 0 <= j < self.n_visible:
                    raise ValueError(f"coupling site {j} out of range")

    @property
    def n_hidden(self) -> int:
        return len(self.hidden)

    def amplitude(self, v) -> complex:
        return nqs_amplitude(self, v)

    def amplitudes(self, configs: np.ndarray) -> np.ndarray:
        return nqs_amplitudes(self, configs)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n_visible,
            "visible_diag": [[_pair(z) for z in row] for row in self.visible_diag],
            "hidden": [
                {"couplings": {str(j + 1): [[_pair(z) for z in row] for row in c]
                               for j, c in sorted(u.couplings.items())}}
                for u in self.hidden
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "NqsNetwork":
        diag = np.array([[_unpair(z) for z in row] for row in d["visible_diag"]])
        units = []
        for entry in d["hidden"]:
            couplings = {int(j) - 1: np.array([[_unpair(z) for z in row] for row in mat])
                         for j, mat in entry["couplings"].items()}
            units.append(HiddenUnit(couplings))
        return NqsNetwork(int(d["n"]), tuple(units), diag)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json(text: str) -> "NqsNetwork":
        return NqsNetwork.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class RbmParams:
    """Complex RBM parameters: visible biases a, hidden biases b, weights w."""

    a: np.ndarray
    b: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        b = np.array(self.b, dtype=complex)
        w = np.array(self.w, dtype=complex)
        if w.ndim != 2 or a.ndim != 1 or b.ndim != 1:
            raise ValueError("a, b must be vectors and w a matrix")
        if w.shape != (b.size, a.size):
            raise ValueError(
                f"weight shape {w.shape} inconsistent with biases ({b.size}, {a.size})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "w", w)

    @property
    def n_visible(self) -> int:
        return self.a.size

    @property
    def n_hidden(self) -> int:
        return self.b.size

    def amplitude(self, v) -> complex:
        return rbm_amplitude(self, v)

    def amplitudes(self, configs: np.ndarray) -> np.ndarray:
        return rbm_amplitudes(self, configs)

    def to_json_dict(self) -> dict:
        return {
            "a": [_pair(z) for z in self.a],
            "b": [_pair(z) for z in self.b],
            "w": [[_pair(z) for z in row] for row in self.w],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "RbmParams":
        return RbmParams(
            np.array([_unpair(z) for z in d["a"]]),
            np.array([_unpair(z) for z in d["b"]]),
            np.array([[_unpair(z) for z in row] for row in d["w"]])
            if d["b"] else np.zeros((0, len(d["a"]))),
        )


def _pair(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def _unpair(p) -> complex:
    return complex(p[0], p[1])


def _columns(v: np.ndarray) -> np.ndarray:
    # +1 -> column 0, -1 -> column 1
    return ((1 - v) // 2).astype(np.intp)


def correlator(unit: HiddenUnit, v) -> complex:
    """Two-term amplitude contribution of one hidden unit.

    Product of the coupling entries selected by the configuration along the
    h=+1 row plus the same along the h=-1 row, over the coupled sites only.
    """
    v = as_spins(v)
    cols = _columns(v)
    top = 1.0 + 0.0j
    bot = 1.0 + 0.0j
    for j, c in unit.couplings.items():
        top *= c[0, cols[j]]
        bot *= c[1, cols[j]]
    return top + bot


def nqs_amplitude(nqs: NqsNetwork, v) -> complex:
    """Product of all hidden-unit correlators times the diagonal bias factors."""
    v = as_spins(v)
    if v.size != nqs.n_visible:
        raise ValueError(f"configuration length {v.size} != {nqs.n_visible}")
    return complex(nqs_amplitudes(nqs, v[None, :])[0])


def nqs_amplitudes(nqs: NqsNetwork, configs: np.ndarray) -> np.ndarray:
    """Vectorised amplitudes for a (batch, n) array of spin configurations."""
    configs = np.asarray(configs)
    if configs.ndim == 1:
        configs = configs[None, :]
    cols = _columns(configs)
    amp = np.ones(configs.shape[0], dtype=complex)
    for unit in nqs.hidden:
        top = np.ones(configs.shape[0], dtype=complex)
        bot = np.ones(configs.shape[0], dtype=complex)
        for j, c in unit.couplings.items():
            sel = cols[:, j]
            top *= c[0, sel]
            bot *= c[1, sel]
        amp *= top + bot
    diag_sel = nqs.visible_diag[np.arange(nqs.n_visible)[None, :], cols]
    amp *= diag_sel.prod(axis=1)
    return amp


def rbm_amplitude(params: RbmParams, v) -> complex:
    """prod_j e^{a_j v_j} prod_i 2 cosh(b_i + sum_j w_ij v_j)."""
    v = as_spins(v)
    if v.size != params.n_visible:
        raise ValueError(f"configuration length {v.size} != {params.n_visible}")
    return complex(rbm_amplitudes(params, v[None, :])[0])


def rbm_amplitudes(params: RbmParams, configs: np.ndarray) -> np.ndarray:
    configs = np.asarray(configs, dtype=float)
    if configs.ndim == 1:
        configs = configs[None, :]
    bias_arg = configs @ params.a
    theta = configs @ params.w.T + params.b
    with np.errstate(over="ignore", invalid="ignore"):
        amp = np.exp(bias_arg) * np.prod(2.0 * np.cosh(theta), axis=1)
    if not np.all(np.isfinite(amp)):
        max_arg = max(float(np.abs(theta).max(initial=0.0)),
                      float(np.abs(bias_arg).max(initial=0.0)))
        raise AmplitudeOverflowError(
            f"amplitude overflow; largest exponent argument |.| = {max_arg:.3g}",
            max_abs_arg=max_arg)
    return amp


def valency(nqs: NqsNetwork, j: int) -> int:
    """Number of hidden units coupled to visible site ``j``."""
    if not 0 <= j < nqs.n_visible:
        raise ValueError(f"site {j} out of range")
    return sum(1 for unit in nqs.hidden if j in unit.couplings)


def univalent_sites(nqs: NqsNetwork) -> frozenset:
    """Sites coupled to exactly one hidden unit."""
    counts = np.zeros(nqs.n_visible, dtype=int)
    for unit in nqs.hidden:
        for j in unit.couplings:
            counts[j] += 1
    return frozenset(int(j) for j in np.flatnonzero(counts == 1))


def _is_diagonal(q: np.ndarray) -> bool:
    return q[0, 1] == 0 and q[1, 0] == 0


def _is_antidiagonal(q: np.ndarray) -> bool:
    return q[0, 0] == 0 and q[1, 1] == 0


def absorb_gate(nqs: NqsNetwork, j: int, q) -> NqsNetwork:
    """Absorb a single-spin operator at site ``j`` into the network.

    The result satisfies, for every configuration v,

        amplitude(out, v) = sum_{v'} q[v_j, v'] * amplitude(in, v at j -> v')

    Diagonal operators multiply the site's bias factors; anti-diagonal ones
    additionally swap the visible columns of every coupling at the site.  A
    general operator contracts into the unique coupling of a univalent site
    (or into the bias factors of an uncoupled site); at a multivalent site
    only (anti-)diagonal operators can be absorbed.
    """
    if not 0 <= j < nqs.n_visible:
        raise ValueError(f"site {j} out of range")
    q = np.asarray(q, dtype=complex)
    if q.shape != (2, 2):
        raise ValueError("gate must be a 2x2 matrix")

    diag = nqs.visible_diag.copy()
    if _is_diagonal(q):
        diag[j, 0] *= q[0, 0]
        diag[j, 1] *= q[1, 1]
        return NqsNetwork(nqs.n_visible, nqs.hidden, diag)

    if _is_antidiagonal(q):
        # q = X . D with D = diag(q[1,0], q[0,1]); D scales the bias factors,
        # the X flip swaps visible columns everywhere the site appears.
        diag[j, 0] *= q[1, 0]
        diag[j, 1] *= q[0, 1]
        diag[j] = diag[j, ::-1]
        units = []
        for unit in nqs.hidden:
            if j in unit.couplings:
                new = dict(unit.couplings)
                new[j] = unit.couplings[j][:, ::-1].copy()
                units.append(HiddenUnit(new))
            else:
                units.append(unit)
        return NqsNetwork(nqs.n_visible, tuple(units), diag)

    val = valency(nqs, j)
    if val == 0:
        diag[j] = q @ diag[j]
        return NqsNetwork(nqs.n_visible, nqs.hidden, diag)
    if val == 1:
        units = []
        for unit in nqs.hidden:
            if j in unit.couplings:
                folded = unit.couplings[j] * diag[j][None, :]
                new = dict(unit.couplings)
                new[j] = folded @ q.T
                units.append(HiddenUnit(new))
            else:
                units.append(unit)
        diag[j] = (1.0, 1.0)
        return NqsNetwork(nqs.n_visible, tuple(units), diag)
    raise GateAbsorptionError(
        f"site {j} is coupled to {val} hidden units; a general single-spin "
        "operator only absorbs at sites with at most one coupling, "
        "otherwise it must be diagonal or anti-diagonal")


def add_hyperedge_unit(nqs: NqsNetwork, sites: Iterable[int]) -> NqsNetwork:
    """Append one hidden unit multiplying amplitudes by -1 exactly when all
    the given sites are spin-down.

    Each coupled site carries [[1, 1], [0, (-2)^(1/p)]] with p the number of
    sites, so the h=-1 branch contributes ((-2)^(1/p))^p = -2 on the
    all-down pattern and 0 otherwise.
    """
    site_list = sorted(set(int(s) for s in sites))
    p = len(site_list)
    if p < 2:
        raise ValueError("a hyperedge needs at least two sites")
    for s in site_list:
        if not 0 <= s < nqs.n_visible:
            raise ValueError(f"site {s} out of range")
    root = (-2.0 + 0.0j) ** (1.0 / p)
    c = np.array([[1.0, 1.0], [0.0, root]], dtype=complex)
    unit = HiddenUnit({s: c.copy() for s in site_list})
    return NqsNetwork(nqs.n_visible, nqs.hidden + (unit,), nqs.visible_diag.copy())


def nqs_to_rbm(nqs: NqsNetwork, soften: Optional[float] = None) -> RbmParams:
    """Convert a tensor-network NQS to complex RBM parameters.

    Each coupling matrix is decomposed in Boltzmann form; the per-coupling
    partial biases are summed into a and b and the scale factors dropped, so
    amplitudes agree with the network up to one global constant.  Entries of
    exactly zero magnitude are rejected unless ``soften`` is given, in which
    case they are replaced by e^-soften first.
    """
    n, m = nqs.n_visible, nqs.n_hidden
    a = np.zeros(n, dtype=complex)
    b = np.zeros(m, dtype=complex)
    w = np.zeros((m, n), dtype=complex)

    def logs(mat, where):
        mat = mat.copy()
        zero = mat == 0
        if np.any(zero):
            if soften is None:
                raise ValueError(
                    f"zero entry in {where}; pass soften=S to regularise "
                    "it to e^-S before taking logarithms")
            mat[zero] = np.exp(-float(soften))
        return np.log(mat)

    for i, unit in enumerate(nqs.hidden):
        for j, c in unit.couplings.items():
            lg = logs(c, f"coupling ({i}, {j})")
            w[i, j] = 0.25 * (lg[0, 0] - lg[0, 1] - lg[1, 0] + lg[1, 1])
            a[j] += 0.25 * (lg[0, 0] - lg[0, 1] + lg[1, 0] - lg[1, 1])
            b[i] += 0.25 * (lg[0, 0] + lg[0, 1] - lg[1, 0] - lg[1, 1])
    for j in range(n):
        lg = logs(nqs.visible_diag[j], f"visible_diag[{j}]")
        a[j] += 0.5 * (lg[0] - lg[1])
    return RbmParams(a, b, w)


def rbm_to_nqs(params: RbmParams) -> NqsNetwork:
    """Convert complex RBM parameters to a tensor-network NQS.

    Weights become Boltzmann coupling matrices, visible biases become
    diagonal bias factors, and each hidden bias is folded into the rows of
    its unit's first coupling.
    """
    n, m = params.n_visible, params.n_hidden
    diag = np.stack([np.exp(params.a), np.exp(-params.a)], axis=1)
    units = []
    for i in range(m):
        couplings = {j: boltzmann_coupling(params.w[i, j])
                     for j in range(n) if params.w[i, j] != 0}
        if not couplings:
            # bias-only unit: constant correlator e^b + e^-b on site 0
            couplings = {0: ALL_ONES_COUPLING.copy()}
        first = min(couplings)
        scale = np.array([np.exp(params.b[i]), np.exp(-params.b[i])])
        couplings[first] = couplings[first] * scale[:, None]
        units.append(HiddenUnit(couplings))
    return NqsNetwork(n, tuple(units), diag)
