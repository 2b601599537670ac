"""Variational Monte Carlo with stochastic reconfiguration for a
real-parameter RBM on the sign-gauged XXZ chain.

The gauged Hamiltonian sum_j (-X X - Y Y + delta Z Z) with periodic wrap is
stoquastic, so the target ground state is non-negative and real parameters
suffice.  Sampling (and the exact-summation variant) is restricted to the
zero-magnetization sector throughout; amplitudes are handled in log space,
which keeps system-extensive hidden units overflow-free.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .configs import zero_magnetization_configs, zero_magnetization_mask
from .dense import xxz_ground_state
from .nqs import RbmParams


@dataclass(frozen=True)
class RealRbm:
    """Real RBM parameters: visible biases a, hidden biases b, weights w."""

    a: np.ndarray
    b: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        w = np.array(self.w, dtype=float)
        if w.shape != (b.size, a.size):
            raise ValueError("weight shape inconsistent with biases")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.a.size

    @property
    def m(self) -> int:
        return self.b.size

    @property
    def n_params(self) -> int:
        return self.a.size + self.b.size + self.w.size

    def log_psi(self, configs: np.ndarray) -> np.ndarray:
        """log Psi = a.v + sum_i log(2 cosh(b_i + w_i . v)), always real."""
        configs = np.atleast_2d(np.asarray(configs, dtype=float))
        theta = configs @ self.w.T + self.b
        return configs @ self.a + np.logaddexp(theta, -theta).sum(axis=1)

    def log_derivatives(self, configs: np.ndarray) -> np.ndarray:
        """d log Psi / d p, flattened as [a | b | w (row-major)]."""
        configs = np.atleast_2d(np.asarray(configs, dtype=float))
        theta = np.tanh(configs @ self.w.T + self.b)
        ow = theta[:, :, None] * configs[:, None, :]
        return np.concatenate(
            [configs, theta, ow.reshape(configs.shape[0], -1)], axis=1)

    def pack(self) -> np.ndarray:
        return np.concatenate([self.a, self.b, self.w.ravel()])

    @staticmethod
    def unpack(vec: np.ndarray, n: int, m: int) -> "RealRbm":
        return RealRbm(vec[:n], vec[n:n + m], vec[n + m:].reshape(m, n))

    def to_rbm_params(self) -> RbmParams:
        return RbmParams(self.a.astype(complex), self.b.astype(complex),
                         self.w.astype(complex))


@dataclass(frozen=True)
class VmcConfig:
    """Optimiser controls.

    With ``sampler="exact"`` every zero-magnetization configuration is
    enumerated instead of sampled (n <= 10), which makes the run fully
    deterministic; the energy is then non-increasing per step for learning
    rates up to 0.02 at these sizes.
    """

    n: int
    m: int
    delta: float = 0.0
    p_cap: float = 5.0
    sweeps: int = 200
    samples_per_sweep: int = 500
    learning_rate: float = 0.02
    sr_shift: float = 1e-3
    seed: int = 0
    sampler: str = "metropolis"

    def __post_init__(self):
        if self.n % 2 or self.n <= 0:
            raise ValueError("chain length must be positive and even")
        if self.m < 1:
            raise ValueError("need at least one hidden unit")
        if self.p_cap <= 0:
            raise ValueError("parameter cap must be positive")
        if self.sampler not in ("metropolis", "exact"):
            raise ValueError("sampler must be 'metropolis' or 'exact'")
        if self.sampler == "exact" and self.n > 10:
            raise ValueError("exact summation is limited to 10 sites")

    def to_json_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("n", "m", "delta", "p_cap", "sweeps", "samples_per_sweep",
                 "learning_rate", "sr_shift", "seed", "sampler")}

    @staticmethod
    def from_json_dict(d: dict) -> "VmcConfig":
        return VmcConfig(**d)


@dataclass
class VmcResult:
    params: RealRbm
    energy_trace: List[float]
    final_overlap: Optional[float]
    acceptance_rate: float
    config: VmcConfig

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "energy_trace": [float(e) for e in self.energy_trace],
            "final_energy": float(self.energy_trace[-1]),
            "final_overlap": self.final_overlap,
            "acceptance_rate": self.acceptance_rate,
            "params": {"a": self.params.a.tolist(),
                       "b": self.params.b.tolist(),
                       "w": self.params.w.tolist()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1, sort_keys=True)


def local_energies_from_log(log_amp: Callable[[np.ndarray], np.ndarray],
                            configs: np.ndarray, delta: float) -> np.ndarray:
    """Gauged-chain local energies for a batch of sector configurations.

    E_loc(v) = sum_j [delta v_j v_j+1 - 2 [v_j != v_j+1] Psi(v^swap)/Psi(v)]
    with periodic wrap; the exchange term only connects sector states.
    """
    configs = np.atleast_2d(np.asarray(configs))
    n = configs.shape[1]
    base = np.asarray(log_amp(configs), dtype=float)
    if not np.all(np.isfinite(base)):
        raise ValueError("zero amplitude encountered at a sampled configuration")
    nxt = np.roll(configs, -1, axis=1)
    eloc = delta * (configs * nxt).sum(axis=1).astype(float)
    for j in range(n):
        jp = (j + 1) % n
        anti = configs[:, j] != configs[:, jp]
        if not np.any(anti):
            continue
        swapped = configs[anti].copy()
        swapped[:, [j, jp]] = swapped[:, [jp, j]]
        ratios = np.exp(np.asarray(log_amp(swapped), dtype=float) - base[anti])
        eloc[anti] -= 2.0 * ratios
    return eloc


def local_energy(rbm: RealRbm, v, delta: float) -> float:
    """Single-configuration local energy of the gauged chain."""
    v = np.asarray(v)
    if v.sum() != 0:
        raise ValueError("configuration is outside the zero-magnetization sector")
    return float(local_energies_from_log(rbm.log_psi, v[None, :], delta)[0])


def acceptance_probability(psi_ratio: complex) -> float:
    """Metropolis rule on amplitude ratios: min(1, |Psi'/Psi|^2)."""
    return min(1.0, abs(psi_ratio) ** 2)


def metropolis_sweep(rbm: RealRbm, state: np.ndarray, rng: np.random.Generator,
                     n_samples: int, steps_per_sample: Optional[int] = None
                     ) -> Tuple[np.ndarray, float, np.ndarray]:
    """Collect sector samples by exchanging random up/down spin pairs.

    Every pair of opposite spins is an allowed proposal (their count is
    constant across the sector, so the proposal is symmetric), accepted
    with min(1, |Psi'/Psi|^2).  Returns (samples, acceptance rate, final
    state).
    """
    v = np.array(state, dtype=np.int64)
    n = v.size
    if v.sum() != 0:
        raise ValueError("start configuration is outside the sector")
    if steps_per_sample is None:
        steps_per_sample = n
    theta = rbm.w @ v.astype(float) + rbm.b
    log_cosh = float(np.logaddexp(theta, -theta).sum())

    ups = list(np.flatnonzero(v == 1))
    downs = list(np.flatnonzero(v == -1))
    accepted = 0
    total = 0
    samples = np.empty((n_samples, n), dtype=np.int64)
    for k in range(n_samples):
        for _ in range(steps_per_sample):
            ui = int(rng.integers(len(ups)))
            di = int(rng.integers(len(downs)))
            i, j = ups[ui], downs[di]
            dtheta = -2.0 * (rbm.w[:, i] * v[i] + rbm.w[:, j] * v[j])
            new_theta = theta + dtheta
            new_log_cosh = float(np.logaddexp(new_theta, -new_theta).sum())
            dlog = (new_log_cosh - log_cosh
                    - 2.0 * (rbm.a[i] * v[i] + rbm.a[j] * v[j]))
            total += 1
            if np.log(rng.random()) < 2.0 * dlog:
                accepted += 1
                v[i], v[j] = v[j], v[i]
                ups[ui], downs[di] = j, i
                theta = new_theta
                log_cosh = new_log_cosh
        samples[k] = v
    return samples, accepted / max(total, 1), v


def sr_step(rbm: RealRbm, configs: np.ndarray, eloc: np.ndarray,
            weights: Optional[np.ndarray] = None, *, learning_rate: float,
            sr_shift: float, p_cap: float) -> RealRbm:
    """One stochastic-reconfiguration update with parameter clipping.

    Builds the covariance matrix of the log-derivatives and the force
    vector, solves (S + shift 1) d = -F and moves the parameters by
    learning_rate * d, clipping each into [-p_cap, p_cap].
    """
    configs = np.atleast_2d(configs)
    if configs.shape[0] < 2:
        raise ValueError("need at least two samples for a reconfiguration step")
    if weights is None:
        weights = np.full(configs.shape[0], 1.0 / configs.shape[0])
    okk = rbm.log_derivatives(configs)
    o_mean = weights @ okk
    centered = okk - o_mean
    smat = (centered * weights[:, None]).T @ centered
    force = (centered * weights[:, None]).T @ (eloc - weights @ eloc)
    smat[np.diag_indices_from(smat)] += sr_shift
    try:
        delta = np.linalg.solve(smat, -force)
    except np.linalg.LinAlgError as err:
        raise ValueError(
            f"reconfiguration solve failed ({err}); increase sr_shift") from None
    vec = np.clip(rbm.pack() + learning_rate * delta, -p_cap, p_cap)
    return RealRbm.unpack(vec, rbm.n, rbm.m)


def neel_state(n: int) -> np.ndarray:
    v = np.empty(n, dtype=np.int64)
    v[0::2] = 1
    v[1::2] = -1
    return v


def sector_overlap(rbm: RealRbm, reference_sector: np.ndarray,
                   sector: np.ndarray) -> float:
    """Squared normalised overlap of the RBM state with a reference vector,
    both restricted to the sector (exact enumeration, no sampling)."""
    logs = rbm.log_psi(sector)
    psi = np.exp(logs - logs.max())
    ref = np.asarray(reference_sector, dtype=float)
    return float((psi @ ref) ** 2 / ((psi @ psi) * (ref @ ref)))


def exact_reference_sector(n: int, delta: float) -> np.ndarray:
    """Gauged (non-negative) ground-state amplitudes on the sector, in the
    same order as zero_magnetization_configs."""
    state, _ = xxz_ground_state(n, delta, gauge=True)
    return state.amplitudes[zero_magnetization_mask(n)].real


def run_vmc(cfg: VmcConfig) -> VmcResult:
    """Full optimisation loop; deterministic for a fixed seed."""
    rng = np.random.default_rng(cfg.seed)
    n, m = cfg.n, cfg.m
    rbm = RealRbm(rng.uniform(-0.01, 0.01, n), rng.uniform(-0.01, 0.01, m),
                  rng.uniform(-0.01, 0.01, (m, n)))

    exact = cfg.sampler == "exact"
    sector = zero_magnetization_configs(n) if (exact or n <= 14) else None
    state = neel_state(n)
    trace: List[float] = []
    acc_rates: List[float] = []

    for _ in range(cfg.sweeps):
        if exact:
            configs = sector
            logs = rbm.log_psi(configs)
            weights = np.exp(2.0 * (logs - logs.max()))
            weights /= weights.sum()
        else:
            configs, acc, state = metropolis_sweep(
                rbm, state, rng, cfg.samples_per_sweep)
            weights = None
            acc_rates.append(acc)
        eloc = local_energies_from_log(rbm.log_psi, configs, cfg.delta)
        if weights is None:
            trace.append(float(eloc.mean()))
        else:
            trace.append(float(weights @ eloc))
        rbm = sr_step(rbm, configs, eloc, weights,
                      learning_rate=cfg.learning_rate, sr_shift=cfg.sr_shift,
                      p_cap=cfg.p_cap)

    # energy of the final parameters
    if exact:
        logs = rbm.log_psi(sector)
        weights = np.exp(2.0 * (logs - logs.max()))
        weights /= weights.sum()
        trace.append(float(weights @ local_energies_from_log(
            rbm.log_psi, sector, cfg.delta)))

    overlap = None
    if n <= 14:
        overlap = sector_overlap(rbm, exact_reference_sector(n, cfg.delta), sector)
    return VmcResult(rbm, trace, overlap,
                     float(np.mean(acc_rates)) if acc_rates else 1.0, cfg)


def weights_by_strength(w: np.ndarray) -> np.ndarray:
    """Weight matrix with rows reordered by decreasing maximum |coupling|."""
    order = np.argsort(-np.abs(w).max(axis=1), kind="stable")
    return w[order]
