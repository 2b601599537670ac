"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one `criterion N: PASS/FAIL` line (visible with -s or in
failure output) and asserts the criterion itself.
"""

import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from compactnqs import (CftState, RealRbm, VmcConfig, all_configs,
                        apply_gate_dense, dense_from, dense_stabilizer_state,
                        extensive_nqs, five_qubit_code_state, graph2nqs,
                        GateAbsorptionError, min_vertex_cover, neel_state,
                        nqs_to_rbm, overlap, proportional_equal,
                        add_hyperedge_unit, NqsNetwork, random_stabilizer,
                        rbm_to_nqs, run_vmc, shor_state, sparse_nqs,
                        stabilizer_to_vmj_nqs, steane_state, to_graph_state,
                        toric_direct_nqs, toric_spin, toric_state, valency,
                        xxz_ground_state, zero_magnetization_mask,
                        exact_reference_sector, zero_magnetization_configs)
from compactnqs.stabilizer import CheckMatrix
from conftest import (dense_generator, random_jastrow_state, random_network,
                      random_single_qubit_gate)


def report(number: int, ok: bool, details: str) -> None:
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({details})")
    assert ok, f"criterion {number} failed: {details}"


def test_criterion_1_jastrow_equivalence_suite():
    start = time.time()
    rng = np.random.default_rng(1001)
    worst = 0.0
    for trial in range(200):
        n = int(rng.integers(2, 11))
        state = random_jastrow_state(n, rng)
        target = dense_from(state, n)
        cover = min_vertex_cover(state.graph)
        nets = [sparse_nqs(state), extensive_nqs(state), graph2nqs(state, cover)]
        assert nets[2].n_hidden <= n - 1
        for net in nets:
            result = proportional_equal(dense_from(net, n), target, tol=1e-10)
            worst = max(worst, result.deviation)
            if not result.equal:
                report(1, False, f"trial {trial}, deviation {result.deviation:.2e}")
    elapsed = time.time() - start
    report(1, worst < 1e-10 and elapsed < 60.0,
           f"200 states, worst deviation {worst:.2e}, {elapsed:.1f}s")


def test_criterion_2_softening_law():
    deviations = {}
    for n in (6, 8, 10):
        cft = CftState(n, 0.25)
        exact = dense_from(cft, n)
        mask = zero_magnetization_mask(n)
        per_s = {}
        for s in (2.0, 3.0, 4.0, 5.0):
            net = extensive_nqs(cft.jastrow(), soften=s)
            amps = dense_from(net, n).amplitudes.copy()
            amps[~mask] = 0.0
            per_s[s] = 1.0 - overlap(amps, exact.amplitudes)
        deviations[n] = per_s
    ok = True
    lo, hi = np.exp(-4.0) / 2, 2 * np.exp(-4.0)
    for n, per_s in deviations.items():
        for s in (2.0, 3.0, 4.0):
            ratio = per_s[s + 1.0] / per_s[s]
            ok &= lo < ratio < hi
    ok &= deviations[6][5.0] < 1e-8
    report(2, ok, f"ratios within [{lo:.4f}, {hi:.4f}], "
                  f"1-O(S=5, n=6) = {deviations[6][5.0]:.2e}")


def test_criterion_3_cft_exactness():
    worst = 0.0
    for n in (6, 8, 10, 12):
        gs0, _ = xxz_ground_state(n, 0.0)
        dev0 = 1.0 - overlap(dense_from(CftState(n, 0.25), n), gs0)
        gsm, _ = xxz_ground_state(n, -1.0)
        devm = 1.0 - overlap(dense_from(CftState(n, 0.0), n), gsm)
        worst = max(worst, dev0, devm)
    report(3, worst < 1e-10, f"worst 1-O = {worst:.2e} over n in 6..12")


def test_criterion_4_stabilizer_pipeline():
    start = time.time()
    rng = np.random.default_rng(4004)
    worst = 0.0
    for trial in range(200):
        n = int(rng.integers(2, 9))
        cm, reference = random_stabilizer(n, seed=int(rng.integers(1 << 30)))
        form = to_graph_state(cm)
        for a in form.h_sites:
            for b in form.h_sites:
                assert a == b or not form.graph.has_edge(a, b)
        net = stabilizer_to_vmj_nqs(cm)
        assert net.n_hidden <= n - 1
        result = proportional_equal(dense_from(net, n), reference, tol=1e-9)
        worst = max(worst, result.deviation)
        if not result.equal:
            report(4, False, f"trial {trial} (n={n}), deviation {result.deviation:.2e}")
    elapsed = time.time() - start
    report(4, worst < 1e-9 and elapsed < 120.0,
           f"200 states, worst deviation {worst:.2e}, {elapsed:.1f}s")


def test_criterion_5_named_fixtures():
    details = []
    ok = True

    steane = steane_state()
    form = to_graph_state(steane)
    net = stabilizer_to_vmj_nqs(steane)
    ok &= net.n_hidden == 5
    ok &= sorted(form.h_sites) == [4, 5, 6]
    ok &= form.layer.tags[:4] == ("S†", "S†", "S†", "I")
    steane_dev = proportional_equal(
        dense_from(net, 7), dense_stabilizer_state(steane), tol=1e-9)
    ok &= steane_dev.equal
    details.append(f"steane M={net.n_hidden} dev={steane_dev.deviation:.1e}")

    for name, cm in (("513", five_qubit_code_state()), ("shor", shor_state())):
        net = stabilizer_to_vmj_nqs(cm)
        result = proportional_equal(dense_from(net, cm.n),
                                    dense_stabilizer_state(cm), tol=1e-9)
        ok &= result.equal and net.n_hidden <= cm.n - 1
        details.append(f"{name} M={net.n_hidden} dev={result.deviation:.1e}")

    for L in (2, 3):
        n = 2 * L * L
        configs = all_configs(n)
        closed = np.ones(len(configs), dtype=bool)
        for i in range(L):
            for j in range(L):
                star = [toric_spin(L, "h", i, j), toric_spin(L, "h", i, j - 1),
                        toric_spin(L, "v", i, j), toric_spin(L, "v", i - 1, j)]
                closed &= configs[:, star].prod(axis=1) == 1
        loops = closed.astype(complex)

        direct = toric_direct_nqs(L)
        ok &= direct.n_hidden == L * L
        r1 = proportional_equal(dense_from(direct, n), loops, tol=1e-9)
        vmj = stabilizer_to_vmj_nqs(toric_state(L))
        ok &= vmj.n_hidden <= 2 * L * L - 1
        r2 = proportional_equal(dense_from(vmj, n), loops, tol=1e-9)
        ok &= r1.equal and r2.equal
        details.append(f"toric:{L} direct M={direct.n_hidden} vmj M={vmj.n_hidden}")

    report(5, ok, "; ".join(details))


def _conjugate_stack(stack, n, j, u):
    dim_l, dim_r = 1 << j, 1 << (n - 1 - j)
    dim = 1 << n
    t = stack.reshape(-1, dim_l, 2, dim_r, dim)
    t = np.einsum("ab,mlbrD->mlarD", u, t).reshape(-1, dim, dim_l, 2, dim_r)
    t = np.einsum("mDlbr,cb->mDlcr", t, u.conj())
    return t.reshape(-1, dim, dim)


def test_criterion_6_tableau_correctness():
    hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    phase = np.array([[1, 0], [0, 1j]], dtype=complex)
    rng = np.random.default_rng(6006)
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        cm = CheckMatrix.zero_state(n)
        stack = np.stack([dense_generator(cm, a) for a in range(n)])
        for _ in range(16):
            op = int(rng.integers(4))
            if op == 0:
                j = int(rng.integers(n))
                cm = cm.apply_h(j)
                stack = _conjugate_stack(stack, n, j, hadamard)
            elif op == 1:
                j = int(rng.integers(n))
                cm = cm.apply_s(j)
                stack = _conjugate_stack(stack, n, j, phase)
            elif op == 2:
                j, k = map(int, rng.choice(n, size=2, replace=False))
                cm = cm.apply_cz(j, k)
                idx = np.arange(1 << n)
                bj = (idx >> (n - 1 - j)) & 1
                bk = (idx >> (n - 1 - k)) & 1
                d = np.where((bj & bk).astype(bool), -1.0, 1.0)
                stack = d[None, :, None] * stack * d[None, None, :]
            else:
                a, b = map(int, rng.choice(n, size=2, replace=False))
                cm = cm.row_add(a, b)
                stack[a] = stack[a] @ stack[b]
        for a in range(n):
            assert np.allclose(dense_generator(cm, a), stack[a], atol=1e-9), \
                f"generator {a} diverged from dense conjugation"
            checked += 1
    report(6, True, f"1000 sequences, {checked} generators matched with signs")


def test_criterion_7_conversion_round_trip():
    rng = np.random.default_rng(7007)
    worst = 0.0
    for trial in range(100):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 7))
        net = random_network(n, rng, n_units=m, zero_free=True)
        target = dense_from(net, n)
        params = nqs_to_rbm(net)
        r1 = proportional_equal(dense_from(params, n), target, tol=1e-10)
        r2 = proportional_equal(dense_from(rbm_to_nqs(params), n), target,
                                tol=1e-10)
        worst = max(worst, r1.deviation, r2.deviation)
        if not (r1.equal and r2.equal):
            report(7, False, f"trial {trial}, deviations {r1.deviation:.2e} "
                             f"/ {r2.deviation:.2e}")
    report(7, worst < 1e-10, f"100 networks, worst deviation {worst:.2e}")


def test_criterion_8_gate_absorption():
    rng = np.random.default_rng(8008)
    worst = 0.0
    legal = 0
    rejected = 0
    while legal < 500:
        n = int(rng.integers(2, 9))
        net = random_network(n, rng)
        j = int(rng.integers(n))
        kind = rng.choice(["diagonal", "antidiagonal", "generic"])
        q = random_single_qubit_gate(rng, kind)
        if kind == "generic" and valency(net, j) > 1:
            with pytest.raises(GateAbsorptionError):
                from compactnqs import absorb_gate
                absorb_gate(net, j, q)
            rejected += 1
            continue
        from compactnqs import absorb_gate
        out = absorb_gate(net, j, q)
        ref = apply_gate_dense(dense_from(net, n), j, q)
        got = dense_from(out, n).amplitudes
        scale = max(np.abs(ref.amplitudes).max(), 1e-300)
        dev = float(np.abs(got - ref.amplitudes).max() / scale)
        worst = max(worst, dev)
        assert dev < 1e-12
        legal += 1
    report(8, worst < 1e-12,
           f"500 legal absorptions, worst {worst:.2e}; {rejected} illegal rejected")


def test_criterion_9_hyperedge_unit():
    ok = True
    for p in (2, 3, 4):
        n = p + 2
        out = add_hyperedge_unit(NqsNetwork(n), range(p))
        amps = dense_from(out, n).amplitudes
        configs = all_configs(n)
        alldown = (configs[:, :p] == -1).all(axis=1)
        scale = amps[~alldown][0]
        ok &= bool(np.all(amps[~alldown] == scale))
        ok &= float(np.abs(amps[alldown] / scale + 1.0).max()) < 1e-12
    report(9, ok, "p in {2,3,4}: -1 exactly on the all-down pattern")


def test_criterion_10_vmc_desk_scale():
    start = time.time()
    details = []

    # log-derivatives against central finite differences
    rng = np.random.default_rng(1010)
    fd_worst = 0.0
    h = 1e-6
    for _ in range(100):
        n, m = 6, 3
        rbm = RealRbm(rng.uniform(-1, 1, n), rng.uniform(-1, 1, m),
                      rng.uniform(-1, 1, (m, n)))
        v = neel_state(n)[rng.permutation(n)][None, :]
        got = rbm.log_derivatives(v)[0]
        p0 = rbm.pack()
        fd = np.empty_like(p0)
        for k in range(p0.size):
            pp, pm = p0.copy(), p0.copy()
            pp[k] += h
            pm[k] -= h
            fd[k] = (RealRbm.unpack(pp, n, m).log_psi(v)[0]
                     - RealRbm.unpack(pm, n, m).log_psi(v)[0]) / (2 * h)
        fd_worst = max(fd_worst, float(np.abs(got - fd).max()))
    ok = fd_worst < 1e-5
    details.append(f"log-deriv fd {fd_worst:.1e}")

    # exact-summation optimisation at delta = 0
    cfg = VmcConfig(n=10, m=10, delta=0.0, sampler="exact", sweeps=2000,
                    learning_rate=0.02, seed=2)
    exact_run = run_vmc(cfg)
    dev_exact = 1.0 - exact_run.final_overlap
    ok &= dev_exact < 1e-4
    ok &= float(np.abs(exact_run.params.pack()).max()) <= cfg.p_cap
    details.append(f"exact 1-O {dev_exact:.1e}")

    # sampled optimisation at delta = 0
    cfg_s = VmcConfig(n=10, m=10, delta=0.0, sampler="metropolis", sweeps=300,
                      samples_per_sweep=500, learning_rate=0.02, seed=11)
    sampled_run = run_vmc(cfg_s)
    dev_sampled = 1.0 - sampled_run.final_overlap
    ok &= dev_sampled < 1e-3
    ok &= float(np.abs(sampled_run.params.pack()).max()) <= cfg_s.p_cap
    details.append(f"sampled 1-O {dev_sampled:.1e}")

    # delta = 1: beat the best single-parameter reference state
    gs1, _ = xxz_ground_state(10, 1.0)

    def cft_deviation(alpha):
        return 1.0 - overlap(dense_from(CftState(10, alpha), 10), gs1)

    baseline = minimize_scalar(cft_deviation, bounds=(0.2, 0.8),
                               method="bounded").fun
    cfg_d1 = VmcConfig(n=10, m=10, delta=1.0, sampler="exact", sweeps=2000,
                       learning_rate=0.02, seed=3)
    run_d1 = run_vmc(cfg_d1)
    dev_d1 = 1.0 - run_d1.final_overlap
    ok &= dev_d1 < baseline
    details.append(f"delta=1 1-O {dev_d1:.1e} vs baseline {baseline:.1e}")

    elapsed = time.time() - start
    ok &= elapsed < 600.0
    details.append(f"{elapsed:.0f}s")
    report(10, ok, "; ".join(details))
