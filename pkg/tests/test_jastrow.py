"""Jastrow amplitudes, the three network constructions, gate-dressed states
and the chiral reference state."""

import numpy as np
import pytest

from compactnqs import (CftState, Graph, JastrowState, OrderedVertexCover,
                        VmjState, all_configs, apply_gate_dense, dense_from,
                        extensive_nqs, graph2nqs, graph_state_nqs,
                        jastrow_amplitude, jastrow_amplitudes, leaves,
                        max_univalency_cover, min_vertex_cover, overlap,
                        proportional_equal, sparse_nqs, univalent_sites,
                        valency, vmj_nqs, zero_magnetization_mask,
                        CoverError, random_connected_graph)
from conftest import complete_graph, path_graph, random_jastrow_state


def pair_product_amplitudes(state, configs):
    """Oracle: literal product of per-site and per-edge factors."""
    out = []
    for v in np.atleast_2d(configs):
        amp = 1.0 + 0.0j
        for j in range(state.n):
            amp *= np.exp(state.c[j] * v[j])
        for s, t in state.graph.sorted_edges():
            amp *= np.exp(state.V[s, t] * v[s] * v[t])
        out.append(amp)
    return np.array(out)


class TestJastrowAmplitude:
    def test_zero_parameters(self):
        g = path_graph(3)
        js = JastrowState(g, np.zeros(3, dtype=complex), np.zeros((3, 3), dtype=complex))
        assert np.all(jastrow_amplitudes(js, all_configs(3)) == 1.0)

    def test_single_edge_ratio(self):
        g = Graph.from_edges(2, [(0, 1)])
        V = np.zeros((2, 2), dtype=complex)
        V[0, 1] = np.log(2.0)
        js = JastrowState(g, np.zeros(2, dtype=complex), V)
        up = jastrow_amplitude(js, [1, 1])
        mixed = jastrow_amplitude(js, [1, -1])
        assert np.isclose(up / mixed, 4.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_pair_product_form(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        js = random_jastrow_state(n, rng)
        configs = all_configs(n)
        got = jastrow_amplitudes(js, configs)
        ref = pair_product_amplitudes(js, configs)
        assert np.abs(got - ref).max() / np.abs(ref).max() < 1e-12

    def test_support_outside_graph_rejected(self):
        g = path_graph(3)
        V = np.zeros((3, 3), dtype=complex)
        V[0, 2] = 1.0
        with pytest.raises(ValueError):
            JastrowState(g, np.zeros(3, dtype=complex), V)


def k4_state(weight=0.3 + 0.1j):
    g = complete_graph(4)
    V = np.zeros((4, 4), dtype=complex)
    for s, t in g.sorted_edges():
        V[s, t] = weight
    return JastrowState(g, np.zeros(4, dtype=complex), V)


class TestSparse:
    def test_zero_interaction_gives_zero_weights(self):
        g = Graph.from_edges(2, [(0, 1)])
        js = JastrowState(g, np.zeros(2, dtype=complex), np.zeros((2, 2), dtype=complex))
        for solution in ("asym", "sqrt"):
            net = sparse_nqs(js, solution)
            for unit in net.hidden:
                for c in unit.couplings.values():
                    assert np.allclose(c, np.ones((2, 2)))

    def test_k4_unit_count(self):
        net = sparse_nqs(k4_state())
        assert net.n_hidden == 6
        assert all(valency(net, j) == 3 for j in range(4))

    @pytest.mark.parametrize("solution", ["asym", "sqrt"])
    @pytest.mark.parametrize("seed", range(4))
    def test_matches_jastrow(self, solution, seed):
        rng = np.random.default_rng(10 + seed)
        n = int(rng.integers(2, 9))
        js = random_jastrow_state(n, rng)
        net = sparse_nqs(js, solution)
        assert proportional_equal(dense_from(net, n), dense_from(js, n), tol=1e-10)

    def test_symmetric_solution_diverges_for_strong_coupling(self):
        # tanh saturates at 1 for a large real interaction; the split
        # solution stays finite there
        g = Graph.from_edges(2, [(0, 1)])
        V = np.zeros((2, 2), dtype=complex)
        V[0, 1] = 20.0
        js = JastrowState(g, np.zeros(2, dtype=complex), V)
        with pytest.raises(ValueError, match="diverge"):
            sparse_nqs(js, "sqrt")
        net = sparse_nqs(js, "asym")
        assert proportional_equal(dense_from(net, 2), dense_from(js, 2), tol=1e-10)


class TestExtensive:
    @pytest.mark.parametrize("seed", range(4))
    def test_exact_mode(self, seed):
        rng = np.random.default_rng(30 + seed)
        n = int(rng.integers(2, 9))
        js = random_jastrow_state(n, rng)
        net = extensive_nqs(js)
        assert net.n_hidden == n
        result = proportional_equal(dense_from(net, n), dense_from(js, n), tol=1e-12)
        assert result.equal

    def test_trivial_state_uniform(self):
        g = path_graph(3)
        js = JastrowState(g, np.zeros(3, dtype=complex), np.zeros((3, 3), dtype=complex))
        amps = dense_from(extensive_nqs(js), 3).amplitudes
        assert np.allclose(amps, amps[0])

    def test_softening_error_decays_at_documented_rate(self):
        cft = CftState(6, 0.25)
        exact = dense_from(cft, 6)
        mask = zero_magnetization_mask(6)
        devs = []
        for s in (2.0, 3.0, 4.0):
            net = extensive_nqs(cft.jastrow(), soften=s)
            amps = dense_from(net, 6).amplitudes.copy()
            amps[~mask] = 0.0
            devs.append(1.0 - overlap(amps, exact.amplitudes))
        for a, b in zip(devs, devs[1:]):
            assert np.exp(-4.0) / 2 < b / a < 2 * np.exp(-4.0)


class TestCoverConstruction:
    def test_complete_graph_coordinations(self):
        n = 5
        g = complete_graph(n)
        V = np.zeros((n, n), dtype=complex)
        for s, t in g.sorted_edges():
            V[s, t] = 0.2 - 0.1j
        js = JastrowState(g, np.zeros(n, dtype=complex), V)
        net = graph2nqs(js, OrderedVertexCover(tuple(range(n - 1))))
        sizes = [len(unit.couplings) for unit in net.hidden]
        assert sizes == [n, n - 1, n - 2, 2]

    def test_path_center_cover(self):
        g = path_graph(3)
        V = np.zeros((3, 3), dtype=complex)
        V[0, 1] = V[1, 2] = 0.4
        js = JastrowState(g, np.zeros(3, dtype=complex), V)
        net = graph2nqs(js, OrderedVertexCover((1,)))
        assert net.n_hidden == 1
        assert univalent_sites(net) >= {0, 2}

    def test_invalid_cover_rejected(self):
        js = k4_state()
        with pytest.raises(CoverError):
            graph2nqs(js, OrderedVertexCover((0,)))

    @pytest.mark.parametrize("seed", range(6))
    def test_random_covers_match_jastrow(self, seed):
        rng = np.random.default_rng(50 + seed)
        for _ in range(10):
            n = int(rng.integers(2, 11))
            js = random_jastrow_state(n, rng)
            cover = min_vertex_cover(js.graph)
            net = graph2nqs(js, cover)
            assert net.n_hidden == len(cover) <= n - 1
            assert proportional_equal(dense_from(net, n), dense_from(js, n),
                                      tol=1e-10)

    @pytest.mark.parametrize("seed", range(4))
    def test_univalency_claim(self, seed):
        rng = np.random.default_rng(70 + seed)
        for _ in range(8):
            n = int(rng.integers(3, 10))
            js = random_jastrow_state(n, rng)
            cover, claimed = max_univalency_cover(js.graph)
            net = graph2nqs(js, cover)
            # the advertised set is univalent; extra univalent sites can
            # exist (a sole cover vertex of an isolated star, for instance)
            assert claimed <= univalent_sites(net)

    def test_constructions_agree_with_each_other(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 10))
            js = random_jastrow_state(n, rng)
            dense = [dense_from(sparse_nqs(js), n),
                     dense_from(extensive_nqs(js), n),
                     dense_from(graph2nqs(js, min_vertex_cover(js.graph)), n)]
            for other in dense[1:]:
                assert proportional_equal(dense[0], other, tol=1e-10)


class TestGraphStateNetwork:
    def test_triangle_signs(self):
        g = complete_graph(3)
        net = graph_state_nqs(g, min_vertex_cover(g))
        amps = dense_from(net, 3).amplitudes
        assert np.allclose(np.abs(amps), 1.0)
        for idx, v in enumerate(all_configs(3)):
            down_pairs = sum(1 for s, t in g.sorted_edges()
                             if v[s] == -1 and v[t] == -1)
            assert amps[idx] == (-1.0) ** down_pairs


class TestVmj:
    def test_empty_gate_map(self, rng):
        js = random_jastrow_state(5, rng)
        cover = min_vertex_cover(js.graph)
        state = VmjState(js, {}, cover)
        assert np.allclose(dense_from(vmj_nqs(state), 5).amplitudes,
                           dense_from(graph2nqs(js, cover), 5).amplitudes)

    @pytest.mark.parametrize("seed", range(4))
    def test_gates_match_dense_application(self, seed):
        rng = np.random.default_rng(90 + seed)
        n = int(rng.integers(3, 9))
        js = random_jastrow_state(n, rng)
        cover, univalent = max_univalency_cover(js.graph)
        base = graph2nqs(js, cover)
        free = sorted(univalent_sites(base))
        gates = {}
        if free:
            gates[free[0]] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        multi = [j for j in range(n) if valency(base, j) > 1]
        if multi:
            gates[multi[0]] = np.diag(rng.normal(size=2) + 1j * rng.normal(size=2))
        net = vmj_nqs(VmjState(js, gates, cover))
        ref = dense_from(base, n)
        for j in sorted(gates):
            ref = apply_gate_dense(ref, j, gates[j])
        got = dense_from(net, n).amplitudes
        assert np.abs(got - ref.amplitudes).max() / np.abs(ref.amplitudes).max() < 1e-12

    def test_hidden_unit_count_preserved(self, rng):
        js = random_jastrow_state(6, rng)
        cover, univalent = max_univalency_cover(js.graph)
        base = graph2nqs(js, cover)
        site = sorted(univalent_sites(base))[0]
        state = VmjState(js, {site: np.array([[1, 1], [1, -1]]) / np.sqrt(2)}, cover)
        assert vmj_nqs(state).n_hidden == base.n_hidden


class TestCft:
    def test_sector_support(self):
        state = CftState(4, 0.25)
        amps = dense_from(state, 4).amplitudes
        mask = zero_magnetization_mask(4)
        assert np.all(amps[~mask] == 0)
        assert np.count_nonzero(amps) == 6

    def test_alpha_zero_uniform_with_alternating_signs(self):
        state = CftState(6, 0.0)
        amps = dense_from(state, 6).amplitudes
        nz = amps[np.abs(amps) > 0]
        assert np.allclose(np.abs(nz), 1.0)
        for idx, v in enumerate(all_configs(6)):
            if v.sum() == 0:
                assert amps[idx] == np.prod(v[0::2])

    def test_jastrow_form_matches_on_sector(self):
        for n in (4, 6):
            state = CftState(n, 0.25)
            direct = dense_from(state, n).amplitudes
            js = dense_from(state.jastrow(), n).amplitudes.copy()
            js[~zero_magnetization_mask(n)] = 0.0
            assert proportional_equal(direct, js, tol=1e-12)

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            CftState(5, 0.25)


def test_jastrow_json_round_trip(rng):
    state = random_jastrow_state(5, rng)
    again = JastrowState.from_json(state.to_json())
    assert again.graph.edges == state.graph.edges
    assert np.allclose(again.c, state.c)
    assert np.allclose(again.V, state.V)
    # edge labels are 1-based on the wire
    entry = state.to_json_dict()["V"][0]
    assert entry["s"] >= 1 and entry["t"] >= 1
