"""Compact neural-network quantum state constructions for Jastrow and
stabilizer states, verified against brute-force state vectors."""

from .configs import all_configs, as_spins, config_index, index_to_spins, \
    zero_magnetization_configs, zero_magnetization_mask
from .dense import DenseState, dense_from, dense_stabilizer_state, overlap, \
    proportional_equal, random_stabilizer, apply_gate_dense, apply_cz_dense, \
    xxz_ground_state, project_zero_magnetization, save_dense, load_dense, \
    save_dense_csv
from .errors import AmplitudeOverflowError, CapabilityError, CoverError, \
    GateAbsorptionError, TableauError
from .graphs import Graph, OrderedVertexCover, greedy_vertex_cover, leaves, \
    max_independent_set, max_univalency_cover, min_vertex_cover, neighborhood, \
    prune_leaves, random_connected_graph, validate_cover
from .jastrow import CftState, JastrowState, VmjState, extensive_nqs, \
    graph2nqs, graph_state_nqs, jastrow_amplitude, jastrow_amplitudes, \
    sparse_nqs, vmj_nqs
from .nqs import HADAMARD_COUPLING, IDENTITY_COUPLING, HiddenUnit, NqsNetwork, \
    RbmParams, absorb_gate, add_hyperedge_unit, boltzmann_coupling, correlator, \
    nqs_amplitude, nqs_amplitudes, nqs_to_rbm, rbm_amplitude, rbm_amplitudes, \
    rbm_to_nqs, univalent_sites, valency
from .stabilizer import CheckMatrix, GraphStateForm, LocalCliffordLayer, \
    five_qubit_code_state, from_pauli_strings, shor_state, stabilizer_cover, \
    stabilizer_to_vmj_nqs, steane_state, to_graph_state, toric_direct_nqs, \
    toric_spin, toric_state
from .vmc import RealRbm, VmcConfig, VmcResult, acceptance_probability, \
    local_energy, local_energies_from_log, metropolis_sweep, run_vmc, sr_step, \
    sector_overlap, exact_reference_sector, neel_state, weights_by_strength

__version__ = "0.1.0"
