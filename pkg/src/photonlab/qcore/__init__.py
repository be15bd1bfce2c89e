"""Numerics core: complex linear algebra on quantum registers.

States and density matrices live in :mod:`photonlab.qcore.states`, linear
optics (permanents, splitter networks) in :mod:`photonlab.qcore.fock`, open
system steady states in :mod:`photonlab.qcore.lindblad`, and entanglement /
photon statistics metrics in :mod:`photonlab.qcore.metrics`.
"""

from .fock import (
    Phase,
    Splitter,
    beam_splitter_unitary,
    coherent_state,
    destroy,
    fock_amplitude,
    fock_enumerate,
    fock_index,
    mode_operator,
    mode_unitary,
    network_unitary,
    number_operator,
    output_distribution_permanent,
    permanent,
    phase_shifter_unitary,
    splitter_theta,
    thermal_state,
)
from .lindblad import DegenerateSteadyStateError, lindblad_steady_state, liouvillian
from .metrics import (
    CHSH_OPTIMAL_ANGLES,
    StateMetrics,
    chsh_value,
    concurrence,
    correlation,
    equatorial_observable,
    fidelity,
    g2_zero,
    ghz_witness,
    mermin_optimize,
    mermin_value,
    polarizer_observable,
    purity,
    state_metrics,
    von_neumann_entropy,
)
from .states import (
    ATOL,
    DensityMatrix,
    FockSector,
    FockSpace,
    GenericRegister,
    QuantumState,
    QubitRegister,
    ket,
    partial_trace,
    pure_density,
    tensor,
    tensor_states,
)

__all__ = [
    "ATOL",
    "CHSH_OPTIMAL_ANGLES",
    "DegenerateSteadyStateError",
    "DensityMatrix",
    "FockSector",
    "FockSpace",
    "GenericRegister",
    "Phase",
    "QuantumState",
    "QubitRegister",
    "Splitter",
    "StateMetrics",
    "beam_splitter_unitary",
    "chsh_value",
    "coherent_state",
    "concurrence",
    "correlation",
    "destroy",
    "equatorial_observable",
    "fidelity",
    "fock_amplitude",
    "fock_enumerate",
    "fock_index",
    "g2_zero",
    "ghz_witness",
    "ket",
    "lindblad_steady_state",
    "liouvillian",
    "mermin_optimize",
    "mermin_value",
    "mode_operator",
    "mode_unitary",
    "network_unitary",
    "number_operator",
    "output_distribution_permanent",
    "partial_trace",
    "permanent",
    "phase_shifter_unitary",
    "polarizer_observable",
    "pure_density",
    "purity",
    "splitter_theta",
    "state_metrics",
    "tensor",
    "tensor_states",
    "thermal_state",
    "von_neumann_entropy",
]
