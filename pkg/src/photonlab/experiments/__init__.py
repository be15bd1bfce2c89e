"""Thirteen deterministic experiment simulators and their registry."""

from .atomic import rubidium_d1_cross_section_cm2, simulate_eit
from .base import MetricSet, NoiseParams, binary_entropy, series_phase, visibility
from .conversion import simulate_frequency_conversion, sum_frequency_wavelength_nm
from .entanglement import (
    simulate_bell_spdc,
    simulate_ghz_fusion,
    simulate_hyperentanglement,
    simulate_teleportation,
    teleport_one,
)
from .eraser import simulate_quantum_eraser
from .interference import (
    COHERENCE_TIME_TO_WIDTH,
    coherence_time_from_bandwidth_fs,
    dip_width_from_coherence_time,
    simulate_franson,
    simulate_hom,
    simulate_mach_zehnder,
    simulate_michelson,
)
from .qkd import simulate_bb84
from .registry import (
    EXPERIMENT_KEYS,
    EXPERIMENTS,
    ExperimentSpec,
    bundled_setup,
    bundled_setups,
    default_params,
    outcome_covered,
    params_from_setup,
    producible_metric_names,
    run_experiment,
    suggest_simulator_key,
)
from .sampling import simulate_boson_sampling, standard_network

__all__ = [
    "COHERENCE_TIME_TO_WIDTH",
    "EXPERIMENT_KEYS",
    "EXPERIMENTS",
    "ExperimentSpec",
    "MetricSet",
    "NoiseParams",
    "binary_entropy",
    "bundled_setup",
    "bundled_setups",
    "coherence_time_from_bandwidth_fs",
    "default_params",
    "dip_width_from_coherence_time",
    "outcome_covered",
    "params_from_setup",
    "producible_metric_names",
    "rubidium_d1_cross_section_cm2",
    "run_experiment",
    "series_phase",
    "simulate_bb84",
    "simulate_bell_spdc",
    "simulate_boson_sampling",
    "simulate_eit",
    "simulate_franson",
    "simulate_frequency_conversion",
    "simulate_ghz_fusion",
    "simulate_hom",
    "simulate_hyperentanglement",
    "simulate_mach_zehnder",
    "simulate_michelson",
    "simulate_quantum_eraser",
    "simulate_teleportation",
    "standard_network",
    "suggest_simulator_key",
    "sum_frequency_wavelength_nm",
    "teleport_one",
    "visibility",
]
