"""Experiment registry: stable keys, domains, bundled designs, dispatch.

Each simulator is addressable by one of the thirteen keys below.  The
registry also knows, per key, which physics domain the simulator works in,
which metric names it produces, which component categories its model
covers, and how to derive simulator parameters from a setup's component
parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable

import numpy as np

from ..model import ComponentKind, OpticalSetup, parse_setup
from .atomic import simulate_eit
from .base import MetricSet, NoiseParams
from .conversion import simulate_frequency_conversion
from .entanglement import (
    simulate_bell_spdc,
    simulate_ghz_fusion,
    simulate_hyperentanglement,
    simulate_teleportation,
)
from .eraser import simulate_quantum_eraser
from .interference import (
    coherence_time_from_bandwidth_fs,
    dip_width_from_coherence_time,
    simulate_franson,
    simulate_hom,
    simulate_mach_zehnder,
    simulate_michelson,
)
from .qkd import simulate_bb84
from .sampling import simulate_boson_sampling

__all__ = [
    "EXPERIMENT_KEYS",
    "ExperimentSpec",
    "EXPERIMENTS",
    "bundled_setup",
    "bundled_setups",
    "default_params",
    "params_from_setup",
    "run_experiment",
    "suggest_simulator_key",
    "outcome_covered",
    "producible_metric_names",
]

SPEED_OF_LIGHT_MM_PS = 0.299792458  # mm per picosecond

_ALL_KINDS = frozenset(ComponentKind)


@dataclass(frozen=True)
class ExperimentSpec:
    key: str
    domain: str  # discrete_photonic | temporal | continuous_variable | atomic
    simulate: Callable[..., MetricSet]
    metric_names: frozenset[str]
    modeled_kinds: frozenset[ComponentKind]


def _first_param(setup: OpticalSetup, kinds, name_token: str, label_token: str | None = None):
    for component in setup.components:
        if kinds and component.kind not in kinds:
            continue
        if label_token and label_token.lower() not in component.label.lower():
            continue
        for pname, quantity in component.params.items():
            if name_token in pname:
                return quantity.value
    return None


def _detector_param(setup: OpticalSetup, name_token: str):
    return _first_param(setup, {ComponentKind.DETECTOR}, name_token)


def _hom_params(setup: OpticalSetup) -> dict:
    params: dict = {}
    eta = _detector_param(setup, "efficiency")
    dark = _detector_param(setup, "dark_counts")
    if eta is not None or dark is not None:
        params["noise"] = NoiseParams(
            detector_efficiency=eta if eta is not None else 1.0,
            dark_count_rate_hz=dark if dark is not None else 0.0,
            mode_matching=0.95,
            distinguishability=0.02,
        )
    center = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "wavelength", "filter")
    width = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "bandwidth", "filter")
    if center and width:
        tau_c = coherence_time_from_bandwidth_fs(center, width)
        params["coherence_width_fs"] = dip_width_from_coherence_time(tau_c)
    return params


def _mz_params(setup: OpticalSetup) -> dict:
    r = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "reflectivity", "mirror")
    return {"losses": (1.0 - r, 1.0 - r)} if r is not None else {}


def _michelson_params(setup: OpticalSetup) -> dict:
    params = {}
    lam = _first_param(setup, {ComponentKind.SOURCE}, "wavelength")
    power = _first_param(setup, {ComponentKind.SOURCE}, "power")
    refl = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "reflectivity", "mirror")
    if lam is not None:
        params["wavelength_nm"] = lam
    if power is not None:
        params["power_mw"] = power
    if refl is not None:
        params["mirror_reflectivity"] = refl
    return params


def _bell_params(setup: OpticalSetup) -> dict:
    eta = _detector_param(setup, "efficiency")
    return {"noise": NoiseParams(detector_efficiency=eta)} if eta is not None else {}


def _eraser_params(setup: OpticalSetup) -> dict:
    params = {}
    sep = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "slit_separation", "slit")
    if sep is not None:
        params["slit_separation_mm"] = sep
    lam = _first_param(setup, {ComponentKind.SOURCE}, "wavelength")
    if lam is not None:
        # Screen photons are the down-converted daughters at twice the pump wavelength.
        params["wavelength_nm"] = 2 * lam
    return params


def _bb84_params(setup: OpticalSetup) -> dict:
    params = {}
    length_m = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "fiber_length")
    if length_m is not None:
        params["fiber_length_km"] = length_m / 1000.0
    loss = _first_param(setup, {ComponentKind.PASSIVE_OPTICS}, "attenuation_db_per_km")
    if loss is not None:
        params["loss_db_per_km"] = loss
    eta = _detector_param(setup, "efficiency")
    if eta is not None:
        params["detector_efficiency"] = eta
    return params


def _franson_params(setup: OpticalSetup) -> dict:
    params = {}
    imbalance_mm = _first_param(setup, {ComponentKind.MODULATION}, "path_difference")
    if imbalance_mm is not None:
        params["path_imbalance_ps"] = imbalance_mm / SPEED_OF_LIGHT_MM_PS
    power = _first_param(setup, {ComponentKind.SOURCE}, "power")
    if power is not None:
        params["pump_power_mw"] = power
    return params


def _ghz_params(setup: OpticalSetup) -> dict:
    eta = _detector_param(setup, "efficiency")
    return {"noise": NoiseParams(detector_efficiency=eta)} if eta is not None else {}


def _teleport_params(setup: OpticalSetup) -> dict:
    eta = _detector_param(setup, "efficiency")
    return {"detector_efficiency": eta} if eta is not None else {}


def _hyper_params(setup: OpticalSetup) -> dict:
    eta = _detector_param(setup, "efficiency")
    return {"noise": NoiseParams(detector_efficiency=eta)} if eta is not None else {}


def _boson_params(setup: OpticalSetup) -> dict:
    eta = _detector_param(setup, "efficiency")
    return {"detector_efficiency": eta} if eta is not None else {}


def _eit_params(setup: OpticalSetup) -> dict:
    params = {}
    probe = _first_param(setup, {ComponentKind.SOURCE}, "rabi_frequency", "probe")
    coupling = _first_param(setup, {ComponentKind.SOURCE}, "rabi_frequency", "coupling")
    if probe is not None:
        params["probe_rabi_mhz"] = probe
    if coupling is not None:
        params["coupling_rabi_mhz"] = coupling
    density = _first_param(setup, {ComponentKind.CRYSTAL}, "atomic_density")
    if density is not None:
        params["density_per_cm3"] = density
    length_mm = _first_param(setup, {ComponentKind.CRYSTAL}, "length")
    if length_mm is not None:
        params["cell_length_cm"] = length_mm / 10.0
    return params


def _conversion_params(setup: OpticalSetup) -> dict:
    params = {}
    wavelengths = sorted(
        q.value
        for c in setup.components_of_kind(ComponentKind.SOURCE)
        for n, q in c.params.items()
        if "wavelength" in n
    )
    if len(wavelengths) >= 2:
        params["pump_wavelength_nm"] = wavelengths[-2]
        params["signal_wavelength_nm"] = wavelengths[-1]
    chain = [
        q.value
        for c in setup.components
        if c.kind in (ComponentKind.PASSIVE_OPTICS, ComponentKind.DETECTOR)
        for n, q in c.params.items()
        if n == "efficiency"
    ]
    if chain:
        params["efficiency_chain"] = tuple(chain)
    return params


def _default_scan(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


_PHASE_SCAN = _default_scan(0.0, 2 * math.pi, 200)

_DEFAULTS: dict[str, Callable[[], dict]] = {
    "hom": lambda: {
        "delays_fs": _default_scan(-1600.0, 1600.0, 161),
        "coherence_width_fs": dip_width_from_coherence_time(
            coherence_time_from_bandwidth_fs(810.0, 3.0)
        ),
        "noise": NoiseParams(
            detector_efficiency=0.65,
            dark_count_rate_hz=25.0,
            mode_matching=0.95,
            distinguishability=0.02,
        ),
    },
    "mach_zehnder": lambda: {"phases_rad": _PHASE_SCAN},
    "michelson": lambda: {"mirror_positions_nm": _default_scan(0.0, 2000.0, 2001)},
    "bell_spdc": dict,
    "quantum_eraser": lambda: {"analytic": True},
    "bb84": dict,
    "franson": lambda: {
        "signal_phases_rad": _default_scan(0.0, 2 * math.pi, 50),
        "idler_phases_rad": _default_scan(0.0, 2 * math.pi, 50),
        "two_photon_visibility": 1.0 / math.sqrt(2.0),
    },
    "ghz_fusion": lambda: {"hom_visibility": 0.95, "mode_overlap": 0.90},
    "teleportation": dict,
    "hyperentanglement": dict,
    "boson_sampling": dict,
    "eit": lambda: {"probe_detunings_mhz": _default_scan(-400.0, 400.0, 81)},
    "frequency_conversion": lambda: {"interaction_time": math.pi / 2 / 3.0},
}

_DERIVERS: dict[str, Callable[[OpticalSetup], dict]] = {
    "hom": _hom_params,
    "mach_zehnder": _mz_params,
    "michelson": _michelson_params,
    "bell_spdc": _bell_params,
    "quantum_eraser": _eraser_params,
    "bb84": _bb84_params,
    "franson": _franson_params,
    "ghz_fusion": _ghz_params,
    "teleportation": _teleport_params,
    "hyperentanglement": _hyper_params,
    "boson_sampling": _boson_params,
    "eit": _eit_params,
    "frequency_conversion": _conversion_params,
}

_K = ComponentKind
EXPERIMENTS: dict[str, ExperimentSpec] = {
    spec.key: spec
    for spec in (
        ExperimentSpec(
            "hom",
            "temporal",
            simulate_hom,
            frozenset(
                {"visibility", "fwhm_fs", "snr", "bunching_factor", "coincidence_vs_delay"}
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "mach_zehnder",
            "discrete_photonic",
            simulate_mach_zehnder,
            frozenset(
                {
                    "visibility_detector1",
                    "visibility_detector2",
                    "intensity_sum_deviation",
                    "intensity_detector1_vs_phase",
                    "intensity_detector2_vs_phase",
                }
            ),
            frozenset({_K.SOURCE, _K.PASSIVE_OPTICS, _K.MODULATION, _K.DETECTOR}),
        ),
        ExperimentSpec(
            "michelson",
            "discrete_photonic",
            simulate_michelson,
            frozenset(
                {
                    "fringe_period_nm",
                    "contrast",
                    "visibility",
                    "photon_flux_per_s",
                    "intensity_vs_mirror_position",
                }
            ),
            frozenset({_K.SOURCE, _K.PASSIVE_OPTICS, _K.DETECTOR}),
        ),
        ExperimentSpec(
            "bell_spdc",
            "discrete_photonic",
            simulate_bell_spdc,
            frozenset(
                {
                    "fidelity",
                    "entanglement_entropy",
                    "visibility",
                    "coincidence_efficiency",
                    "concurrence",
                    "coincidence_vs_analyzer_angle",
                    "coincidence_vs_angle_pair",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "quantum_eraser",
            "discrete_photonic",
            simulate_quantum_eraser,
            frozenset(
                {
                    "visibility_d0d1",
                    "visibility_d0d2",
                    "visibility_d0d3",
                    "visibility_d0d4",
                    "visibility_total",
                    "fringe_phase_offset",
                    "fringe_period_mm",
                    "pattern_d1",
                    "pattern_d2",
                    "pattern_d3",
                    "pattern_d4",
                    "pattern_total",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "bb84",
            "discrete_photonic",
            simulate_bb84,
            frozenset(
                {
                    "channel_transmission",
                    "sifted_fraction",
                    "qber",
                    "mismatched_error_rate",
                    "secure_key_bits",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "franson",
            "temporal",
            simulate_franson,
            frozenset(
                {
                    "single_visibility",
                    "coincidence_visibility",
                    "chsh",
                    "pair_rate_per_s",
                    "singles_vs_signal_phase",
                    "coincidence_vs_signal_phase",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "ghz_fusion",
            "discrete_photonic",
            simulate_ghz_fusion,
            frozenset(
                {
                    "p_vvh",
                    "p_hhv",
                    "fidelity",
                    "purity",
                    "witness",
                    "mermin",
                    "fusion_success_probability",
                    "threefold_efficiency",
                    "xxx_distribution",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "teleportation",
            "discrete_photonic",
            simulate_teleportation,
            frozenset(
                {
                    "ideal_fidelity_mean",
                    "ideal_fidelity_min",
                    "realistic_fidelity",
                    "coincidence_efficiency",
                    "bell_probability_phi_plus",
                    "bell_probability_phi_minus",
                    "bell_probability_psi_plus",
                    "bell_probability_psi_minus",
                    "fidelity_vs_input_angle",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "hyperentanglement",
            "discrete_photonic",
            simulate_hyperentanglement,
            frozenset(
                {
                    "fidelity_pol",
                    "fidelity_oam",
                    "concurrence_pol",
                    "concurrence_oam",
                    "chsh_pol",
                    "chsh_oam",
                    "schmidt_number",
                    "fourfold_hh_pp",
                    "fourfold_hh_mm",
                    "fourfold_vv_pp",
                    "fourfold_vv_mm",
                    "fourfold_efficiency",
                    "pol_marginal_purity",
                    "oam_marginal_purity",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "boson_sampling",
            "discrete_photonic",
            simulate_boson_sampling,
            frozenset(
                {
                    "tv_distance_permanent_vs_evolution",
                    "distribution_fidelity",
                    "bunching_probability",
                    "collision_probability",
                    "shannon_entropy_bits",
                    "effective_dimension",
                    "state_purity",
                    "mean_total_photons",
                    "fourfold_efficiency",
                    "output_distribution",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "eit",
            "atomic",
            simulate_eit,
            frozenset(
                {
                    "dark_state_fidelity",
                    "ground_coherence_abs",
                    "od_resonant",
                    "transparency_contrast",
                    "transmission_at_resonance",
                    "transmission_vs_probe_detuning",
                    "optical_depth_vs_probe_detuning",
                }
            ),
            _ALL_KINDS,
        ),
        ExperimentSpec(
            "frequency_conversion",
            "discrete_photonic",
            simulate_frequency_conversion,
            frozenset(
                {
                    "output_wavelength_nm",
                    "conversion_efficiency",
                    "total_efficiency",
                    "g2_zero_sfg",
                    "photon_conservation_residual",
                    "conversion_vs_time",
                }
            ),
            frozenset({_K.SOURCE, _K.PASSIVE_OPTICS, _K.CRYSTAL, _K.DETECTOR}),
        ),
    )
}

EXPERIMENT_KEYS = tuple(EXPERIMENTS)


def bundled_setup(key: str) -> OpticalSetup:
    if key not in EXPERIMENTS:
        raise KeyError(f"unknown experiment key {key!r}")
    data = resources.files("photonlab").joinpath("data", "setups", f"{key}.json").read_bytes()
    return parse_setup(data)


def bundled_setups() -> dict[str, OpticalSetup]:
    return {key: bundled_setup(key) for key in EXPERIMENT_KEYS}


def default_params(key: str) -> dict:
    if key not in _DEFAULTS:
        raise KeyError(f"unknown experiment key {key!r}")
    return dict(_DEFAULTS[key]())


def params_from_setup(key: str, setup: OpticalSetup) -> dict:
    if key not in _DERIVERS:
        raise KeyError(f"unknown experiment key {key!r}")
    return _DERIVERS[key](setup)


def producible_metric_names() -> frozenset[str]:
    names: set[str] = set()
    for spec in EXPERIMENTS.values():
        names |= spec.metric_names
    return frozenset(names)


def outcome_covered(outcome: str, names) -> bool:
    """An expected outcome is covered by an exact or underscore-prefix match."""
    if outcome in names:
        return True
    return any(n.startswith(outcome + "_") or outcome.startswith(n + "_") for n in names)


def suggest_simulator_key(setup: OpticalSetup) -> str:
    """Best key for a setup by expected-outcome coverage, then title tokens."""
    scored = []
    title = setup.title.lower()
    for key, spec in EXPERIMENTS.items():
        coverage = sum(
            1 for outcome in setup.expected_outcomes if outcome_covered(outcome, spec.metric_names)
        )
        token_bonus = sum(1 for token in key.split("_") if token in title)
        scored.append((coverage, token_bonus, -EXPERIMENT_KEYS.index(key), key))
    scored.sort(reverse=True)
    return scored[0][3]


def run_experiment(
    key: str,
    setup: OpticalSetup | None = None,
    params: dict | None = None,
    seed: int | None = None,
) -> MetricSet:
    """Dispatch a simulator with defaults <- setup-derived <- explicit params.

    When a seed is given it replaces the seed of any NoiseParams argument
    and any plain ``seed`` parameter the simulator accepts.
    """
    if key not in EXPERIMENTS:
        raise KeyError(f"unknown experiment key {key!r}")
    spec = EXPERIMENTS[key]
    merged = default_params(key)
    if setup is not None:
        merged.update(params_from_setup(key, setup))
    if params:
        merged.update(params)
    if seed is not None:
        if "noise" in merged and isinstance(merged["noise"], NoiseParams):
            from dataclasses import replace

            merged["noise"] = replace(merged["noise"], seed=seed)
        if "seed" in spec.simulate.__code__.co_varnames[: spec.simulate.__code__.co_argcount]:
            merged["seed"] = seed
    metrics = spec.simulate(**merged)
    metrics.notes.append(f"experiment:{key}")
    if seed is not None:
        metrics.notes.append(f"seed:{seed}")
    return metrics
