"""Polarization-entanglement simulators: pair source, fusion, teleportation,
dual degree-of-freedom states.

Qubit encoding: |0> = H, |1> = V.  Analyzer angles follow the polarizer
convention of :mod:`photonlab.qcore.metrics`.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..qcore import (
    CHSH_OPTIMAL_ANGLES,
    chsh_value,
    concurrence,
    fidelity,
    ghz_witness,
    ket,
    mermin_optimize,
    partial_trace,
    purity,
    tensor,
    von_neumann_entropy,
)
from .base import MetricSet, NoiseParams, visibility

__all__ = [
    "simulate_bell_spdc",
    "simulate_ghz_fusion",
    "simulate_teleportation",
    "simulate_hyperentanglement",
]

_DEFAULT_ANGLE_PAIRS = (
    (0.0, 0.0),
    (0.0, math.pi / 4),
    (math.pi / 4, math.pi / 4),
    (math.pi / 8, -math.pi / 8),
)


def _analyzer_ket(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)], dtype=complex)


def simulate_bell_spdc(
    angle_pairs=_DEFAULT_ANGLE_PAIRS,
    noise: NoiseParams = NoiseParams(detector_efficiency=0.65),
) -> MetricSet:
    """Polarization pair source producing (|HV> + |VH>)/sqrt(2).

    Coincidence probabilities are Born-rule projections onto the transmitted
    ports of two analyzers; the correlation series scans analyzer B with A
    fixed at 45 degrees.
    """
    psi = (ket("01") + ket("10")) / math.sqrt(2.0)
    rho = np.outer(psi, psi.conj())

    def coincidence(a: float, b: float) -> float:
        proj = tensor(_analyzer_ket(a), _analyzer_ket(b))
        return float(np.real(proj.conj() @ rho @ proj))

    pairs = [(float(a), float(b)) for a, b in angle_pairs]
    pair_probs = np.array([coincidence(a, b) for a, b in pairs])

    scan = np.linspace(0.0, math.pi, 181)
    curve = np.array([coincidence(math.pi / 4, b) for b in scan])

    rho_a = partial_trace(rho, keep=(0,), dims=(2, 2))
    eta = noise.detector_efficiency
    metrics = MetricSet(
        scalars={
            "fidelity": fidelity(rho, psi),
            "entanglement_entropy": von_neumann_entropy(rho_a),
            "visibility": visibility(curve),
            "coincidence_efficiency": eta**2,
            "concurrence": concurrence(rho),
        },
        series={
            "coincidence_vs_analyzer_angle": (scan, curve),
            "coincidence_vs_angle_pair": (np.arange(len(pairs), dtype=float), pair_probs),
        },
    )
    metrics.note_param("detector_efficiency", eta)
    return metrics


_GHZ = (ket("110") + ket("001")) / math.sqrt(2.0)  # |VVH> + |HHV>


def _ghz_state(fusion_weight: float) -> np.ndarray:
    """Coherent/dephased mixture of the fusion output.

    The dephased part is the equal classical mixture of |VVH> and |HHV>;
    the fidelity of the mixture to the target is (1 + w)/2 with w the
    coherent weight, with no further correction term.
    """
    coherent = np.outer(_GHZ, _GHZ.conj())
    dephased = 0.5 * (np.outer(ket("110"), ket("110")) + np.outer(ket("001"), ket("001")))
    return fusion_weight * coherent + (1.0 - fusion_weight) * dephased


def simulate_ghz_fusion(
    fusion_success_probability: float = 0.428,
    hom_visibility: float = 1.0,
    mode_overlap: float = 1.0,
    noise: NoiseParams = NoiseParams(detector_efficiency=0.7),
) -> MetricSet:
    """Three-photon state from interfering two pair sources on a fusion splitter.

    Imperfect interference leaves a coherent weight w = hom_visibility *
    mode_overlap on the target (|VVH> + |HHV>)/sqrt(2), the rest dephasing
    into the classical mixture of the two branches.
    """
    for name, p in (
        ("fusion_success_probability", fusion_success_probability),
        ("hom_visibility", hom_visibility),
        ("mode_overlap", mode_overlap),
    ):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must be in [0, 1]")
    w = hom_visibility * mode_overlap
    rho = _ghz_state(w)

    diag = np.real(np.diag(rho))
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    minus = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)
    xxx = []
    for outcome in itertools.product((plus, minus), repeat=3):
        proj = tensor(*outcome)
        xxx.append(float(np.real(proj.conj() @ rho @ proj)))
    xxx = np.array(xxx)

    f = fidelity(rho, _GHZ)
    mermin, _ = mermin_optimize(rho)
    eta = noise.detector_efficiency
    metrics = MetricSet(
        scalars={
            "p_vvh": float(diag[0b110]),
            "p_hhv": float(diag[0b001]),
            "fidelity": f,
            "purity": purity(rho),
            "witness": ghz_witness(rho, _GHZ),
            "mermin": abs(mermin),
            "fusion_success_probability": fusion_success_probability,
            "threefold_efficiency": eta**3,
        },
        series={"xxx_distribution": (np.arange(8, dtype=float), xxx)},
    )
    metrics.note_param("hom_visibility", hom_visibility)
    metrics.note_param("mode_overlap", mode_overlap)
    metrics.note_param("detector_efficiency", eta)
    return metrics


_BELL_BASIS = {
    "phi_plus": (ket("00") + ket("11")) / math.sqrt(2.0),
    "phi_minus": (ket("00") - ket("11")) / math.sqrt(2.0),
    "psi_plus": (ket("01") + ket("10")) / math.sqrt(2.0),
    "psi_minus": (ket("01") - ket("10")) / math.sqrt(2.0),
}
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_CORRECTIONS = {
    "phi_plus": np.eye(2, dtype=complex),
    "phi_minus": _SZ,
    "psi_plus": _SX,
    "psi_minus": _SX @ _SZ,
}


def teleport_one(input_state: np.ndarray, apply_correction: bool = True) -> dict[str, tuple[float, float]]:
    """Run the full three-qubit protocol for one input state.

    Returns {bell outcome: (probability, fidelity of Bob's corrected state)}.
    The sender holds qubits 0 (input) and 1; the receiver holds qubit 2 of
    the shared (|00> + |11>)/sqrt(2) pair.
    """
    resource = _BELL_BASIS["phi_plus"]
    total = tensor(input_state, resource)
    rho = np.outer(total, total.conj())
    results = {}
    for name, bell in _BELL_BASIS.items():
        projector = tensor(np.outer(bell, bell.conj()), np.eye(2, dtype=complex))
        projected = projector @ rho @ projector.conj().T
        prob = float(np.real(np.trace(projected)))
        if prob <= 1e-15:
            results[name] = (prob, 1.0)
            continue
        reduced = partial_trace(projected / prob, keep=(2,), dims=(2, 2, 2))
        if apply_correction:
            u = _CORRECTIONS[name]
            reduced = u @ reduced @ u.conj().T
        results[name] = (prob, fidelity(reduced, input_state))
    return results


def simulate_teleportation(
    input_angles_deg=(0.0, 30.0, 45.0, 60.0, 90.0),
    hom_visibility: float = 0.95,
    detector_efficiency: float = 0.7,
    seed: int = 42,
) -> MetricSet:
    """Teleport a set of linear-polarization states through a shared pair.

    Ideal fidelities come from the exact protocol (projection onto the four
    Bell outcomes, conditional Pauli correction I / Z / X / XZ).  The
    realistic fidelity equals the interference visibility of the joint
    measurement; the coincidence efficiency is eta^2.
    """
    angles = np.asarray(input_angles_deg, dtype=float)
    if angles.size == 0:
        raise ValueError("need at least one input angle")
    fidelities = []
    probs_accum = {name: [] for name in _BELL_BASIS}
    for deg in angles:
        rad = math.radians(deg)
        state = np.array([math.cos(rad), math.sin(rad)], dtype=complex)
        per_outcome = teleport_one(state)
        fidelities.append(np.mean([f for _, f in per_outcome.values()]))
        for name, (p, _) in per_outcome.items():
            probs_accum[name].append(p)
    fidelities = np.array(fidelities)

    metrics = MetricSet(
        scalars={
            "ideal_fidelity_mean": float(fidelities.mean()),
            "ideal_fidelity_min": float(fidelities.min()),
            "realistic_fidelity": hom_visibility,
            "coincidence_efficiency": detector_efficiency**2,
            **{
                f"bell_probability_{name}": float(np.mean(ps))
                for name, ps in probs_accum.items()
            },
        },
        series={"fidelity_vs_input_angle": (angles, fidelities)},
    )
    metrics.note_param("hom_visibility", hom_visibility)
    metrics.note_param("detector_efficiency", detector_efficiency)
    metrics.note_param("seed", float(seed))
    return metrics


def _bell_pair_density(coherent_weight: float) -> np.ndarray:
    phi = _BELL_BASIS["phi_plus"]
    coherent = np.outer(phi, phi.conj())
    dephased = 0.5 * (np.outer(ket("00"), ket("00")) + np.outer(ket("11"), ket("11")))
    return coherent_weight * coherent + (1.0 - coherent_weight) * dephased


def _permute_qubits(rho: np.ndarray, order: tuple[int, ...]) -> np.ndarray:
    n = len(order)
    perm = list(order) + [n + i for i in order]
    return rho.reshape((2,) * (2 * n)).transpose(perm).reshape(2**n, 2**n)


def simulate_hyperentanglement(noise: NoiseParams = NoiseParams(detector_efficiency=0.7)) -> MetricSet:
    """Pair entangled simultaneously in polarization and orbital angular momentum.

    The 16-dimensional state is the tensor product of one coherent pair per
    degree of freedom, arranged as qubits (A_pol, A_oam, B_pol, B_oam).
    Mode-matching / distinguishability imperfections dephase each degree of
    freedom independently with coherent weight mode_matching * (1 - epsilon).
    """
    w = noise.mode_matching * (1.0 - noise.distinguishability)
    rho_pol = _bell_pair_density(w)
    rho_oam = _bell_pair_density(w)
    # Built in (A_pol, B_pol, A_oam, B_oam) order, then rearranged to put
    # Alice's two qubits first.
    rho = np.kron(rho_pol, rho_oam)
    rho = _permute_qubits(rho, (0, 2, 1, 3))

    dims = (2, 2, 2, 2)
    reduced_pol = partial_trace(rho, keep=(0, 2), dims=dims)
    reduced_oam = partial_trace(rho, keep=(1, 3), dims=dims)
    rho_alice = partial_trace(rho, keep=(0, 1), dims=dims)
    schmidt_number = int(np.sum(np.linalg.eigvalsh(rho_alice) > 1e-12))

    phi = _BELL_BASIS["phi_plus"]
    diag = np.real(np.diag(rho))
    eta = noise.detector_efficiency
    metrics = MetricSet(
        scalars={
            "fidelity_pol": fidelity(reduced_pol, phi),
            "fidelity_oam": fidelity(reduced_oam, phi),
            "concurrence_pol": concurrence(reduced_pol),
            "concurrence_oam": concurrence(reduced_oam),
            "chsh_pol": chsh_value(reduced_pol, CHSH_OPTIMAL_ANGLES),
            "chsh_oam": chsh_value(reduced_oam, CHSH_OPTIMAL_ANGLES),
            "schmidt_number": float(schmidt_number),
            "fourfold_hh_pp": float(diag[0b0000]),
            "fourfold_hh_mm": float(diag[0b0101]),
            "fourfold_vv_pp": float(diag[0b1010]),
            "fourfold_vv_mm": float(diag[0b1111]),
            "fourfold_efficiency": eta**4,
            "pol_marginal_purity": purity(partial_trace(rho, keep=(0,), dims=dims)),
            "oam_marginal_purity": purity(partial_trace(rho, keep=(1,), dims=dims)),
        },
    )
    metrics.note_param("detector_efficiency", eta)
    return metrics
