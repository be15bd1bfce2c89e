"""Linear optics on Fock registers: permanents, splitters, mode networks.

Beam splitter convention (used by every simulator in the package): the
two-mode coupling with angle theta has single-photon matrix

    [[cos(theta),  i sin(theta)],
     [i sin(theta), cos(theta)]]

i.e. the symmetric i-phase form, obtained as exp(+i * theta * (a_i^dag a_j +
a_j^dag a_i)).  A 50:50 splitter is theta = pi/4.  Phase shifters act as
exp(i * phi * n_k).

Multi-photon transition amplitudes follow from the mode matrix u via

    <S| U |T> = per(u[S|T]) / sqrt(prod(S!) * prod(T!))

where u[S|T] repeats row i S_i times and column j T_j times; the same
operator is also available as an explicit sector matrix (matrix exponential
of the sector Hamiltonian), which boson sampling uses as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from .states import FockSector, FockSpace

__all__ = [
    "permanent",
    "fock_enumerate",
    "fock_index",
    "Splitter",
    "Phase",
    "splitter_theta",
    "mode_unitary",
    "network_unitary",
    "beam_splitter_unitary",
    "phase_shifter_unitary",
    "fock_amplitude",
    "output_distribution_permanent",
    "destroy",
    "mode_operator",
    "number_operator",
    "coherent_state",
    "thermal_state",
]


def permanent(matrix: np.ndarray) -> complex:
    """Permanent of a square matrix by Ryser's formula in Gray-code order.

    O(2^n * n) updates; exact up to floating point for n <= 20.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent requires a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return complex(1.0)
    if n > 20:
        raise ValueError("permanent limited to n <= 20")

    # per(A) = (-1)^n sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} a_ij
    row_sums = np.zeros(n, dtype=complex)
    total = 0.0 + 0.0j
    old_gray = 0
    popcount = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        bit = gray ^ old_gray
        j = bit.bit_length() - 1
        if gray & bit:
            row_sums += a[:, j]
            popcount += 1
        else:
            row_sums -= a[:, j]
            popcount -= 1
        old_gray = gray
        term = np.prod(row_sums)
        total += term if (n - popcount) % 2 == 0 else -term
    return complex(total)


def fock_enumerate(modes: int, photons: int) -> list[tuple[int, ...]]:
    """All occupation tuples of ``photons`` over ``modes``, lexicographically descending."""
    if modes < 1:
        raise ValueError("need at least one mode")
    if photons < 0:
        raise ValueError("photon number must be non-negative")
    if modes == 1:
        return [(photons,)]
    out: list[tuple[int, ...]] = []
    for head in range(photons, -1, -1):
        for tail in fock_enumerate(modes - 1, photons - head):
            out.append((head,) + tail)
    return out


def fock_index(modes: int, photons: int) -> dict[tuple[int, ...], int]:
    return {cfg: i for i, cfg in enumerate(fock_enumerate(modes, photons))}


@dataclass(frozen=True)
class Splitter:
    """Two-mode coupler; theta = pi/4 is 50:50 (transmittance cos^2 theta)."""

    theta: float
    modes: tuple[int, int]


@dataclass(frozen=True)
class Phase:
    phi: float
    mode: int


NetworkElement = Splitter | Phase


def splitter_theta(transmittance: float) -> float:
    """Coupling angle whose splitter transmits the given intensity fraction."""
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError("transmittance must be in [0, 1]")
    return math.acos(math.sqrt(transmittance))


def _element_mode_matrix(element: NetworkElement, modes: int) -> np.ndarray:
    u = np.eye(modes, dtype=complex)
    if isinstance(element, Splitter):
        i, j = element.modes
        if i == j:
            raise ValueError("splitter must couple two distinct modes")
        if not (0 <= i < modes and 0 <= j < modes):
            raise ValueError(f"splitter modes {element.modes} out of range for {modes} modes")
        c, s = math.cos(element.theta), math.sin(element.theta)
        u[i, i] = c
        u[j, j] = c
        u[i, j] = 1j * s
        u[j, i] = 1j * s
    elif isinstance(element, Phase):
        if not 0 <= element.mode < modes:
            raise ValueError(f"phase mode {element.mode} out of range for {modes} modes")
        u[element.mode, element.mode] = np.exp(1j * element.phi)
    else:
        raise TypeError(f"unknown network element {element!r}")
    return u


def mode_unitary(elements: Iterable[NetworkElement], modes: int) -> np.ndarray:
    """m x m matrix of the whole network, elements applied in listed order."""
    u = np.eye(modes, dtype=complex)
    for element in elements:
        u = _element_mode_matrix(element, modes) @ u
    return u


def _sector_hopping(modes: int, photons: int, i: int, j: int) -> np.ndarray:
    """Sector matrix of a_i^dag a_j + a_j^dag a_i (i != j) or n_i (i == j)."""
    basis = fock_enumerate(modes, photons)
    index = {cfg: k for k, cfg in enumerate(basis)}
    dim = len(basis)
    h = np.zeros((dim, dim), dtype=complex)
    if i == j:
        for k, cfg in enumerate(basis):
            h[k, k] = cfg[i]
        return h
    for k, cfg in enumerate(basis):
        if cfg[j] > 0:  # a_i^dag a_j
            target = list(cfg)
            target[j] -= 1
            target[i] += 1
            t = index[tuple(target)]
            h[t, k] += math.sqrt(cfg[j] * (cfg[i] + 1))
        if cfg[i] > 0:  # a_j^dag a_i
            target = list(cfg)
            target[i] -= 1
            target[j] += 1
            t = index[tuple(target)]
            h[t, k] += math.sqrt(cfg[i] * (cfg[j] + 1))
    return h


def beam_splitter_unitary(theta: float, modes: tuple[int, int], structure: FockSector | FockSpace) -> np.ndarray:
    """Fock-space unitary of one splitter on the given register."""
    i, j = modes
    if i == j:
        raise ValueError("splitter must couple two distinct modes")
    if isinstance(structure, FockSector):
        if not (0 <= i < structure.modes and 0 <= j < structure.modes):
            raise ValueError(f"modes {modes} out of range")
        h = _sector_hopping(structure.modes, structure.photons, i, j)
        return expm(1j * theta * h)
    if isinstance(structure, FockSpace):
        ai = mode_operator(destroy(structure.cutoff), i, structure)
        aj = mode_operator(destroy(structure.cutoff), j, structure)
        h = ai.conj().T @ aj + aj.conj().T @ ai
        return expm(1j * theta * h)
    raise TypeError("beam splitter requires a Fock register structure")


def phase_shifter_unitary(phi: float, mode: int, structure: FockSector | FockSpace) -> np.ndarray:
    if isinstance(structure, FockSector):
        if not 0 <= mode < structure.modes:
            raise ValueError(f"mode {mode} out of range")
        diag = np.array([np.exp(1j * phi * cfg[mode]) for cfg in fock_enumerate(structure.modes, structure.photons)])
        return np.diag(diag)
    if isinstance(structure, FockSpace):
        n_op = number_operator(mode, structure)
        return np.diag(np.exp(1j * phi * np.diag(n_op).real))
    raise TypeError("phase shifter requires a Fock register structure")


def network_unitary(
    elements: Sequence[NetworkElement], modes: int, photons: int
) -> tuple[np.ndarray, np.ndarray]:
    """(Fock-sector unitary, m x m mode matrix) for a splitter/phase network."""
    structure = FockSector(modes, photons)
    u_fock = np.eye(structure.dim, dtype=complex)
    for element in elements:
        if isinstance(element, Splitter):
            step = beam_splitter_unitary(element.theta, element.modes, structure)
        elif isinstance(element, Phase):
            step = phase_shifter_unitary(element.phi, element.mode, structure)
        else:
            raise TypeError(f"unknown network element {element!r}")
        u_fock = step @ u_fock
    return u_fock, mode_unitary(elements, modes)


def fock_amplitude(u: np.ndarray, out_config: Sequence[int], in_config: Sequence[int]) -> complex:
    """<out| U |in> from the permanent of the row/column-repeated mode matrix."""
    out_config = tuple(out_config)
    in_config = tuple(in_config)
    if sum(out_config) != sum(in_config):
        return 0.0 + 0.0j
    rows = [i for i, s in enumerate(out_config) for _ in range(s)]
    cols = [j for j, t in enumerate(in_config) for _ in range(t)]
    if not rows:
        return 1.0 + 0.0j
    sub = np.asarray(u, dtype=complex)[np.ix_(rows, cols)]
    norm = math.sqrt(
        math.prod(math.factorial(s) for s in out_config)
        * math.prod(math.factorial(t) for t in in_config)
    )
    return permanent(sub) / norm


def output_distribution_permanent(u: np.ndarray, in_config: Sequence[int]) -> np.ndarray:
    """Output probabilities over the full sector, via per-configuration permanents."""
    modes = len(in_config)
    photons = int(sum(in_config))
    basis = fock_enumerate(modes, photons)
    probs = np.array([abs(fock_amplitude(u, cfg, in_config)) ** 2 for cfg in basis])
    return probs


# Truncated single-mode ladder machinery (per-mode-cutoff register).

def destroy(cutoff: int) -> np.ndarray:
    """Annihilation operator on a single mode truncated at ``cutoff`` photons."""
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)


def mode_operator(op: np.ndarray, mode: int, structure: FockSpace) -> np.ndarray:
    """Embed a single-mode operator at position ``mode`` of a FockSpace."""
    if not 0 <= mode < structure.modes:
        raise ValueError(f"mode {mode} out of range")
    d = structure.cutoff + 1
    out = np.eye(1, dtype=complex)
    for k in range(structure.modes):
        out = np.kron(out, op if k == mode else np.eye(d, dtype=complex))
    return out


def number_operator(mode: int, structure: FockSpace) -> np.ndarray:
    a = mode_operator(destroy(structure.cutoff), mode, structure)
    return a.conj().T @ a


def coherent_state(alpha: complex, cutoff: int) -> np.ndarray:
    """Truncated coherent state |alpha>, renormalized on the cutoff space."""
    n = np.arange(cutoff + 1)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    amps = np.exp(n * np.log(complex(alpha)) - log_fact / 2) if alpha != 0 else np.eye(cutoff + 1)[0].astype(complex)
    if alpha != 0:
        amps = np.asarray(amps, dtype=complex)
    amps /= np.linalg.norm(amps)
    return amps


def thermal_state(mean_n: float, cutoff: int) -> np.ndarray:
    """Truncated thermal density matrix with mean photon number ``mean_n``."""
    n = np.arange(cutoff + 1, dtype=float)
    p = (mean_n / (1 + mean_n)) ** n / (1 + mean_n)
    p /= p.sum()
    return np.diag(p).astype(complex)
