"""State quality and nonclassicality metrics.

Polarization measurements follow the polarizer-angle convention: an analyzer
at angle t transmits cos(t)|H> + sin(t)|V>, so the +/-1 observable is

    A(t) = cos(2t) Z + sin(2t) X.

Bell-type correlators are evaluated from projective Born-rule probabilities,
never from closed-form shortcuts, so they remain valid for mixed states.
Three-party correlators instead use equatorial (x-y plane) directions
A(t) = cos(t) X + sin(t) Y; z-x plane analyzers cannot reach the algebraic
maximum |M| = 4 on GHZ-class states.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .fock import destroy, fock_enumerate, mode_operator, number_operator
from .states import DensityMatrix, FockSector, FockSpace, QuantumState

__all__ = [
    "StateMetrics",
    "fidelity",
    "purity",
    "von_neumann_entropy",
    "state_metrics",
    "concurrence",
    "polarizer_observable",
    "correlation",
    "chsh_value",
    "CHSH_OPTIMAL_ANGLES",
    "equatorial_observable",
    "mermin_value",
    "mermin_optimize",
    "ghz_witness",
    "g2_zero",
]

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# Polarizer angles (a, a', b, b') maximizing the combination
# E(a,b) + E(a,b') + E(a',b) - E(a',b') on |Phi+>.
CHSH_OPTIMAL_ANGLES = (0.0, math.pi / 4, math.pi / 8, -math.pi / 8)


@dataclass(frozen=True)
class StateMetrics:
    fidelity: float
    purity: float
    von_neumann_entropy: float  # natural log
    concurrence: float | None = None


def _as_density(state) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return state.matrix
    if isinstance(state, QuantumState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr


def fidelity(state, reference) -> float:
    """<psi_ref| rho |psi_ref> for a pure reference state."""
    rho = _as_density(state)
    ref = reference.amplitudes if isinstance(reference, QuantumState) else np.asarray(reference, dtype=complex)
    if ref.shape[0] != rho.shape[0]:
        raise ValueError("reference dimension does not match state")
    return float(np.real(ref.conj() @ rho @ ref))


def purity(state) -> float:
    rho = _as_density(state)
    return float(np.real(np.trace(rho @ rho)))


def von_neumann_entropy(state) -> float:
    """-Tr rho ln rho with the 0 * ln 0 = 0 convention."""
    rho = _as_density(state)
    eig = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    eig = eig[eig > 1e-15]
    return float(-np.sum(eig * np.log(eig)))


def state_metrics(state, reference=None) -> StateMetrics:
    rho = _as_density(state)
    f = fidelity(rho, reference) if reference is not None else 1.0
    c = concurrence(rho) if rho.shape == (4, 4) else None
    return StateMetrics(f, purity(rho), von_neumann_entropy(rho), c)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = _as_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined for two-qubit (4x4) states")
    yy = np.kron(_SY, _SY)
    rho_tilde = yy @ rho.conj() @ yy
    eig = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sqrt(np.abs(np.sort(eig.real)[::-1]))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def polarizer_observable(angle: float) -> np.ndarray:
    """+/-1 observable of a polarization analyzer at the given angle."""
    return math.cos(2 * angle) * _SZ + math.sin(2 * angle) * _SX


def equatorial_observable(angle: float) -> np.ndarray:
    """+/-1 observable along an x-y plane Bloch direction."""
    return math.cos(angle) * _SX + math.sin(angle) * _SY


def correlation(rho, observables) -> float:
    """Expectation of a tensor product of single-qubit +/-1 observables."""
    rho = _as_density(rho)
    op = observables[0]
    for o in observables[1:]:
        op = np.kron(op, o)
    if op.shape != rho.shape:
        raise ValueError("observable dimension does not match state")
    return float(np.real(np.trace(rho @ op)))


def chsh_value(rho, settings=CHSH_OPTIMAL_ANGLES) -> float:
    """S = E(a,b) + E(a,b') + E(a',b) - E(a',b') with polarizer angles (a, a', b, b')."""
    rho = _as_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("CHSH is defined for two-qubit states")
    a, ap, b, bp = settings
    e = lambda x, y: correlation(rho, (polarizer_observable(x), polarizer_observable(y)))
    return e(a, b) + e(a, bp) + e(ap, b) - e(ap, bp)


def mermin_value(rho, settings) -> float:
    """M = <A1 B1 C1> - <A1 B2 C2> - <A2 B1 C2> - <A2 B2 C1>.

    ``settings`` is ((a1, a2), (b1, b2), (c1, c2)) of equatorial angles.
    """
    rho = _as_density(rho)
    if rho.shape != (8, 8):
        raise ValueError("Mermin is defined for three-qubit states")
    (a1, a2), (b1, b2), (c1, c2) = settings
    e = lambda x, y, z: correlation(
        rho, (equatorial_observable(x), equatorial_observable(y), equatorial_observable(z))
    )
    return e(a1, b1, c1) - e(a1, b2, c2) - e(a2, b1, c2) - e(a2, b2, c1)


def mermin_optimize(rho, grid_points: int = 8) -> tuple[float, tuple]:
    """Best |M| over local settings: coarse grid search, then local polish.

    Returns (signed M at the optimum, settings).  The grid stage contracts
    the two-axis (x, y) correlation tensor instead of re-tracing the state
    for each of the grid_points**6 setting combinations.
    """
    rho = _as_density(rho)
    # T[p,q,r] = Tr rho (sigma_p x sigma_q x sigma_r), p,q,r in {x, y}
    paulis = (_SX, _SY)
    t = np.empty((2, 2, 2))
    for p, q, r in itertools.product(range(2), repeat=3):
        t[p, q, r] = np.real(np.trace(rho @ np.kron(np.kron(paulis[p], paulis[q]), paulis[r])))
    grid = np.linspace(0.0, 2 * math.pi, grid_points, endpoint=False)
    direction = np.stack([np.cos(grid), np.sin(grid)], axis=1)  # (G, 2)
    e = np.einsum("ip,jq,kr,pqr->ijk", direction, direction, direction, t)
    g = grid_points
    i1, i2, j1, j2, k1, k2 = np.ix_(*(np.arange(g),) * 6)
    m_grid = e[i1, j1, k1] - e[i1, j2, k2] - e[i2, j1, k2] - e[i2, j2, k1]
    flat = np.argmax(np.abs(m_grid))
    ia, ib, ja, jb, ka, kb = np.unravel_index(flat, m_grid.shape)
    best_s = ((grid[ia], grid[ib]), (grid[ja], grid[jb]), (grid[ka], grid[kb]))
    best_m = mermin_value(rho, best_s)
    sign = 1.0 if best_m >= 0 else -1.0

    def negative_abs(x):
        s = ((x[0], x[1]), (x[2], x[3]), (x[4], x[5]))
        return -sign * mermin_value(rho, s)

    x0 = [a for pair in best_s for a in pair]
    res = minimize(negative_abs, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000})
    x = res.x
    settings = ((x[0], x[1]), (x[2], x[3]), (x[4], x[5]))
    return mermin_value(rho, settings), settings


def ghz_witness(rho, target) -> float:
    """Witness 1/2 - F(target); negative certifies GHZ-class entanglement."""
    return 0.5 - fidelity(rho, target)


def g2_zero(state, mode: int = 0) -> float:
    """Zero-delay second-order correlation <a+ a+ a a> / <a+ a>^2.

    Defined as 0 when the mode is unpopulated (<a+ a> = 0).
    """
    if isinstance(state, (DensityMatrix, QuantumState)):
        structure = state.structure
        rho = _as_density(state)
    else:
        raise TypeError("g2_zero needs a QuantumState or DensityMatrix with Fock structure")
    if isinstance(structure, FockSpace):
        a = mode_operator(destroy(structure.cutoff), mode, structure)
        n_mean = float(np.real(np.trace(rho @ number_operator(mode, structure))))
        g2_num = float(np.real(np.trace(rho @ a.conj().T @ a.conj().T @ a @ a)))
    elif isinstance(structure, FockSector):
        # Within a fixed-number sector a+ a+ a a is diagonal: n (n - 1).
        occ = np.array([cfg[mode] for cfg in fock_enumerate(structure.modes, structure.photons)], dtype=float)
        diag = np.real(np.diag(rho))
        n_mean = float(diag @ occ)
        g2_num = float(diag @ (occ * (occ - 1)))
    else:
        raise TypeError("g2_zero requires a Fock register structure")
    if n_mean <= 0.0:
        return 0.0
    return g2_num / n_mean**2
