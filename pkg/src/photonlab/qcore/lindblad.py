"""Dense Lindblad steady-state solver.

The Liouvillian acts on column-stacked density matrices:

    L vec(rho) = -i (I (x) H - H^T (x) I) vec(rho)
                 + sum_k [ conj(C_k) (x) C_k
                           - 1/2 (I (x) C_k^dag C_k + (C_k^dag C_k)^T (x) I) ] vec(rho)

Collapse operators carry their rates in the usual convention C_k =
sqrt(gamma_k) * A_k.  The steady state is the null vector of L, found by
SVD; a second near-zero singular value signals a degenerate stationary
manifold and raises instead of silently picking a branch.  Dimensions here
are small (<= 64), so dense linear algebra is the right tool.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .states import ATOL, DensityMatrix, GenericRegister

__all__ = ["liouvillian", "lindblad_steady_state", "DegenerateSteadyStateError"]

_DEGENERACY_TOL = 1e-8


class DegenerateSteadyStateError(ValueError):
    """The Liouvillian null space has dimension greater than one."""


def liouvillian(hamiltonian: np.ndarray, collapse_ops: Sequence[np.ndarray]) -> np.ndarray:
    h = np.asarray(hamiltonian, dtype=complex)
    d = h.shape[0]
    if h.shape != (d, d):
        raise ValueError("hamiltonian must be square")
    eye = np.eye(d, dtype=complex)
    lv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for c in collapse_ops:
        c = np.asarray(c, dtype=complex)
        if c.shape != (d, d):
            raise ValueError("collapse operator dimension mismatch")
        cdc = c.conj().T @ c
        lv += np.kron(c.conj(), c) - 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye))
    return lv


def lindblad_steady_state(
    hamiltonian: np.ndarray, collapse_ops: Sequence[np.ndarray]
) -> DensityMatrix:
    """Unique stationary density matrix of dH/dt Lindblad dynamics.

    Raises :class:`DegenerateSteadyStateError` when the stationary manifold
    is not one-dimensional.  The returned matrix satisfies
    ||L vec(rho)|| <= 1e-9, has unit trace, and is Hermitian and PSD within
    the structural tolerance.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    d = h.shape[0]
    if d > 64:
        raise ValueError("dense steady-state solver limited to dimension <= 64")
    if not collapse_ops:
        raise ValueError("at least one collapse operator is required")
    lv = liouvillian(h, collapse_ops)
    _, s, vh = np.linalg.svd(lv)
    if len(s) >= 2 and s[-2] < _DEGENERACY_TOL:
        raise DegenerateSteadyStateError(
            f"steady state is not unique (second singular value {s[-2]:.2e})"
        )
    rho = vh[-1].conj().reshape((d, d), order="F")  # column-stacking convention
    rho = (rho + rho.conj().T) / 2
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise DegenerateSteadyStateError("null vector is traceless; no physical steady state")
    rho = rho / tr
    # Clip eigenvalue noise at the structural tolerance before wrapping.
    eig, vec = np.linalg.eigh(rho)
    eig = np.clip(eig, 0.0, None)
    rho = (vec * eig) @ vec.conj().T
    rho /= np.trace(rho).real
    residual = np.linalg.norm(lv @ rho.reshape(-1, order="F"))
    if residual > ATOL:
        raise DegenerateSteadyStateError(f"steady-state residual {residual:.2e} exceeds {ATOL}")
    return DensityMatrix(rho, GenericRegister((d,)))
