"""State vectors and density matrices with structure metadata.

Three register structures cover every simulator in the package:

* ``QubitRegister(n)`` -- n two-level systems, dimension 2**n.
* ``FockSector(m, n)`` -- m optical modes at fixed total photon number n.
  The basis is :func:`photonlab.qcore.fock.fock_enumerate` order and the
  dimension is the multiset coefficient C(n+m-1, m-1).  Linear optics
  conserves photon number, so working inside one sector keeps the evolution
  exact.
* ``FockSpace(m, cutoff)`` -- m modes each truncated at ``cutoff`` photons,
  for coherent/thermal workflows that mix photon-number sectors.

Norm, Hermiticity, trace and positivity are enforced at construction to
1e-9, so a constructed object is always a physical state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ATOL",
    "QubitRegister",
    "FockSector",
    "FockSpace",
    "GenericRegister",
    "QuantumState",
    "DensityMatrix",
    "tensor",
    "tensor_states",
    "partial_trace",
    "pure_density",
    "ket",
]

ATOL = 1e-9  # structural tolerance for norm / Hermiticity / positivity


@dataclass(frozen=True)
class QubitRegister:
    qubits: int

    @property
    def dim(self) -> int:
        return 2**self.qubits

    @property
    def subsystem_dims(self) -> tuple[int, ...]:
        return (2,) * self.qubits


@dataclass(frozen=True)
class FockSector:
    """m modes with exactly n photons in total (number-conserving block)."""

    modes: int
    photons: int

    @property
    def dim(self) -> int:
        return math.comb(self.photons + self.modes - 1, self.modes - 1)

    @property
    def subsystem_dims(self) -> tuple[int, ...]:
        # A fixed-photon-number sector is not a tensor product of modes.
        return (self.dim,)


@dataclass(frozen=True)
class FockSpace:
    """m modes, each truncated at ``cutoff`` photons (dim (cutoff+1)**m)."""

    modes: int
    cutoff: int

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.modes

    @property
    def subsystem_dims(self) -> tuple[int, ...]:
        return (self.cutoff + 1,) * self.modes


@dataclass(frozen=True)
class GenericRegister:
    """Explicit subsystem dimensions, for mixed-structure tensor products."""

    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def subsystem_dims(self) -> tuple[int, ...]:
        return self.dims


Structure = QubitRegister | FockSector | FockSpace | GenericRegister


@dataclass(frozen=True)
class QuantumState:
    amplitudes: np.ndarray
    structure: Structure

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        if amp.ndim != 1 or amp.shape[0] != self.structure.dim:
            raise ValueError(
                f"amplitude vector of length {amp.shape} does not match structure dim {self.structure.dim}"
            )
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {ATOL}")

    @property
    def dim(self) -> int:
        return self.structure.dim


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    structure: Structure

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", rho)
        d = self.structure.dim
        if rho.shape != (d, d):
            raise ValueError(f"matrix shape {rho.shape} does not match structure dim {d}")
        if np.max(np.abs(rho - rho.conj().T)) > ATOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density matrix trace {tr!r} deviates from 1")
        eig = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if eig.min() < -ATOL:
            raise ValueError(f"density matrix has negative eigenvalue {eig.min()!r}")

    @property
    def dim(self) -> int:
        return self.structure.dim


def ket(bits: str) -> np.ndarray:
    """Computational-basis qubit state from a bit string, e.g. ket('01')."""
    n = len(bits)
    vec = np.zeros(2**n, dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def _combine(a: Structure, b: Structure) -> Structure:
    if isinstance(a, QubitRegister) and isinstance(b, QubitRegister):
        return QubitRegister(a.qubits + b.qubits)
    if isinstance(a, FockSpace) and isinstance(b, FockSpace) and a.cutoff == b.cutoff:
        return FockSpace(a.modes + b.modes, a.cutoff)
    if isinstance(a, FockSector) or isinstance(b, FockSector):
        raise ValueError("fixed-photon-number sectors do not factorize; cannot tensor")
    return GenericRegister(tuple(a.subsystem_dims) + tuple(b.subsystem_dims))


def tensor(a: np.ndarray, b: np.ndarray, *rest: np.ndarray) -> np.ndarray:
    """Kronecker product of two or more vectors/operators."""
    out = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    for extra in rest:
        out = np.kron(out, np.asarray(extra, dtype=complex))
    return out


def tensor_states(a: QuantumState, b: QuantumState) -> QuantumState:
    return QuantumState(tensor(a.amplitudes, b.amplitudes), _combine(a.structure, b.structure))


def partial_trace(
    rho: np.ndarray | DensityMatrix,
    keep: tuple[int, ...] | list[int],
    dims: tuple[int, ...] | None = None,
) -> np.ndarray | DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` indexes subsystems in tensor order.  Accepts either a raw matrix
    plus explicit ``dims`` or a :class:`DensityMatrix` (dims from structure);
    the return type mirrors the input.  Trace and Hermiticity are preserved
    exactly by construction.
    """
    wrapped = isinstance(rho, DensityMatrix)
    if wrapped:
        dims = rho.structure.subsystem_dims
        mat = rho.matrix
    else:
        mat = np.asarray(rho, dtype=complex)
        if dims is None:
            raise ValueError("dims required when tracing a bare matrix")
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(keep)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if int(np.prod(dims)) != mat.shape[0]:
        raise ValueError("dims do not factorize the matrix dimension")

    drop = [i for i in range(n) if i not in keep]
    tensor_form = mat.reshape(dims + dims)
    # Contract each dropped subsystem's bra index with its ket index.
    for offset, axis in enumerate(drop):
        k = axis - offset  # axes shift left as we trace
        tensor_form = np.trace(tensor_form, axis1=k, axis2=k + tensor_form.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    reduced = tensor_form.reshape(d_keep, d_keep)
    if wrapped:
        kept_dims = tuple(dims[i] for i in keep)
        if all(d == 2 for d in kept_dims):
            structure: Structure = QubitRegister(len(kept_dims))
        else:
            structure = GenericRegister(kept_dims)
        return DensityMatrix(reduced, structure)
    return reduced


def pure_density(state: QuantumState | np.ndarray, structure: Structure | None = None) -> DensityMatrix:
    if isinstance(state, QuantumState):
        vec, structure = state.amplitudes, state.structure
    else:
        vec = np.asarray(state, dtype=complex)
        if structure is None:
            raise ValueError("structure required for a bare amplitude vector")
    return DensityMatrix(np.outer(vec, vec.conj()), structure)
