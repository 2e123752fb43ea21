"""Dense complex linear algebra for small Hermitian problems.

Everything in this module operates on matrices of dimension at most
``MAX_DIM`` (4x4 for the two-atom reduced state, up to 64x64 for the
truncated atoms-plus-field space).  All functions are pure and
deterministic: identical inputs produce identical outputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, NotHermitian, NotNormalized

#: Largest matrix dimension accepted by the eigensolver entry points.
MAX_DIM = 64

#: Tolerance on ``max|m - m^dagger|`` below which a matrix counts as Hermitian.
HERMITICITY_TOL = 1e-10

#: Tolerance on ``| ||psi||^2 - 1 |`` for joint-state inputs.
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class HermitianEigensystem:
    """Spectral decomposition of a Hermitian matrix.

    Attributes:
        eigenvalues: real eigenvalues sorted ascending, shape ``(dim,)``.
        eigenvectors: orthonormal eigenvectors as columns, shape
            ``(dim, dim)``; column ``k`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _validate_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ValueError(
            f"matrix dimension {m.shape[0]} exceeds the supported maximum {MAX_DIM}"
        )
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m.astype(np.complex128, copy=False)


def hermiticity_defect(m: np.ndarray) -> float:
    """Return ``max|m - m^dagger|``, the distance from Hermiticity."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def eig_hermitian(m: np.ndarray) -> HermitianEigensystem:
    """Eigendecompose a Hermitian matrix.

    Args:
        m: square matrix, dimension at most ``MAX_DIM``, Hermitian within
            ``HERMITICITY_TOL``.

    Returns:
        A :class:`HermitianEigensystem` with ascending eigenvalues.

    Raises:
        NotHermitian: if the Hermiticity check fails.
        ConvergenceFailure: if the underlying iteration does not converge.
        ValueError: for non-square, oversized, or non-finite input.
    """
    m = _validate_square(m)
    defect = hermiticity_defect(m)
    if defect >= HERMITICITY_TOL:
        raise NotHermitian(
            f"max|m - m^dagger| = {defect:.3e} exceeds {HERMITICITY_TOL:.0e}"
        )
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from exc
    return HermitianEigensystem(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def expm_i_hermitian(m: np.ndarray, t: float) -> np.ndarray:
    """Evaluate the unitary ``exp(-i * m * t)`` for Hermitian ``m``.

    At ``t == 0`` the exact identity matrix is returned, so downstream
    consumers see bit-exact initial conditions.

    Raises:
        NotHermitian, ConvergenceFailure, ValueError: as in
            :func:`eig_hermitian`.
    """
    m = _validate_square(m)
    if t == 0.0:
        return np.eye(m.shape[0], dtype=np.complex128)
    system = eig_hermitian(m)
    phases = np.exp(-1j * system.eigenvalues * t)
    v = system.eigenvectors
    return (v * phases) @ v.conj().T


def partial_trace_field(psi: np.ndarray, n_atomic: int = 4) -> np.ndarray:
    """Trace the field out of a pure atoms-plus-field state.

    Args:
        psi: joint amplitudes, either flat with length ``n_atomic * field_dim``
            (atomic index major, photon number minor) or already shaped
            ``(n_atomic, field_dim)``.
        n_atomic: dimension of the atomic factor (4 for two qubits).

    Returns:
        The reduced atomic density matrix
        ``rho[j, k] = sum_m psi(j, m) * conj(psi(k, m))`` rescaled by the
        squared norm, Hermitian with unit trace.

    Raises:
        NotNormalized: if ``| ||psi||^2 - 1 |`` is not below
            ``NORMALIZATION_TOL``.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim == 1:
        if psi.size % n_atomic != 0:
            raise ValueError(
                f"flat state length {psi.size} is not a multiple of {n_atomic}"
            )
        amplitudes = psi.reshape(n_atomic, psi.size // n_atomic)
    elif psi.ndim == 2 and psi.shape[0] == n_atomic:
        amplitudes = psi
    else:
        raise ValueError(f"cannot interpret state of shape {psi.shape}")
    norm_sq = float(np.sum(np.abs(amplitudes) ** 2))
    if abs(norm_sq - 1.0) >= NORMALIZATION_TOL:
        raise NotNormalized(
            f"squared norm {norm_sq!r} deviates from 1 beyond {NORMALIZATION_TOL:.0e}"
        )
    rho = amplitudes @ amplitudes.conj().T
    if norm_sq != 1.0:
        rho = rho / norm_sq
    return rho


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose the second atom's indices of a two-atom density matrix.

    Basis order is (|ee>, |eg>, |ge>, |gg>), i.e. index ``2*i1 + i2`` with
    0 = excited and 1 = ground per atom.  The element at
    ``((i1 i2), (j1 j2))`` moves to ``((i1 j2), (j1 i2))``.  Applying the
    operation twice returns the original matrix bit-for-bit.
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
