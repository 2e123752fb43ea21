"""Reduced two-atom dynamics over a time grid.

The authoritative path evolves the joint atoms-plus-field state in the
truncated full space and traces the field out exactly.  For initial states
confined to a single invariant subspace (|ee, n> or, for ``n >= 2``,
|gg, n>), the reduced state is also computable from the four subspace
amplitudes alone; both paths agree within 1e-10 and the subspace route
exists as a cross-check, not as the production path.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .entanglement import classify, negativity
from .errors import TruncationLeak
from .model import (
    SystemParams,
    TwoAtomAmplitudes,
    full_hamiltonian,
    joint_state_from_atomic,
    subspace_hamiltonian,
)
from .propagator import TRUNCATION_TOL, propagate_full

#: Populations more negative than this are genuine violations, not round-off.
POPULATION_CLAMP = 1e-12

#: Negativity at or below this threshold counts as zero for event detection.
NEGATIVITY_ZERO_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TimeSeriesRecord:
    """One sampled instant: populations, entanglement degree, class label."""

    tau: float
    p_ee: float
    p_eg: float
    p_ge: float
    p_gg: float
    negativity: float
    class_label: str

    @property
    def populations(self) -> tuple[float, float, float, float]:
        return (self.p_ee, self.p_eg, self.p_ge, self.p_gg)


def _atomic_vector_of(initial: TwoAtomAmplitudes | np.ndarray) -> np.ndarray:
    if isinstance(initial, TwoAtomAmplitudes):
        return initial.atomic_vector()
    vector = np.asarray(initial, dtype=np.complex128)
    if vector.shape != (4,):
        raise ValueError(
            f"initial state must be TwoAtomAmplitudes or a length-4 atomic vector, "
            f"got shape {vector.shape}"
        )
    return vector


def evolve_reduced(
    params: SystemParams, initial: TwoAtomAmplitudes | np.ndarray, tau: float
) -> np.ndarray:
    """Reduced two-atom density matrix at scaled time ``tau``.

    Evolves the joint state in the truncated full space, then traces out the
    field.  ``initial`` is a product-state description or a length-4 atomic
    vector (basis |ee>, |eg>, |ge>, |gg>) tensored with ``|n_photon>``.
    """
    psi0 = joint_state_from_atomic(_atomic_vector_of(initial), params)
    evolved = propagate_full(params, tau, psi0)
    return linalg.partial_trace_field(evolved)


def _single_subspace_rho(amplitudes: np.ndarray) -> np.ndarray:
    """Reduced matrix for four amplitudes riding one invariant subspace.

    The four joint components live on photon sectors (n, n+1, n+1, n+2), so
    field orthogonality kills every coherence except the middle pair, which
    shares one sector.
    """
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[np.arange(4), np.arange(4)] = np.abs(amplitudes) ** 2
    rho[1, 2] = amplitudes[1] * np.conj(amplitudes[2])
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


def evolve_reduced_subspace(params: SystemParams, which: str, tau: float) -> np.ndarray:
    """Reduced density matrix via the 4-dimensional subspace only.

    Supports ``which="ee"`` (any photon number) and ``which="gg"`` for
    ``n_photon >= 2`` (the ladder from |gg, n> is the subspace built on
    ``n_photon - 2``).  Exists as an independent route for agreement tests.
    """
    if which == "ee":
        u = linalg.expm_i_hermitian(subspace_hamiltonian(params), tau)
        amplitudes = u[:, 0]
    elif which == "gg":
        if params.n_photon < 2:
            raise ValueError(
                "the subspace route for a ground-state pair needs n_photon >= 2; "
                "below that the ladder truncates and the full-space path applies"
            )
        shifted = replace(
            params,
            n_photon=params.n_photon - 2,
            fock_cutoff=params.fock_cutoff,
        )
        u = linalg.expm_i_hermitian(subspace_hamiltonian(shifted), tau)
        amplitudes = u[:, 3]
    else:
        raise ValueError(f"subspace route supports 'ee' or 'gg', got {which!r}")
    return _single_subspace_rho(amplitudes)


def populations(rho: np.ndarray) -> tuple[float, float, float, float]:
    """Diagonal of the reduced matrix with tiny negative round-off clamped.

    Values in ``(-POPULATION_CLAMP, 0)`` become exactly 0; anything more
    negative is left untouched so genuine positivity violations stay visible.
    """
    diag = np.real(np.diag(rho)).astype(float)
    clamped = [0.0 if -POPULATION_CLAMP < value < 0.0 else float(value) for value in diag]
    return tuple(clamped)  # type: ignore[return-value]


def time_series(
    params: SystemParams,
    initial: TwoAtomAmplitudes | np.ndarray,
    tau_max: float,
    steps: int,
    classifier_kwargs: dict | None = None,
) -> list[TimeSeriesRecord]:
    """Sample the reduced dynamics on a uniform grid over ``[0, tau_max]``.

    The grid is ``tau_k = k * tau_max / (steps - 1)``.  The full Hamiltonian
    is diagonalized once; each grid point then costs one phase rotation, one
    partial trace, and the entanglement measures.  At ``tau = 0`` the initial
    state is used bit-exactly.

    Raises:
        ValueError: if ``steps < 2`` or ``tau_max <= 0``.
        TruncationLeak: if any sampled state populates the top two retained
            Fock levels.
    """
    if int(steps) != steps or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")
    if not (tau_max > 0):
        raise ValueError(f"tau_max must be positive, got {tau_max!r}")
    classifier_kwargs = classifier_kwargs or {}
    psi0 = joint_state_from_atomic(_atomic_vector_of(initial), params)
    system = linalg.eig_hermitian(full_hamiltonian(params))
    coefficients = system.eigenvectors.conj().T @ psi0
    taus = np.linspace(0.0, float(tau_max), int(steps))
    records = []
    for tau in taus:
        if tau == 0.0:
            psi = psi0
        else:
            psi = system.eigenvectors @ (np.exp(-1j * system.eigenvalues * tau) * coefficients)
        amplitudes = psi.reshape(4, params.field_dim)
        top_amplitude = float(np.max(np.abs(amplitudes[:, -2:])))
        if top_amplitude >= TRUNCATION_TOL:
            raise TruncationLeak(
                f"amplitude {top_amplitude:.3e} on the top two Fock levels at "
                f"tau={tau!r}; raise fock_cutoff"
            )
        rho = linalg.partial_trace_field(psi)
        p_ee, p_eg, p_ge, p_gg = populations(rho)
        result = negativity(rho)
        label = classify(rho, **classifier_kwargs).label
        records.append(
            TimeSeriesRecord(
                tau=float(tau),
                p_ee=p_ee,
                p_eg=p_eg,
                p_ge=p_ge,
                p_gg=p_gg,
                negativity=result.value,
                class_label=label,
            )
        )
    return records


def first_negativity_zero(
    records: Sequence[TimeSeriesRecord],
    threshold: float = NEGATIVITY_ZERO_THRESHOLD,
) -> float | None:
    """First time the negativity falls back to zero, or ``None``.

    A "zero" is a downward crossing of ``threshold``: the sampled negativity
    sits above it at one grid point and at or below it at the next.  The
    crossing time is linearly interpolated between the two grid points.
    """
    for before, after in zip(records, records[1:]):
        gap_before = before.negativity - threshold
        gap_after = after.negativity - threshold
        if gap_before > 0.0 >= gap_after:
            fraction = gap_before / (gap_before - gap_after)
            return before.tau + (after.tau - before.tau) * fraction
    return None


def negativity_zero_count(
    records: Sequence[TimeSeriesRecord],
    threshold: float = NEGATIVITY_ZERO_THRESHOLD,
) -> int:
    """Number of downward threshold crossings of the negativity."""
    count = 0
    for before, after in zip(records, records[1:]):
        if before.negativity - threshold > 0.0 >= after.negativity - threshold:
            count += 1
    return count


def average_negativity(records: Sequence[TimeSeriesRecord]) -> float:
    """Time average of the negativity over the sampled window.

    Computed as the trapezoid integral of the linear interpolant divided by
    the window length.
    """
    if len(records) < 2:
        raise ValueError("need at least two records to average")
    values = [record.negativity for record in records]
    dt = records[1].tau - records[0].tau
    integral = dt * (0.5 * values[0] + sum(values[1:-1]) + 0.5 * values[-1])
    window = records[-1].tau - records[0].tau
    return integral / window


def midline_crossing_count(values: Iterable[float], midline: float = 0.5) -> int:
    """Count strict sign changes of ``values - midline``.

    Used to quantify how often a population oscillates through its midpoint.
    """
    signs = [value - midline for value in values]
    count = 0
    previous = None
    for gap in signs:
        if gap == 0.0:
            continue
        current = gap > 0.0
        if previous is not None and current != previous:
            count += 1
        previous = current
    return count
