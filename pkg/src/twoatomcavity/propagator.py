"""Time-evolution operators, computed three ways and audited.

The production path is the *spectral* propagator: eigendecompose the
invariant-subspace Hamiltonian and exponentiate the spectrum.  The
*full-space* path evolves the truncated atoms-plus-field state and exists as
an independent oracle.  The *closed-form* path evaluates a set of analytic
element formulas for the same subspace propagator; those formulas carry known
transcription defects, so they are kept under audit rather than used for
production.  The closed form comes in two variants:

- ``strict``: the element formulas evaluated verbatim;
- ``corrected``: two repairs applied — the phase factor of element (1,1)
  uses each root's own exponent instead of a single frozen one, and the
  root-dependent weights are reinstated in elements (1,2)/(1,3)/(2,1)/(3,1).

The audit compares either variant element-by-element against the spectral
oracle over a time grid and reports a match/mismatch verdict per element.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import NotNormalized, TruncationLeak
from .model import (
    SystemParams,
    full_hamiltonian,
    spectral_quantities,
    subspace_hamiltonian,
    subspace_joint_indices,
)

#: Deviation above which an audited element is declared a mismatch.
AUDIT_TOL = 1e-6

#: Maximum amplitude tolerated on the top two retained Fock levels.
TRUNCATION_TOL = 1e-12

#: Closed-form variants understood by the audit.
CLOSED_FORM_MODES = ("strict", "corrected")

#: Element identifiers in row-major order.
ELEMENT_IDS = tuple(f"u{row}{col}" for row in range(1, 5) for col in range(1, 5))


@dataclass(frozen=True)
class SubspacePropagator:
    """A 4x4 propagator on the invariant subspace at scaled time ``tau``.

    ``method`` records how the matrix was obtained: ``spectral``,
    ``closed_form``, or ``full_space_restricted``.  The spectral and
    restricted methods are unitary within 1e-10; the closed form is under
    audit and may not be.
    """

    u: np.ndarray
    tau: float
    method: str


def propagate_spectral(params: SystemParams, tau: float) -> SubspacePropagator:
    """Subspace propagator via eigendecomposition (production path)."""
    u = linalg.expm_i_hermitian(subspace_hamiltonian(params), tau)
    return SubspacePropagator(u=u, tau=float(tau), method="spectral")


def propagate_closed_form(
    params: SystemParams, tau: float, mode: str = "corrected"
) -> SubspacePropagator:
    """Subspace propagator from the analytic element formulas.

    Args:
        params: system parameters (roots must be non-degenerate).
        tau: scaled time.
        mode: ``"corrected"`` (default) applies the two documented repairs;
            ``"strict"`` evaluates the formulas verbatim.

    The time-independent term that appears in elements (2,2)/(2,3) is the
    ratio of ``delta * (beta^2 - gamma^2)`` to the product of the three
    roots; when its numerator vanishes (zero detuning) the ratio is
    indeterminate and is taken as 0.

    Raises:
        DegenerateRoots: propagated from the root computation.
        ValueError: on an unknown mode.
    """
    if mode not in CLOSED_FORM_MODES:
        raise ValueError(f"unknown closed-form mode {mode!r}; choose from {CLOSED_FORM_MODES}")
    sq = spectral_quantities(params)
    mu, alpha = sq.mu, sq.alpha
    gamma, beta, delta = sq.gamma, sq.beta, float(params.delta)
    signs = np.array([1.0, -1.0, 1.0])
    weights = signs * alpha
    phases = np.exp(-1j * mu * tau)
    if mode == "strict":
        phases_11 = np.full(3, np.exp(-1j * mu[0] * tau))
        weights_12 = signs.astype(np.complex128)
    else:
        phases_11 = phases
        weights_12 = weights.astype(np.complex128)
    u11 = np.sum(weights * phases_11 * (mu * (delta + mu) - 2.0 * beta**2))
    u12 = gamma * np.sum(weights_12 * phases * (delta + mu))
    u14 = 2.0 * beta * gamma * np.sum(weights * phases)
    numerator = delta * (beta**2 - gamma**2)
    constant = 0.0 if numerator == 0.0 else numerator / float(np.prod(mu))
    with np.errstate(divide="ignore", invalid="ignore"):
        u22 = (
            np.sum(
                (weights / mu)
                * phases
                * ((beta**2 * (delta - mu) - (delta + mu)) * (gamma**2 + mu * (delta - mu)))
            )
            - constant
        )
        u23 = (
            -np.sum((weights / mu) * phases * (beta**2 * (delta - mu) - gamma**2 * (delta + mu)))
            + constant
        )
    u24 = -beta * np.sum(weights * phases * (delta - mu))
    u44 = -np.sum(weights * phases * (2.0 * gamma**2 + mu * (delta - mu)))
    u = np.array(
        [
            [u11, u12, u12, u14],
            [u12, u22, u23, u24],
            [u12, u23, u22, u24],
            [u14, u24, u24, u44],
        ],
        dtype=np.complex128,
    )
    return SubspacePropagator(u=u, tau=float(tau), method="closed_form")


def propagate_full(params: SystemParams, tau: float, initial: np.ndarray) -> np.ndarray:
    """Evolve a joint atoms-plus-field state in the truncated full space.

    Args:
        params: system parameters; ``fock_cutoff`` sets the truncation.
        tau: scaled time.
        initial: normalized joint state, flat length ``4 * field_dim``.

    Returns:
        The evolved joint state.

    Raises:
        NotNormalized: if the initial state is not normalized within 1e-10.
        TruncationLeak: if the evolved state has amplitude above
            ``TRUNCATION_TOL`` on the top two retained Fock levels.
    """
    initial = np.asarray(initial, dtype=np.complex128)
    expected = 4 * params.field_dim
    if initial.shape != (expected,):
        raise ValueError(
            f"expected a flat joint state of length {expected}, got shape {initial.shape}"
        )
    norm_sq = float(np.sum(np.abs(initial) ** 2))
    if abs(norm_sq - 1.0) >= linalg.NORMALIZATION_TOL:
        raise NotNormalized(f"initial joint state squared norm {norm_sq!r} deviates from 1")
    u_full = linalg.expm_i_hermitian(full_hamiltonian(params), tau)
    evolved = u_full @ initial
    _check_truncation(evolved, params)
    return evolved


def _check_truncation(psi: np.ndarray, params: SystemParams) -> None:
    """Raise :class:`TruncationLeak` if the top two Fock levels are populated."""
    amplitudes = psi.reshape(4, params.field_dim)
    top_amplitude = float(np.max(np.abs(amplitudes[:, -2:])))
    if top_amplitude >= TRUNCATION_TOL:
        raise TruncationLeak(
            f"amplitude {top_amplitude:.3e} on the top two Fock levels exceeds "
            f"{TRUNCATION_TOL:.0e}; raise fock_cutoff"
        )


def propagate_full_restricted(params: SystemParams, tau: float) -> SubspacePropagator:
    """Full-space propagator restricted to the invariant-subspace basis.

    Used as an independent oracle for the subspace methods.
    """
    u_full = linalg.expm_i_hermitian(full_hamiltonian(params), tau)
    idx = list(subspace_joint_indices(params))
    u = u_full[np.ix_(idx, idx)]
    return SubspacePropagator(u=u, tau=float(tau), method="full_space_restricted")


@dataclass(frozen=True)
class ElementModeResult:
    """Audit outcome for one element under one closed-form mode."""

    max_deviation: float
    verdict: str


@dataclass(frozen=True)
class ElementAudit:
    """Per-element audit results keyed by closed-form mode."""

    element: str
    results: Mapping[str, ElementModeResult]


@dataclass(frozen=True)
class AuditReport:
    """Element-wise comparison of the closed form against the spectral oracle.

    ``elements`` holds one entry per matrix element (16 in total), each with
    the maximum deviation over ``tau_grid`` and a match/mismatch verdict for
    every audited mode.  ``findings`` collects free-text observations such as
    the identity-at-zero check.
    """

    delta: float
    n_photon: int
    fock_cutoff: int
    tau_grid: tuple[float, ...]
    modes: tuple[str, ...]
    tolerance: float
    elements: tuple[ElementAudit, ...]
    findings: tuple[str, ...]

    def to_json_dict(self) -> dict:
        """Machine-readable representation (JSON-safe values only)."""

        def _safe(value: float) -> float | str:
            return value if np.isfinite(value) else "inf"

        return {
            "delta": self.delta,
            "n_photon": self.n_photon,
            "fock_cutoff": self.fock_cutoff,
            "tau_grid": list(self.tau_grid),
            "modes": list(self.modes),
            "tolerance": self.tolerance,
            "elements": [
                {
                    "element": entry.element,
                    **{
                        mode: {
                            "max_deviation": _safe(result.max_deviation),
                            "verdict": result.verdict,
                        }
                        for mode, result in entry.results.items()
                    },
                }
                for entry in self.elements
            ],
            "findings": list(self.findings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        """Plain-text table of the audit results."""
        lines = [
            f"closed-form audit: delta={self.delta!r}, n_photon={self.n_photon}, "
            f"fock_cutoff={self.fock_cutoff}",
            f"tau grid: {len(self.tau_grid)} points in "
            f"[{min(self.tau_grid)!r}, {max(self.tau_grid)!r}]; "
            f"mismatch above {self.tolerance:.0e}",
            "",
        ]
        header = ["element"]
        for mode in self.modes:
            header += [f"{mode}_max_dev", f"{mode}_verdict"]
        rows = [header]
        for entry in self.elements:
            row = [entry.element]
            for mode in self.modes:
                result = entry.results[mode]
                row += [f"{result.max_deviation:.3e}", result.verdict]
            rows.append(row)
        widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
        for row in rows:
            lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)))
        if self.findings:
            lines.append("")
            lines.append("findings:")
            for finding in self.findings:
                lines.append(f"- {finding}")
        return "\n".join(lines) + "\n"


def audit_closed_form(
    params: SystemParams,
    tau_grid: Sequence[float],
    modes: Sequence[str] = CLOSED_FORM_MODES,
) -> AuditReport:
    """Audit the closed-form propagator against the spectral oracle.

    For every requested mode and every grid time, both propagators are
    evaluated and the element-wise absolute deviation recorded; each of the
    16 elements receives its maximum deviation and a verdict (``match`` when
    the deviation stays at or below ``AUDIT_TOL``).  Non-finite deviations
    are normalized to infinity and flagged as mismatches.

    Raises:
        DegenerateRoots: propagated from the closed form.
        ValueError: on an empty grid or unknown mode.
    """
    tau_values = [float(tau) for tau in tau_grid]
    if not tau_values:
        raise ValueError("tau_grid must contain at least one time")
    modes = tuple(modes)
    for mode in modes:
        if mode not in CLOSED_FORM_MODES:
            raise ValueError(f"unknown closed-form mode {mode!r}")
    deviations = {mode: np.zeros((4, 4)) for mode in modes}
    zero_snapshots: dict[str, np.ndarray] = {}
    for tau in tau_values:
        reference = propagate_spectral(params, tau).u
        for mode in modes:
            closed = propagate_closed_form(params, tau, mode=mode).u
            delta_elements = np.abs(closed - reference)
            delta_elements[~np.isfinite(delta_elements)] = np.inf
            deviations[mode] = np.maximum(deviations[mode], delta_elements)
            if tau == 0.0:
                zero_snapshots[mode] = closed
    elements = []
    for flat_index, element_id in enumerate(ELEMENT_IDS):
        row, col = divmod(flat_index, 4)
        results = {}
        for mode in modes:
            deviation = float(deviations[mode][row, col])
            verdict = "match" if deviation <= AUDIT_TOL else "mismatch"
            results[mode] = ElementModeResult(max_deviation=deviation, verdict=verdict)
        elements.append(ElementAudit(element=element_id, results=results))
    findings = [
        "elements u22/u23 (and their symmetric copies u33/u32) carry a "
        "time-independent term: delta*(beta^2-gamma^2) divided by the product "
        "of the three roots. For nonzero detuning that ratio equals -1/2 "
        "because the root product is minus twice the detuning; at zero "
        "detuning its numerator vanishes and it is evaluated as 0, with the "
        "near-zero root's own term supplying the constant instead."
    ]
    for mode, closed_zero in zero_snapshots.items():
        identity_defect = np.abs(closed_zero - np.eye(4))
        worst = float(np.max(identity_defect))
        offenders = [
            ELEMENT_IDS[r * 4 + c]
            for r in range(4)
            for c in range(4)
            if identity_defect[r, c] > AUDIT_TOL
        ]
        if offenders:
            findings.append(
                f"identity check at tau=0 ({mode} mode): closed form deviates from "
                f"the identity by up to {worst:.3e}; offending elements: "
                f"{', '.join(offenders)}. The u22/u33 defect persists in both modes: "
                "the bracket structure of the u22 formula cannot be repaired by "
                "its constant term alone."
            )
        else:
            findings.append(
                f"identity check at tau=0 ({mode} mode): closed form reproduces the "
                "identity within tolerance."
            )
    return AuditReport(
        delta=float(params.delta),
        n_photon=params.n_photon,
        fock_cutoff=params.fock_cutoff,
        tau_grid=tuple(tau_values),
        modes=modes,
        tolerance=AUDIT_TOL,
        elements=tuple(elements),
        findings=tuple(findings),
    )
