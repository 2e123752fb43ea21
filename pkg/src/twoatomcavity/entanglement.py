"""Entanglement degree and instantaneous state classification.

The entanglement degree is the sum of absolute partial-transpose eigenvalues
minus one: zero for separable two-qubit states and one for maximally
entangled ones.  The classifier matches the dominant eigenvector of the
reduced state against a small family of entangled-state templates; it is
deliberately coarse (the templates describe qualitative state shapes), and
all of its thresholds are exposed as keyword arguments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NotNormalized

#: Trace tolerance for density-matrix inputs.
TRACE_TOL = 1e-10

#: Below this entanglement degree a state is reported as separable.
SEPARABLE_THRESHOLD = 0.01

#: Dominant-eigenvalue share required before template fitting is attempted.
PURITY_THRESHOLD = 0.9

#: Largest fit residual accepted as a template match.
RESIDUAL_THRESHOLD = 0.05

#: Smallest post-normalization coefficient that counts as "used".
COEFFICIENT_FLOOR = 0.05

#: Class labels, in the fixed order used for tie-breaking.
CLASS_LABELS = (
    "separable",
    "psi1_bell_like",
    "psi2",
    "psi3_werner_like",
    "psi4",
    "psi5",
    "mixed_unclassified",
)


@dataclass(frozen=True)
class NegativityResult:
    """Entanglement degree plus the partial-transpose spectrum behind it."""

    value: float
    pt_eigenvalues: np.ndarray


@dataclass(frozen=True)
class ClassMatch:
    """Classifier outcome: label, fit quality, and fitted coefficients."""

    label: str
    fidelity: float
    template_params: dict[str, float]


def _validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    trace = float(np.real(np.trace(rho)))
    if abs(trace - 1.0) >= TRACE_TOL:
        raise NotNormalized(f"density matrix trace {trace!r} deviates from 1")
    return rho


def negativity(rho: np.ndarray) -> NegativityResult:
    """Entanglement degree of a two-atom density matrix.

    Computes the eigenvalues of the partial transpose over the second atom
    and returns ``sum(|eigenvalues|) - 1``.  No rounding or snapping is
    applied; separable states land within round-off of zero.
    """
    rho = _validate_density_matrix(rho)
    pt_eigenvalues = linalg.eig_hermitian(linalg.partial_transpose(rho)).eigenvalues
    value = float(np.sum(np.abs(pt_eigenvalues)) - 1.0)
    return NegativityResult(value=value, pt_eigenvalues=pt_eigenvalues)


@dataclass(frozen=True)
class _Template:
    """One entangled-state shape: an orthonormal real basis plus metadata.

    ``scale`` converts fitted basis coefficients into the template's named
    coefficients (the basis vectors are normalized, the template's written
    form is not).  ``constraint`` encodes which coefficients must be
    genuinely used for the template to claim a state: ``all`` requires every
    one above the floor, ``any_first_two`` requires at least one of the
    first two.
    """

    label: str
    coefficient_names: tuple[str, ...]
    basis: np.ndarray
    scale: np.ndarray
    constraint: str


def _build_templates() -> tuple[_Template, ...]:
    sq2 = np.sqrt(2.0)
    sq3 = np.sqrt(3.0)
    sym_eg_ge = np.array([0.0, 1.0, 1.0, 0.0]) / sq2
    ee_plus_gg = np.array([1.0, 0.0, 0.0, 1.0]) / sq2
    return (
        _Template(
            label="psi1_bell_like",
            coefficient_names=("mu",),
            basis=np.array([sym_eg_ge]),
            scale=np.array([sq2]),
            constraint="none",
        ),
        _Template(
            label="psi2",
            coefficient_names=("mu1",),
            basis=np.array([np.array([1.0, 1.0, 1.0, 0.0]) / sq3]),
            scale=np.array([sq3]),
            constraint="none",
        ),
        _Template(
            label="psi3_werner_like",
            coefficient_names=("eta", "zeta"),
            basis=np.array([ee_plus_gg, [0.0, 1.0, 0.0, 0.0]]),
            scale=np.array([sq2, 1.0]),
            constraint="all",
        ),
        _Template(
            label="psi4",
            coefficient_names=("mu2", "nu"),
            basis=np.array([ee_plus_gg, sym_eg_ge]),
            scale=np.array([sq2, sq2]),
            constraint="all",
        ),
        _Template(
            label="psi5",
            coefficient_names=("chi1", "chi2", "chi3"),
            basis=np.array(
                [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], sym_eg_ge]
            ),
            scale=np.array([1.0, 1.0, sq2]),
            constraint="any_first_two",
        ),
    )


_TEMPLATES = _build_templates()


def _fit_template(state: np.ndarray, template: _Template) -> tuple[float, np.ndarray]:
    """Best real-coefficient fit of ``state`` to a template, up to global phase.

    With orthonormal real basis vectors ``v_i`` and projections
    ``p_i = <v_i|state>``, the squared overlap maximized over a global phase
    and real coefficients is ``(sum|p_i|^2 + |sum p_i^2|) / 2``; the optimal
    phase is ``-arg(sum p_i^2) / 2``.  Requiring real coefficients is what
    distinguishes the templates from their complex spans.

    Returns:
        (fidelity, named coefficients post-normalization).
    """
    projections = template.basis @ state
    power = float(np.sum(np.abs(projections) ** 2))
    phase_sum = complex(np.sum(projections**2))
    fidelity = 0.5 * (power + abs(phase_sum))
    fidelity = float(min(max(fidelity, 0.0), 1.0))
    phase = 0.0 if abs(phase_sum) < 1e-30 else -0.5 * np.angle(phase_sum)
    coefficients = np.real(np.exp(1j * phase) * projections)
    if coefficients[int(np.argmax(np.abs(coefficients)))] < 0.0:
        coefficients = -coefficients
    return fidelity, coefficients / template.scale


def _constraint_satisfied(template: _Template, coefficients: np.ndarray, floor: float) -> bool:
    magnitudes = np.abs(coefficients)
    if template.constraint == "all":
        return bool(np.all(magnitudes >= floor))
    if template.constraint == "any_first_two":
        return bool(np.max(magnitudes[:2]) >= floor)
    return True


def classify(
    rho: np.ndarray,
    *,
    separable_threshold: float = SEPARABLE_THRESHOLD,
    purity_threshold: float = PURITY_THRESHOLD,
    residual_threshold: float = RESIDUAL_THRESHOLD,
    coefficient_floor: float = COEFFICIENT_FLOOR,
) -> ClassMatch:
    """Classify the instantaneous two-atom state.

    Decision order:

    1. entanglement degree below ``separable_threshold`` -> ``separable``;
    2. dominant eigenvalue of the state below ``purity_threshold`` ->
       ``mixed_unclassified`` (too mixed to read a template off);
    3. otherwise fit the dominant eigenvector to each template in the fixed
       label order; the first template with fit residual below
       ``residual_threshold`` whose distinguishing coefficients clear
       ``coefficient_floor`` wins;
    4. no template fits -> ``mixed_unclassified``.

    The template family is nested (later templates generalize earlier ones),
    so the fixed order plus the coefficient floor is what makes the outcome
    deterministic: a state only reaches a general template after the more
    specific ones have declined it.
    """
    rho = _validate_density_matrix(rho)
    degree = negativity(rho).value
    if degree < separable_threshold:
        return ClassMatch(label="separable", fidelity=0.0, template_params={})
    system = linalg.eig_hermitian(rho)
    dominant_value = float(system.eigenvalues[-1])
    if dominant_value < purity_threshold:
        return ClassMatch(label="mixed_unclassified", fidelity=0.0, template_params={})
    state = system.eigenvectors[:, -1]
    best_fidelity = 0.0
    for template in _TEMPLATES:
        fidelity, coefficients = _fit_template(state, template)
        best_fidelity = max(best_fidelity, fidelity)
        residual = float(np.sqrt(max(0.0, 1.0 - fidelity)))
        if residual < residual_threshold and _constraint_satisfied(
            template, coefficients, coefficient_floor
        ):
            named = {
                name: float(value)
                for name, value in zip(template.coefficient_names, coefficients)
            }
            return ClassMatch(label=template.label, fidelity=fidelity, template_params=named)
    return ClassMatch(label="mixed_unclassified", fidelity=best_fidelity, template_params={})
