"""Acceptance suite: one test per release criterion, in order.

Each test states its tolerance inline and fails with the measured values in
the assertion message.  Criteria 6 and 8 encode qualitative expectations
about entanglement lifetimes that the simulated dynamics do not reproduce;
they are implemented exactly as stated and are expected to fail.  The
blocking analysis lives in the reviewer notes outside the package.
"""
from __future__ import annotations

import json

import numpy as np
import pytest

from twoatomcavity import cli
from twoatomcavity.dynamics import (
    first_negativity_zero,
    midline_crossing_count,
    time_series,
)
from twoatomcavity.entanglement import negativity
from twoatomcavity.model import (
    SystemParams,
    named_atomic_state,
    spectral_quantities,
)
from twoatomcavity.propagator import (
    audit_closed_form,
    propagate_full_restricted,
    propagate_spectral,
)

from oracles import (
    brute_negativity,
    random_local_unitary,
    random_product_atomic_state,
    werner_state,
)

DELTA_GRID = (0.0, 0.1, 0.5, 1.0)
N_GRID = (0, 1, 3)
TAU_GRID = tuple(np.arange(0.0, 10.25, 0.5))  # 0, 0.5, ..., 10
WINDOW = 10.0
STEPS = 1001


def pure_rho(vector) -> np.ndarray:
    vector = np.asarray(vector, dtype=np.complex128)
    return np.outer(vector, vector.conj())


def series(delta: float, n: int, initial: str):
    return time_series(
        SystemParams(delta=delta, n_photon=n), named_atomic_state(initial), WINDOW, STEPS
    )


def is_stationary(records) -> bool:
    base = np.array(records[0].populations + (records[0].negativity,))
    worst = max(
        float(np.max(np.abs(np.array(r.populations + (r.negativity,)) - base)))
        for r in records
    )
    return worst < 1e-9


def test_criterion_01_unitarity_and_oracle_equivalence():
    """Spectral propagator is unitary to 1e-10 and matches the full-space
    restriction to 1e-9 per element across the parameter/time grid."""
    worst_unitarity = 0.0
    worst_agreement = 0.0
    for delta in DELTA_GRID:
        for n in N_GRID:
            params = SystemParams(delta=delta, n_photon=n)
            for tau in TAU_GRID:
                u = propagate_spectral(params, tau).u
                defect = float(np.max(np.abs(u.conj().T @ u - np.eye(4))))
                worst_unitarity = max(worst_unitarity, defect)
                restricted = propagate_full_restricted(params, tau).u
                gap = float(np.max(np.abs(u - restricted)))
                worst_agreement = max(worst_agreement, gap)
    assert worst_unitarity < 1e-10, f"worst unitarity defect {worst_unitarity:.3e}"
    assert worst_agreement < 1e-9, f"worst oracle disagreement {worst_agreement:.3e}"


def test_criterion_02_characteristic_cubic_consistency():
    """Roots satisfy the depressed cubic and its root-sum/product relations
    within 1e-9 across the parameter grid."""
    worst = 0.0
    for delta in DELTA_GRID:
        for n in N_GRID:
            sq = spectral_quantities(SystemParams(delta=delta, n_photon=n))
            linear = delta**2 + 2.0 * sq.gamma**2 + 2.0 * sq.beta**2
            for mu in sq.mu:
                worst = max(worst, abs(mu**3 - linear * mu + 2.0 * delta))
            worst = max(worst, abs(float(np.sum(sq.mu))))
            worst = max(worst, abs(float(np.prod(sq.mu)) + 2.0 * delta))
    assert worst < 1e-9, f"worst cubic/root-relation residual {worst:.3e}"


def test_criterion_03_negativity_ground_truths(rng):
    """Product states 0 (<=1e-12); singlet 1 (+-1e-10); half-weight Werner
    mixture 1/4 (+-1e-9 against the brute-force oracle); invariance under
    100 random local unitaries within 1e-9."""
    for _ in range(10):
        value = negativity(pure_rho(random_product_atomic_state(rng))).value
        assert abs(value) <= 1e-12, f"product state negativity {value:.3e}"
    for name in ("ee", "eg", "ge", "gg"):
        value = negativity(pure_rho(named_atomic_state(name))).value
        assert abs(value) <= 1e-12, f"{name} negativity {value:.3e}"

    singlet_rho = pure_rho(named_atomic_state("singlet"))
    singlet_value = negativity(singlet_rho).value
    assert abs(singlet_value - 1.0) <= 1e-10, f"singlet negativity {singlet_value!r}"

    werner = werner_state(0.5)
    werner_value = negativity(werner).value
    assert abs(werner_value - 0.25) <= 1e-9, f"Werner negativity {werner_value!r}"
    oracle_value = brute_negativity(werner)
    assert abs(werner_value - oracle_value) <= 1e-9, (
        f"production {werner_value!r} vs brute-force oracle {oracle_value!r}"
    )

    references = (singlet_rho, werner)
    reference_values = tuple(negativity(rho).value for rho in references)
    for index in range(100):
        u = random_local_unitary(rng)
        rho = references[index % 2]
        rotated_value = negativity(u @ rho @ u.conj().T).value
        gap = abs(rotated_value - reference_values[index % 2])
        assert gap <= 1e-9, f"local-unitary drift {gap:.3e} at draw {index}"


@pytest.mark.parametrize("m", (0, 3))
def test_criterion_04_dark_state_conservation(m):
    """Antisymmetric pair with m photons: populations and negativity constant
    to 1e-9 over the full window."""
    records = time_series(
        SystemParams(delta=0.5, n_photon=m), named_atomic_state("singlet"), WINDOW, 101
    )
    base = np.array(records[0].populations + (records[0].negativity,))
    worst = max(
        float(np.max(np.abs(np.array(r.populations + (r.negativity,)) - base)))
        for r in records
    )
    assert worst < 1e-9, f"dark-state drift {worst:.3e} at m={m}"
    assert records[0].negativity == pytest.approx(1.0, abs=1e-10)


def test_criterion_05_periodicity_and_exact_initial_negativity():
    """Resonant no-photon revival: return fidelity above 1 - 1e-8 at
    tau = 2*pi/sqrt(6), and the initial negativity is exactly zero."""
    params = SystemParams(delta=0.0, n_photon=0)
    revival_tau = 2.0 * np.pi / np.sqrt(6.0)
    from twoatomcavity.dynamics import evolve_reduced

    rho = evolve_reduced(params, named_atomic_state("ee"), revival_tau)
    fidelity = float(np.real(rho[0, 0]))
    assert fidelity > 1.0 - 1e-8, f"revival fidelity {fidelity!r}"

    records = time_series(params, named_atomic_state("ee"), WINDOW, 11)
    assert records[0].negativity == 0.0, (
        f"initial negativity {records[0].negativity!r} is not exactly zero"
    )


def test_criterion_06_entanglement_lifetime_windows():
    """For the no-photon doubly excited start there must exist a detuning in
    {0.1, 1} whose first negativity zero falls in [0.6, 1.0], with the
    ground-pair start vanishing at 1.5x-2.5x that time (evaluated at the
    smallest photon number with ground-pair dynamics when n=0 is
    stationary).  Expected to fail: measured first zeros miss the window at
    both detunings."""
    evidence = []
    satisfied = False
    for delta in (0.1, 1.0):
        ee_zero = first_negativity_zero(series(delta, 0, "ee"))

        gg_n = 0
        gg_records = series(delta, gg_n, "gg")
        note = ""
        if is_stationary(gg_records):
            for candidate in (1, 2, 3):
                gg_records = series(delta, candidate, "gg")
                if not is_stationary(gg_records):
                    gg_n = candidate
                    break
            note = f" (ground pair stationary at n=0; evaluated at n={gg_n})"
        gg_zero = first_negativity_zero(gg_records)

        ratio = None
        if ee_zero is not None and gg_zero is not None:
            ratio = gg_zero / ee_zero
        in_window = ee_zero is not None and 0.6 <= ee_zero <= 1.0
        ratio_ok = ratio is not None and 1.5 <= ratio <= 2.5
        satisfied = satisfied or (in_window and ratio_ok)
        evidence.append(
            f"delta={delta}: ee first zero={ee_zero}, gg first zero={gg_zero}"
            f"{note}, ratio={ratio}"
        )
    assert satisfied, (
        "no detuning reproduces the expected lifetime window "
        "[0.6, 1.0] with ground/excited ratio in [1.5, 2.5]; measured: "
        + "; ".join(evidence)
    )


def test_criterion_07_photon_number_increases_oscillations():
    """At delta=0.5 the doubly excited population oscillates strictly more
    often with three photons than with none (crossings of the 1/2 midline
    over the window)."""
    slow = midline_crossing_count(r.p_ee for r in series(0.5, 0, "ee"))
    fast = midline_crossing_count(r.p_ee for r in series(0.5, 3, "ee"))
    assert fast > slow, f"oscillation counts: n=3 gives {fast}, n=0 gives {slow}"


def test_criterion_08_detuning_extends_entanglement_lifetime():
    """Sweeping delta over 10 points in [0.1, 1.0] (doubly excited start,
    no photons), the first-zero column must be non-decreasing (no-zero
    treated as unbounded) and end at the no-zero sentinel.  Expected to
    fail: the measured column is non-monotonic and ends finite."""
    first_zeros = []
    for delta in np.linspace(0.1, 1.0, 10):
        zero = first_negativity_zero(series(float(delta), 0, "ee"))
        first_zeros.append(np.inf if zero is None else zero)
    column = ", ".join(
        "none" if not np.isfinite(z) else f"{z:.4f}" for z in first_zeros
    )
    non_decreasing = all(
        later >= earlier - 1e-9 for earlier, later in zip(first_zeros, first_zeros[1:])
    )
    ends_at_sentinel = not np.isfinite(first_zeros[-1])
    assert non_decreasing and ends_at_sentinel, (
        f"first-zero column across delta in [0.1, 1.0]: [{column}]; "
        f"non-decreasing={non_decreasing}, ends at no-zero sentinel={ends_at_sentinel}"
    )


def test_criterion_09_audit_deliverable(tmp_path):
    """The audit at delta=0.5, n=0 reports all 16 elements; corrected-mode
    u12/u13/u14 match within 1e-8; strict-mode u11 is flagged; the
    time-independent-term finding for u22/u23 is recorded."""
    out = tmp_path / "audit.json"
    code = cli.main(["--mode", "audit", "--delta", "0.5", "--n-photon", "0",
                     "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert len(payload["elements"]) == 16

    report = audit_closed_form(
        SystemParams(delta=0.5, n_photon=0), cli.AUDIT_TAU_GRID
    )
    by_name = {entry.element: entry for entry in report.elements}
    for element_id in ("u12", "u13", "u14"):
        deviation = by_name[element_id].results["corrected"].max_deviation
        assert deviation < 1e-8, f"{element_id} corrected deviation {deviation:.3e}"
    assert by_name["u11"].results["strict"].verdict == "mismatch"
    findings_text = "\n".join(report.findings)
    assert "u22" in findings_text and "time-independent term" in findings_text


def test_criterion_10_byte_identical_reruns(tmp_path):
    """Re-running each command class produces byte-identical output files."""
    commands = {
        "series": ["--mode", "series", "--delta", "1.0", "--n-photon", "0",
                   "--initial", "ee", "--steps", "1001"],
        "sweep": ["--sweep", "delta:0.1:1.0:10", "--initial", "ee",
                  "--n-photon", "0", "--steps", "301"],
        "audit": ["--mode", "audit", "--delta", "0.5"],
    }
    for label, args in commands.items():
        first = tmp_path / f"{label}_1.out"
        second = tmp_path / f"{label}_2.out"
        assert cli.main(args + ["--output", str(first)]) == 0
        assert cli.main(args + ["--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes(), f"{label} output differs"
