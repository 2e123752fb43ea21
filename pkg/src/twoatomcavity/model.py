"""Physical model: parameters, initial states, and Hamiltonians.

Two identical two-level atoms couple to a single cavity mode prepared with a
definite photon number.  Working in the interaction picture and measuring
time in units of the atom-field coupling, a single dimensionless detuning
``delta`` and the initial photon number ``n_photon`` fix the dynamics.

Atomic basis order is (|ee>, |eg>, |ge>, |gg>) throughout; the field basis is
ascending photon number.  Joint states are stored atomic-index major, i.e.
flat index ``j * (fock_cutoff + 1) + m`` for atomic index ``j`` and photon
number ``m``.

Starting from |ee, n>, the excitation-conserving interaction only reaches the
four joint states |ee, n>, |eg, n+1>, |ge, n+1>, |gg, n+2>.  On that invariant
subspace the Hamiltonian is a real symmetric 4x4 matrix whose nonzero
structure is captured by the couplings ``gamma = sqrt(n+1)`` (first emission)
and ``beta = sqrt(n+2)`` (second emission).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CutoffTooSmall, DegenerateRoots, DomainError, NotNormalized

#: Tolerance for per-atom amplitude normalization.
AMPLITUDE_TOL = 1e-12

#: Minimum root separation below which closed-form weights are refused.
DEGENERACY_TOL = 1e-9

#: Allowed round-off overshoot of the inverse-cosine argument past +-1.
ARCCOS_OVERSHOOT_TOL = 1e-12

#: Smallest admissible cutoff margin above ``n_photon``.
MIN_CUTOFF_MARGIN = 4

#: Default cutoff margin above ``n_photon``.
DEFAULT_CUTOFF_MARGIN = 6


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless parameters of the atoms-plus-cavity system.

    Attributes:
        delta: detuning in units of the coupling.
        n_photon: initial photon number of the cavity mode.
        coupling: atom-field coupling; fixed to 1 by the time scaling
            ``tau = coupling * t`` and kept only to make the scaling explicit.
        fock_cutoff: highest photon number retained in the truncated field
            space; defaults to ``n_photon + 6``.
    """

    delta: float
    n_photon: int
    coupling: float = 1.0
    fock_cutoff: int = field(default=-1)

    def __post_init__(self) -> None:
        if not np.isfinite(self.delta):
            raise ValueError("delta must be finite")
        if int(self.n_photon) != self.n_photon or self.n_photon < 0:
            raise ValueError(f"n_photon must be a non-negative integer, got {self.n_photon!r}")
        if not (self.coupling > 0):
            raise ValueError(f"coupling must be positive, got {self.coupling!r}")
        if self.fock_cutoff == -1:
            object.__setattr__(self, "fock_cutoff", self.n_photon + DEFAULT_CUTOFF_MARGIN)
        if self.fock_cutoff < self.n_photon + MIN_CUTOFF_MARGIN:
            raise CutoffTooSmall(
                f"fock_cutoff={self.fock_cutoff} cannot hold the two-excitation ladder; "
                f"need at least n_photon + {MIN_CUTOFF_MARGIN} = {self.n_photon + MIN_CUTOFF_MARGIN}"
            )

    @property
    def field_dim(self) -> int:
        """Number of retained Fock levels (photon numbers 0..fock_cutoff)."""
        return self.fock_cutoff + 1


@dataclass(frozen=True)
class TwoAtomAmplitudes:
    """Product initial state of the two atoms.

    Atom ``i`` starts in ``a_i |ground> + b_i |excited>`` with
    ``|a_i|^2 + |b_i|^2 = 1``.
    """

    a1: complex
    b1: complex
    a2: complex
    b2: complex

    def __post_init__(self) -> None:
        for label, a, b in (("atom 1", self.a1, self.b1), ("atom 2", self.a2, self.b2)):
            norm_sq = abs(a) ** 2 + abs(b) ** 2
            if abs(norm_sq - 1.0) >= AMPLITUDE_TOL:
                raise NotNormalized(
                    f"{label} amplitudes have squared norm {norm_sq!r}, "
                    f"expected 1 within {AMPLITUDE_TOL:.0e}"
                )

    def atomic_vector(self) -> np.ndarray:
        """Amplitudes on (|ee>, |eg>, |ge>, |gg>) of the product state."""
        return np.array(
            [
                self.b1 * self.b2,
                self.b1 * self.a2,
                self.a1 * self.b2,
                self.a1 * self.a2,
            ],
            dtype=np.complex128,
        )


#: Named atomic states accepted across the library and the CLI.
ATOMIC_STATE_NAMES = ("ee", "eg", "ge", "gg", "singlet")


def named_atomic_state(name: str) -> np.ndarray:
    """Return the 4-vector for a named atomic state.

    ``ee``, ``eg``, ``ge``, ``gg`` are the basis states; ``singlet`` is the
    antisymmetric combination ``(|eg> - |ge>)/sqrt(2)``, which decouples from
    the field because the two (identical) couplings cancel.
    """
    vectors = {
        "ee": (1.0, 0.0, 0.0, 0.0),
        "eg": (0.0, 1.0, 0.0, 0.0),
        "ge": (0.0, 0.0, 1.0, 0.0),
        "gg": (0.0, 0.0, 0.0, 1.0),
        "singlet": (0.0, 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0), 0.0),
    }
    if name not in vectors:
        raise ValueError(f"unknown atomic state {name!r}; choose from {ATOMIC_STATE_NAMES}")
    return np.array(vectors[name], dtype=np.complex128)


@dataclass(frozen=True)
class SpectralQuantities:
    """Ingredients of the closed-form propagator on the invariant subspace.

    Attributes:
        gamma: first-emission coupling ``sqrt(n + 1)``.
        beta: second-emission coupling ``sqrt(n + 2)``.
        kappa: scale factor ``sqrt(3 * (delta^2 + 2 * (beta^2 + gamma^2)))``.
        theta: the three angles whose cosines generate the roots; spaced by
            ``2*pi/3``.
        mu: the three nonzero subspace eigenvalues, ``(2/3) * kappa * cos(theta_i)``.
        alpha: partial-fraction weights ``1 / (mu_diff * mu_diff)`` products.
        mu_diffs: antisymmetric 3x3 array of root differences
            ``mu[k] - mu[j]``.
    """

    gamma: float
    beta: float
    kappa: float
    theta: np.ndarray
    mu: np.ndarray
    alpha: np.ndarray
    mu_diffs: np.ndarray


def _clamped_arccos_argument(x: float) -> float:
    """Clamp ``x`` into [-1, 1] when the overshoot is pure round-off.

    Raises:
        DomainError: if ``|x|`` exceeds ``1 + ARCCOS_OVERSHOOT_TOL``.
    """
    if abs(x) > 1.0 + ARCCOS_OVERSHOOT_TOL:
        raise DomainError(
            f"inverse-cosine argument {x!r} lies outside [-1, 1] beyond round-off"
        )
    return min(1.0, max(-1.0, x))


def _check_root_gaps(mu: np.ndarray) -> None:
    """Raise :class:`DegenerateRoots` when two roots nearly coincide."""
    gaps = [abs(mu[k] - mu[j]) for k in range(3) for j in range(k + 1, 3)]
    smallest = min(gaps)
    if smallest < DEGENERACY_TOL:
        raise DegenerateRoots(
            f"smallest root separation {smallest:.3e} is below {DEGENERACY_TOL:.0e}; "
            "use the spectral propagator instead of the closed form"
        )


def spectral_quantities(params: SystemParams) -> SpectralQuantities:
    """Compute couplings, roots, and closed-form weights for ``params``.

    The three nonzero subspace eigenvalues are the roots of the depressed
    cubic ``mu^3 - (delta^2 + 2*gamma^2 + 2*beta^2) * mu + 2*delta = 0``,
    obtained here in trigonometric form.

    Raises:
        DomainError: if the inverse-cosine argument leaves [-1, 1] beyond
            round-off (does not occur for real parameters; kept as a guard).
        DegenerateRoots: if two roots are closer than ``DEGENERACY_TOL``.
    """
    gamma = float(np.sqrt(params.n_photon + 1.0))
    beta = float(np.sqrt(params.n_photon + 2.0))
    delta = float(params.delta)
    kappa = float(np.sqrt(3.0 * (delta**2 + 2.0 * (beta**2 + gamma**2))))
    argument = _clamped_arccos_argument(-27.0 * delta / kappa**3)
    theta1 = np.arccos(argument) / 3.0
    theta = np.array([theta1, theta1 + 2.0 * np.pi / 3.0, theta1 + 4.0 * np.pi / 3.0])
    mu = (2.0 / 3.0) * kappa * np.cos(theta)
    _check_root_gaps(mu)
    diffs = mu[:, None] - mu[None, :]
    alpha = np.array(
        [
            1.0 / (diffs[0, 1] * diffs[0, 2]),
            1.0 / (diffs[0, 1] * diffs[1, 2]),
            1.0 / (diffs[0, 2] * diffs[1, 2]),
        ]
    )
    return SpectralQuantities(
        gamma=gamma,
        beta=beta,
        kappa=kappa,
        theta=theta,
        mu=mu,
        alpha=alpha,
        mu_diffs=diffs,
    )


def subspace_hamiltonian(params: SystemParams) -> np.ndarray:
    """Interaction-picture Hamiltonian on the invariant subspace.

    Basis order (|ee,n>, |eg,n+1>, |ge,n+1>, |gg,n+2>), units of the
    coupling.  The detuning splits symmetrically as ``diag(+delta, 0, 0,
    -delta)``; the off-diagonals are the emission couplings ``gamma`` and
    ``beta``.
    """
    gamma = np.sqrt(params.n_photon + 1.0)
    beta = np.sqrt(params.n_photon + 2.0)
    delta = params.delta
    return np.array(
        [
            [delta, gamma, gamma, 0.0],
            [gamma, 0.0, 0.0, beta],
            [gamma, 0.0, 0.0, beta],
            [0.0, beta, beta, -delta],
        ],
        dtype=np.complex128,
    )


def full_hamiltonian(params: SystemParams) -> np.ndarray:
    """Interaction-picture Hamiltonian on the truncated atoms-plus-field space.

    The detuning term is ``delta * (P_e1 + P_e2 - 1)`` tensored with the field
    identity; each atom contributes excitation-conserving exchange terms
    ``sqrt(m+1) * (|g, m+1><e, m| + h.c.)``.  Restricted to the invariant
    subspace of |ee, n> this reproduces :func:`subspace_hamiltonian` exactly.

    Raises:
        CutoffTooSmall: if the cutoff cannot hold the two-excitation ladder.
    """
    if params.fock_cutoff < params.n_photon + MIN_CUTOFF_MARGIN:
        raise CutoffTooSmall(
            f"fock_cutoff={params.fock_cutoff} is below n_photon + {MIN_CUTOFF_MARGIN}"
        )
    m_dim = params.field_dim
    identity_field = np.eye(m_dim)
    # Atomic operators in basis (ee, eg, ge, gg): lowering operator per atom.
    lower_1 = np.zeros((4, 4))
    lower_1[2, 0] = 1.0  # |ge><ee|
    lower_1[3, 1] = 1.0  # |gg><eg|
    lower_2 = np.zeros((4, 4))
    lower_2[1, 0] = 1.0  # |eg><ee|
    lower_2[3, 2] = 1.0  # |gg><ge|
    excited_split = np.diag([1.0, 0.0, 0.0, -1.0])
    creation = np.diag(np.sqrt(np.arange(1.0, m_dim)), -1)
    annihilation = creation.T
    hamiltonian = params.delta * np.kron(excited_split, identity_field)
    for lower in (lower_1, lower_2):
        hamiltonian += np.kron(lower, creation) + np.kron(lower.T, annihilation)
    return hamiltonian.astype(np.complex128)


def subspace_joint_indices(params: SystemParams) -> tuple[int, int, int, int]:
    """Flat joint-space indices of the invariant-subspace basis states.

    Order matches the subspace basis: (ee, n), (eg, n+1), (ge, n+1),
    (gg, n+2).
    """
    m_dim = params.field_dim
    n = params.n_photon
    return (0 * m_dim + n, 1 * m_dim + n + 1, 2 * m_dim + n + 1, 3 * m_dim + n + 2)


def joint_state_from_atomic(atomic_vector: np.ndarray, params: SystemParams) -> np.ndarray:
    """Tensor an atomic 4-vector with the Fock state ``|n_photon>``."""
    atomic_vector = np.asarray(atomic_vector, dtype=np.complex128)
    if atomic_vector.shape != (4,):
        raise ValueError(f"expected a length-4 atomic vector, got shape {atomic_vector.shape}")
    fock = np.zeros(params.field_dim, dtype=np.complex128)
    fock[params.n_photon] = 1.0
    return np.kron(atomic_vector, fock)


def initial_state(amps: TwoAtomAmplitudes, params: SystemParams) -> np.ndarray:
    """Joint initial state: atomic product state tensored with ``|n_photon>``.

    The atomic amplitudes land as ``a1*a2`` on |gg, n>, ``b1*a2`` on |eg, n>,
    ``a1*b2`` on |ge, n>, and ``b1*b2`` on |ee, n>.

    Raises:
        NotNormalized: if the resulting joint state is not normalized within
            ``AMPLITUDE_TOL`` (cannot happen for valid amplitudes; kept as a
            guard).
    """
    psi = joint_state_from_atomic(amps.atomic_vector(), params)
    norm_sq = float(np.sum(np.abs(psi) ** 2))
    if abs(norm_sq - 1.0) >= AMPLITUDE_TOL * 10:
        raise NotNormalized(f"joint state squared norm {norm_sq!r} deviates from 1")
    return psi
