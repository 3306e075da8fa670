"""The reduced driven two-doublet (four-level) problem.

Builds the rotating-frame, RWA Hamiltonian of two driven doublets with
detuning, Zeeman splittings and SU(2) coupling, its exact and approximate
eigenvalues, the anti-crossing field, the exact propagator and its
low-field approximation, together with the pulse-duration / bias-field
grid on which population inversions are free of Zeeman crosstalk.

The same structure describes a spin-spin (RF) pair of doublets or a
ground-excited (optical) pair; only mu and the SU(2) entries change.

Frequencies in and out are ordinary kHz; matrices are kept angular
(rad/us) internally so that exponents carry no stray 2*pi.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .units import angular, ordinary

UNITARITY_TOL = 1e-10


class NonUnitaryInput(Exception):
    """Raised when a Bloch-rotation decomposition receives a non-unitary matrix."""


@dataclass(frozen=True)
class FourLevelDrive:
    """Drive parameters in the basis (s-, s+, g-, g+).

    delta: drive detuning (kHz); delta_s, delta_g: doublet splittings
    (kHz, nonnegative); omega0: bare Rabi frequency mu*B_ac/2 (kHz);
    u1, u2: SU(2) coupling entries; phi: drive phase (rad).
    """

    delta: float
    delta_s: float
    delta_g: float
    omega0: float
    u1: complex
    u2: complex
    phi: float = 0.0

    def __post_init__(self):
        if self.delta_s < 0 or self.delta_g < 0:
            raise ValueError("splittings must be nonnegative")
        nrm = abs(self.u1) ** 2 + abs(self.u2) ** 2
        if abs(nrm - 1.0) > 1e-9:
            raise ValueError("|u1|^2 + |u2|^2 must equal 1")

    @property
    def coupling(self) -> np.ndarray:
        """SU(2) matrix [[u1, u2], [-u2*, u1*]]."""
        return np.array(
            [[self.u1, self.u2], [-np.conj(self.u2), np.conj(self.u1)]]
        )

    def with_field(self, g_s: float, g_g: float, B: float) -> "FourLevelDrive":
        """Same drive with splittings set from g-factors at field B (mT)."""
        return replace(self, delta_s=g_s * B, delta_g=g_g * B)


@dataclass(frozen=True)
class EigenSet:
    """Exact and approximate quasi-energies, kHz, sorted decreasing."""

    zeta_exact: np.ndarray
    zeta_approx: np.ndarray


@dataclass(frozen=True)
class Propagator:
    U: np.ndarray
    duration: float  # us
    kind: str  # "exact" | "low-field-approx"


def build_A(drive: FourLevelDrive) -> np.ndarray:
    """Angular 4x4 A-matrix; the Schroedinger equation is dpsi/dt = (i/2) A psi."""
    d, ds, dg, w0 = angular(
        [drive.delta, drive.delta_s, drive.delta_g, drive.omega0]
    )
    A = np.zeros((4, 4), dtype=complex)
    A[:2, :2] = d * np.eye(2) + ds * np.diag([1.0, -1.0])
    A[2:, 2:] = -d * np.eye(2) + dg * np.diag([1.0, -1.0])
    A[:2, 2:] = w0 * np.exp(1j * drive.phi) * drive.coupling
    A[2:, :2] = A[:2, 2:].conj().T
    return A


def _zeta0(drive: FourLevelDrive) -> np.ndarray:
    """Uncoupled (u2 = 0) eigenvalues, ordinary kHz."""
    d, ds, dg = drive.delta, drive.delta_s, drive.delta_g
    w1 = abs(drive.u1) * drive.omega0
    rp = np.sqrt((2 * d + ds - dg) ** 2 + 4 * w1**2)
    rm = np.sqrt((2 * d + dg - ds) ** 2 + 4 * w1**2)
    return np.array(
        [
            0.5 * (ds + dg + rp),
            0.5 * (ds + dg - rp),
            -0.5 * (ds + dg - rm),
            -0.5 * (ds + dg + rm),
        ]
    )


def approximate_eigenvalues(drive: FourLevelDrive) -> np.ndarray:
    """Closed-form eigenvalues, valid when quality_factor is small."""
    z0 = _zeta0(drive)
    w2 = abs(drive.u2) * drive.omega0
    outer = np.sqrt((z0[0] - z0[3]) ** 2 + 4 * w2**2)
    inner = np.sqrt((z0[1] - z0[2]) ** 2 + 4 * w2**2)
    z = np.array(
        [
            0.5 * (z0[0] + z0[3] + outer),
            0.5 * (z0[1] + z0[2] + inner),
            0.5 * (z0[1] + z0[2] - inner),
            0.5 * (z0[0] + z0[3] - outer),
        ]
    )
    return np.sort(z)[::-1]


def eigenvalues(drive: FourLevelDrive) -> EigenSet:
    """Exact (Hermitian solve) and approximate quasi-energies, kHz."""
    exact = ordinary(np.linalg.eigvalsh(build_A(drive)))[::-1]
    return EigenSet(zeta_exact=exact, zeta_approx=approximate_eigenvalues(drive))


def quality_factor(g_s: float, g_g: float, delta: float = 0.0, omega1: float | None = None) -> float:
    """Validity parameter of the approximate eigenvalues; small is good."""
    if g_s <= 0 or g_g <= 0:
        raise ValueError("g-factors must be positive")
    denom = g_s * g_g
    if delta != 0.0:
        if omega1 is None or omega1 == 0.0:
            raise ValueError("omega1 required for detuned quality factor")
        denom = denom + 4.0 * delta**2 * g_s**2 * g_g**2 / (omega1**2 * (g_s + g_g) ** 2)
    return (g_s - g_g) ** 2 / denom


def b_cross(omega1: float, g_s: float, g_g: float, delta: float = 0.0) -> float:
    """Field (mT) at which the two inner uncoupled eigenvalues cross."""
    if g_s <= 0 or g_g <= 0:
        raise ValueError("g-factors must be positive")
    return np.sqrt(omega1**2 / (g_s * g_g) + 4.0 * delta**2 / (g_s + g_g) ** 2)


def propagator_exact(drive: FourLevelDrive, t: float) -> Propagator:
    """U(t) = exp(i A t / 2) by spectral decomposition (unitary to machine)."""
    if t < 0:
        raise ValueError("duration must be nonnegative")
    w, V = np.linalg.eigh(build_A(drive))
    U = (V * np.exp(0.5j * w * t)) @ V.conj().T
    return Propagator(U=U, duration=t, kind="exact")


def _zero_field_propagator(drive: FourLevelDrive, t: float) -> np.ndarray:
    w0 = angular(drive.omega0)
    C = np.exp(1j * drive.phi) * drive.coupling
    U = np.cos(0.5 * w0 * t) * np.eye(4, dtype=complex)
    # +i: the propagator is exp(+i A t / 2) in this sign convention
    off = 1j * np.sin(0.5 * w0 * t)
    U[:2, 2:] += off * C
    U[2:, :2] += off * C.conj().T
    return U


def _perturbation_operator(drive: FourLevelDrive, t: float) -> np.ndarray:
    w0 = angular(drive.omega0)
    u1, u2 = drive.u1, drive.u2
    e1 = u1 / abs(u1)
    blockdiag = np.array(
        [
            [abs(u1), -u2 * e1, 0, 0],
            [-np.conj(u2) * np.conj(e1), -abs(u1), 0, 0],
            [0, 0, abs(u1), u2 * np.conj(e1)],
            [0, 0, np.conj(u2) * e1, -abs(u1)],
        ]
    )
    swap = np.array(
        [
            [0, 0, -e1, 0],
            [0, 0, 0, np.conj(e1)],
            [-np.conj(e1), 0, 0, 0],
            [0, e1, 0, 0],
        ]
    )
    return 1j * np.cos(0.5 * w0 * t) * blockdiag + np.sin(0.5 * w0 * t) * swap


def epsilon_parameter(drive: FourLevelDrive) -> float:
    """Low-field expansion parameter (delta_g + delta_s) / (2 Omega_0)."""
    return (drive.delta_g + drive.delta_s) / (2.0 * abs(drive.omega0))


def propagator_lowfield(drive: FourLevelDrive, t: float) -> Propagator:
    """First-order-in-epsilon propagator; exactly U0 at zero splitting."""
    if t < 0:
        raise ValueError("duration must be nonnegative")
    if abs(drive.u1) == 0:
        raise ValueError("low-field propagator requires u1 != 0")
    eps = epsilon_parameter(drive)
    w1 = angular(abs(drive.u1) * drive.omega0)
    mix = 0.5 * eps * w1 * t
    U = np.cos(mix) * _zero_field_propagator(drive, t) + np.sin(
        mix
    ) * _perturbation_operator(drive, t)
    return Propagator(U=U, duration=t, kind="low-field-approx")


def pi_pulse_duration(omega0: float, l: int = 0) -> float:
    """tau_l = (2l+1) pi / Omega_0 in us, for omega0 in ordinary kHz."""
    return (2 * l + 1) * np.pi / angular(omega0)


def crosstalk_free_grid(
    omega0: float,
    g_s: float,
    g_g: float,
    u1: complex,
    l_max: int,
    k_max: int,
) -> list[tuple[int, int, float, float]]:
    """(l, k, tau_l, B_dc) points where a (2l+1) pi-pulse has no Zeeman crosstalk.

    The pulse duration kills the diagonal blocks of the propagator and the
    bias field closes the Zeeman rotation so the inter-doublet swap is pure.
    """
    if abs(u1) == 0:
        raise ValueError("grid undefined for u1 = 0")
    points = []
    for l in range(l_max + 1):
        tau = pi_pulse_duration(omega0, l)
        for k in range(k_max + 1):
            B = 2.0 * (2 * k + 1) * omega0 / ((2 * l + 1) * (g_g + g_s) * abs(u1))
            points.append((l, k, tau, B))
    return points


def doublet_crosstalk(U: np.ndarray) -> float:
    """Worst leakage into the wrong Zeeman branch over the four basis states."""
    P = np.abs(U) ** 2
    # starting in column j, the "wrong branch" rows pair (s-,g+),(s+,g-),...
    wrong = [(1, 3), (0, 2), (1, 3), (0, 2)]
    return max(P[wrong[j][0], j] + P[wrong[j][1], j] for j in range(4))


def bloch_rotation(M: np.ndarray) -> tuple[float, np.ndarray]:
    """Angle and axis of a 2x2 unitary seen as exp(-i alpha n.sigma / 2).

    A global phase (det M != 1) is stripped before the decomposition.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2) or np.linalg.norm(M @ M.conj().T - np.eye(2)) > 1e-9:
        raise NonUnitaryInput("expected a 2x2 unitary matrix")
    M = M * np.exp(-0.5j * np.angle(np.linalg.det(M)))
    c = 0.5 * np.trace(M).real
    c = np.clip(c, -1.0, 1.0)
    nvec = np.array(
        [
            -0.5 * (M[0, 1] + M[1, 0]).imag,
            -0.5 * (M[0, 1] - M[1, 0]).real,
            -0.5 * (M[0, 0] - M[1, 1]).imag,
        ]
    )
    s = np.linalg.norm(nvec)
    alpha = 2.0 * np.arctan2(s, c)
    if s < 1e-15:
        return 0.0, np.array([0.0, 0.0, 1.0])
    return alpha, nvec / s
