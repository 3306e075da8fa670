"""Static level structure of a quadrupole spin in a weak dc magnetic field.

The zero-field Hamiltonian I.Q.I produces n doubly degenerate levels.  A
weak dc field splits each doublet linearly, with an effective gyromagnetic
ratio g_k obtained from the determinant of the corresponding 2x2 Zeeman
block, and fixes a preferential basis inside each doublet.  In those
Zeeman-adapted bases the ac coupling between two doublets reduces to a
single moment mu_kl and an SU(2) matrix with entries u1 (spin preserving)
and u2 (spin flipping).

Units: quadrupole coefficients in MHz, Zeeman tensors in kHz/mT, fields
in mT; splittings delta_k come out in kHz.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .spin_algebra import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SpinQuantum,
    block_decompose,
    pairing_permutation,
    spin_matrices,
)

GAUGE_DIAG_TOL = 1e-12
ZERO_COUPLING_TOL = 1e-15
PERTURBATION_GUARD = 10.0


class NearCrossingWarning(UserWarning):
    """Zeeman splittings approach the quadrupole gaps; first order is shaky."""


class ZeroCoupling(Exception):
    """The requested transition is forbidden (mu below threshold)."""


@dataclass(frozen=True)
class TensorParams:
    """Quadrupole (E, D in MHz) and Zeeman (M in kHz/mT) tensors.

    R_Q rotates the quadrupole eigenframe into the lab (D1, D2, b) frame;
    M is given directly in the lab frame.
    """

    E: float
    D: float
    R_Q: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R_Q, dtype=float)
        M = np.asarray(self.M, dtype=float)
        if not np.allclose(R @ R.T, np.eye(3), atol=1e-9) or np.linalg.det(R) < 0:
            raise ValueError("R_Q must be a proper rotation")
        if not np.allclose(M, M.T, atol=1e-9):
            raise ValueError("M must be symmetric")
        object.__setattr__(self, "R_Q", R)
        object.__setattr__(self, "M", M)

    def quadrupole_lab(self) -> np.ndarray:
        """Q tensor in the lab frame, diag(-E, E, D) in its eigenframe."""
        return self.R_Q @ np.diag([-self.E, self.E, self.D]) @ self.R_Q.T


@dataclass(frozen=True)
class FieldVector:
    """dc field amplitude (mT) and direction angles in the D1, D2, b frame."""

    B: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.B < 0:
            raise ValueError("field amplitude must be >= 0")

    def unit(self) -> np.ndarray:
        ct, st = np.cos(self.theta), np.sin(self.theta)
        return np.array([ct * np.cos(self.phi), ct * np.sin(self.phi), st])


@dataclass(frozen=True)
class TransitionCoupling:
    """Effective moment and SU(2) unitary of a doublet-doublet transition.

    mu is in kHz/mT for magnetic transitions and dimensionless (branching
    amplitude b_ke) for optical ones.
    """

    mu: float
    U: np.ndarray
    forbidden: bool = False

    @property
    def u1(self) -> complex:
        return self.U[0, 0]

    @property
    def u2(self) -> complex:
        return self.U[0, 1]


@dataclass(frozen=True)
class LevelStructure:
    """Doublet energies, splittings and Zeeman-adapted eigenbasis of one level."""

    spin: SpinQuantum
    params: TensorParams
    field: FieldVector
    energies: np.ndarray          # n doublet energies, MHz, increasing
    g: np.ndarray                 # n effective gyromagnetic ratios, kHz/mT
    labels: np.ndarray            # dominant |m| numerator per doublet (1, 3, 5, ...)
    eigenbasis: np.ndarray        # 2n x 2n unitary, columns (k,-), (k,+)
    perturbation_ratio: float     # max delta_k over min quadrupole gap
    # internals reused by the coupling constructors
    _P: np.ndarray = dc_field(repr=False, default=None)
    _blocks: tuple = dc_field(repr=False, default=None)
    _gauges: tuple = dc_field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.spin.n

    @property
    def delta(self) -> np.ndarray:
        """First-order Zeeman splittings g_k * B in kHz."""
        return self.g * self.field.B

    def doublet_index(self, m_numerator: int) -> int:
        """Index of the doublet dominated by |m| = m_numerator / 2."""
        hits = np.where(self.labels == m_numerator)[0]
        if len(hits) != 1:
            raise ValueError(f"no unique doublet labelled +/-{m_numerator}/2")
        return int(hits[0])


def build_static_hamiltonian(
    params: TensorParams, field: FieldVector, spin: SpinQuantum
) -> np.ndarray:
    """Full 2n x 2n Hamiltonian I.Q.I + B e.M.I in the lab frame, in MHz."""
    ops = spin_matrices(spin).as_tuple()
    Q = params.quadrupole_lab()
    H = np.zeros((spin.dim, spin.dim), dtype=complex)
    for i in range(3):
        for j in range(3):
            H += Q[i, j] * ops[i] @ ops[j]
    alpha = params.M @ field.unit()  # kHz/mT
    for i in range(3):
        H += 1e-3 * field.B * alpha[i] * ops[i]
    return H


def _zeeman_gauge(Vk: np.ndarray) -> np.ndarray:
    """Unitary bringing the unit-Pauli-vector matrix V_k to -sigma_z.

    When V_k is already sigma_z the identity gauge is used (documented
    degenerate branch, not an error).
    """
    cz = Vk[0, 0].real
    if abs(1.0 - cz) < GAUGE_DIAG_TOL:
        return np.eye(2, dtype=complex)
    return (Vk - SIGMA_Z) / np.sqrt(2.0 - 2.0 * cz)


def _pauli_block(coeffs: np.ndarray) -> np.ndarray:
    return coeffs[0] * SIGMA_X + coeffs[1] * SIGMA_Y + coeffs[2] * SIGMA_Z


def solve_levels(params: TensorParams, field: FieldVector, spin: SpinQuantum) -> LevelStructure:
    """Diagonalize the quadrupole part and treat the dc field to first order."""
    n = spin.n
    ops = spin_matrices(spin)
    F = pairing_permutation(n)
    dec = block_decompose(ops, F)
    Ax, Ay, Az = dec.as_tuple()

    W = -params.E * Ax @ Ax + params.E * Ay @ Ay + params.D * Az @ Az
    energies, P = np.linalg.eigh(W)

    # dominant z-projection labels: paired row j carries m = +/- (2(n-2j-1)+1)/2
    row_m = np.abs(2 * (n - (2 * np.arange(n) + 1)) + 1)
    labels = row_m[np.argmax(np.abs(P), axis=0)]

    # dc Zeeman coefficient vector in the quadrupole eigenframe
    e_frame = params.R_Q.T @ field.unit()
    M_frame = params.R_Q.T @ params.M @ params.R_Q
    alpha = M_frame @ e_frame  # kHz/mT

    calA = tuple(P.T @ A @ P for A in (Ax, Ay, Az))
    g = np.zeros(n)
    gauges = []
    for k in range(n):
        coeffs = np.array([alpha[i] * calA[i][k, k] for i in range(3)])
        gk = 2.0 * np.linalg.norm(coeffs)
        g[k] = gk
        if gk < ZERO_COUPLING_TOL:
            gauges.append(np.eye(2, dtype=complex))
        else:
            gauges.append(_zeeman_gauge(_pauli_block(2.0 * coeffs / gk)))

    gaps = np.diff(energies)  # MHz
    max_delta = np.max(g) * field.B * 1e-3  # MHz
    ratio = max_delta / np.min(gaps) if n > 1 and np.min(gaps) > 0 else 0.0
    if n > 1 and field.B > 0 and np.min(gaps) < PERTURBATION_GUARD * max_delta:
        warnings.warn(
            f"min quadrupole gap {np.min(gaps):.3g} MHz is below "
            f"{PERTURBATION_GUARD:g}x the largest splitting {max_delta:.3g} MHz",
            NearCrossingWarning,
        )

    basis = np.zeros((2 * n, 2 * n), dtype=complex)
    Fm = F.matrix()
    quad_basis = Fm @ np.kron(P, np.eye(2))
    for k in range(n):
        basis[:, 2 * k : 2 * k + 2] = quad_basis[:, 2 * k : 2 * k + 2] @ gauges[k]

    return LevelStructure(
        spin=spin,
        params=params,
        field=field,
        energies=energies,
        g=g,
        labels=labels,
        eigenbasis=basis,
        perturbation_ratio=ratio,
        _P=P,
        _blocks=calA,
        _gauges=tuple(gauges),
    )


def _su2_normalize(U: np.ndarray) -> np.ndarray:
    """Rephase a unitary so its determinant is +1 (allowed gauge freedom)."""
    d = np.linalg.det(U)
    return U * np.exp(-0.5j * np.angle(d)) * (1.0 / np.sqrt(abs(d)))


def transition_coupling(
    structure: LevelStructure, k: int, l: int, e_ac: np.ndarray, M: np.ndarray | None = None
) -> TransitionCoupling:
    """Effective moment mu_kl and SU(2) matrix of the k<->l magnetic transition.

    e_ac is the ac-field direction in the lab frame.  The structure's own
    Zeeman tensor is used unless a different drive tensor M is supplied.
    """
    if k == l:
        raise ValueError("transition requires two distinct doublets")
    e_ac = np.asarray(e_ac, dtype=float)
    e_ac = e_ac / np.linalg.norm(e_ac)
    params = structure.params
    M_lab = params.M if M is None else np.asarray(M, dtype=float)
    M_frame = params.R_Q.T @ M_lab @ params.R_Q
    alpha = M_frame @ (params.R_Q.T @ e_ac)
    calA = structure._blocks
    coeffs = np.array([alpha[i] * calA[i][k, l] for i in range(3)])
    mu = 2.0 * np.linalg.norm(coeffs)
    if mu < ZERO_COUPLING_TOL:
        return TransitionCoupling(mu=0.0, U=np.eye(2, dtype=complex), forbidden=True)
    U_raw = _pauli_block(2.0 * coeffs / mu)
    U = structure._gauges[k].conj().T @ U_raw @ structure._gauges[l]
    return TransitionCoupling(mu=mu, U=_su2_normalize(U))


def coupling_from_overlap(block: np.ndarray) -> TransitionCoupling:
    """Branching amplitude and SU(2) matrix from a raw 2x2 overlap block."""
    b = np.sqrt(abs(np.linalg.det(block)))
    if b < ZERO_COUPLING_TOL:
        return TransitionCoupling(mu=0.0, U=np.eye(2, dtype=complex), forbidden=True)
    return TransitionCoupling(mu=b, U=_su2_normalize(block / b))


def optical_coupling(
    ground: LevelStructure, excited: LevelStructure, k: int, e: int
) -> TransitionCoupling:
    """Optical coupling of ground doublet k to excited doublet e.

    Built from the state overlaps <g_pm | e_pm> of the Zeeman-adapted
    doublet bases; mu holds the branching amplitude b_ke.
    """
    Og = ground.eigenbasis[:, 2 * k : 2 * k + 2]
    Oe = excited.eigenbasis[:, 2 * e : 2 * e + 2]
    return coupling_from_overlap(Og.conj().T @ Oe)
