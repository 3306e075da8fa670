"""Spin operators for half-integer spin and their block-Pauli structure.

A spin I = n - 1/2 lives in a 2n-dimensional space.  After pairing the
m-projections two by two with a permutation F, each spin matrix factors
as an n x n real matrix tensored with a single Pauli matrix, which is
what makes the doublet (pseudo-spin-1/2) picture exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

DECOMP_TOL = 1e-12


class DecompositionResidual(Exception):
    """Raised when the tensor-product factorization fails to close."""


@dataclass(frozen=True)
class SpinQuantum:
    """Number of doublets n; the spin value is I = n - 1/2."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def spin(self) -> float:
        return self.n - 0.5

    @property
    def dim(self) -> int:
        return 2 * self.n


@dataclass(frozen=True)
class SpinOperators:
    """Dimensionless angular-momentum matrices in the m = I..-I basis."""

    n: int
    Ix: np.ndarray
    Iy: np.ndarray
    Iz: np.ndarray

    def as_tuple(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.Ix, self.Iy, self.Iz)


@dataclass(frozen=True)
class PairingPermutation:
    """Involutive permutation pairing +m with -m while keeping odd indices."""

    n: int
    index_map: np.ndarray  # index_map[i] = source index of row i

    def matrix(self) -> np.ndarray:
        F = np.zeros((2 * self.n, 2 * self.n))
        F[np.arange(2 * self.n), self.index_map] = 1.0
        return F

    def apply(self, M: np.ndarray) -> np.ndarray:
        """Compute F M F without materializing the permutation matrix."""
        return M[np.ix_(self.index_map, self.index_map)]


@dataclass(frozen=True)
class BlockPauliDecomposition:
    """n x n blocks such that F I_i F = A_i (x) sigma_i."""

    n: int
    Ax: np.ndarray
    Ay: np.ndarray
    Az: np.ndarray

    def as_tuple(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.Ax, self.Ay, self.Az)


def spin_matrices(spin: SpinQuantum) -> SpinOperators:
    """Build Ix, Iy, Iz by the standard ladder-operator construction."""
    I = spin.spin
    m = np.arange(I, -I - 1.0, -1.0)
    # <m+1| I+ |m> on the superdiagonal
    c = np.sqrt(I * (I + 1.0) - m[1:] * (m[1:] + 1.0))
    Ip = np.diag(c, k=1).astype(complex)
    Im = Ip.conj().T
    Ix = 0.5 * (Ip + Im)
    Iy = -0.5j * (Ip - Im)
    Iz = np.diag(m).astype(complex)
    return SpinOperators(spin.n, Ix, Iy, Iz)


def pairing_permutation(n: int) -> PairingPermutation:
    """Permutation exchanging even indices with respect to the end of the basis.

    In 1-based terms index 2j is swapped with index 2n - 2j + 2 and odd
    indices stay put, so each (2k-1, 2k) pair holds the +/-m partners.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = np.arange(2 * n)
    for j in range(1, n + 1):  # 1-based even index 2j
        idx[2 * j - 1] = (2 * n - 2 * j + 2) - 1
    return PairingPermutation(n, idx)


def _extract_block(M: np.ndarray, sigma: np.ndarray, n: int) -> np.ndarray:
    """Least-squares projection of each 2x2 block of M onto sigma."""
    A = np.zeros((n, n))
    nrm = np.vdot(sigma, sigma).real
    for k in range(n):
        for l in range(n):
            blk = M[2 * k : 2 * k + 2, 2 * l : 2 * l + 2]
            A[k, l] = np.vdot(sigma, blk).real / nrm
    return A


def block_decompose(ops: SpinOperators, F: PairingPermutation) -> BlockPauliDecomposition:
    """Factor the paired spin matrices as A_i (x) sigma_i and check residuals."""
    if ops.n != F.n:
        raise ValueError("spin operators and permutation must share n")
    n = ops.n
    blocks = []
    for M, sigma in zip(ops.as_tuple(), PAULI):
        paired = F.apply(M)
        A = _extract_block(paired, sigma, n)
        residual = np.linalg.norm(paired - np.kron(A, sigma))
        if residual > DECOMP_TOL:
            raise DecompositionResidual(
                f"block factorization residual {residual:.3e} exceeds {DECOMP_TOL}"
            )
        blocks.append(A)
    return BlockPauliDecomposition(n, *blocks)


def antidiagonal_couplings(n: int) -> np.ndarray:
    """Closed-form a_k = sqrt(k(2n-k)) appearing on the antidiagonals of 2 A_x."""
    k = np.arange(1, 2 * n)
    return np.sqrt(k * (2.0 * n - k))


def diagonal_projections(n: int) -> np.ndarray:
    """Closed-form c_k = 2(n-k)+1, the paired z-projections (2 A_z diagonal)."""
    k = np.arange(1, 2 * n, 2)
    return 2.0 * (n - k) + 1.0
