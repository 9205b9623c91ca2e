"""Scalar, block and symmetric CMV matrices.

Index conventions are zero-based: the 2x2 block built from ``alpha_k`` sits
on rows/columns ``k, k+1``. The even-indexed blocks form the left factor,
the odd-indexed blocks (after a leading ``[1]``) form the right factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NotCyclicError
from .opuc import as_scalar_string

__all__ = [
    "CmvOperator",
    "xi_block",
    "cmv_factors",
    "build_cmv",
    "psd_sqrt2",
    "build_block_cmv",
    "truncate_first",
    "reversed_truncation_coeffs",
    "truncated_operator",
    "psi_block",
    "build_symmetric_cmv",
    "cmvfy",
    "bandwidth",
]

HERMITIAN_TOL = 1e-12


@dataclass
class CmvOperator:
    """A constructed operator with its structural metadata."""

    matrix: np.ndarray
    form: str
    band_hint: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def bandwidth(M: np.ndarray, tol: float = 0.0) -> int:
    """Largest |i - j| over entries with modulus above ``tol``."""
    i, j = np.nonzero(np.abs(np.asarray(M)) > tol)
    return int(np.max(np.abs(i - j))) if i.size else 0


def xi_block(alpha: complex) -> np.ndarray:
    rho = np.sqrt(max(1.0 - abs(alpha) ** 2, 0.0))
    return np.array([[np.conj(alpha), rho], [rho, -alpha]], dtype=complex)


def _place_blocks(n: int, alphas, start: int) -> np.ndarray:
    """Block-diagonal factor with blocks from ``alphas[start::2]``.

    ``start=-1`` puts the leading ``[1]`` first.
    """
    F = np.zeros((n, n), dtype=complex)
    k = start
    if k == -1:
        F[0, 0] = 1.0
        k = 1
    while k < n:
        if k == n - 1:
            F[k, k] = np.conj(alphas[k])
        else:
            F[k:k + 2, k:k + 2] = xi_block(alphas[k])
        k += 2
    return F


def cmv_factors(alphas) -> tuple[np.ndarray, np.ndarray]:
    """The two block-diagonal factors (even blocks, then odd blocks)."""
    a = as_scalar_string(alphas)
    n = a.size
    return _place_blocks(n, a, 0), _place_blocks(n, a, -1)


def build_cmv(alphas) -> np.ndarray:
    """The n x n CMV matrix of a scalar coefficient string."""
    L, M = cmv_factors(alphas)
    return L @ M


def psd_sqrt2(M: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 Hermitian positive semidefinite matrix.

    Uses sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
    Eigenvalues down to -1e-12 are clamped to zero.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 matrix, got {M.shape}")
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.conj().T).max() > HERMITIAN_TOL * scale:
        raise DomainError("psd_sqrt2 needs a Hermitian matrix")
    M = 0.5 * (M + M.conj().T)
    tr = M[0, 0].real + M[1, 1].real
    det = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]).real
    disc = np.sqrt(max((tr / 2) ** 2 - det, 0.0))
    lo = tr / 2 - disc
    if lo < -1e-12 * scale:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {lo:.3e})")
    sdet = np.sqrt(max(det, 0.0))
    denom = tr + 2 * sdet
    if denom <= 0:
        return np.zeros((2, 2), dtype=complex)
    return (M + sdet * np.eye(2)) / np.sqrt(denom)


def _as_matrix_string(alphas) -> np.ndarray:
    a = np.asarray(alphas, dtype=complex)
    if a.ndim != 3 or a.shape[1:] != (2, 2) or a.shape[0] == 0:
        raise DimensionError(f"matrix coefficient string must have shape (n, 2, 2), got {a.shape}")
    return a


def _block_xi(alpha: np.ndarray) -> np.ndarray:
    I2 = np.eye(2)
    ah = alpha.conj().T
    # rho_L = (I - a^H a)^(1/2), rho_R = (I - a a^H)^(1/2); equal for normal a
    rho_l = psd_sqrt2(I2 - ah @ alpha)
    rho_r = psd_sqrt2(I2 - alpha @ ah)
    return np.block([[ah, rho_l], [rho_r, -alpha]])


def _place_matrix_blocks(n: int, alphas, start: int) -> np.ndarray:
    F = np.zeros((2 * n, 2 * n), dtype=complex)
    k = start
    if k == -1:
        F[0:2, 0:2] = np.eye(2)
        k = 1
    while k < n:
        if k == n - 1:
            F[2 * k:2 * k + 2, 2 * k:2 * k + 2] = alphas[k].conj().T
        else:
            F[2 * k:2 * k + 4, 2 * k:2 * k + 4] = _block_xi(alphas[k])
        k += 2
    return F


def build_block_cmv(alphas) -> np.ndarray:
    """The 2n x 2n block CMV matrix of a string of 2x2 coefficients."""
    a = _as_matrix_string(alphas)
    n = a.shape[0]
    return _place_matrix_blocks(n, a, 0) @ _place_matrix_blocks(n, a, -1)


def truncate_first(C: np.ndarray, block: bool = False) -> np.ndarray:
    """Delete the first row and column (the first two when ``block``)."""
    C = np.asarray(C)
    k = 2 if block else 1
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DimensionError("truncate_first needs a square matrix")
    if C.shape[0] < k + 1:
        raise DimensionError(f"matrix of size {C.shape[0]} too small to truncate")
    return C[k:, k:].copy()


def reversed_truncation_coeffs(alphas, tol: float = 1e-12) -> tuple[np.ndarray, bool]:
    """Coefficients of the CMV operator equivalent to the first minor.

    Input is alpha_0..alpha_n with unimodular alpha_n. Returns the string
    (-conj(alpha_{n-1}) alpha_n, ..., -conj(alpha_0) alpha_n) and a flag that
    is True when the equivalent operator is the transpose of its CMV matrix.
    """
    a = np.asarray(alphas, dtype=complex).ravel()
    if a.size < 2:
        raise DimensionError("need at least two coefficients")
    if abs(abs(a[-1]) - 1.0) > tol:
        raise DomainError("last coefficient must be unimodular")
    n = a.size - 1
    return -np.conj(a[-2::-1]) * a[-1], n % 2 == 0


def truncated_operator(alphas) -> np.ndarray:
    """Matrix of the reversed-coefficient operator (transposed for even size)."""
    b, transpose = reversed_truncation_coeffs(alphas)
    C = build_cmv(b)
    return C.T if transpose else C


def psi_block(alpha: complex, variant: str = "S") -> np.ndarray:
    """2x2 basis-change block for the symmetric CMV form."""
    rho = np.sqrt(max(1.0 - abs(alpha) ** 2, 0.0))
    if variant == "S":
        scale = np.sqrt(2.0 * (1.0 - alpha.real))
        B = [[1j * (1 - np.conj(alpha)), -1j * rho], [rho, 1 - alpha]]
    elif variant == "S_tilde":
        scale = np.sqrt(2.0 * (1.0 + alpha.real))
        B = [[1 + np.conj(alpha), rho], [1j * rho, -1j * (1 + alpha)]]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if scale == 0:
        raise DomainError("basis-change block is singular for this coefficient")
    return np.array(B, dtype=complex) / scale


def _last_root(alpha: complex, variant: str) -> complex:
    # a square root of conj(alpha); the branch matches the (1,1) entry of the
    # 2x2 block, so it is continuous away from the excluded coefficient
    w = np.conj(alpha)
    if variant == "S":
        arg = np.mod(np.angle(w), 2 * np.pi)
    else:
        arg = np.angle(w)
    return np.sqrt(abs(w)) * np.exp(0.5j * arg)


def build_symmetric_cmv(alphas, variant: str = "S") -> np.ndarray:
    """Symmetric CMV form N L N^T, same characteristic polynomial as build_cmv.

    ``variant`` is ``"S"`` or ``"S_tilde"``. For even n the S form excludes
    alpha_{n-1} = 1 and the S_tilde form excludes alpha_{n-1} = -1.
    """
    a = as_scalar_string(alphas)
    n = a.size
    if variant not in ("S", "S_tilde"):
        raise ValueError(f"unknown variant {variant!r}")
    excluded = 1.0 if variant == "S" else -1.0
    if n % 2 == 0 and abs(a[-1] - excluded) < 1e-14:
        raise DomainError(
            f"variant {variant} is undefined for even n with last coefficient {excluded:+g}")
    L = _place_blocks(n, a, 0)
    N = np.zeros((n, n), dtype=complex)
    N[0, 0] = 1.0
    for k in range(1, n, 2):
        if k == n - 1:
            N[k, k] = _last_root(a[k], variant)
        else:
            N[k:k + 2, k:k + 2] = psi_block(a[k], variant)
    S = N @ L @ N.T
    return 0.5 * (S + S.T)


def cmvfy(U: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Coefficients of the CMV form of a unitary matrix with cyclic first vector."""
    from .spectra import spectral_measure
    from .opuc import verblunsky_from_measure

    mu = spectral_measure(U, unitary_tol=tol)
    if len(mu) != np.asarray(U).shape[0]:
        raise NotCyclicError("first basis vector is not cyclic for this matrix")
    return verblunsky_from_measure(mu)
