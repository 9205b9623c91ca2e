"""Real and complex quaternions and their 2x2 complex representation.

Components are stored in the basis order ``(1, i, k, j)``: a quaternion
``a + b i + c k + d j`` is held as ``(a, b, c, d)``. With this ordering the
complex representation reads::

    [[a + ib, -c + id],
     [c + id,  a - ib]]

Quaternion matrices are numpy arrays of shape ``(n, m, 4)``; the last axis
holds ``(a, b, c, d)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

__all__ = [
    "STRUCTURE_TOL",
    "Quaternion",
    "complex_embed",
    "embed_matrix",
    "unembed_matrix",
    "symplectic_form",
    "dual",
    "is_self_dual",
    "is_quaternion_unitary",
    "is_real_quaternionic",
]

STRUCTURE_TOL = 1e-10


@dataclass(frozen=True)
class Quaternion:
    """A quaternion ``a + b i + c k + d j`` with real or complex components."""

    a: complex = 0.0
    b: complex = 0.0
    c: complex = 0.0
    d: complex = 0.0

    @classmethod
    def from_array(cls, x) -> "Quaternion":
        a, b, c, d = x
        return cls(a, b, c, d)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def is_real(self) -> bool:
        return all(np.imag(x) == 0 for x in (self.a, self.b, self.c, self.d))

    def conj(self) -> "Quaternion":
        """Quaternion conjugate ``a - b i - c k - d j`` (components untouched)."""
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def dagger(self) -> "Quaternion":
        """Hermitian conjugate: quaternion conjugate plus complex conjugation."""
        return Quaternion(np.conj(self.a), -np.conj(self.b),
                          -np.conj(self.c), -np.conj(self.d))

    def norm2(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def embed(self) -> np.ndarray:
        return complex_embed(self)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a + other.a, self.b + other.b,
                          self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a - other.a, self.b - other.b,
                          self.c - other.c, self.d - other.d)

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            return Quaternion(self.a * other, self.b * other,
                              self.c * other, self.d * other)
        # Hamilton product written in (1, i, j, k) and then reordered
        w0, x0, y0, z0 = self.a, self.b, self.d, self.c
        w1, x1, y1, z1 = other.a, other.b, other.d, other.c
        w = w0 * w1 - x0 * x1 - y0 * y1 - z0 * z1
        x = w0 * x1 + x0 * w1 + y0 * z1 - z0 * y1
        y = w0 * y1 - x0 * z1 + y0 * w1 + z0 * x1
        z = w0 * z1 + x0 * y1 - y0 * x1 + z0 * w1
        return Quaternion(w, x, z, y)

    __rmul__ = __mul__


def complex_embed(q) -> np.ndarray:
    """2x2 complex matrix of a quaternion (``Quaternion`` or length-4 array)."""
    if isinstance(q, Quaternion):
        a, b, c, d = q.a, q.b, q.c, q.d
    else:
        a, b, c, d = q
    return np.array([[a + 1j * b, -c + 1j * d],
                     [c + 1j * d, a - 1j * b]], dtype=complex)


def embed_matrix(Q) -> np.ndarray:
    """Replace every quaternion entry of ``Q`` (shape ``(n, m, 4)``) by its 2x2 block."""
    Q = np.asarray(Q)
    if Q.ndim != 3 or Q.shape[-1] != 4:
        raise DimensionError(f"quaternion matrix must have shape (n, m, 4), got {Q.shape}")
    a, b, c, d = (Q[..., k] for k in range(4))
    n, m = Q.shape[:2]
    out = np.empty((2 * n, 2 * m), dtype=complex)
    out[0::2, 0::2] = a + 1j * b
    out[0::2, 1::2] = -c + 1j * d
    out[1::2, 0::2] = c + 1j * d
    out[1::2, 1::2] = a - 1j * b
    return out


def unembed_matrix(M: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embed_matrix`; returns complex components of shape ``(n, m, 4)``.

    Every 2x2 complex block is a complex quaternion, so the inverse always
    exists; the result is real-flavored exactly when ``M`` has the
    real-quaternionic block pattern.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] % 2 or M.shape[1] % 2:
        raise DimensionError(f"need even dimensions, got {M.shape}")
    m11, m12 = M[0::2, 0::2], M[0::2, 1::2]
    m21, m22 = M[1::2, 0::2], M[1::2, 1::2]
    a = (m11 + m22) / 2
    b = (m11 - m22) / 2j
    c = (m21 - m12) / 2
    d = (m21 + m12) / 2j
    return np.stack([a, b, c, d], axis=-1)


def symplectic_form(n: int) -> np.ndarray:
    """The 2n x 2n block-diagonal matrix with n copies of [[0, -1], [1, 0]]."""
    return np.kron(np.eye(n), np.array([[0.0, -1.0], [1.0, 0.0]]))


def dual(M: np.ndarray) -> np.ndarray:
    """Time-reversal dual ``Z^T M^T Z`` of an even-dimensional square matrix."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionError(f"dual needs an even square matrix, got shape {M.shape}")
    # Z^T M^T Z without forming Z: (Z^T X Z)[2i+p, 2j+q] = s_p s_q X[2i+1-p, 2j+1-q]
    # with s = (+1, -1)
    X = M.T
    out = np.empty_like(X, dtype=np.result_type(X, float))
    out[0::2, 0::2] = X[1::2, 1::2]
    out[0::2, 1::2] = -X[1::2, 0::2]
    out[1::2, 0::2] = -X[0::2, 1::2]
    out[1::2, 1::2] = X[0::2, 0::2]
    return out


def is_self_dual(M: np.ndarray, tol: float = STRUCTURE_TOL) -> bool:
    return bool(np.max(np.abs(dual(M) - M), initial=0.0) < tol)


def is_quaternion_unitary(Q, tol: float = STRUCTURE_TOL) -> bool:
    """Unitarity of the complex representation.

    ``Q`` may be a quaternion matrix ``(n, m, 4)`` or an already embedded
    ``2n x 2n`` complex matrix.
    """
    Q = np.asarray(Q)
    M = embed_matrix(Q) if Q.ndim == 3 else Q
    if M.shape[0] != M.shape[1]:
        return False
    err = np.abs(M.conj().T @ M - np.eye(M.shape[0]))
    return bool(err.max(initial=0.0) < tol)


def is_real_quaternionic(M: np.ndarray, tol: float = STRUCTURE_TOL) -> bool:
    """Whether every 2x2 block has the pattern m22 = conj(m11), m21 = -conj(m12)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] % 2 or M.shape[1] % 2:
        return False
    e1 = np.abs(M[1::2, 1::2] - np.conj(M[0::2, 0::2]))
    e2 = np.abs(M[1::2, 0::2] + np.conj(M[0::2, 1::2]))
    return bool(max(e1.max(initial=0.0), e2.max(initial=0.0)) < tol)
