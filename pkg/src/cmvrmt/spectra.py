"""Eigenvalues, polynomial roots and spectral measures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from . import _backend
from .errors import (
    DegenerateSpectrumError,
    DimensionError,
    DomainError,
    StratificationError,
)
from .opuc import PointMeasure, szego_forward

__all__ = [
    "EigenCloud",
    "PointMeasure",
    "MatrixMeasure2",
    "eigvals",
    "eig",
    "backward_errors",
    "polyroots",
    "roots_via_szego",
    "spectral_measure",
    "matrix_spectral_measure",
    "default_strat_tol",
    "stratify",
    "match_distance",
]

GAP_TOL = 1e-9
UNITARY_TOL = 1e-8


@dataclass
class EigenCloud:
    """Eigenvalue multiset with optional stratum (L, M) and provenance."""

    values: np.ndarray
    stratum: tuple[int, int] | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass
class MatrixMeasure2:
    """Point measure on the circle with 2x2 positive semidefinite weights."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.nodes.size

    def total(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    def moment(self, m: int) -> np.ndarray:
        return np.einsum("j,jab->ab", self.nodes ** m, self.weights)


def _kernels(backend):
    return _backend.kernels if backend is None else _backend.get_kernels(backend)


def _square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"square matrix required, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix has non-finite entries")
    return M


def eigvals(M, backend: str | None = None) -> np.ndarray:
    """Eigenvalues by Householder-Hessenberg reduction and shifted QR."""
    return _kernels(backend).hessenberg_eigvals(_square(M))


def eig(M, provenance: dict | None = None, backend: str | None = None) -> EigenCloud:
    return EigenCloud(eigvals(M, backend), provenance=dict(provenance or {}))


def backward_errors(M, values) -> np.ndarray:
    """Relative residual ||M v - lam v|| / ||M|| for eigenvectors from inverse iteration."""
    M = _square(M)
    n = M.shape[0]
    norm = np.linalg.norm(M, 2) or 1.0
    rng = np.random.default_rng(12345)
    out = np.empty(len(values))
    for i, lam in enumerate(np.asarray(values)):
        shift = lam + 1e-10 * norm * (1 + 1j)
        A = M - shift * np.eye(n)
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        for _ in range(3):
            v = np.linalg.solve(A, v)
            v /= np.linalg.norm(v)
        out[i] = np.linalg.norm(M @ v - lam * v) / norm
    return out


def _companion(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    p = p / p[0]
    n = p.size - 1
    C = np.zeros((n, n), dtype=complex)
    C[0, :] = -p[1:]
    C[1:, :-1] = np.eye(n - 1)
    return C


def polyroots(p, tol: float = 1e-14, backend: str | None = None) -> np.ndarray:
    """Roots of a polynomial (descending coefficients) by Aberth-Ehrlich.

    Falls back to the companion-matrix eigenvalues when the iteration does
    not converge, which happens for clustered or multiple roots.
    """
    p = np.asarray(p, dtype=complex)
    if p.size <= 1:
        return np.empty(0, dtype=complex)
    roots, ok = _kernels(backend).aberth_roots(p, tol, 500)
    if ok and np.all(np.isfinite(roots)):
        return np.asarray(roots)
    return eigvals(_companion(p), backend)


def roots_via_szego(alphas, provenance: dict | None = None,
                    backend: str | None = None) -> EigenCloud:
    """Zeros of the degree-n orthogonal polynomial of the string."""
    phi = szego_forward(alphas)[-1]
    return EigenCloud(polyroots(phi, backend=backend), provenance=dict(provenance or {}))


def _unitary_schur(U, unitary_tol):
    U = _square(U)
    n = U.shape[0]
    err = np.abs(U.conj().T @ U - np.eye(n)).max(initial=0.0)
    if err > unitary_tol:
        raise DomainError(f"matrix is not unitary (residual {err:.2e})")
    T, Z = scipy.linalg.schur(U, output="complex")
    lam = np.diag(T)
    return lam / np.abs(lam), Z


def spectral_measure(U, unitary_tol: float = UNITARY_TOL,
                     gap_tol: float = GAP_TOL) -> PointMeasure:
    """Spectral measure of a unitary matrix with respect to the first basis vector.

    A unitary matrix is normal, so its complex Schur vectors are eigenvectors.
    Eigenvalues whose eigenvector is orthogonal to e_1 are left out, so the
    measure can have fewer nodes than the matrix has rows.
    """
    nodes, Z = _unitary_schur(U, unitary_tol)
    n = nodes.size
    if n > 1:
        d = np.abs(nodes[:, None] - nodes[None, :])
        d[np.diag_indices(n)] = np.inf
        if d.min() < gap_tol:
            raise DegenerateSpectrumError(
                f"eigenvalue gap {d.min():.2e} below {gap_tol:.0e}; first vector not cyclic")
    w = np.abs(Z[0, :]) ** 2
    # nodes invisible to e_1 carry no mass; cmvfy rejects such inputs
    keep = w >= gap_tol ** 2
    return PointMeasure(nodes[keep], w[keep] / w[keep].sum(), {"dropped": int(n - keep.sum())})


def _clusters(nodes, tol):
    """Group indices of nodes closer than ``tol`` (single linkage on the circle)."""
    order = np.argsort(np.mod(np.angle(nodes), 2 * np.pi))
    groups = [[order[0]]]
    for i in order[1:]:
        if abs(nodes[i] - nodes[groups[-1][-1]]) < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    if len(groups) > 1 and abs(nodes[groups[0][0]] - nodes[groups[-1][-1]]) < tol:
        groups[0] = groups.pop() + groups[0]
    return groups


def matrix_spectral_measure(U, unitary_tol: float = UNITARY_TOL,
                            cluster_tol: float = 1e-7) -> MatrixMeasure2:
    """2x2 spectral measure with respect to the first two basis vectors.

    Repeated eigenvalues are merged, so the weight of a cluster is the
    projection of e_1, e_2 onto the whole eigenspace.
    """
    nodes, Z = _unitary_schur(U, unitary_tol)
    if nodes.size < 2:
        raise DimensionError("need at least a 2x2 matrix")
    out_nodes, out_w = [], []
    for g in _clusters(nodes, cluster_tol):
        V = Z[:2, g]
        out_w.append(V @ V.conj().T)
        z = np.mean(nodes[g])
        out_nodes.append(z / abs(z))
    return MatrixMeasure2(np.array(out_nodes), np.array(out_w))


def default_strat_tol(M=None) -> float:
    scale = 1.0 if M is None else max(1.0, float(np.linalg.norm(np.asarray(M), 2)))
    return 1e-8 * scale


def stratify(values, strat_tol: float | None = None) -> tuple[int, int, np.ndarray]:
    """Split a conjugation-closed multiset into reals and conjugate pairs.

    Returns ``(L, M, ordered)`` where ``ordered`` lists the L real values
    ascending, then each pair as ``(z, conj(z))`` with ``Im z > 0``, pairs
    ordered by real part. Near-real values are snapped to the real axis and
    pair partners to exact conjugates, so the operation is idempotent.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    tol = default_strat_tol() if strat_tol is None else strat_tol
    real_mask = np.abs(vals.imag) < tol
    reals = np.sort(vals[real_mask].real)
    upper = vals[~real_mask & (vals.imag > 0)]
    lower = list(vals[~real_mask & (vals.imag < 0)])
    if len(upper) != len(lower):
        raise StratificationError("values are not closed under conjugation")
    reps = []
    for z in upper[np.argsort(upper.real, kind="stable")]:
        d = [abs(np.conj(z) - w) for w in lower]
        j = int(np.argmin(d))
        if d[j] > tol:
            raise StratificationError(f"{z} has no conjugate partner within {tol:.1e}")
        w = lower.pop(j)
        reps.append(0.5 * (z + np.conj(w)))
    ordered = list(reals.astype(complex))
    for z in reps:
        ordered.extend([z, np.conj(z)])
    return reals.size, len(reps), np.array(ordered, dtype=complex)


def match_distance(a, b) -> float:
    """Largest pair distance under a minimum-cost matching of two multisets."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        raise DimensionError("multisets differ in size")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())
