"""Orthogonal polynomials on the unit circle.

Polynomials are dense coefficient arrays in descending degree order, so a
monic degree-k polynomial is ``[1, kappa_1, ..., kappa_k]`` and ``np.polyval``
evaluates it directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrumError, DimensionError, DomainError

__all__ = [
    "PointMeasure",
    "as_scalar_string",
    "szego_forward",
    "alphas_from_polys",
    "reversed_poly",
    "inverse_szego",
    "verblunsky_from_measure",
    "verblunsky_from_measure_inner",
    "opuc_norm_products",
    "gram_schmidt_norms",
    "christoffel_darboux",
    "cauchy_determinant",
    "identity_suite",
]

NODE_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12
# below this squared norm the Gram-Schmidt step has lost all digits
NORM_FLOOR = 1e-200


@dataclass
class PointMeasure:
    """Finitely supported probability measure on the unit circle."""

    nodes: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=complex).ravel()
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        if self.nodes.shape != self.weights.shape:
            raise DimensionError("nodes and weights must have equal length")

    def __len__(self):
        return self.nodes.size

    @property
    def angles(self) -> np.ndarray:
        return np.angle(self.nodes)

    def moment(self, m: int) -> complex:
        """Integral of z**m against the measure."""
        return complex(np.sum(self.weights * self.nodes ** m))

    def sorted(self) -> "PointMeasure":
        order = np.argsort(np.mod(np.angle(self.nodes), 2 * np.pi))
        return PointMeasure(self.nodes[order], self.weights[order], dict(self.meta))

    def validate(self, node_tol: float = NODE_TOL, sum_tol: float = WEIGHT_SUM_TOL):
        if self.nodes.size == 0:
            raise DimensionError("empty measure")
        if np.any(np.abs(np.abs(self.nodes) - 1.0) > 1e-10):
            raise DomainError("measure nodes must lie on the unit circle")
        if np.any(self.weights <= 0):
            raise DomainError("measure weights must be strictly positive")
        if abs(self.weights.sum() - 1.0) > sum_tol:
            raise DomainError(f"weights sum to {self.weights.sum()!r}, not 1")
        if self.nodes.size > 1:
            d = np.abs(self.nodes[:, None] - self.nodes[None, :])
            d[np.diag_indices_from(d)] = np.inf
            if d.min() < node_tol:
                raise DegenerateSpectrumError("measure has coincident nodes")
        return self


def as_scalar_string(alphas) -> np.ndarray:
    """Validate a scalar coefficient string and return it as a complex array."""
    a = np.asarray(alphas)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError(f"scalar coefficient string must be 1-d and non-empty, got {a.shape}")
    a = a.astype(complex)
    mod = np.abs(a)
    if np.any(mod[:-1] >= 1.0):
        raise DomainError("interior coefficients must lie strictly inside the unit disk")
    if mod[-1] > 1.0 + 1e-12:
        raise DomainError("last coefficient must lie in the closed unit disk")
    return a


def reversed_poly(p, degree: int | None = None) -> np.ndarray:
    """Reversed polynomial z**k * conj(P(1/conj(z))) for a stated degree k.

    ``p`` is in descending order; if ``degree`` exceeds ``len(p) - 1`` the
    input is padded with leading zeros first.
    """
    p = np.asarray(p, dtype=complex)
    if degree is not None:
        if degree < p.size - 1:
            raise DimensionError("degree smaller than coefficient length")
        p = np.concatenate([np.zeros(degree + 1 - p.size, dtype=complex), p])
    return np.conj(p[::-1])


def szego_forward(alphas) -> list[np.ndarray]:
    """Monic orthogonal polynomials Phi_0..Phi_n from the Szego recurrence."""
    a = np.asarray(alphas, dtype=complex).ravel()
    polys = [np.ones(1, dtype=complex)]
    p = polys[0]
    for ak in a:
        nxt = np.zeros(p.size + 1, dtype=complex)
        nxt[:-1] = p
        nxt[1:] -= np.conj(ak) * np.conj(p[::-1])
        polys.append(nxt)
        p = nxt
    return polys


def alphas_from_polys(polys) -> np.ndarray:
    """Read coefficients back off Phi_1..Phi_n via alpha_k = -conj(Phi_{k+1}(0))."""
    return np.array([-np.conj(p[-1]) for p in polys[1:]], dtype=complex)


def inverse_szego(phi_n) -> np.ndarray:
    """Coefficients alpha_0..alpha_{n-1} of a monic polynomial with zeros in the disk.

    Runs the recurrence backwards:
    z Phi_k = (Phi_{k+1} + conj(alpha_k) Phi_{k+1}^*) / (1 - |alpha_k|^2).
    """
    p = np.asarray(phi_n, dtype=complex)
    p = p / p[0]
    n = p.size - 1
    out = np.empty(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        ak = -np.conj(p[-1])
        out[k] = ak
        if k == 0:
            break
        rho2 = 1.0 - abs(ak) ** 2
        if rho2 <= 0:
            raise DomainError(f"|alpha_{k}| >= 1: polynomial has zeros outside the open disk")
        zp = (p + np.conj(ak) * np.conj(p[::-1])) / rho2
        # zp is z * Phi_k; its constant term vanishes up to rounding
        p = zp[:-1]
    # alpha_0 is interior unless it is also the last coefficient
    if abs(out[0]) >= 1 and (n > 1 or abs(out[0]) > 1 + 1e-12):
        raise DomainError("|alpha_0| >= 1: polynomial has zeros outside the open disk")
    return out


def verblunsky_from_measure(mu: PointMeasure, validate: bool = True) -> np.ndarray:
    """Coefficients of a finitely supported measure by Gram-Schmidt.

    The monic orthogonal polynomials are built on the values at the nodes
    with one round of re-orthogonalization, tracking their coefficient
    arrays alongside. The last polynomial is the node polynomial itself, so
    the final coefficient is unimodular by construction.
    """
    if validate:
        mu.validate()
    z, w = mu.nodes, mu.weights
    n = z.size
    vals = [np.ones(n, dtype=complex)]
    coefs = [np.ones(1, dtype=complex)]
    norms = [float(np.sum(w))]
    alphas = np.empty(n, dtype=complex)
    for k in range(n - 1):
        v = z * vals[-1]
        c = np.concatenate([coefs[-1], [0.0]])
        for _ in range(2):
            for m in range(k + 1):
                proj = np.sum(w * np.conj(vals[m]) * v) / norms[m]
                v = v - proj * vals[m]
                c[-(m + 1):] -= proj * coefs[m]
        nrm = float(np.sum(w * np.abs(v) ** 2))
        if nrm < NORM_FLOOR:
            raise DomainError(
                f"orthogonal polynomial norm underflow at degree {k + 1}; "
                "measure outside the supported condition range")
        vals.append(v)
        coefs.append(c)
        norms.append(nrm)
        alphas[k] = -np.conj(c[-1])
    alphas[n - 1] = -np.conj((-1) ** n * np.prod(z))
    if np.any(np.abs(alphas[:-1]) >= 1):
        raise DomainError("Gram-Schmidt produced a coefficient outside the disk")
    return alphas


def verblunsky_from_measure_inner(mu: PointMeasure) -> np.ndarray:
    """Same coefficients via conj(alpha_k) = <z Phi_k, 1> / ||Phi_k||^2.

    Uses the recurrence itself to advance, so it is independent of the
    Gram-Schmidt route above.
    """
    mu.validate()
    z, w = mu.nodes, mu.weights
    n = z.size
    phi = np.ones(n, dtype=complex)
    phistar = np.ones(n, dtype=complex)
    alphas = np.empty(n, dtype=complex)
    for k in range(n - 1):
        nrm = float(np.sum(w * np.abs(phi) ** 2))
        abar = np.sum(w * z * phi) / nrm
        alphas[k] = np.conj(abar)
        phi, phistar = z * phi - abar * phistar, phistar - alphas[k] * z * phi
    alphas[n - 1] = -np.conj((-1) ** n * np.prod(z))
    return alphas


def opuc_norm_products(alphas) -> np.ndarray:
    """Squared norms ||Phi_k||^2 = prod_{j<k} (1 - |alpha_j|^2), k = 0..n."""
    a = np.asarray(alphas, dtype=complex).ravel()
    return np.concatenate([[1.0], np.cumprod(1.0 - np.abs(a) ** 2)])


def gram_schmidt_norms(alphas, mu: PointMeasure) -> np.ndarray:
    """Squared norms of Phi_0..Phi_{n-1} computed as integrals against ``mu``."""
    polys = szego_forward(alphas)
    return np.array([np.sum(mu.weights * np.abs(np.polyval(p, mu.nodes)) ** 2)
                     for p in polys[:len(mu)]])


def christoffel_darboux(alphas, k: int, z: complex, zeta: complex) -> tuple[complex, complex]:
    """Both sides of the Christoffel-Darboux formula at degree ``k``.

    Orthonormal polynomials are normalized with the norm products, which
    only requires alpha_0..alpha_{k-1} inside the disk.
    """
    polys = szego_forward(np.asarray(alphas)[:k])
    norms = np.sqrt(opuc_norm_products(np.asarray(alphas)[:k]))
    lhs = sum(np.polyval(polys[j], z) * np.conj(np.polyval(polys[j], zeta)) / norms[j] ** 2
              for j in range(k))
    pk, nk = polys[k], norms[k]
    pks = reversed_poly(pk)
    num = (np.polyval(pks, z) * np.conj(np.polyval(pks, zeta))
           - np.polyval(pk, z) * np.conj(np.polyval(pk, zeta))) / nk ** 2
    rhs = num / (1.0 - z * np.conj(zeta))
    return complex(lhs), complex(rhs)


def cauchy_determinant(zs) -> tuple[float, float]:
    """Both sides of the Cauchy determinant identity for points in the disk."""
    zs = np.asarray(zs, dtype=complex)
    G = 1.0 / (1.0 - zs[:, None] * np.conj(zs[None, :]))
    lhs = np.linalg.det(G)
    iu = np.triu_indices(zs.size, 1)
    vdm = np.prod(np.abs(zs[iu[1]] - zs[iu[0]]) ** 2)
    rhs = vdm / np.prod(1.0 - zs[:, None] * np.conj(zs[None, :]))
    return float(np.real(lhs)), float(np.real(rhs))


def _rel(a, b) -> float:
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b), np.finfo(float).tiny)
    return abs(a - b) / scale


def identity_suite(alphas, rng=None, mu: PointMeasure | None = None) -> dict:
    """Evaluate both sides of the standard OPUC identities.

    Returns a mapping from identity name to max relative error. ``alphas``
    must have all entries strictly inside the disk. The measure-based
    identities use ``mu`` if given, otherwise the spectral measure of the
    CMV matrix of ``alphas`` completed by a unimodular last coefficient.
    """
    from .cmv import build_cmv
    from .spectra import polyroots, spectral_measure

    a = np.asarray(alphas, dtype=complex).ravel()
    n = a.size
    if np.any(np.abs(a) >= 1):
        raise DomainError("identity suite needs all coefficients inside the disk")
    rng = np.random.default_rng(0) if rng is None else rng
    polys = szego_forward(a)
    roots = [None] + [polyroots(p) for p in polys[1:]]
    report = {}

    errs = []
    for k in range(1, n + 1):
        errs.append(_rel(polys[k][-1], (-1) ** k * np.prod(roots[k])))
        errs.append(_rel(polys[k][-1], -np.conj(a[k - 1])))
    if np.all(a.imag == 0):
        for k in range(1, n + 1):
            r = roots[k]
            errs.append(_rel(np.polyval(polys[k], 1.0), np.prod(1 - a.real[:k])))
            errs.append(_rel(np.prod(1 - r), np.prod(1 - a.real[:k])))
            signs = (-1.0) ** np.arange(k)
            errs.append(_rel(np.prod(1 + r), np.prod(1 + signs * a.real[:k])))
    report["zeros_product"] = max(errs)

    if mu is None:
        last = np.exp(2j * np.pi * rng.random())
        mu = spectral_measure(build_cmv(np.concatenate([a, [last]])))
    gs = gram_schmidt_norms(np.concatenate([a, [0]])[: len(mu)], mu)
    closed = opuc_norm_products(a)[: gs.size]
    report["norm_products"] = max(_rel(x, y) for x, y in zip(gs, closed))

    errs = []
    for k in range(0, n + 1):
        for _ in range(3):
            z = _disk_point(rng)
            zeta = _disk_point(rng)
            errs.append(_rel(*christoffel_darboux(a, k, z, zeta)))
    report["christoffel_darboux"] = max(errs)

    pts = np.array([_disk_point(rng) for _ in range(min(max(n, 2), 6))])
    report["cauchy_determinant"] = _rel(*cauchy_determinant(pts))

    m = len(mu)
    am = verblunsky_from_measure(mu)
    lhs = np.prod((1 - np.abs(am[: m - 1]) ** 2) ** (m - 1 - np.arange(m - 1)))
    iu = np.triu_indices(m, 1)
    nodes = mu.nodes
    rhs = np.prod(np.abs(nodes[iu[1]] - nodes[iu[0]]) ** 2) * np.prod(mu.weights)
    report["measure_vandermonde"] = _rel(lhs, rhs)

    errs = []
    for k in range(1, n + 1):
        lhs = np.prod((1 - np.abs(a[:k]) ** 2) ** (np.arange(k) + 1))
        r = roots[k]
        rhs = np.prod(1 - r[:, None] * np.conj(r[None, :]))
        errs.append(_rel(lhs, rhs))
    report["zeros_gram"] = max(errs)
    return report


def _disk_point(rng, radius: float = 0.9) -> complex:
    return complex(radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))
