"""Closed-form log-densities, normalization constants and the dielectric log-gas energy.

Everything is evaluated in log space with ``scipy.special.gammaln`` because
the constants and Vandermonde factors overflow around n = 20.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.special import gammaln

from .errors import DimensionError, DomainError, StratificationError
from .spectra import EigenCloud, stratify

__all__ = [
    "LogGasParams",
    "NormalizationTable",
    "normalization_table",
    "log_P",
    "log_P_from_coefficients",
    "log_density_trunc_circular",
    "log_density_trunc_orthogonal",
    "log_density_spectral_circular",
    "log_density_spectral_orthogonal",
    "log_density_nonideal",
    "log_gas_energy",
    "SPECTRAL_ORTHOGONAL_CASES",
]

SPECTRAL_ORTHOGONAL_CASES = ("a", "b", "c", "d")
_SIMPLEX_TOL = 1e-10


def _check_beta(beta):
    if not beta > 0 or not np.isfinite(beta):
        raise DomainError(f"beta must be positive and finite, got {beta}")


def _check_ab(a, b):
    if a <= -1 or b <= -1:
        raise DomainError(f"a and b must exceed -1, got ({a}, {b})")


def _disk_points(zs) -> np.ndarray:
    z = np.asarray(zs, dtype=complex).ravel()
    if z.size == 0:
        raise DimensionError("need at least one point")
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite point")
    if np.any(np.abs(z) >= 1):
        raise DomainError("all points must lie in the open unit disk")
    return z


def _log_abs_vandermonde(x) -> float:
    x = np.asarray(x)
    n = x.size
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, 1)
    d = np.abs(x[:, None] - x[None, :])[iu]
    if np.any(d == 0):
        return -math.inf
    return float(np.sum(np.log(d)))


def _log_kernel_product(z) -> float:
    """log of prod_{j,k} (1 - z_j conj(z_k)), summed as Hermitian pairs (real, positive)."""
    diag = np.sum(np.log1p(-np.abs(z) ** 2))
    n = z.size
    if n < 2:
        return float(diag)
    iu = np.triu_indices(n, 1)
    off = np.log(np.abs(1.0 - z[:, None] * np.conj(z)[None, :])[iu])
    return float(diag + 2.0 * np.sum(off))


# ---------------------------------------------------------------- constants

def log_P(n: int, beta: float, a: float, b: float) -> float:
    """log of the truncated orthogonal normalizer, closed gamma-product form."""
    _check_beta(beta)
    _check_ab(a, b)
    h = n // 2
    out = (n * (a + b + 1) + beta * n * (n - 1) / 4) * math.log(2)
    for j in range((n - 1) // 2 + 1):
        out += gammaln(a + 1 + beta * j / 2) + gammaln(b + 1 + beta * j / 2)
        out -= gammaln(a + b + 2 + beta * (h + j) / 2)
    for j in range(1, h + 1):
        out += gammaln(beta * j / 2)
    return float(out)


def _log_beta_sym_norm(s, t) -> float:
    """log of the B(s, t) normalizer 2^(1-s-t) Gamma(s+t) / (Gamma(s) Gamma(t))."""
    return float((1 - s - t) * math.log(2) + gammaln(s + t) - gammaln(s) - gammaln(t))


def log_P_from_coefficients(n: int, beta: float, a: float, b: float) -> float:
    """Same constant as :func:`log_P`, as a product over the coefficient laws.

    The eigenvalue law is the pushforward of independent B(s_k, t_k)
    coefficients, so the normalizer is the product of their normalizers.
    """
    _check_beta(beta)
    _check_ab(a, b)
    out = 0.0
    for k in range(n):
        if k % 2 == 0:
            s, t = beta * k / 4 + a + 1, beta * k / 4 + b + 1
        else:
            s, t = beta * (k - 1) / 4 + a + b + 2, beta * (k + 1) / 4
        out -= _log_beta_sym_norm(s, t)
    return out


def _log_Z(n, beta):
    return float(gammaln(beta * n / 2 + 1) - n * gammaln(beta / 2 + 1))


def _log_Zp(n, beta):
    return float(n * gammaln(beta / 2) - gammaln(beta * n / 2))


def _log_C(n, beta, a, b):
    out = gammaln(n + 1) + (n * (a + b + 1) + beta * n * (n - 1)) * math.log(2)
    for j in range(n):
        out += gammaln(a + 1 + beta * j / 2) + gammaln(b + 1 + beta * j / 2)
        out += gammaln(beta * (j + 1) / 2)
        out -= gammaln(a + b + 2 + beta * (n - 1 + j) / 2) + gammaln(beta / 2)
    return float(out)


def _log_K(n, beta):
    return float(n * gammaln(beta / 2) - gammaln(beta * n / 2))


def _log_L(n, beta):
    return float((n - 1) * gammaln(beta / 2) + 2 * gammaln(beta / 4) - gammaln(beta * n / 2))


def _log_M(n, beta):
    return float(n * gammaln(beta / 2) + gammaln(beta / 4) - gammaln(beta * (n + 0.5) / 2))


def _log_gamma_ratio_product(m, beta):
    j = np.arange(1, m + 1)
    return float(np.sum(gammaln(beta * j / 4) - gammaln(0.5 + beta * j / 4)))


def _log_D(n, beta):
    # (n-1)! rather than n!: the det -1 even case has n-1 free angles
    out = gammaln(n) + (n - 0.5) * math.log(math.pi)
    out -= ((2 * n - 1) * beta / 2 - n) * math.log(2)
    out += _log_gamma_ratio_product(2 * n - 1, beta)
    return float(out - _log_L(n, beta))


def _log_E(n, beta):
    out = gammaln(n + 1) + n * math.log(math.pi)
    out -= (beta / 2 - 1) * n * math.log(2)
    out += _log_gamma_ratio_product(2 * n, beta)
    return float(out - _log_M(n, beta))


@dataclass(frozen=True)
class NormalizationTable:
    """Every normalization constant for one parameter set (values, not logs).

    Constants that overflow a double are reported as ``inf``; the ``log_*``
    attributes are always finite.
    """

    n: int
    beta: float
    a: float
    b: float
    log_Z: float
    log_Zp: float
    log_C: float
    log_K: float
    log_D: float
    log_L: float
    log_E: float
    log_M: float
    log_P: float

    def value(self, name: str) -> float:
        return math.exp(getattr(self, "log_" + name)) if getattr(self, "log_" + name) < 709 else math.inf

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        for name in ("Z", "Zp", "C", "K", "D", "L", "E", "M", "P"):
            out[name] = self.value(name)
        return out


def normalization_table(n: int, beta: float, a: float = -0.5, b: float = -0.5) -> NormalizationTable:
    """Evaluate all constants at ``(n, beta, a, b)`` via log-gamma."""
    if int(n) != n or n < 1:
        raise DimensionError(f"n must be a positive integer, got {n}")
    n = int(n)
    _check_beta(beta)
    _check_ab(a, b)
    vals = dict(
        log_Z=_log_Z(n, beta), log_Zp=_log_Zp(n, beta), log_C=_log_C(n, beta, a, b),
        log_K=_log_K(n, beta), log_D=_log_D(n, beta), log_L=_log_L(n, beta),
        log_E=_log_E(n, beta), log_M=_log_M(n, beta), log_P=log_P(n, beta, a, b),
    )
    for k, v in vals.items():
        if not np.isfinite(v):
            raise DomainError(f"{k[4:]} is not finite at these parameters")
    return NormalizationTable(n=n, beta=float(beta), a=float(a), b=float(b), **vals)


# ---------------------------------------------------------------- eigenvalue densities

def log_density_trunc_circular(zs, beta: float) -> float:
    """Log joint density of the truncated circular beta-ensemble w.r.t. d^2z_1 ... d^2z_n.

    Returns ``-inf`` when two points coincide.
    """
    _check_beta(beta)
    z = _disk_points(zs)
    n = z.size
    lv = _log_abs_vandermonde(z)
    if lv == -math.inf:
        return -math.inf
    const = n * (math.log(beta) - math.log(2 * math.pi))
    return const + (beta / 2 - 1) * _log_kernel_product(z) + 2 * lv


def _orthogonal_points(cloud, strat_tol):
    if isinstance(cloud, EigenCloud):
        vals, stratum = cloud.values, cloud.stratum
    else:
        vals, stratum = np.asarray(cloud, dtype=complex).ravel(), None
    L, M, ordered = stratify(vals, strat_tol)
    if stratum is not None and tuple(stratum) != (L, M):
        raise StratificationError(f"declared stratum {tuple(stratum)} but found {(L, M)}")
    z = _disk_points(ordered)
    reals = z[:L].real
    if np.any(np.abs(reals) >= 1):
        raise DomainError("real eigenvalues must avoid +-1")
    return z


def log_density_trunc_orthogonal(cloud, beta: float, a: float, b: float,
                                 strat_tol: float | None = None) -> float:
    """Log joint density of the truncated orthogonal beta-ensemble.

    The reference measure on the stratum with L real values and M conjugate
    pairs is ``2^M dx_1 .. dx_(L+M) dy_1 .. dy_M`` over ordered
    configurations; the ``2^M`` belongs to the measure, not to this value.

    ``cloud`` is an :class:`EigenCloud` or any conjugation-closed array; a
    declared stratum must agree with the detected one.
    """
    _check_beta(beta)
    _check_ab(a, b)
    z = _orthogonal_points(cloud, strat_tol)
    n = z.size
    lv = _log_abs_vandermonde(z)
    if lv == -math.inf:
        return -math.inf
    out = -log_P(n, beta, a, b)
    out += (beta / 4 - 0.5) * _log_kernel_product(z)
    # prod (1 - z_j) is real positive over a conjugation-closed set
    out += (a + 0.5 - beta / 4) * float(np.sum(np.log(np.abs(1 - z))))
    out += (b + 0.5 - beta / 4) * float(np.sum(np.log(np.abs(1 + z))))
    return out + lv


def log_density_nonideal(zs, beta: float, weightfn=None, real: bool = False,
                         strat_tol: float | None = None) -> float:
    """Log eigenvalue density of the coupled model with reflection weight ``weightfn``.

    The coupled circular model's density is the truncated circular density
    times F(|prod z_j|); with ``real=True`` it is the truncated orthogonal
    density at a = b = beta/4 - 1 times G(|prod z_j|). ``weightfn=None``
    means the constant 1. The weight function is evaluated only; whether
    it defines a probability law is the caller's responsibility.
    """
    if real:
        base = log_density_trunc_orthogonal(zs, beta, beta / 4 - 1, beta / 4 - 1, strat_tol)
        z = np.asarray(zs.values if isinstance(zs, EigenCloud) else zs, dtype=complex)
    else:
        base = log_density_trunc_circular(zs, beta)
        z = np.asarray(zs, dtype=complex)
    if weightfn is None:
        return base
    r = float(np.prod(np.abs(z)))
    w = float(weightfn(r))
    if not np.isfinite(w) or w < 0:
        raise DomainError(f"weight function returned {w} at {r}")
    if w == 0:
        return -math.inf
    return base + math.log(w)


# ---------------------------------------------------------------- spectral measures

def _check_simplex(mus, count):
    mu = np.asarray(mus, dtype=float).ravel()
    if mu.size != count:
        raise DimensionError(f"expected {count} weights, got {mu.size}")
    if np.any(mu <= 0) or abs(mu.sum() - 1) > _SIMPLEX_TOL:
        raise DomainError("weights must be positive and sum to 1")
    return mu


def log_density_spectral_circular(thetas, mus, beta: float) -> float:
    """Log joint density of nodes and weights of the circular beta-ensemble.

    Reference measure: dtheta_1 .. dtheta_n on [0, 2pi)^n and Lebesgue
    measure on the first n-1 weights.
    """
    _check_beta(beta)
    th = np.asarray(thetas, dtype=float).ravel()
    n = th.size
    mu = _check_simplex(mus, n)
    lv = _log_abs_vandermonde(np.exp(1j * th))
    if lv == -math.inf:
        return -math.inf
    out = beta * lv - n * math.log(2 * math.pi) - _log_Z(n, beta)
    return out + (beta / 2 - 1) * float(np.sum(np.log(mu))) - _log_Zp(n, beta)


def log_density_spectral_orthogonal(thetas, mus, case: str, beta: float,
                                    a: float = -0.5, b: float = -0.5) -> float:
    """Log joint density of the spectral measure of the real orthogonal beta-ensemble.

    Layouts, with ``n`` the half-size:

    * ``"a"`` (size 2n, det +1): n angles, n pair weights.
    * ``"b"`` (size 2n, det -1): n-1 angles, n-1 pair weights then the weights at +1 and -1.
    * ``"c"`` (size 2n+1, det +1): n angles, n pair weights then the weight at +1.
    * ``"d"`` (size 2n+1, det -1): as ``"c"`` with the weight at -1.

    Angles lie in (0, pi); a pair weight is the total of the two conjugate
    nodes. Reference measure is Lebesgue on the angles and on all weights
    but the last. ``a`` and ``b`` enter only case ``"a"``.
    """
    if case not in SPECTRAL_ORTHOGONAL_CASES:
        raise ValueError(f"case must be one of {SPECTRAL_ORTHOGONAL_CASES}")
    _check_beta(beta)
    th = np.asarray(thetas, dtype=float).ravel()
    if np.any(th <= 0) or np.any(th >= np.pi):
        raise DomainError("angles must lie in (0, pi)")
    m = th.size
    n = m + 1 if case == "b" else m
    if n < 1:
        raise DimensionError("need at least one angle")
    mu = _check_simplex(mus, n if case == "a" else n + 1)
    c = np.cos(th)
    lv = _log_abs_vandermonde(2 * c)
    if lv == -math.inf:
        return -math.inf
    l1m, l1p = np.log(1 - c), np.log(1 + c)
    lmu = np.log(mu)
    if case == "a":
        _check_ab(a, b)
        ang = (a + 0.5) * l1m.sum() + (b + 0.5) * l1p.sum() - _log_C(n, beta, a, b)
        wt = (beta / 2 - 1) * lmu.sum() - _log_K(n, beta)
    elif case == "b":
        ang = (3 * beta / 4 - 0.5) * (l1m.sum() + l1p.sum()) - _log_D(n, beta)
        wt = (beta / 4 - 1) * lmu[-2:].sum() + (beta / 2 - 1) * lmu[:-2].sum() - _log_L(n, beta)
    else:
        e_minus, e_plus = 3 * beta / 4 - 0.5, beta / 4 - 0.5
        if case == "d":
            e_minus, e_plus = e_plus, e_minus
        ang = e_minus * l1m.sum() + e_plus * l1p.sum() - _log_E(n, beta)
        wt = (beta / 4 - 1) * lmu[-1] + (beta / 2 - 1) * lmu[:-1].sum() - _log_M(n, beta)
    return float(beta * lv + ang + wt)


# ---------------------------------------------------------------- log-gas

@dataclass(frozen=True)
class LogGasParams:
    """Charges in the unit disk with permittivity eps1 inside, eps2 outside."""

    eps1: float
    eps2: float
    kT: float

    def __post_init__(self):
        if self.eps1 == 0 or self.eps1 + self.eps2 == 0:
            raise DomainError("need eps1 != 0 and eps1 + eps2 != 0")
        if not self.kT > 0:
            raise DomainError("temperature must be positive")

    @property
    def alpha(self) -> float:
        return (self.eps1 - self.eps2) / (self.eps1 + self.eps2)

    @property
    def gamma(self) -> float:
        return 1.0 / (2 * math.pi * self.eps1 * self.kT)

    @classmethod
    def from_exponents(cls, gamma: float, alpha: float, eps1: float = 1.0) -> "LogGasParams":
        """Parameters with the given Gibbs exponents (alpha != -1)."""
        if alpha == -1:
            raise DomainError("alpha = -1 needs infinite eps2")
        return cls(eps1=eps1, eps2=eps1 * (1 - alpha) / (1 + alpha),
                   kT=1.0 / (2 * math.pi * eps1 * gamma))

    def pair_potential(self, z, z0) -> float:
        c = -1.0 / (2 * math.pi * self.eps1)
        return c * (math.log(abs(z - z0)) + self.alpha * math.log(abs(1 - z * np.conj(z0))))

    def wall_potential(self, z0) -> float:
        return -self.alpha / (4 * math.pi * self.eps1) * math.log1p(-abs(z0) ** 2)


def log_gas_energy(zs, params: LogGasParams) -> float:
    """Total energy: wall terms plus half the sum of pair potentials over ordered pairs.

    Coincident charges give ``+inf``.
    """
    z = _disk_points(zs)
    if _log_abs_vandermonde(z) == -math.inf:
        return math.inf
    n = z.size
    H = sum(params.wall_potential(z[j]) for j in range(n))
    for j in range(n):
        for k in range(n):
            if j != k:
                H += 0.5 * params.pair_potential(z[k], z[j])
    return float(H)
