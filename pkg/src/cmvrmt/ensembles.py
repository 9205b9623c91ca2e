"""Random samplers: primitive coefficient laws, Haar matrices and CMV models."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .cmv import build_block_cmv, build_cmv, truncate_first
from .errors import DimensionError, DomainError
from .quaternion import symplectic_form
from .spectra import EigenCloud, eigvals

__all__ = [
    "FAMILIES",
    "CouplingSpec",
    "EnsembleSpec",
    "make_rng",
    "sample_beta_sym",
    "sample_theta",
    "sample_upsilon",
    "sample_simplex_pushforward",
    "sample_haar",
    "sample_coe",
    "sample_cse",
    "direct_truncation",
    "direct_coupled",
    "verblunsky_model",
    "model_matrix",
    "sample_cloud",
    "sample_ensemble_eigs",
]

FAMILIES = ("CUE", "COE", "CSE", "CircularBeta", "O", "SO", "O_minus_SO",
            "OrthogonalBeta", "USp")
_FIXED_BETA = {"COE": 1.0, "CUE": 2.0, "CSE": 4.0, "O": 2.0, "SO": 2.0,
               "O_minus_SO": 2.0, "USp": 4.0}
_BLOCK = ("CSE", "USp")
_ORTHO = ("O", "SO", "O_minus_SO", "OrthogonalBeta")


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for the stream (seed, index).

    Different indices give statistically independent streams, so work can
    be split across processes without changing results.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


# ---------------------------------------------------------------- primitives

def sample_beta_sym(s: float, t: float, rng, size=None):
    """Draw from B(s, t) on [-1, 1], density proportional to (1-x)^(s-1) (1+x)^(t-1).

    ``(0, 0)`` gives +1 or -1 with probability 1/2 each. A single zero
    parameter puts all mass at the corresponding endpoint.
    """
    if s < 0 or t < 0:
        raise DomainError(f"B(s, t) needs s, t >= 0, got ({s}, {t})")
    if s == 0 and t == 0:
        out = rng.choice([-1.0, 1.0], size=size)
    elif s == 0:
        out = np.ones(size) if size is not None else 1.0
    elif t == 0:
        out = -np.ones(size) if size is not None else -1.0
    else:
        out = 2.0 * rng.beta(t, s, size=size) - 1.0
    return out if size is not None else float(out)


def sample_theta(nu: float, rng, size=None):
    """Draw from Theta(nu): uniform phase with |z|^2 ~ Beta(1, (nu - 1) / 2).

    ``nu = 1`` is the uniform law on the unit circle.
    """
    if nu < 1:
        raise DomainError(f"Theta(nu) needs nu >= 1, got {nu}")
    phase = np.exp(2j * np.pi * rng.random(size))
    if nu == 1:
        return phase if size is not None else complex(phase)
    r = np.sqrt(rng.beta(1.0, (nu - 1.0) / 2.0, size=size))
    out = r * phase
    return out if size is not None else complex(out)


def _upsilon_matrix(a) -> np.ndarray:
    a0, a1, a2, a3 = a
    return np.array([[a0 + 1j * a1, -a2 + 1j * a3],
                     [a2 + 1j * a3, a0 - 1j * a1]], dtype=complex)


def sample_upsilon(nu: float, rng) -> np.ndarray:
    """Draw a 2x2 real-quaternionic block from Upsilon(nu).

    The 4-vector has uniform direction and ``|a|^2 ~ Beta(2, (nu - 3) / 2)``;
    ``nu = 3`` is Haar measure on SU(2).
    """
    if nu < 3:
        raise DomainError(f"Upsilon(nu) needs nu >= 3, got {nu}")
    g = rng.standard_normal(4)
    g /= np.linalg.norm(g)
    if nu > 3:
        g *= np.sqrt(rng.beta(2.0, (nu - 3.0) / 2.0))
    return _upsilon_matrix(g)


_PUSHFORWARD_GROUPS = {
    # kind -> (sphere dimension, group sizes) for n weights
    "a": lambda n: [1] * n,
    "b": lambda n: [2] * n,
    "c": lambda n: [2] * (n - 1) + [1, 1],
    "d": lambda n: [2] * n + [1],
    "e": lambda n: [4] * n,
}


def sample_simplex_pushforward(kind: str, n: int, rng) -> np.ndarray:
    """Grouped squared coordinates of a uniform point on a sphere.

    Kinds follow the grouping of coordinates: (a) singles in R^n, (b) pairs
    in R^2n, (c) n-1 pairs and two singles in R^2n, (d) n pairs and one
    single in R^(2n+1), (e) quadruples in R^4n. Kinds (c) and (d) return
    n+1 weights.
    """
    if kind not in _PUSHFORWARD_GROUPS:
        raise ValueError(f"unknown kind {kind!r}")
    if n < 1 or (kind == "c" and n < 1):
        raise DimensionError("n must be positive")
    groups = _PUSHFORWARD_GROUPS[kind](n)
    x = rng.standard_normal(sum(groups))
    x /= np.linalg.norm(x)
    sq = x ** 2
    edges = np.cumsum([0] + groups)
    return np.array([sq[edges[i]:edges[i + 1]].sum() for i in range(len(groups))])


# ---------------------------------------------------------------- Haar samplers

def _gaussian_column(rng, dim, real):
    if real:
        return rng.standard_normal(dim).astype(complex)
    return (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2)


def _orthonormalize_against(v, cols):
    for _ in range(2):
        for u in cols:
            v = v - np.vdot(u, v) * u
    return v


def sample_haar(group: str, n: int, rng) -> np.ndarray:
    """Haar-distributed matrix from U(n), O(n) or USp(n) (embedded as 2n x 2n).

    Columns are built one at a time: a Gaussian vector is projected off the
    previous columns and normalized. For USp each free column v is followed
    by Z conj(v).
    """
    if n < 1:
        raise DimensionError("n must be positive")
    if group in ("U", "O"):
        real = group == "O"
        cols = []
        while len(cols) < n:
            v = _orthonormalize_against(_gaussian_column(rng, n, real), cols)
            nv = np.linalg.norm(v)
            if nv < 1e-8:
                continue
            cols.append(v / nv)
        M = np.column_stack(cols)
        return M.real.copy() if real else M
    if group == "USp":
        Z = symplectic_form(n)
        cols = []
        while len(cols) < 2 * n:
            v = _orthonormalize_against(_gaussian_column(rng, 2 * n, False), cols)
            nv = np.linalg.norm(v)
            if nv < 1e-8:
                continue
            v = v / nv
            cols.extend([v, Z @ np.conj(v)])
        return np.column_stack(cols)
    raise ValueError(f"unknown group {group!r}")


def sample_coe(n: int, rng) -> np.ndarray:
    U = sample_haar("U", n, rng)
    return U.T @ U


def sample_cse(n: int, rng) -> np.ndarray:
    """CSE matrix in embedded 2n x 2n form, dual(U) @ U for U Haar in U(2n)."""
    from .quaternion import dual

    U = sample_haar("U", 2 * n, rng)
    return dual(U) @ U


# ---------------------------------------------------------------- specs

@dataclass
class CouplingSpec:
    """Law of the last (coupled) coefficient's modulus R in [0, 1].

    ``r`` is a constant in [0, 1]; ``r=None`` draws R from the law that
    makes the coupled model equal in law to the next larger truncation.
    For SO and O_minus_SO the determinant sign stays fixed, so there the
    result is a fixed-sign model with that random R; the truncation itself
    mixes both signs.
    """

    r: float | None = None

    def __post_init__(self):
        if self.r is not None and not 0.0 <= self.r <= 1.0:
            raise DomainError(f"reflection coefficient must lie in [0, 1], got {self.r}")


@dataclass
class EnsembleSpec:
    """Tagged description of an ensemble.

    ``n`` is the size of the model matrix: for truncated or coupled models
    it is the size after truncation, for quaternionic families it counts
    quaternionic rows. ``det`` selects the determinant sign of the
    real orthogonal beta-ensemble and is ignored elsewhere.
    """

    family: str
    n: int
    beta: float | None = None
    a: float | None = None
    b: float | None = None
    det: int = 1
    truncated: bool = False
    coupling: CouplingSpec | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if int(self.n) != self.n or self.n < 1:
            raise DimensionError(f"n must be a positive integer, got {self.n}")
        self.n = int(self.n)
        if isinstance(self.coupling, dict):
            self.coupling = CouplingSpec(**self.coupling)
        if self.family in _FIXED_BETA:
            fixed = _FIXED_BETA[self.family]
            if self.beta is not None and float(self.beta) != fixed:
                raise DomainError(f"{self.family} has beta = {fixed:g}")
            self.beta = fixed
        elif self.beta is None:
            raise DomainError(f"{self.family} needs beta")
        if self.beta <= 0:
            raise DomainError("beta must be positive")
        if self.family == "OrthogonalBeta" and self.coupling is not None:
            # the coupled real model is stated only at a = b = beta/4 - 1
            edge = self.beta / 4 - 1
            for name in ("a", "b"):
                v = getattr(self, name)
                if v is not None and abs(float(v) - edge) > 1e-12:
                    raise DomainError(f"coupled OrthogonalBeta needs {name} = beta/4 - 1")
            self.a = self.b = edge
        if self.family == "OrthogonalBeta":
            self.a = -0.5 if self.a is None else float(self.a)
            self.b = -0.5 if self.b is None else float(self.b)
            if self.a <= -1 or self.b <= -1:
                raise DomainError("a and b must exceed -1")
            if self.det not in (1, -1):
                raise DomainError("det must be +1 or -1")
        elif self.a is not None or self.b is not None:
            raise DomainError("a and b apply to OrthogonalBeta only")
        if self.truncated and self.coupling is not None:
            raise DomainError("truncated and coupling are mutually exclusive")
        if self.coupling is not None and self.family == "USp" and self.coupling.r is None:
            raise DomainError("USp coupling supports a constant reflection coefficient only")

    @property
    def is_block(self) -> bool:
        return self.family in _BLOCK

    @property
    def is_real(self) -> bool:
        return self.family in _ORTHO

    @property
    def matrix_size(self) -> int:
        return 2 * self.n if self.is_block else self.n

    def tag(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        return d


# ---------------------------------------------------------------- coefficient models

def _circular_laws(spec: EnsembleSpec):
    n, beta = spec.n, spec.beta
    if spec.truncated or spec.coupling is not None:
        return [beta * (k + 1) + 1 for k in range(n)]
    return [beta * (n - 1 - k) + 1 for k in range(n)]


def _orthogonal_beta_params(spec: EnsembleSpec, k: int):
    """B(s, t) parameters for coefficient k of the real orthogonal beta-ensemble."""
    N, beta, a, b = spec.n, spec.beta, spec.a, spec.b
    if N % 2 == 0:
        m = N // 2
        if spec.det == 1:
            if k % 2 == 0:
                return ((2 * m - 2 - k) * beta / 4 + a + 1, (2 * m - 2 - k) * beta / 4 + b + 1)
            return ((2 * m - 3 - k) * beta / 4 + a + b + 2, (2 * m - 1 - k) * beta / 4)
        s = (2 * m - 1 - k) * beta / 4
        return (s, s)
    m = (N - 1) // 2
    s = (2 * m - k) * beta / 4
    return (s, s)


def _orthogonal_last(spec: EnsembleSpec, rng) -> float:
    N = spec.n
    if spec.family == "O":
        return sample_beta_sym(0, 0, rng)
    if spec.family == "SO":
        return -1.0 if N % 2 == 0 else 1.0
    if spec.family == "O_minus_SO":
        return 1.0 if N % 2 == 0 else -1.0
    # OrthogonalBeta: det fixed by the last coefficient
    if N % 2 == 0:
        return -1.0 if spec.det == 1 else 1.0
    return 1.0 if spec.det == 1 else -1.0


def _truncated_orthogonal_params(spec: EnsembleSpec, k: int):
    beta = spec.beta
    if spec.family == "OrthogonalBeta":
        a, b = spec.a, spec.b
        if k % 2 == 0:
            return (beta * k / 4 + a + 1, beta * k / 4 + b + 1)
        return (beta * (k - 1) / 4 + a + b + 2, beta * (k + 1) / 4)
    return ((k + 1) / 2, (k + 1) / 2)


def _coupled_radius(spec: EnsembleSpec, rng) -> float:
    c = spec.coupling
    if c.r is not None:
        return float(c.r)
    n, beta = spec.n, spec.beta
    if spec.is_real:
        x = sample_beta_sym(beta * n / 4, beta * n / 4, rng)
        return abs(x)
    return float(np.sqrt(rng.beta(1.0, beta * n / 2)))


def verblunsky_model(spec: EnsembleSpec, rng) -> np.ndarray:
    """Independent coefficients of the CMV model for ``spec``.

    Scalar families return a length-n complex array, block families an
    array of shape (n, 2, 2).
    """
    n = spec.n
    fam = spec.family
    coupled = spec.coupling is not None
    if fam == "USp":
        if spec.truncated or coupled:
            nus = [4 * k + 7 for k in range(n)]
        else:
            nus = [4 * n - 4 * k - 1 for k in range(n)]
        out = np.array([sample_upsilon(nu, rng) for nu in nus])
        if coupled:
            out[-1] = _coupled_radius(spec, rng) * sample_upsilon(3, rng)
        return out
    if fam in ("CUE", "COE", "CSE", "CircularBeta"):
        out = np.array([sample_theta(nu, rng) for nu in _circular_laws(spec)], dtype=complex)
        if coupled:
            out[-1] = _coupled_radius(spec, rng) * sample_theta(1, rng)
        if fam == "CSE":
            return out[:, None, None] * np.eye(2)[None]
        return out
    # real orthogonal families
    if spec.truncated or coupled:
        if coupled:
            # coupled real models use the a = b = beta/4 - 1 laws
            beta = spec.beta
            params = [(beta * (k + 1) / 4, beta * (k + 1) / 4) for k in range(n)]
        else:
            params = [_truncated_orthogonal_params(spec, k) for k in range(n)]
        out = np.array([sample_beta_sym(s, t, rng) for s, t in params], dtype=complex)
        if coupled:
            out[-1] = _coupled_radius(spec, rng) * _coupled_sign(spec, rng)
        return out
    if fam == "OrthogonalBeta":
        params = [_orthogonal_beta_params(spec, k) for k in range(n - 1)]
    else:
        params = [((n - 1 - k) / 2, (n - 1 - k) / 2) for k in range(n - 1)]
    out = np.array([sample_beta_sym(s, t, rng) for s, t in params] + [0.0], dtype=complex)
    out[-1] = _orthogonal_last(spec, rng)
    return out


def _coupled_sign(spec: EnsembleSpec, rng) -> float:
    # SO and O minus SO fix the sign by the parity of n; O and OrthogonalBeta draw it
    n = spec.n
    if spec.family == "SO":
        return -1.0 if n % 2 == 0 else 1.0
    if spec.family == "O_minus_SO":
        return 1.0 if n % 2 == 0 else -1.0
    return sample_beta_sym(0, 0, rng)


def model_matrix(spec: EnsembleSpec, rng) -> np.ndarray:
    alphas = verblunsky_model(spec, rng)
    return build_block_cmv(alphas) if alphas.ndim == 3 else build_cmv(alphas)


def sample_cloud(spec: EnsembleSpec, seed: int, index: int,
                 backend: str | None = None) -> EigenCloud:
    """Eigenvalues of one model matrix drawn from the stream (seed, index)."""
    rng = make_rng(seed, index)
    vals = eigvals(model_matrix(spec, rng), backend)
    prov = {"ensemble": spec.tag(), "seed": int(seed), "rep": int(index)}
    return EigenCloud(vals, provenance=prov)


def sample_ensemble_eigs(spec: EnsembleSpec, reps: int, seed: int,
                         backend: str | None = None):
    """Yield ``reps`` independent clouds; rep i uses stream (seed, i)."""
    for i in range(reps):
        yield sample_cloud(spec, seed, i, backend)


# ---------------------------------------------------------------- direct oracles

def direct_truncation(group: str, size: int, rng) -> np.ndarray:
    """Haar matrix of the given size with its first (quaternionic) row and column removed.

    ``group`` is one of U, O, COE, CSE, USp; quaternionic sizes count
    quaternionic rows.
    """
    if group == "COE":
        M, block = sample_coe(size, rng), False
    elif group == "CSE":
        M, block = sample_cse(size, rng), True
    elif group in ("U", "O", "USp"):
        M, block = sample_haar(group, size, rng), group == "USp"
    else:
        raise ValueError(f"unknown group {group!r}")
    return truncate_first(M, block=block)


def direct_coupled(group: str, size: int, r: float, rng) -> np.ndarray:
    """Haar-type matrix times diag(r, 1, ..., 1) (the first quaternionic entry for CSE, USp).

    ``group`` is one of U, COE, CSE, O, SO, O_minus_SO, USp.
    """
    if group in ("U", "O", "USp"):
        M = sample_haar(group, size, rng)
    elif group == "COE":
        M = sample_coe(size, rng)
    elif group == "CSE":
        M = sample_cse(size, rng)
    elif group in ("SO", "O_minus_SO"):
        want = 1.0 if group == "SO" else -1.0
        while True:
            M = sample_haar("O", size, rng)
            if np.sign(np.linalg.det(M)) == want:
                break
    else:
        raise ValueError(f"unknown group {group!r}")
    D = np.ones(M.shape[0])
    D[: 2 if group in ("CSE", "USp") else 1] = r
    return M * D[None, :]
