"""Statistical tests, finite-difference Jacobian checks and the cross-validation suite.

Every test returns a :class:`TestReport`; the suite runner collects them
for the ``verify`` command. Statistical tests use the 0.1% level.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import densities as dens
from .cmv import (
    bandwidth,
    build_block_cmv,
    build_cmv,
    build_symmetric_cmv,
    cmvfy,
    truncate_first,
    truncated_operator,
)
from .ensembles import (
    CouplingSpec,
    EnsembleSpec,
    direct_coupled,
    direct_truncation,
    make_rng,
    model_matrix,
    sample_cse,
    sample_coe,
    sample_haar,
    verblunsky_model,
)
from .opuc import identity_suite, szego_forward
from .spectra import eigvals, match_distance, spectral_measure

__all__ = [
    "LEVEL",
    "TestReport",
    "ks_critical",
    "ks_one_sample",
    "ks_two_sample",
    "chi2_bins",
    "jacobian_fd_roots_to_coeffs",
    "jacobian_fd_coeffs_to_alphas",
    "model_vs_haar",
    "CHECKS",
    "SUITES",
    "run_check",
    "run_suite",
]

LEVEL = 1e-3
MIN_SAMPLES = 100
FD_STEP = 1e-6
FD_RTOL = 1e-5
# values within this distance of an atom are snapped before two-sample tests
ATOM_DECIMALS = 8


@dataclass
class TestReport:
    """Outcome of one check; ``passed`` is ``statistic <= threshold``."""

    __test__ = False  # not a pytest class

    name: str
    statistic: float
    threshold: float
    sizes: tuple = ()
    seed: int | None = None
    passed: bool = False
    kind: str = "max_error"
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        d["statistic"] = _jsonable(self.statistic)
        d["threshold"] = _jsonable(self.threshold)
        return d

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: {self.kind} {self.statistic:.3e} (threshold {self.threshold:.3e})"


def _jsonable(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _error_report(name, err, tol, sizes=(), seed=None, inclusive=False, **detail) -> TestReport:
    err = float(err)
    ok = err <= tol if inclusive else err < tol
    return TestReport(name, err, tol, tuple(sizes), seed, bool(ok), "max_error", detail)


def _ratio(report) -> float:
    if report.threshold > 0:
        return report.statistic / report.threshold
    return 0.0 if report.passed else math.inf


def _combine(name, parts, seed=None) -> TestReport:
    """One report that passes when every part passes; statistic is the worst ratio."""
    ratio = max(_ratio(p) for p in parts)
    sizes = tuple(s for p in parts for s in p.sizes)
    return TestReport(name, ratio, 1.0, sizes, seed, all(p.passed for p in parts),
                      "worst_ratio", {"parts": [p.to_dict() for p in parts]})


# ---------------------------------------------------------------- goodness of fit

def ks_critical(n: int, m: int | None = None, level: float = LEVEL) -> float:
    """Asymptotic Kolmogorov critical value sqrt(-ln(level/2)/2) scaled by sample size.

    One-sample: c / sqrt(n). Two-sample: c * sqrt((n + m) / (n m)).
    """
    c = math.sqrt(-math.log(level / 2) / 2)
    if m is None:
        return c / math.sqrt(n)
    return c * math.sqrt((n + m) / (n * m))


def _samples(x, name="samples") -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise ValueError(f"{name} is empty")
    if x.size < MIN_SAMPLES:
        raise ValueError(f"{name} has {x.size} values; need at least {MIN_SAMPLES}")
    return x


def ks_statistic(x, cdf) -> float:
    x = np.sort(np.asarray(x, dtype=float))
    n = x.size
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks2_statistic(a, b) -> float:
    a, b = np.sort(a), np.sort(b)
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_one_sample(samples, cdf, name: str = "ks_one_sample", seed=None,
                  level: float = LEVEL) -> TestReport:
    x = _samples(samples)
    D = ks_statistic(x, cdf)
    crit = ks_critical(x.size, level=level)
    return TestReport(name, D, crit, (x.size,), seed, D <= crit, "ks1")


def ks_two_sample(a, b, name: str = "ks_two_sample", seed=None,
                  level: float = LEVEL) -> TestReport:
    a, b = _samples(a, "a"), _samples(b, "b")
    D = ks2_statistic(a, b)
    crit = ks_critical(a.size, b.size, level)
    return TestReport(name, D, crit, (a.size, b.size), seed, D <= crit, "ks2")


def chi2_bins(samples, expected: dict, name: str = "chi2_bins", seed=None,
              level: float = LEVEL) -> TestReport:
    """Pearson chi-square of categorical ``samples`` against probabilities ``expected``."""
    x = np.asarray(samples).ravel()
    if x.size == 0:
        raise ValueError("samples is empty")
    if x.size < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    keys = list(expected)
    p = np.array([expected[k] for k in keys], dtype=float)
    if abs(p.sum() - 1) > 1e-9 or np.any(p <= 0):
        raise ValueError("expected probabilities must be positive and sum to 1")
    obs = np.array([np.sum(x == k) for k in keys], dtype=float)
    if obs.sum() != x.size:
        raise ValueError("samples contain categories outside the expected table")
    exp = p * x.size
    stat = float(np.sum((obs - exp) ** 2 / exp))
    crit = float(stats.chi2.ppf(1 - level, len(keys) - 1))
    return TestReport(name, stat, crit, (x.size,), seed, stat <= crit, "chi2")


def _mean_within(name, values, target, n_se=3.0, seed=None) -> TestReport:
    v = np.asarray(values, dtype=float)
    se = v.std(ddof=1) / math.sqrt(v.size)
    z = abs(v.mean() - target) / se
    return TestReport(name, float(z), n_se, (v.size,), seed, bool(z <= n_se), "standard_errors",
                      {"mean": float(v.mean()), "target": float(target), "se": float(se)})


def _snap(x):
    return np.round(np.asarray(x, dtype=float), ATOM_DECIMALS)


# ---------------------------------------------------------------- Jacobians

def _fd_det(f, x, h=FD_STEP) -> float:
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((f(x + e) - f(x - e)) / (2 * h))
    return float(np.linalg.det(np.column_stack(cols)))


def _interleave(z):
    z = np.asarray(z, dtype=complex)
    return np.column_stack([z.real, z.imag]).ravel()


def _deinterleave(x):
    return x[0::2] + 1j * x[1::2]


def _jacobian_report(name, fd, closed, sizes, **detail):
    scale = abs(closed) if closed != 0 else 1.0
    err = abs(fd - closed) / scale
    return TestReport(name, err, FD_RTOL, sizes, None, bool(err < FD_RTOL), "relative_error",
                      {"fd": fd, "closed": closed, **detail})


def jacobian_fd_roots_to_coeffs(zs, real: bool | None = None) -> TestReport:
    """Finite-difference Jacobian of roots -> monic coefficients against the Vandermonde form.

    Real roots: (-1)^n prod_{j<k} (z_k - z_j), the sign coming from
    kappa_k = (-1)^k e_k. Complex roots, as a map of R^2n:
    |prod_{j<k} (z_k - z_j)|^2.
    """
    z = np.asarray(zs, dtype=complex).ravel()
    real = bool(np.all(z.imag == 0)) if real is None else real
    n = z.size
    iu = np.triu_indices(n, 1)
    if n > 1 and np.min(np.abs(z[iu[1]] - z[iu[0]])) < 1e-3:
        warnings.warn("near-coincident roots; finite differences are ill-conditioned",
                      RuntimeWarning, stacklevel=2)
    delta = np.prod(z[iu[1]] - z[iu[0]]) if n > 1 else 1.0
    if real:
        fd = _fd_det(lambda x: np.poly(x)[1:].real, z.real)
        closed = float((-1) ** n * np.real(delta))
    else:
        fd = _fd_det(lambda x: _interleave(np.poly(_deinterleave(x))[1:]), _interleave(z))
        closed = float(abs(delta) ** 2)
    return _jacobian_report("jacobian_roots_to_coeffs", fd, closed, (n,), real=real)


def _kappa(alphas):
    return szego_forward(alphas)[-1][1:]


def jacobian_closed_form(alphas, real: bool) -> float:
    a = np.asarray(alphas)
    n = a.size
    k = np.arange(n)
    if not real:
        return float((-1) ** n * np.prod((1 - np.abs(a) ** 2) ** k))
    a = a.real
    even = k % 2 == 0
    out = np.prod((1 - a[even] ** 2) ** (k[even] / 2))
    out *= np.prod((1 - a[~even]) * (1 - a[~even] ** 2) ** ((k[~even] - 1) / 2))
    return float((-1) ** n * out)


def jacobian_fd_coeffs_to_alphas(alphas, real: bool | None = None) -> TestReport:
    """Finite-difference Jacobian of alpha -> coefficients of the degree-n polynomial.

    Complex strings are treated as maps of R^2n, real strings as maps of R^n.
    """
    a = np.asarray(alphas, dtype=complex).ravel()
    if np.any(np.abs(a) >= 1):
        raise ValueError("coefficients must lie strictly inside the disk")
    real = bool(np.all(a.imag == 0)) if real is None else real
    if real:
        fd = _fd_det(lambda x: _kappa(x.astype(complex)).real, a.real)
    else:
        fd = _fd_det(lambda x: _interleave(_kappa(_deinterleave(x))), _interleave(a))
    closed = jacobian_closed_form(a, real)
    return _jacobian_report("jacobian_coeffs_to_alphas", fd, closed, (a.size,), real=real)


# ---------------------------------------------------------------- model vs direct sampling

_CIRCULAR_BETA_GROUP = {1.0: "COE", 2.0: "U", 4.0: "CSE"}


def _direct_group(spec: EnsembleSpec) -> str:
    fam = spec.family
    if fam in ("CUE", "COE", "CSE", "CircularBeta"):
        g = {"CUE": "U", "COE": "COE", "CSE": "CSE"}.get(fam)
        if g is None:
            g = _CIRCULAR_BETA_GROUP.get(float(spec.beta))
        if g is None:
            raise ValueError("circular beta-ensemble has a direct counterpart only at beta 1, 2, 4")
        return g
    if fam == "OrthogonalBeta":
        if spec.beta != 2 or spec.a != -0.5 or spec.b != -0.5:
            raise ValueError("orthogonal beta-ensemble has a direct counterpart only at beta=2, a=b=-1/2")
        if spec.truncated or spec.coupling is not None:
            return "O"
        return "SO" if spec.det == 1 else "O_minus_SO"
    return fam if fam in ("O", "SO", "O_minus_SO") else "USp"


def _haar_like(group, size, rng):
    if group in ("U", "O", "USp"):
        return sample_haar(group, size, rng)
    if group == "COE":
        return sample_coe(size, rng)
    if group == "CSE":
        return sample_cse(size, rng)
    want = 1.0 if group == "SO" else -1.0
    while True:
        M = sample_haar("O", size, rng)
        if np.sign(np.linalg.det(M)) == want:
            return M


def _direct_matrix(spec: EnsembleSpec, group: str, rng):
    n = spec.n
    if spec.truncated:
        if group in ("SO", "O_minus_SO"):
            return truncate_first(_haar_like(group, n + 1, rng))
        return direct_truncation(group, n + 1, rng)
    if spec.coupling is not None:
        if spec.coupling.r is None:
            if group in ("SO", "O_minus_SO"):
                # a minor of SO(n+1) has random determinant sign, so the
                # fixed-sign model is compared with M diag(R, 1, ...) at the
                # modulus R of a Haar O(n+1) corner entry
                r = abs(sample_haar("O", n + 1, rng)[0, 0])
                return direct_coupled(group, n, r, rng)
            return direct_truncation(group, n + 1, rng)
        return direct_coupled(group, n, spec.coupling.r, rng)
    return _haar_like(group, n, rng)


def model_vs_haar(spec: EnsembleSpec, reps: int, seed: int) -> TestReport:
    """Two-sample comparison of the CMV model for ``spec`` with direct Haar sampling.

    Compares pooled eigenvalue moduli (non-unitary models) and pooled
    |arg| of eigenvalues; for scalar unitary models also the first
    coefficient recovered by CMV-fication of the direct matrix.
    """
    group = _direct_group(spec)
    rng_m, rng_d = make_rng(seed, 0), make_rng(seed, 1)
    model, direct, a_model, a_direct = [], [], [], []
    unitary = not spec.truncated and spec.coupling is None
    scalar = not spec.is_block and spec.family not in ("CSE",)
    for _ in range(reps):
        alphas = verblunsky_model(spec, rng_m)
        M = build_block_cmv(alphas) if alphas.ndim == 3 else build_cmv(alphas)
        model.append(eigvals(M))
        D = _direct_matrix(spec, group, rng_d)
        direct.append(np.linalg.eigvals(D))
        if unitary and scalar and spec.n > 1:
            a_model.append(alphas[0])
            a_direct.append(cmvfy(D)[0])
    zm, zd = np.concatenate(model), np.concatenate(direct)
    tag = f"{spec.family}(n={spec.n}{', truncated' if spec.truncated else ''}" \
          f"{', coupled' if spec.coupling is not None else ''})"
    parts = [ks_two_sample(_snap(np.abs(np.angle(zm))), _snap(np.abs(np.angle(zd))),
                           f"{tag} |arg z|", seed)]
    if not unitary:
        parts.append(ks_two_sample(_snap(np.abs(zm)), _snap(np.abs(zd)), f"{tag} |z|", seed))
    if a_model:
        am, ad = np.array(a_model), np.array(a_direct)
        if spec.is_real:
            parts.append(ks_two_sample(_snap(am.real), _snap(ad.real), f"{tag} alpha_0", seed))
        else:
            parts.append(ks_two_sample(np.abs(am), np.abs(ad), f"{tag} |alpha_0|", seed))
    return _combine(f"model_vs_haar {tag}", parts, seed)


# ---------------------------------------------------------------- suite checks
# Each check takes a size profile and a seed and returns a TestReport.

def _random_string(rng, n, real=False, radius=0.95):
    if real:
        return radius * (2 * rng.random(n) - 1) + 0j
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def check_charpoly(p, seed):
    rng = make_rng(seed, 101)
    worst = 0.0
    for n in range(1, 17):
        for _ in range(p["charpoly_reps"]):
            a = _random_string(rng, n)
            a[-1] = a[-1] / abs(a[-1]) if rng.random() < 0.5 else a[-1]
            C = build_cmv(a)
            charpoly = np.poly(eigvals(C))
            worst = max(worst, np.max(np.abs(charpoly - szego_forward(a)[-1])))
    return _error_report("characteristic polynomial equals Szego polynomial", worst, 1e-10,
                         (16 * p["charpoly_reps"],), seed)


def check_truncation(p, seed):
    worst = 0.0
    count = 0
    for n in range(2, 13):
        for rep in range(p["truncation_reps"]):
            rng = make_rng(seed, 1000 * n + rep)
            a = _random_string(rng, n + 1)
            a[-1] = np.exp(2j * np.pi * rng.random())
            direct = eigvals(truncate_first(build_cmv(a)))
            reversed_ = eigvals(truncated_operator(a))
            worst = max(worst, match_distance(direct, reversed_))
            count += 1
    return _error_report("first minor matches reversed-coefficient CMV", worst, 1e-8, (count,), seed)


def check_opuc_identities(p, seed):
    rng = make_rng(seed, 102)
    worst = {}
    for i in range(p["identity_reps"]):
        n = 1 + i % 10
        a = _random_string(rng, n, real=(i % 3 == 0), radius=0.9)
        for k, v in identity_suite(a, rng).items():
            worst[k] = max(worst.get(k, 0.0), v)
    parts = [_error_report(k, v, 1e-9, (p["identity_reps"],), seed) for k, v in worst.items()]
    return _combine("orthogonal polynomial identities", parts, seed)


def check_jacobians(p, seed):
    rng = make_rng(seed, 103)
    parts = []
    for n in (2, 3, 4):
        reps = []
        for _ in range(p["jacobian_reps"]):
            x = np.sort(rng.uniform(-1, 1, n))
            while n > 1 and np.min(np.diff(x)) < 0.05:
                x = np.sort(rng.uniform(-1, 1, n))
            reps.append(jacobian_fd_roots_to_coeffs(x))
            z = x + 1j * rng.uniform(-1, 1, n)
            reps.append(jacobian_fd_roots_to_coeffs(z, real=False))
            reps.append(jacobian_fd_coeffs_to_alphas(_random_string(rng, n, radius=0.9)))
            reps.append(jacobian_fd_coeffs_to_alphas(_random_string(rng, n, real=True, radius=0.9)))
        parts.append(max(reps, key=_ratio))
    return _combine("Jacobian closed forms vs finite differences", parts, seed)


def check_cmvfy_laws(p, seed):
    m = p["cmvfy_samples"]
    rng = make_rng(seed, 104)
    a_u = np.array([cmvfy(sample_haar("U", 5, rng))[0] for _ in range(m)])
    a_o = np.array([cmvfy(sample_haar("O", 6, rng))[0].real for _ in range(m)])
    parts = [
        ks_one_sample(np.abs(a_u) ** 2, stats.beta(1, 4).cdf, "U(5) |alpha_0|^2 ~ Beta(1,4)", seed),
        ks_one_sample((a_o + 1) / 2, stats.beta(2.5, 2.5).cdf, "O(6) alpha_0 ~ B(5/2,5/2)", seed),
    ]
    return _combine("coefficient laws of Haar U(5) and O(6)", parts, seed)


def check_weights(p, seed):
    m = p["weight_samples"]
    rng = make_rng(seed, 105)
    # Schur order depends on e_1, so pick the weight by node angle instead
    w = np.array([spectral_measure(sample_haar("U", 4, rng)).sorted().weights[0] for _ in range(m)])
    return ks_one_sample(w, stats.beta(1, 3).cdf, "U(4) spectral weight ~ Beta(1,3)", seed)


def check_truncated_circular(p, seed):
    m = p["trunc_circular_samples"]
    rng = make_rng(seed, 106)
    z = np.array([direct_truncation("U", 2, rng)[0, 0] for _ in range(m)])
    spec = EnsembleSpec("CUE", 2, truncated=True)
    prods = np.array([abs(np.prod(eigvals(model_matrix(spec, rng)))) ** 2 for _ in range(m)])
    parts = [
        ks_one_sample(np.abs(z) ** 2, stats.uniform.cdf, "truncated CUE(2) |z|^2 uniform", seed),
        _mean_within("truncated CUE(3) E|z1 z2|^2 = 1/3", prods, 1 / 3, seed=seed),
    ]
    return _combine("truncated circular law", parts, seed)


def _arcsine_cdf(x):
    return 0.5 + np.arcsin(np.clip(x, -1, 1)) / np.pi


def check_truncated_orthogonal(p, seed):
    m = p["trunc_orthogonal_samples"]
    rng = make_rng(seed, 107)
    direct = np.array([direct_truncation("O", 2, rng)[0, 0].real for _ in range(m)])
    spec = EnsembleSpec("OrthogonalBeta", 1, beta=3.0, a=-0.5, b=-0.5, truncated=True)
    model = np.array([verblunsky_model(spec, rng)[0].real for _ in range(m)])
    P1 = math.exp(dens.log_P(1, 2.0, -0.5, -0.5))
    parts = [
        ks_one_sample(direct, _arcsine_cdf, "truncated O(2) arcsine law", seed),
        ks_one_sample(model, _arcsine_cdf, "n=1 orthogonal beta model arcsine law", seed),
        _error_report("P_1 at a=b=-1/2 equals pi", abs(P1 - math.pi), 1e-12, seed=seed),
    ]
    return _combine("truncated orthogonal law", parts, seed)


def check_coupling(p, seed):
    m = p["coupling_samples"]
    n = 4
    rng_a, rng_b = make_rng(seed, 108), make_rng(seed, 109)
    spec = EnsembleSpec("CUE", n, coupling=CouplingSpec(None))
    za = np.concatenate([eigvals(model_matrix(spec, rng_a)) for _ in range(m)])
    zb = np.concatenate([eigvals(direct_truncation("U", n + 1, rng_b)) for _ in range(m)])
    return ks_two_sample(np.abs(za), np.abs(zb), "coupled CUE(4), unit reflection weight, vs truncated U(5)", seed)


def check_log_gas(p, seed):
    rng = make_rng(seed, 110)
    worst = 0.0
    for beta in (1.0, 2.0, 4.0):
        params = dens.LogGasParams.from_exponents(2.0, beta / 2 - 1)
        diffs = []
        for _ in range(p["log_gas_configs"]):
            z = np.sqrt(rng.random(5)) * 0.95 * np.exp(2j * np.pi * rng.random(5))
            diffs.append(-dens.log_gas_energy(z, params) / params.kT
                         - dens.log_density_trunc_circular(z, beta))
        worst = max(worst, float(np.var(diffs)))
    return _error_report("log-gas Gibbs weight proportional to truncated density", worst, 1e-16,
                         (p["log_gas_configs"],), seed)


def check_symmetric_cmv(p, seed):
    sym = unit = spec_err = 0.0
    band = 0
    count = 0
    for n in range(2, 9):
        for rep in range(p["symmetric_reps"]):
            rng = make_rng(seed, 2000 * n + rep)
            a = _random_string(rng, n)
            a[-1] = np.exp(2j * np.pi * rng.random())
            C = build_cmv(a)
            muC = spectral_measure(C)
            for variant in ("S", "S_tilde"):
                S = build_symmetric_cmv(a, variant)
                sym = max(sym, np.abs(S - S.T).max())
                band = max(band, bandwidth(S, 1e-13))
                unit = max(unit, np.abs(S.conj().T @ S - np.eye(n)).max())
                muS = spectral_measure(S)
                dn = match_distance(muS.nodes, muC.nodes)
                # weights compared after aligning nodes
                order_s = np.argsort(np.angle(muS.nodes))
                order_c = np.argsort(np.angle(muC.nodes))
                dw = np.abs(muS.weights[order_s] - muC.weights[order_c]).max()
                spec_err = max(spec_err, dn, dw)
                count += 1
    parts = [
        _error_report("symmetric CMV exact symmetry", sym, 0.0, (count,), seed, inclusive=True),
        _error_report("symmetric CMV bandwidth <= 3", band, 3, (count,), seed, inclusive=True),
        _error_report("symmetric CMV unitarity", unit, 1e-12, (count,), seed),
        _error_report("symmetric CMV spectral measure", spec_err, 1e-8, (count,), seed),
    ]
    return _combine("symmetric CMV form", parts, seed)


def _pair_doubling_error(vals):
    v = np.sort_complex(np.asarray(vals))
    # each eigenvalue has a partner within the doubled multiset
    d = np.abs(v[:, None] - v[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min(axis=1).max())


def check_quaternionic(p, seed):
    rng = make_rng(seed, 111)
    dbl = 0.0
    for n in range(1, 7):
        for _ in range(p["cse_reps"]):
            dbl = max(dbl, _pair_doubling_error(eigvals(model_matrix(EnsembleSpec("CSE", n), rng))))
    m = p["usp_samples"]
    spec = EnsembleSpec("USp", 3, truncated=True)
    rng_m, rng_d = make_rng(seed, 112), make_rng(seed, 113)
    conj_err = 0.0
    zm, zd = [], []
    for _ in range(m):
        v = eigvals(model_matrix(spec, rng_m))
        conj_err = max(conj_err, match_distance(v, np.conj(v)))
        zm.append(v)
        zd.append(np.linalg.eigvals(direct_truncation("USp", 4, rng_d)))
    zm, zd = np.concatenate(zm), np.concatenate(zd)
    parts = [
        _error_report("CSE model eigenvalues doubled", dbl, 1e-9, seed=seed),
        _error_report("truncated USp model conjugation symmetric", conj_err, 1e-8, (m,), seed),
        ks_two_sample(np.abs(zm), np.abs(zd), "truncated USp(4) model vs direct |z|", seed),
        ks_two_sample(np.abs(np.angle(zm)), np.abs(np.angle(zd)),
                      "truncated USp(4) model vs direct |arg z|", seed),
    ]
    return _combine("quaternionic structure", parts, seed)


def check_figures(p, seed):
    from .cli import FIGURE_PRESETS, figure_cloud

    parts = []
    for name, (spec, expected) in FIGURE_PRESETS.items():
        cloud = figure_cloud(name, seed)
        size_err = abs(len(cloud) - expected)
        outside = max(0.0, float(np.abs(cloud.values).max()) - 1.0)
        parts.append(_error_report(f"figure {name} size", size_err, 0, (len(cloud),), seed, inclusive=True))
        parts.append(_error_report(f"figure {name} inside closed disk", outside, 0, seed=seed, inclusive=True))
    return _combine("figure presets", parts, seed)


def check_normalizations(p, seed):
    """Normalizing constants against independent forms and quadrature."""
    parts = []
    worst = 0.0
    for n in range(1, 9):
        for beta, a, b in ((1.0, -0.5, -0.5), (2.0, 0.3, 1.2), (4.0, -0.7, 2.0), (0.7, 0.0, 0.0)):
            worst = max(worst, abs(dens.log_P(n, beta, a, b) - dens.log_P_from_coefficients(n, beta, a, b)))
    parts.append(_error_report("P_n closed form equals product of coefficient normalizers", worst, 1e-10, seed=seed))
    # beta = 2 closed forms of the Haar orthogonal spectral laws
    worst = 0.0
    for n in range(1, 6):
        t = dens.normalization_table(n, 2.0)
        worst = max(worst,
                    abs(t.log_C - math.log(2 ** (n - 1) * math.factorial(n) * math.pi ** n)),
                    abs(t.log_K + math.log(math.factorial(n - 1))),
                    abs(t.log_D - math.log(math.factorial(n - 1) * math.pi ** (n - 1) / 2 ** (n - 1))))
    parts.append(_error_report("beta=2 constants equal Haar closed forms", worst, 1e-10, seed=seed))
    # Monte Carlo integral of the n=2 angle densities on (0, pi)^2
    rng = make_rng(seed, 114)
    m = p["normalization_samples"]
    for case, n in (("a", 2), ("b", 3), ("c", 2), ("d", 2)):
        beta = 2.6
        k = n - 1 if case == "b" else n
        th = rng.uniform(0, np.pi, (m, k))
        weights = _spectral_angle_weights(th, case, n, beta)
        vals = weights * np.pi ** k
        parts.append(_mean_within(f"orthogonal spectral case {case} angle law integrates to 1", vals, 1.0, 4.0, seed))
    return _combine("normalization constants", parts, seed)


def _spectral_angle_weights(th, case, n, beta):
    """Angle part of the orthogonal spectral density, divided by its constant."""
    t = dens.normalization_table(n, beta, 0.3, 0.9 if case == "a" else -0.5)
    c = np.cos(th)
    k = th.shape[1]
    lv = np.zeros(th.shape[0])
    for i in range(k):
        for j in range(i + 1, k):
            lv += beta * np.log(np.abs(2 * c[:, i] - 2 * c[:, j]))
    l1m, l1p = np.log(1 - c).sum(axis=1), np.log(1 + c).sum(axis=1)
    if case == "a":
        return np.exp(lv + 0.8 * l1m + 1.4 * l1p - t.log_C)
    if case == "b":
        e = 3 * beta / 4 - 0.5
        return np.exp(lv + e * (l1m + l1p) - t.log_D)
    e1, e2 = 3 * beta / 4 - 0.5, beta / 4 - 0.5
    if case == "d":
        e1, e2 = e2, e1
    return np.exp(lv + e1 * l1m + e2 * l1p - t.log_E)


def check_density_vs_model(p, seed):
    """Model samples against density-weighted quadrature for n = 1, 2 test functions."""
    from scipy import integrate

    rng = make_rng(seed, 115)
    m = p["density_samples"]
    parts = []
    beta = 3.0
    # n=1 circular: E|z|^2 and E|z|^4 under the model vs radial quadrature
    spec = EnsembleSpec("CircularBeta", 1, beta=beta, truncated=True)
    z = np.array([verblunsky_model(spec, rng)[0] for _ in range(m)])
    for power in (2, 4):
        exact = integrate.quad(lambda r: 2 * math.pi * r * r ** power
                               * math.exp(dens.log_density_trunc_circular([r], beta)), 0, 1)[0]
        parts.append(_mean_within(f"circular n=1 E|z|^{power}", np.abs(z) ** power, exact, seed=seed))
    # n=1 orthogonal: E[x] under the model vs quadrature
    a, b = 0.4, -0.3
    spec = EnsembleSpec("OrthogonalBeta", 1, beta=beta, a=a, b=b, truncated=True)
    x = np.array([verblunsky_model(spec, rng)[0].real for _ in range(m)])
    exact = integrate.quad(lambda t: t * math.exp(dens.log_density_trunc_orthogonal([t], beta, a, b)), -1, 1)[0]
    parts.append(_mean_within("orthogonal n=1 E[x]", x, exact, seed=seed))
    # n=2 orthogonal: probability that both eigenvalues are real
    spec = EnsembleSpec("OrthogonalBeta", 2, beta=beta, a=a, b=b, truncated=True)
    both_real = np.array([float(np.all(np.abs(eigvals(model_matrix(spec, rng)).imag) < 1e-12))
                          for _ in range(m)])
    # x = cos(u) removes the edge singularities; u1 > u2 orders x1 < x2
    exact = integrate.dblquad(
        lambda u2, u1: math.exp(dens.log_density_trunc_orthogonal(
            [math.cos(u1), math.cos(u2)], beta, a, b)) * math.sin(u1) * math.sin(u2),
        0, math.pi, 0, lambda u1: u1, epsabs=1e-8, epsrel=1e-8)[0]
    parts.append(_mean_within("orthogonal n=2 P(two real eigenvalues)", both_real, exact, seed=seed))
    return _combine("densities vs coefficient models", parts, seed)


def check_models_vs_haar(p, seed):
    reps = p["model_reps"]
    specs = [
        EnsembleSpec("CUE", 4), EnsembleSpec("COE", 3), EnsembleSpec("CSE", 3),
        EnsembleSpec("O", 5), EnsembleSpec("SO", 4), EnsembleSpec("O_minus_SO", 5),
        EnsembleSpec("OrthogonalBeta", 4, beta=2, det=-1), EnsembleSpec("USp", 2),
        EnsembleSpec("CUE", 4, truncated=True), EnsembleSpec("O", 3, truncated=True),
        EnsembleSpec("CSE", 2, truncated=True),
        EnsembleSpec("CUE", 3, coupling=CouplingSpec(0.5)),
        EnsembleSpec("SO", 3, coupling=CouplingSpec()),
    ]
    parts = [model_vs_haar(s, reps, seed + i) for i, s in enumerate(specs)]
    return TestReport("CMV models vs direct Haar sampling", max(q.statistic for q in parts), 1.0,
                      (reps,), seed, all(q.passed for q in parts), "worst_ratio",
                      {"parts": [q.to_dict() for q in parts]})


CHECKS = {
    "charpoly": check_charpoly,
    "truncation": check_truncation,
    "opuc_identities": check_opuc_identities,
    "jacobians": check_jacobians,
    "cmvfy_laws": check_cmvfy_laws,
    "weights": check_weights,
    "truncated_circular": check_truncated_circular,
    "truncated_orthogonal": check_truncated_orthogonal,
    "coupling": check_coupling,
    "log_gas": check_log_gas,
    "symmetric_cmv": check_symmetric_cmv,
    "quaternionic": check_quaternionic,
    "figures": check_figures,
    "normalizations": check_normalizations,
    "density_vs_model": check_density_vs_model,
    "models_vs_haar": check_models_vs_haar,
}

SUITES = {
    "quick": dict(charpoly_reps=10, truncation_reps=10, identity_reps=30, jacobian_reps=10,
                  cmvfy_samples=2000, weight_samples=2000, trunc_circular_samples=10000,
                  trunc_orthogonal_samples=10000, coupling_samples=1000, log_gas_configs=100,
                  symmetric_reps=10, cse_reps=5, usp_samples=1000, normalization_samples=100000,
                  density_samples=4000, model_reps=300),
    "full": dict(charpoly_reps=100, truncation_reps=100, identity_reps=100, jacobian_reps=50,
                 cmvfy_samples=10000, weight_samples=10000, trunc_circular_samples=100000,
                 trunc_orthogonal_samples=100000, coupling_samples=5000, log_gas_configs=100,
                 symmetric_reps=100, cse_reps=20, usp_samples=5000, normalization_samples=400000,
                 density_samples=20000, model_reps=2000),
}

DEFAULT_SEED = 20240611


def run_check(name: str, suite: str = "quick", seed: int = DEFAULT_SEED) -> TestReport:
    start = time.perf_counter()
    report = CHECKS[name](SUITES[suite], seed)
    report.detail["seconds"] = round(time.perf_counter() - start, 3)
    report.detail["check"] = name
    return report


def run_suite(suite: str = "quick", seed: int = DEFAULT_SEED, only=None) -> list[TestReport]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {tuple(SUITES)}")
    names = list(CHECKS) if only is None else list(only)
    return [run_check(name, suite, seed) for name in names]
