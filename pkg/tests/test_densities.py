import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import gammaln

from cmvrmt import densities as dens
from cmvrmt.errors import DimensionError, DomainError, StratificationError
from cmvrmt.spectra import EigenCloud

betas = st.floats(0.2, 8.0)
params = st.floats(-0.9, 3.0)


def test_single_point_beta_two():
    for z in (0, 0.3 + 0.4j, -0.9j):
        assert dens.log_density_trunc_circular([z], 2.0) == pytest.approx(math.log(1 / math.pi))


def test_single_point_beta_four_at_origin():
    assert dens.log_density_trunc_circular([0.0], 4.0) == pytest.approx(math.log(2 / math.pi))


def test_coincident_pair_is_minus_inf():
    assert dens.log_density_trunc_circular([0.2, 0.2], 2.0) == -math.inf
    assert dens.log_density_trunc_orthogonal([0.2, 0.2], 2.0, -0.5, -0.5) == -math.inf


def test_arcsine_at_n_one():
    for beta in (1.0, 2.0, 5.0):
        for x in (-0.7, 0.0, 0.4):
            val = dens.log_density_trunc_orthogonal([x], beta, -0.5, -0.5)
            assert val == pytest.approx(-math.log(math.pi) - 0.5 * math.log(1 - x * x))


def test_p1_is_pi():
    for beta in (1.0, 2.0, 4.0):
        assert math.exp(dens.log_P(1, beta, -0.5, -0.5)) == pytest.approx(math.pi, rel=1e-14)


@given(st.integers(1, 9), betas, params, params)
def test_product_form_matches_coefficient_form(n, beta, a, b):
    assert dens.log_P(n, beta, a, b) == pytest.approx(
        dens.log_P_from_coefficients(n, beta, a, b), rel=1e-10, abs=1e-10)


@given(st.integers(1, 12))
def test_weight_normalizer_at_beta_two(n):
    t = dens.normalization_table(n, 2.0)
    assert t.log_Zp == pytest.approx(-gammaln(n))
    assert t.log_Z == pytest.approx(gammaln(n + 1))


def test_d_constant_closed_form_at_beta_two():
    for n in range(1, 7):
        t = dens.normalization_table(n, 2.0)
        closed = gammaln(n) + (n - 1) * math.log(math.pi) - (n - 1) * math.log(2)
        assert t.log_D == pytest.approx(closed)


def test_c_constant_closed_form_at_beta_two():
    for n in range(1, 7):
        t = dens.normalization_table(n, 2.0)
        closed = (n - 1) * math.log(2) + gammaln(n + 1) + n * math.log(math.pi)
        assert t.log_C == pytest.approx(closed)


def test_table_values_and_dict():
    t = dens.normalization_table(3, 2.0)
    d = t.as_dict()
    assert d["P"] == pytest.approx(math.exp(t.log_P))
    assert set("Z Zp C K D L E M P".split()) <= set(d)


def test_spectral_circular_single_node():
    for beta in (1.0, 2.0, 4.0):
        val = dens.log_density_spectral_circular([0.4], [1.0], beta)
        assert val == pytest.approx(-math.log(2 * math.pi))


def test_spectral_orthogonal_so2_uniform_angle():
    for th in (0.3, 1.5, 2.9):
        val = dens.log_density_spectral_orthogonal([th], [1.0], "a", 2.0)
        assert val == pytest.approx(-math.log(math.pi))


@pytest.mark.parametrize("beta", [1.0, 2.0, 3.5])
def test_truncated_circular_integrates_to_one(beta):
    f = lambda r, t: math.exp(dens.log_density_trunc_circular([r * np.exp(1j * t)], beta)) * r
    val, _ = integrate.dblquad(f, 0, 2 * math.pi, 0, 1)
    assert val == pytest.approx(1.0, rel=1e-7)


@pytest.mark.parametrize("beta,a,b", [(1.0, -0.5, -0.5), (2.0, 0.3, -0.2), (4.0, 1.0, 0.5)])
def test_truncated_orthogonal_two_points_integrates_to_one(beta, a, b):
    dens_at = lambda pts: math.exp(dens.log_density_trunc_orthogonal(pts, beta, a, b))
    # x = cos(u) removes the edge singularities; u1 > u2 orders x1 < x2
    real = integrate.dblquad(
        lambda u2, u1: dens_at([math.cos(u1), math.cos(u2)]) * math.sin(u1) * math.sin(u2),
        0, math.pi, 0, lambda u1: u1, epsabs=1e-7, epsrel=1e-7)[0]

    # complex stratum in polar form with r = sin(v): 2 dx dy, y > 0
    def pair(v, t):
        r = math.sin(v)
        z = r * complex(math.cos(t), math.sin(t))
        return 2 * dens_at([z, z.conjugate()]) * r * math.cos(v)

    cplx = integrate.dblquad(pair, 0, math.pi, 0, math.pi / 2, epsabs=1e-7, epsrel=1e-7)[0]
    assert real + cplx == pytest.approx(1.0, rel=1e-5)


def test_unit_weight_equals_truncated():
    z = np.array([0.1 + 0.2j, -0.3, 0.5j])
    assert dens.log_density_nonideal(z, 2.0) == dens.log_density_trunc_circular(z, 2.0)
    assert dens.log_density_nonideal(z, 2.0, weightfn=lambda r: 1.0) == \
        dens.log_density_trunc_circular(z, 2.0)


def test_weight_multiplies_density():
    z = np.array([0.1 + 0.2j, -0.3])
    r = abs(np.prod(z))
    got = dens.log_density_nonideal(z, 1.0, weightfn=lambda x: 3 * x)
    assert got == pytest.approx(dens.log_density_trunc_circular(z, 1.0) + math.log(3 * r))


def test_real_nonideal_uses_edge_parameters():
    z = np.array([0.2 + 0.3j, 0.2 - 0.3j, -0.4])
    got = dens.log_density_nonideal(z, 2.0, real=True)
    assert got == dens.log_density_trunc_orthogonal(z, 2.0, -0.5, -0.5)


def test_single_charge_at_origin_has_zero_energy():
    p = dens.LogGasParams.from_exponents(2.0, 0.0)
    assert dens.log_gas_energy([0.0], p) == 0.0


def test_log_gas_exponents_roundtrip():
    p = dens.LogGasParams.from_exponents(2.0, -0.5)
    assert p.gamma == pytest.approx(2.0)
    assert p.alpha == pytest.approx(-0.5)


@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
def test_gibbs_weight_matches_truncated_density(beta, rng):
    p = dens.LogGasParams.from_exponents(2.0, beta / 2 - 1)
    diffs = []
    for _ in range(100):
        z = 0.95 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
        diffs.append(-dens.log_gas_energy(z, p) / p.kT - dens.log_density_trunc_circular(z, beta))
    assert np.var(diffs) < 1e-16


def test_coincident_charges_infinite_energy():
    p = dens.LogGasParams.from_exponents(2.0, 0.0)
    assert dens.log_gas_energy([0.1, 0.1], p) == math.inf


def test_declared_stratum_must_match():
    cloud = EigenCloud(np.array([0.1, -0.2]), stratum=(0, 1))
    with pytest.raises(StratificationError):
        dens.log_density_trunc_orthogonal(cloud, 2.0, -0.5, -0.5)


def test_domain_errors():
    with pytest.raises(DomainError):
        dens.log_density_trunc_circular([1.2], 2.0)
    with pytest.raises(DomainError):
        dens.log_density_trunc_circular([0.1], -1.0)
    with pytest.raises(DomainError):
        dens.log_density_trunc_orthogonal([1.0], 2.0, -0.5, -0.5)
    with pytest.raises(DomainError):
        dens.log_P(2, 2.0, -1.0, 0.0)
    with pytest.raises(DomainError):
        dens.log_density_spectral_circular([0.1, 0.2], [0.5, 0.6], 2.0)
    with pytest.raises(DimensionError):
        dens.log_density_spectral_circular([0.1, 0.2], [1.0], 2.0)
    with pytest.raises(DomainError):
        dens.LogGasParams(1.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        dens.log_density_nonideal([0.1], 2.0, weightfn=lambda r: -1.0)
