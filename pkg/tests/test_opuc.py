import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmvrmt.cmv import build_cmv
from cmvrmt.errors import DegenerateSpectrumError, DimensionError, DomainError
from cmvrmt.opuc import (
    PointMeasure,
    alphas_from_polys,
    as_scalar_string,
    identity_suite,
    inverse_szego,
    opuc_norm_products,
    reversed_poly,
    szego_forward,
    verblunsky_from_measure,
    verblunsky_from_measure_inner,
)
from cmvrmt.spectra import spectral_measure

from conftest import random_string, unimodular

disk = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(0, 0.95), st.floats(0, 2 * np.pi),
)
strings = st.lists(disk, min_size=1, max_size=10).map(np.array)


def test_first_step():
    a0 = 0.3 - 0.4j
    np.testing.assert_allclose(szego_forward([a0])[1], [1, -np.conj(a0)])


def test_reversed_degree_one():
    np.testing.assert_array_equal(reversed_poly([1, 0]), [0, 1])
    np.testing.assert_array_equal(reversed_poly([1], degree=1), [1, 0])


def test_point_mass_at_one():
    np.testing.assert_allclose(verblunsky_from_measure(PointMeasure([1.0], [1.0])), [1.0])


def test_zero_string_norms_are_one():
    np.testing.assert_array_equal(opuc_norm_products(np.zeros(4)), np.ones(5))


def test_roots_of_unity_string():
    n = 6
    phi = szego_forward(np.r_[np.zeros(n - 1), 1.0])[-1]
    expect = np.zeros(n + 1, dtype=complex)
    expect[0], expect[-1] = 1, -1
    np.testing.assert_array_equal(phi, expect)


@given(strings)
def test_inverse_recovers_string(a):
    np.testing.assert_allclose(inverse_szego(szego_forward(a)[-1]), a, atol=1e-9)


@given(strings)
def test_coefficients_read_back(a):
    np.testing.assert_allclose(alphas_from_polys(szego_forward(a)), a, atol=1e-14)


@given(strings)
def test_reversal_is_involution(a):
    p = szego_forward(a)[-1]
    np.testing.assert_allclose(reversed_poly(reversed_poly(p)), p)


@given(strings, st.floats(0, 2 * np.pi))
def test_measure_roundtrip(a, phase):
    full = np.r_[a, np.exp(1j * phase)]
    try:
        mu = spectral_measure(build_cmv(full))
    except DegenerateSpectrumError:
        return
    out = verblunsky_from_measure(mu)
    assert abs(abs(out[-1]) - 1) < 1e-12
    np.testing.assert_allclose(out, full, atol=1e-7)


def test_two_routes_agree(rng):
    full = np.r_[random_string(rng, 5), unimodular(rng)]
    mu = spectral_measure(build_cmv(full))
    np.testing.assert_allclose(verblunsky_from_measure(mu), verblunsky_from_measure_inner(mu),
                               atol=1e-10)


@pytest.mark.parametrize("real", [False, True])
def test_identity_suite_small_errors(rng, real):
    for n in (1, 3, 7, 10):
        report = identity_suite(random_string(rng, n, real=real), rng)
        assert max(report.values()) < 1e-9, report


def test_measure_validation():
    with pytest.raises(DomainError):
        PointMeasure([1.0, -1.0], [0.5, 0.6]).validate()
    with pytest.raises(DomainError):
        PointMeasure([1.1], [1.0]).validate()
    with pytest.raises(DegenerateSpectrumError):
        PointMeasure([1.0, 1.0], [0.5, 0.5]).validate()
    with pytest.raises(DimensionError):
        PointMeasure([1.0], [0.5, 0.5])


def test_string_validation():
    with pytest.raises(DomainError):
        as_scalar_string([1.0, 0.0])
    with pytest.raises(DimensionError):
        as_scalar_string([])
    as_scalar_string([0.5, 1.0])


def test_inverse_rejects_zeros_outside():
    with pytest.raises(DomainError):
        inverse_szego(np.poly([2.0, 0.1]))


def test_sorted_orders_by_angle():
    mu = PointMeasure([-1.0, 1j, 1.0], [0.2, 0.3, 0.5]).sorted()
    np.testing.assert_allclose(mu.nodes, [1.0, 1j, -1.0])
    np.testing.assert_allclose(mu.weights, [0.5, 0.3, 0.2])
