import numpy as np
import pytest
from scipy import stats

from cmvrmt.cmv import cmvfy
from cmvrmt.ensembles import (
    FAMILIES,
    CouplingSpec,
    EnsembleSpec,
    direct_coupled,
    direct_truncation,
    make_rng,
    model_matrix,
    sample_beta_sym,
    sample_cloud,
    sample_coe,
    sample_ensemble_eigs,
    sample_haar,
    sample_simplex_pushforward,
    sample_theta,
    sample_upsilon,
    verblunsky_model,
)
from cmvrmt.errors import DimensionError, DomainError
from cmvrmt.quaternion import is_real_quaternionic
from cmvrmt.verify import chi2_bins, ks_one_sample, ks_two_sample, model_vs_haar


def _uniform(x):
    return np.clip(x, 0, 1)


def test_streams_are_reproducible_and_distinct():
    a = make_rng(5, 3).random(4)
    np.testing.assert_array_equal(a, make_rng(5, 3).random(4))
    assert not np.array_equal(a, make_rng(5, 4).random(4))


def test_beta_sym_endpoint_law():
    draws = sample_beta_sym(0, 0, make_rng(1), size=10_000)
    assert chi2_bins(draws, {-1.0: 0.5, 1.0: 0.5}).passed


def test_beta_sym_single_zero_is_atom():
    assert sample_beta_sym(0, 2, make_rng(1)) == 1.0
    assert sample_beta_sym(2, 0, make_rng(1)) == -1.0


def test_beta_sym_matches_scipy():
    s, t = 1.5, 0.7
    x = sample_beta_sym(s, t, make_rng(2), size=5000)
    cdf = stats.beta(t, s, loc=-1, scale=2).cdf
    assert ks_one_sample(x, cdf).passed


def test_theta_three_is_uniform_disk():
    z = sample_theta(3, make_rng(3), size=10_000)
    assert ks_one_sample(np.abs(z) ** 2, _uniform).passed


def test_theta_one_is_circle():
    z = sample_theta(1, make_rng(3), size=10)
    np.testing.assert_allclose(np.abs(z), 1)


def test_upsilon_three_is_su2():
    X = sample_upsilon(3, make_rng(4))
    np.testing.assert_allclose(X.conj().T @ X, np.eye(2), atol=1e-12)
    assert abs(np.linalg.det(X) - 1) < 1e-12


def test_upsilon_block_pattern():
    X = sample_upsilon(9, make_rng(4))
    assert is_real_quaternionic(X)
    assert np.linalg.norm(X, 2) < 1


@pytest.mark.parametrize("kind,count", [("a", 4), ("b", 4), ("c", 5), ("d", 5), ("e", 4)])
def test_pushforward_on_simplex(kind, count):
    mu = sample_simplex_pushforward(kind, 4, make_rng(5))
    assert mu.size == count
    assert abs(mu.sum() - 1) < 1e-12
    assert np.all(mu >= 0)


def test_pushforward_single_weight():
    np.testing.assert_allclose(sample_simplex_pushforward("a", 1, make_rng(5)), [1.0])


def test_u1_uniform_phase():
    rng = make_rng(6)
    th = np.array([np.angle(sample_haar("U", 1, rng)[0, 0]) for _ in range(2000)])
    assert ks_one_sample((th + np.pi) / (2 * np.pi), _uniform).passed


@pytest.mark.parametrize("group,n", [("U", 5), ("O", 4), ("USp", 3)])
def test_haar_unitary(group, n):
    U = sample_haar(group, n, make_rng(7))
    size = U.shape[0]
    np.testing.assert_allclose(U.conj().T @ U, np.eye(size), atol=1e-12)
    if group == "O":
        assert np.isrealobj(U) or np.abs(U.imag).max() == 0


def test_coe_is_symmetric():
    S = sample_coe(4, make_rng(8))
    np.testing.assert_allclose(S, S.T, atol=1e-14)


def test_cue_first_coefficient_law():
    spec = EnsembleSpec("CUE", 5)
    a0 = np.array([verblunsky_model(spec, make_rng(9, i))[0] for i in range(4000)])
    # Theta(9): |alpha_0|^2 ~ Beta(1, 4)
    assert ks_one_sample(np.abs(a0) ** 2, stats.beta(1, 4).cdf).passed


def test_truncated_cue2_uniform_disk():
    spec = EnsembleSpec("CUE", 1, truncated=True)
    z = np.concatenate([c.values for c in sample_ensemble_eigs(spec, 5000, seed=10)])
    assert ks_one_sample(np.abs(z) ** 2, _uniform).passed


@pytest.mark.parametrize("family", FAMILIES)
def test_model_matrix_shapes(family):
    beta = 3.0 if family in ("CircularBeta", "OrthogonalBeta") else None
    spec = EnsembleSpec(family, 4, beta=beta)
    M = model_matrix(spec, make_rng(11))
    assert M.shape == (spec.matrix_size,) * 2
    np.testing.assert_allclose(M.conj().T @ M, np.eye(spec.matrix_size), atol=1e-12)
    if spec.is_real:
        assert np.abs(M.imag).max() < 1e-14


def test_block_models_are_real_quaternionic():
    M = model_matrix(EnsembleSpec("USp", 3, truncated=True), make_rng(12))
    assert is_real_quaternionic(M, 1e-12)


def test_orthogonal_determinant_signs():
    for n in (4, 5):
        so = model_matrix(EnsembleSpec("SO", n), make_rng(13))
        om = model_matrix(EnsembleSpec("O_minus_SO", n), make_rng(13))
        assert np.isclose(np.linalg.det(so).real, 1)
        assert np.isclose(np.linalg.det(om).real, -1)


def test_cloud_is_pure_function_of_seed():
    spec = EnsembleSpec("CircularBeta", 6, beta=1.5, truncated=True)
    a = sample_cloud(spec, 3, 2).values
    np.testing.assert_array_equal(a, sample_cloud(spec, 3, 2).values)


def test_backends_give_same_cloud():
    spec = EnsembleSpec("CUE", 8, truncated=True)
    a = np.sort_complex(sample_cloud(spec, 1, 0).values)
    b = np.sort_complex(sample_cloud(spec, 1, 0, backend="python").values)
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_cmvfy_of_model_recovers_string():
    spec = EnsembleSpec("CUE", 5)
    a = verblunsky_model(spec, make_rng(14))
    from cmvrmt.cmv import build_cmv
    np.testing.assert_allclose(cmvfy(build_cmv(a)), a, atol=1e-8)


def test_direct_oracles_shapes():
    rng = make_rng(15)
    assert direct_truncation("U", 4, rng).shape == (3, 3)
    assert direct_truncation("USp", 3, rng).shape == (4, 4)
    assert direct_coupled("O", 3, 0.5, rng).shape == (3, 3)


@pytest.mark.parametrize("spec", [
    EnsembleSpec("CUE", 3, truncated=True),
    EnsembleSpec("O", 4, truncated=True),
    EnsembleSpec("SO", 3),
    EnsembleSpec("COE", 3, coupling=CouplingSpec(0.6)),
    EnsembleSpec("O_minus_SO", 4, coupling=CouplingSpec()),
    EnsembleSpec("SO", 3, coupling=CouplingSpec()),
    EnsembleSpec("O", 3, coupling=CouplingSpec()),
], ids=lambda s: f"{s.family}-{s.n}-{'t' if s.truncated else 'c' if s.coupling else 'u'}")
def test_model_matches_direct_sampling(spec):
    assert model_vs_haar(spec, 1500, seed=16).passed


def test_coupled_unit_weight_equals_next_truncation():
    spec = EnsembleSpec("CUE", 3, coupling=CouplingSpec())
    trunc = EnsembleSpec("CUE", 3, truncated=True)
    a = np.concatenate([c.values for c in sample_ensemble_eigs(spec, 2000, seed=17)])
    b = np.concatenate([c.values for c in sample_ensemble_eigs(trunc, 2000, seed=18)])
    assert ks_two_sample(np.abs(a), np.abs(b)).passed


def test_spec_validation():
    with pytest.raises(DomainError):
        EnsembleSpec("CUE", 3, beta=1.0)
    with pytest.raises(DomainError):
        EnsembleSpec("CircularBeta", 3)
    with pytest.raises(DimensionError):
        EnsembleSpec("CUE", 0)
    with pytest.raises(ValueError):
        EnsembleSpec("GUE", 3)
    with pytest.raises(DomainError):
        EnsembleSpec("CUE", 3, truncated=True, coupling=CouplingSpec(0.5))
    with pytest.raises(DomainError):
        EnsembleSpec("USp", 3, coupling=CouplingSpec())
    with pytest.raises(DomainError):
        EnsembleSpec("OrthogonalBeta", 3, beta=2.0, a=0.3, coupling=CouplingSpec(0.5))
    with pytest.raises(DomainError):
        CouplingSpec(1.5)


def test_coupled_orthogonal_beta_edge_parameters():
    spec = EnsembleSpec("OrthogonalBeta", 3, beta=2.0, coupling={"r": 0.4})
    assert spec.a == spec.b == -0.5
    assert isinstance(spec.coupling, CouplingSpec)
