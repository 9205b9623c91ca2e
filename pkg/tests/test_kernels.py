import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmvrmt import available_backends
from cmvrmt.cmv import build_cmv
from cmvrmt.spectra import eigvals, match_distance, polyroots

backends = pytest.mark.parametrize("backend", available_backends())


def test_python_backend_always_available():
    assert "python" in available_backends()


@backends
@pytest.mark.parametrize("n", [1, 2, 3, 10, 40])
def test_eigvals_against_lapack(backend, n, rng):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert match_distance(eigvals(A, backend=backend), np.linalg.eigvals(A)) < 1e-8


@backends
def test_eigvals_of_cmv(backend, rng):
    a = 0.9 * np.sqrt(rng.random(30)) * np.exp(2j * np.pi * rng.random(30))
    C = build_cmv(a)
    assert match_distance(eigvals(C, backend=backend), np.linalg.eigvals(C)) < 1e-8


@backends
def test_eigvals_real_matrix_with_pairs(backend):
    R = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.5]])
    assert match_distance(eigvals(R, backend=backend), [1j, -1j, 0.5]) < 1e-12


@backends
@given(st.integers(1, 15), st.integers(0, 2**32 - 1))
def test_aberth_roots(backend, n, seed):
    rng = np.random.default_rng(seed)
    z = 0.9 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    assert match_distance(polyroots(np.poly(z), backend=backend), z) < 1e-7


def test_backends_agree(rng):
    if len(available_backends()) < 2:
        pytest.skip("compiled extension not built")
    A = rng.normal(size=(25, 25)) + 1j * rng.normal(size=(25, 25))
    assert match_distance(eigvals(A, backend="compiled"), eigvals(A, backend="python")) < 1e-9


def test_benchmark_runs():
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    backends, rows = bench.run([6], repeat=1)
    assert rows[0]["n"] == 6
    if len(backends) > 1:
        assert rows[0]["eig_diff"] < 1e-9
