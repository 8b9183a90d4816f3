import numpy as np
import pytest

from spinstar import _fallback, kernels

BACKENDS = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])


def reference_expsum(freqs, coefs, times):
    return np.exp(-1j * np.outer(times, freqs)) @ coefs


@pytest.fixture
def terms():
    rng = np.random.default_rng(0)
    freqs = rng.normal(scale=5, size=300)
    coefs = rng.normal(size=(300, 6)) + 1j * rng.normal(size=(300, 6))
    return freqs, coefs


@pytest.mark.parametrize("backend", BACKENDS)
def test_expsum_uniform_grid(backend, terms):
    freqs, coefs = terms
    t = np.linspace(0, 25, 777)
    out = kernels.expsum(freqs, coefs, t, backend=backend)
    assert np.max(np.abs(out - reference_expsum(freqs, coefs, t))) < 1e-10


@pytest.mark.parametrize("backend", BACKENDS)
def test_expsum_irregular_grid(backend, terms):
    freqs, coefs = terms
    t = np.sort(np.random.default_rng(1).uniform(0, 10, 50))
    assert kernels.uniform_step(t) is None
    out = kernels.expsum(freqs, coefs, t, backend=backend)
    assert np.max(np.abs(out - reference_expsum(freqs, coefs, t))) < 1e-10


@pytest.mark.parametrize("backend", BACKENDS)
def test_expsum_edge_cases(backend):
    out = kernels.expsum(np.zeros(0), np.zeros((0, 3), complex), np.linspace(0, 1, 5), backend)
    assert out.shape == (5, 3) and not out.any()
    one = kernels.expsum([2.0], [[1.0 + 0j]], [0.7], backend)
    assert abs(one[0, 0] - np.exp(-1.4j)) < 1e-15


def test_uniform_step_detection():
    assert kernels.uniform_step(np.linspace(0, 1, 11)) == pytest.approx(0.1)
    assert kernels.uniform_step(np.array([0.0, 0.1, 0.3])) is None
    assert kernels.uniform_step(np.array([2.0])) == 0.0


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="extension not built")
def test_backends_agree(terms):
    freqs, coefs = terms
    t = np.linspace(0.5, 4, 1001)
    a = kernels.expsum(freqs, coefs, t, backend="compiled")
    b = kernels.expsum(freqs, coefs, t, backend="python")
    assert np.max(np.abs(a - b)) < 1e-10
    rng = np.random.default_rng(2)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    th, ph = np.linspace(0, np.pi / 2, 13), np.linspace(0, 2 * np.pi, 17, endpoint=False)
    ga = kernels.conditional_entropy_grid(rho, th, ph, backend="compiled")
    gb = kernels.conditional_entropy_grid(rho, th, ph, backend="python")
    assert np.max(np.abs(ga - gb)) < 1e-12


@pytest.mark.parametrize("backend", BACKENDS)
def test_conditional_entropy_grid_shape_and_bell(backend):
    bell = np.outer([1, 0, 0, 1], [1, 0, 0, 1]).astype(complex) / 2
    g = kernels.conditional_entropy_grid(bell, np.linspace(0, 1.5, 4), np.linspace(0, 6, 5), backend)
    assert g.shape == (4, 5)
    assert np.max(np.abs(g)) < 1e-12  # measuring one half of a Bell pair leaves P pure


def test_fallback_exposed_names():
    for name in ("expsum_uniform", "expsum_direct", "conditional_entropy_grid"):
        assert callable(getattr(_fallback, name))


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.expsum([1.0], [[1.0]], [0.0], backend="gpu")
