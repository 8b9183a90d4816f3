import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinstar.errors import DimensionMismatch, NonHermitian, NonSquare
from spinstar.numerics import (hermitian_eig, hermitian_norms_batch, kron,
                               matrix_norms, partial_trace, singular_values)

from oracles import random_density, random_hermitian

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_eig_diagonal():
    w, v = hermitian_eig(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(w, [1, 3])
    np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]])


def test_eig_pauli_x():
    w, _ = hermitian_eig(SX)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)


def test_eig_reconstruction_8x8():
    a = random_hermitian(8, np.random.default_rng(3))
    w, v = hermitian_eig(a)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) < 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(8))) < 1e-10
    assert np.all(np.diff(w) >= 0)


def test_eig_rejects_bad_input():
    with pytest.raises(NonHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NonSquare):
        hermitian_eig(np.zeros((2, 3)))


def test_eig_reconstruction_many_random():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        d = int(rng.integers(1, 33))
        a = random_hermitian(d, rng)
        w, v = hermitian_eig(a)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) < 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-10


def test_kron_identities():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kron(SZ, SZ), np.diag([1, -1, -1, 1]))


def test_kron_index_law():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    k = kron(a, b)
    assert k.shape == (6, 6)
    for i in range(2):
        for j in range(2):
            for p in range(3):
                for q in range(3):
                    assert k[i * 3 + p, j * 3 + q] == a[i, j] * b[p, q]


def test_kron_mixed_product():
    rng = np.random.default_rng(1)
    a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
    assert np.max(np.abs(kron(a, b) @ kron(c, d) - kron(a @ c, b @ d))) < 1e-12


def test_partial_trace_product_state():
    rng = np.random.default_rng(2)
    ra, rb = random_density(2, rng), random_density(2, rng)
    out = partial_trace(np.kron(ra, rb), [2, 2], [0])
    assert np.max(np.abs(out - ra)) < 1e-12
    assert np.max(np.abs(partial_trace(np.kron(ra, rb), [2, 2], [1]) - rb)) < 1e-12


def test_partial_trace_bell():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    bell = np.outer(v, v)
    for keep in (0, 1):
        np.testing.assert_allclose(partial_trace(bell, [2, 2], [keep]), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_three_factors_against_loops():
    rng = np.random.default_rng(4)
    dims = (2, 3, 2)
    rho = random_density(12, rng)
    out = partial_trace(rho, dims, [1])
    r = rho.reshape(2, 3, 2, 2, 3, 2)
    expect = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            for a in range(2):
                for c in range(2):
                    expect[i, j] += r[a, i, c, a, j, c]
    assert np.max(np.abs(out - expect)) < 1e-14
    assert abs(np.trace(out) - np.trace(rho)) < 1e-12


def test_partial_trace_errors():
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(6), [2, 2], [0])
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4), [2, 2], [])


def test_norms_examples():
    np.testing.assert_allclose(matrix_norms(np.eye(2)), (1, np.sqrt(2), 2))
    unit = np.array([[0, 1], [0, 0]])
    np.testing.assert_allclose(matrix_norms(unit), (1, 1, 1))


def test_norms_against_gram_eigenvalues():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    w, _ = hermitian_eig(a.conj().T @ a)
    s = np.sqrt(np.clip(w, 0, None))
    op, hs, tr = matrix_norms(a)
    assert abs(op - s.max()) < 1e-10
    assert abs(hs - np.sqrt(np.sum(s ** 2))) < 1e-10
    assert abs(tr - s.sum()) < 1e-10
    np.testing.assert_allclose(singular_values(a), np.linalg.svd(a, compute_uv=False), atol=1e-10)


def test_hermitian_norm_paths_agree():
    rng = np.random.default_rng(6)
    mats = np.array([random_hermitian(4, rng) for _ in range(20)])
    batch = hermitian_norms_batch(mats)
    for m, row in zip(mats, batch):
        np.testing.assert_allclose(matrix_norms(m), row, atol=1e-12)
        np.testing.assert_allclose(matrix_norms(m, hermitian=True), row, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_norm_ordering(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    op, hs, tr = matrix_norms(a)
    assert op <= hs + 1e-12 and hs <= tr + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=4), st.integers(0, 2 ** 32 - 1))
def test_partial_trace_preserves_trace(dims, seed):
    rng = np.random.default_rng(seed)
    d = int(np.prod(dims))
    rho = random_density(d, rng)
    keep = [int(rng.integers(len(dims)))]
    assert abs(np.trace(partial_trace(rho, dims, keep)) - np.trace(rho)) < 1e-12
