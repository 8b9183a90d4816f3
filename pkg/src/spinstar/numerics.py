"""Dense complex linear algebra used throughout the package.

Operators and density matrices are plain ``numpy`` arrays of dtype
``complex128``; nothing here wraps them in a custom class.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NonSquare

HERMITIAN_TOL = 1e-10


class EigDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_error(a) -> float:
    """Largest entry of ``|A - A^dagger|``."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(a) <= tol


def hermitian_eig(a, tol: float = HERMITIAN_TOL) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending and the eigenvectors are the
    orthonormal columns of a unitary matrix.
    """
    a = as_square(a)
    err = hermiticity_error(a)
    if err > tol:
        raise NonHermitian(f"matrix is not Hermitian (max |A - A^H| = {err:.3e})")
    # symmetrise so LAPACK sees exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return EigDecomposition(w, v)


def kron(a, b) -> np.ndarray:
    return np.kron(as_square(a), as_square(b))


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_square(m))
    return out


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` gives the subsystem dimensions in tensor-product order and
    ``keep`` the indices of the factors to retain (order is normalised to
    ascending).
    """
    rho = as_square(rho)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not factor dimension {rho.shape[0]}")
    keep = sorted({int(k) for k in np.atleast_1d(keep)})
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionMismatch(f"invalid keep set {keep} for {len(dims)} subsystems")

    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    t = rho.reshape(dims + dims)
    # contract bra/ket index pairs from the highest axis down so the
    # remaining axis numbers stay valid
    for k in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def singular_values(a) -> np.ndarray:
    """Singular values via the eigenvalues of the Gram matrix ``A^H A``."""
    a = as_square(a)
    gram = a.conj().T @ a
    lam = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))
    return np.sqrt(np.clip(lam, 0.0, None))[::-1]


def matrix_norms(a, hermitian: bool = False) -> tuple[float, float, float]:
    """Return ``(operator, Hilbert-Schmidt, trace)`` norms of ``a``.

    With ``hermitian=True`` the singular values are taken as ``|eigenvalues|``,
    which is exact for Hermitian input and cheaper.
    """
    if hermitian:
        s = np.abs(np.linalg.eigvalsh(as_square(a)))
    else:
        s = singular_values(a)
    return float(np.max(s)), float(np.sqrt(np.sum(s * s))), float(np.sum(s))


def hermitian_norms_batch(mats: np.ndarray) -> np.ndarray:
    """Norms of a stack of Hermitian matrices, shape ``(n, 3)`` as (op, hs, tr)."""
    mats = np.asarray(mats, dtype=complex)
    s = np.abs(np.linalg.eigvalsh(0.5 * (mats + np.conj(np.swapaxes(mats, -1, -2)))))
    return np.stack([s.max(axis=-1), np.sqrt((s * s).sum(axis=-1)), s.sum(axis=-1)], axis=-1)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())
