"""Pure numpy versions of the compiled kernels in ``_core.pyx``.

Same signatures and results (to round-off) as the compiled module; used
when the extension is not built or ``SPINSTAR_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import numpy as np

# phase matrices are built in chunks of at most this many entries
_CHUNK_ENTRIES = 1 << 22


def _as_complex(coefs: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(coefs).view(np.complex128)


def expsum_uniform(freqs, coefs, t0, dt, n_t, block=32, threads=1):
    freqs = np.asarray(freqs, dtype=float)
    cz = _as_complex(coefs)
    out = np.zeros((n_t, cz.shape[1]), dtype=complex)
    if freqs.size == 0 or n_t == 0:
        return out
    # t_j = t0 + (a*B + b) dt, phase = base(a) * step(b)
    b_len = max(1, int(np.ceil(np.sqrt(n_t))))
    n_a = -(-n_t // b_len)
    kc = max(1, _CHUNK_ENTRIES // (n_a * b_len))
    for k0 in range(0, freqs.size, kc):
        w = freqs[k0:k0 + kc]
        base = np.exp(-1j * np.outer(w, t0 + dt * b_len * np.arange(n_a)))
        step = np.exp(-1j * np.outer(w, dt * np.arange(b_len)))
        ph = (base[:, :, None] * step[:, None, :]).reshape(w.size, n_a * b_len)[:, :n_t]
        out += ph.T @ cz[k0:k0 + kc]
    return out


def expsum_direct(freqs, coefs, times, threads=1):
    freqs = np.asarray(freqs, dtype=float)
    times = np.asarray(times, dtype=float)
    cz = _as_complex(coefs)
    out = np.zeros((times.size, cz.shape[1]), dtype=complex)
    if freqs.size == 0:
        return out
    kc = max(1, _CHUNK_ENTRIES // max(1, times.size))
    for k0 in range(0, freqs.size, kc):
        ph = np.exp(-1j * np.outer(times, freqs[k0:k0 + kc]))
        out += ph @ cz[k0:k0 + kc]
    return out


def _weighted_entropy(s00, s11, s01):
    p = s00 + s11
    r = np.sqrt((s00 - s11) ** 2 + 4.0 * np.abs(s01) ** 2)
    lam = np.stack([0.5 * (p + r), 0.5 * (p - r)])
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
        h = np.where(p >= 1e-12, p * np.log2(np.where(p > 0, p, 1.0)) - terms.sum(axis=0), 0.0)
    return h


def conditional_entropy_grid(rho_re, rho_im, thetas, phis, threads=1):
    rho = np.asarray(rho_re) + 1j * np.asarray(rho_im)
    r = rho.reshape(2, 2, 2, 2)  # r[a, q, b, q']
    th = np.asarray(thetas, dtype=float)[:, None]
    ph = np.asarray(phis, dtype=float)[None, :]
    c, s, e = np.cos(th), np.sin(th), np.exp(1j * ph)

    def block(a, b, cc, ss, sign):
        return (cc * r[a, 0, b, 0] + ss * r[a, 1, b, 1]
                + sign * c * s * (e * r[a, 0, b, 1] + np.conj(e) * r[a, 1, b, 0]))

    total = 0.0
    for cc, ss, sign in ((c * c, s * s, 1.0), (s * s, c * c, -1.0)):
        s00 = block(0, 0, cc, ss, sign).real
        s11 = block(1, 1, cc, ss, sign).real
        s01 = block(0, 1, cc, ss, sign)
        total = total + _weighted_entropy(s00, s11, s01)
    return np.ascontiguousarray(np.broadcast_to(total, (th.size, ph.size)), dtype=float)
