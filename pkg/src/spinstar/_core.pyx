# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: exponential sums for spectral propagation and the
discord measurement grid. Mirrors :mod:`spinstar._fallback` exactly in
contract; see that module for the reference implementation.

Complex numbers travel as interleaved float64 pairs; the only complex
arithmetic happens inside BLAS.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sin, cos, sqrt, log2
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

# terms per phase-matrix chunk; keeps the block buffer around 1 MB
cdef Py_ssize_t _K_CHUNK = 1024


def expsum_uniform(const double[::1] freqs, const double[:, ::1] coefs,
                   double t0, double dt, Py_ssize_t n_t,
                   Py_ssize_t block=64, int threads=1):
    """out[j, c] = sum_k coefs[k, c] * exp(-i freqs[k] (t0 + j dt)).

    ``coefs`` is the float64 view of a (K, C) complex array, so it has 2*C
    columns. For each block of ``block`` times the phase matrix is built by
    a recurrence that restarts from an exact sincos at the block start, then
    contracted with the coefficients through ``zgemm``.
    """
    cdef Py_ssize_t n_k = freqs.shape[0]
    cdef int n_c = <int>(coefs.shape[1] // 2)
    cdef Py_ssize_t n_blocks = (n_t + block - 1) // block
    out_arr = np.zeros((n_t, n_c), dtype=np.complex128)
    if n_k == 0 or n_t == 0 or n_c == 0:
        return out_arr
    cdef double[:, ::1] out = out_arr.view(np.float64)
    step_re_arr = np.cos(np.asarray(freqs) * dt)
    step_im_arr = -np.sin(np.asarray(freqs) * dt)
    cdef const double[::1] step_re = step_re_arr
    cdef const double[::1] step_im = step_im_arr
    cdef int kc_max = <int>min(n_k, _K_CHUNK)

    cdef Py_ssize_t n_chunks = (n_k + kc_max - 1) // kc_max
    cdef Py_ssize_t ib, ic, k, k0, j, j0
    cdef int nb, kc
    cdef double arg, pr, pi
    cdef double *ph
    cdef double complex one = 1.0
    cdef char trans = b'N'
    for ib in prange(n_blocks, nogil=True, num_threads=threads, schedule="static"):
        ph = <double *> malloc(2 * block * kc_max * sizeof(double))
        j0 = ib * block
        nb = <int>(n_t - j0 if n_t - j0 < block else block)
        for ic in range(n_chunks):
            k0 = ic * kc_max
            kc = <int>(n_k - k0 if n_k - k0 < kc_max else kc_max)
            # ph is row-major (nb, kc): row j holds exp(-i w_k t_{j0+j})
            for k in range(kc):
                arg = freqs[k0 + k] * (t0 + j0 * dt)
                ph[2 * k] = cos(arg)
                ph[2 * k + 1] = -sin(arg)
            for j in range(1, nb):
                for k in range(kc):
                    pr = ph[2 * ((j - 1) * kc + k)]
                    pi = ph[2 * ((j - 1) * kc + k) + 1]
                    ph[2 * (j * kc + k)] = pr * step_re[k0 + k] - pi * step_im[k0 + k]
                    ph[2 * (j * kc + k) + 1] = pr * step_im[k0 + k] + pi * step_re[k0 + k]
            # column-major view: out^T (C x nb) += coefs^T (C x kc) @ ph^T (kc x nb)
            zgemm(&trans, &trans, &n_c, &nb, &kc, &one,
                  <double complex *> &coefs[k0, 0], &n_c,
                  <double complex *> ph, &kc, &one,
                  <double complex *> &out[j0, 0], &n_c)
        free(ph)
    return out_arr


def expsum_direct(const double[::1] freqs, const double[:, ::1] coefs,
                  const double[::1] times, int threads=1):
    """Same sum as :func:`expsum_uniform` for an arbitrary time list."""
    cdef Py_ssize_t n_k = freqs.shape[0]
    cdef Py_ssize_t n_c2 = coefs.shape[1]
    cdef Py_ssize_t n_t = times.shape[0]
    out_arr = np.zeros((n_t, n_c2 // 2), dtype=np.complex128)
    cdef double[:, ::1] out = out_arr.view(np.float64)
    cdef Py_ssize_t j, k, c
    cdef double arg, pr, pi, cr, ci
    for j in prange(n_t, nogil=True, num_threads=threads, schedule="static"):
        for k in range(n_k):
            arg = freqs[k] * times[j]
            pr = cos(arg)
            pi = -sin(arg)
            for c in range(0, n_c2, 2):
                cr = coefs[k, c]
                ci = coefs[k, c + 1]
                out[j, c] += cr * pr - ci * pi
                out[j, c + 1] += cr * pi + ci * pr
    return out_arr


cdef inline double _weighted_entropy(double s00, double s11, double re01, double im01) noexcept nogil:
    # p * S(sigma / p) in bits for an unnormalised 2x2 block sigma
    cdef double p = s00 + s11
    cdef double r, l1, l2, h
    if p < 1e-12:
        return 0.0
    r = sqrt((s00 - s11) * (s00 - s11) + 4.0 * (re01 * re01 + im01 * im01))
    l1 = 0.5 * (p + r)
    l2 = 0.5 * (p - r)
    h = p * log2(p)
    if l1 > 0.0:
        h -= l1 * log2(l1)
    if l2 > 0.0:
        h -= l2 * log2(l2)
    return h


def conditional_entropy_grid(const double[:, ::1] rho_re, const double[:, ::1] rho_im,
                             const double[::1] thetas, const double[::1] phis,
                             int threads=1):
    """Post-measurement conditional entropy (bits) of qubit P for projective
    measurements of qubit Q along (theta, phi), on the outer-product grid."""
    cdef Py_ssize_t n1 = thetas.shape[0]
    cdef Py_ssize_t n2 = phis.shape[0]
    out_arr = np.empty((n1, n2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    # R[a, q, b, q'] = rho[2a+q, 2b+q']
    cdef double r00r[2], r11r[2], x01r[2], x01i[2], y01r[2], y01i[2], z01r[2], z01i[2]
    cdef double w00r[2], w00i[2], w11r[2], w11i[2]
    cdef Py_ssize_t i1, i2
    cdef double c, s, cp, spp, cs, c2, s2
    cdef double u00, u11, ur, ui, v00, v11, vr, vi, ar, ai, br, bi
    cdef int a
    for a in range(2):
        # diagonal-in-P blocks (a, a): need R[a,0,a,0], R[a,1,a,1], R[a,0,a,1]
        r00r[a] = rho_re[2 * a, 2 * a]
        r11r[a] = rho_re[2 * a + 1, 2 * a + 1]
        x01r[a] = rho_re[2 * a, 2 * a + 1]
        x01i[a] = rho_im[2 * a, 2 * a + 1]
    # off-diagonal-in-P block (0, 1): R[0,q,1,q']
    w00r[0] = rho_re[0, 2]
    w00i[0] = rho_im[0, 2]
    w11r[0] = rho_re[1, 3]
    w11i[0] = rho_im[1, 3]
    y01r[0] = rho_re[0, 3]
    y01i[0] = rho_im[0, 3]
    z01r[0] = rho_re[1, 2]
    z01i[0] = rho_im[1, 2]

    for i1 in prange(n1, nogil=True, num_threads=threads, schedule="static"):
        c = cos(thetas[i1])
        s = sin(thetas[i1])
        c2 = c * c
        s2 = s * s
        cs = c * s
        for i2 in range(n2):
            cp = cos(phis[i2])
            spp = sin(phis[i2])
            # sigma_u[a, a] = c2 R[a0a0] + s2 R[a1a1] + 2 cs Re(e^{i phi} R[a0a1])
            u00 = c2 * r00r[0] + s2 * r11r[0] + 2.0 * cs * (cp * x01r[0] - spp * x01i[0])
            u11 = c2 * r00r[1] + s2 * r11r[1] + 2.0 * cs * (cp * x01r[1] - spp * x01i[1])
            v00 = s2 * r00r[0] + c2 * r11r[0] - 2.0 * cs * (cp * x01r[0] - spp * x01i[0])
            v11 = s2 * r00r[1] + c2 * r11r[1] - 2.0 * cs * (cp * x01r[1] - spp * x01i[1])
            # sigma[0, 1] = c2 R[0010] + s2 R[0111] + cs (e^{i phi} R[0011] + e^{-i phi} R[0110])
            ar = cp * y01r[0] - spp * y01i[0]
            ai = cp * y01i[0] + spp * y01r[0]
            br = cp * z01r[0] + spp * z01i[0]
            bi = cp * z01i[0] - spp * z01r[0]
            ur = c2 * w00r[0] + s2 * w11r[0] + cs * (ar + br)
            ui = c2 * w00i[0] + s2 * w11i[0] + cs * (ai + bi)
            vr = s2 * w00r[0] + c2 * w11r[0] - cs * (ar + br)
            vi = s2 * w00i[0] + c2 * w11i[0] - cs * (ai + bi)
            out[i1, i2] = _weighted_entropy(u00, u11, ur, ui) + _weighted_entropy(v00, v11, vr, vi)
    return out_arr
