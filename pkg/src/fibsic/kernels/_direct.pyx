# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled direct-sum kernels (no FFT). Same API as ``_reference``."""

import numpy as np
cimport numpy as cnp
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

ctypedef double complex cplx


cdef inline cplx conj(cplx z) noexcept nogil:
    return z.real - 1j * z.imag


cdef inline double abs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def _tiled(psi, int reps):
    return np.ascontiguousarray(np.tile(np.asarray(psi, dtype=np.complex128), reps))


_DFT = {}


def _dft(int d):
    # symmetric, so row/column order does not matter to BLAS
    W = _DFT.get(d)
    if W is None:
        n = np.arange(d)
        W = np.ascontiguousarray(np.exp(-2j * np.pi * (np.outer(n, n) % d) / d))
        _DFT[d] = W
    return W


cdef void _times_dft(cplx[:, ::1] A, const cplx[:, ::1] W, cplx[:, ::1] out) noexcept nogil:
    # out = A @ W for C-ordered A, out; in column-major terms out^T = W A^T
    cdef int d = A.shape[0]
    cdef cplx one = 1, zero = 0
    cdef char trans = b'N'
    zgemm(&trans, &trans, &d, &d, &d, &one, <cplx*> &W[0, 0], &d, &A[0, 0], &d, &zero, &out[0, 0], &d)


def frame_sum(psi):
    """sum_{j,k} |sum_l <psi|j+l><l|psi><psi|k+l><j+k+l|psi>|^2."""
    cdef int d = len(psi)
    cdef const cplx[::1] p = _tiled(psi, 3)
    cdef int j, k, l
    cdef cplx s
    cdef double total = 0.0
    with nogil:
        for j in range(d):
            for k in range(d):
                s = 0
                for l in range(d):
                    s = s + conj(p[j + l]) * p[l] * conj(p[k + l]) * p[j + k + l]
                total += abs2(s)
    return total


def frame_sum_grad(psi):
    """Frame sum and its Wirtinger gradient d/d conj(psi)."""
    cdef int d = len(psi)
    cdef const cplx[::1] p = _tiled(psi, 3)
    S_arr = np.empty((d, d), dtype=np.complex128)
    g_arr = np.empty(d, dtype=np.complex128)
    cdef cplx[:, ::1] S = S_arr
    cdef cplx[::1] g = g_arr
    cdef int j, k, l, n
    cdef cplx s, acc
    cdef double total = 0.0
    with nogil:
        for j in range(d):
            for k in range(j + 1):
                s = 0
                for l in range(d):
                    s = s + conj(p[j + l]) * p[l] * conj(p[k + l]) * p[j + k + l]
                S[j, k] = s
                S[k, j] = s
                total += abs2(s) * (1.0 if j == k else 2.0)
        # g_n = 4 sum_{j,k} S_jk psi_{n+j} psi_{n+k} conj(psi_{n+j+k})
        for n in range(d):
            acc = 0
            for j in range(d):
                s = 0
                for k in range(d):
                    s = s + S[j, k] * p[n + k] * conj(p[n + j + k])
                acc = acc + s * p[n + j]
            g[n] = 4 * acc
    return total, g_arr


def overlap_table(psi):
    """C[j, m] = sum_l conj(psi_l) psi_{l+j} w^(-lm)."""
    cdef int d = len(psi)
    cdef const cplx[::1] p = _tiled(psi, 2)
    cdef const cplx[:, ::1] W = _dft(d)
    P_arr = np.empty((d, d), dtype=np.complex128)
    C_arr = np.empty((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] P = P_arr
    cdef cplx[:, ::1] C = C_arr
    cdef int j, l
    with nogil:
        for j in range(d):
            for l in range(d):
                P[j, l] = conj(p[l]) * p[l + j]
        _times_dft(P, W, C)
    return C_arr


def excess_grad(psi):
    """Overlap-residual excess and its Wirtinger gradient.

    E = (1/d) sum_{(j,m) != 0} (|C_jm|^2 / N^2 - 1/(d+1))^2 with N = <psi|psi>;
    equals the frame potential of psi/|psi| minus 2/(d+1).
    """
    cdef int d = len(psi)
    cdef const cplx[::1] p = _tiled(psi, 3)
    cdef const cplx[:, ::1] W = _dft(d)
    cdef cplx[:, ::1] C = overlap_table(psi)
    A_arr = np.empty((d, d), dtype=np.complex128)
    B_arr = np.empty((d, d), dtype=np.complex128)
    g_arr = np.empty(d, dtype=np.complex128)
    cdef cplx[:, ::1] A = A_arr
    cdef cplx[:, ::1] B = B_arr
    cdef cplx[::1] g = g_arr
    cdef int j, m, n, nj
    cdef double N = 0.0, mu = 1.0 / (d + 1), r, res, E = 0.0, wr = 0.0
    cdef cplx s
    with nogil:
        for n in range(d):
            N += abs2(p[n])
        for j in range(d):
            for m in range(d):
                if j == 0 and m == 0:
                    A[j, m] = 0
                    continue
                r = abs2(C[j, m]) / (N * N)
                res = r - mu
                E += res * res
                wr += res * r
                A[j, m] = res * conj(C[j, m])
        E /= d
        _times_dft(A, W, B)
        for n in range(d):
            s = 0
            for j in range(d):
                nj = n - j
                if nj < 0:
                    nj = nj + d
                s = s + p[n + j] * B[j, n] + p[nj] * conj(B[j, nj])
            g[n] = (2.0 / (d * N * N)) * s - (4.0 * wr / (d * N)) * p[n]
    return E, g_arr
