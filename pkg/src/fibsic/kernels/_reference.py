"""Pure numpy versions of the direct-sum kernels.

Used when the compiled extension is unavailable or ``FIBSIC_KERNELS=python``.
Sums are the same O(d^3) direct ones; the DFT over ``m`` is a dense
matrix product, not an FFT.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=16)
def _index_sum(d: int) -> np.ndarray:
    i = np.arange(d)
    return (i[:, None] + i[None, :]) % d


@lru_cache(maxsize=16)
def _dft_matrix(d: int) -> np.ndarray:
    i = np.arange(d)
    return np.exp(-2j * np.pi * ((i[:, None] * i[None, :]) % d) / d)


def _shift_products(psi: np.ndarray) -> np.ndarray:
    # R[j, l] = conj(psi_l) psi_{l+j}
    d = len(psi)
    return np.conj(psi)[None, :] * psi[_index_sum(d)]


def _frame_matrix(psi: np.ndarray) -> np.ndarray:
    d = len(psi)
    idx = _index_sum(d)
    R = _shift_products(psi)
    S = np.empty((d, d), dtype=complex)
    for j in range(d):
        # S[j, k] = sum_l conj(R[j, l]) R[j, l+k]
        S[j] = np.conj(R[j]) @ R[j][idx]
    return S


def frame_sum(psi: np.ndarray) -> float:
    psi = np.asarray(psi, dtype=complex)
    return float(np.sum(np.abs(_frame_matrix(psi)) ** 2))


def frame_sum_grad(psi: np.ndarray) -> tuple[float, np.ndarray]:
    psi = np.asarray(psi, dtype=complex)
    d = len(psi)
    idx = _index_sum(d)
    S = _frame_matrix(psi)
    g = np.empty(d, dtype=complex)
    for n in range(d):
        s = np.roll(psi, -n)  # s_j = psi_{n+j}
        g[n] = s @ (S * np.conj(s[idx])) @ s
    return float(np.sum(np.abs(S) ** 2)), 4 * g


def overlap_table(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return _shift_products(psi) @ _dft_matrix(len(psi))


def excess_grad(psi: np.ndarray) -> tuple[float, np.ndarray]:
    psi = np.asarray(psi, dtype=complex)
    C = overlap_table(psi)
    return excess_from_table(psi, C, lambda A: A @ _dft_matrix(len(psi)))


def excess_from_table(psi: np.ndarray, C: np.ndarray, dft_rows) -> tuple[float, np.ndarray]:
    """Shared tail of the excess kernels; ``dft_rows`` transforms along axis 1."""
    d = len(psi)
    N = float(np.vdot(psi, psi).real)
    r = np.abs(C) ** 2 / N**2
    res = r - 1.0 / (d + 1)
    res[0, 0] = 0.0
    E = float(np.sum(res**2)) / d
    B = dft_rows(res * np.conj(C))
    n = np.arange(d)
    idx = _index_sum(d)  # idx[j, n] = n + j
    back = (n[None, :] - n[:, None]) % d  # back[j, n] = n - j
    rows = n[:, None]
    s = np.sum(psi[idx] * B + psi[back] * np.conj(B[rows, back]), axis=0)
    g = (2.0 / (d * N**2)) * s - (4.0 * float(np.sum(res * r)) / (d * N)) * psi
    return E, g
