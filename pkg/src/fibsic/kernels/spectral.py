"""FFT variants of the kernels, O(d^2 log d). Off unless asked for."""

from __future__ import annotations

import numpy as np

from ._reference import _shift_products, excess_from_table


def overlap_table(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.fft.fft(_shift_products(psi), axis=1)


def frame_sum(psi: np.ndarray) -> float:
    # Parseval: sum_k |S_jk|^2 = (1/d) sum_m |C_jm|^4
    C = overlap_table(psi)
    return float(np.sum(np.abs(C) ** 4)) / len(C)


def frame_sum_grad(psi: np.ndarray) -> tuple[float, np.ndarray]:
    psi = np.asarray(psi, dtype=complex)
    d = len(psi)
    C = overlap_table(psi)
    W = np.abs(C) ** 2 * np.conj(C)
    B = np.fft.fft(W, axis=1)
    n = np.arange(d)
    idx = (n[None, :] + n[:, None]) % d
    back = (n[None, :] - n[:, None]) % d
    s = np.sum(psi[idx] * B + psi[back] * np.conj(B[n[:, None], back]), axis=0)
    return float(np.sum(np.abs(C) ** 4)) / d, (2.0 / d) * s


def excess_grad(psi: np.ndarray) -> tuple[float, np.ndarray]:
    psi = np.asarray(psi, dtype=complex)
    return excess_from_table(psi, overlap_table(psi), lambda A: np.fft.fft(A, axis=1))
