"""Weyl-Heisenberg displacements and Clifford (anti-)unitaries in dimension d.

Conventions: ``X|i> = |i+1>``, ``Z|j> = w^j |j>`` with ``w = exp(2 pi i/d)``,
and ``D(a, b) = tau^(ab) X^a Z^b`` with ``tau = -exp(pi i/d)``. Symmetry
matrices live over Z_d for odd d and Z_2d for even d; a matrix with
``det = 1`` acts as ``U D(p) U^+ ~ D(F p)``, one with ``det = -1`` as the
anti-unitary ``J U_{F'}`` where ``F = J F'``. Global phases are never fixed.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .modmat import ModMatrix, lift, symmetry_modulus

__all__ = [
    "DisplacementIndex",
    "omega",
    "tau",
    "shift_and_clock",
    "displacement",
    "clifford_unitary",
    "as_symmetry_matrix",
    "antiunitary_apply",
    "antiunitary_unitary_part",
    "weyl_orbit",
    "phase_distance",
]


class DisplacementIndex(NamedTuple):
    a: int
    b: int

    @classmethod
    def of(cls, a: int, b: int, d: int) -> "DisplacementIndex":
        return cls(a % d, b % d)


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def tau(d: int) -> complex:
    return -np.exp(1j * np.pi / d)


def _tau_powers(d: int) -> np.ndarray:
    # tau^k = exp(i pi k (d+1)/d); order d for odd d, 2d for even d
    k = np.arange(symmetry_modulus(d))
    return np.exp(1j * np.pi * ((k * (d + 1)) % (2 * d)) / d)


def shift_and_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    X = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return X, Z


def displacement(idx: tuple[int, int], d: int) -> np.ndarray:
    """Dense matrix of D(a, b)."""
    a, b = idx[0] % d, idx[1] % d
    j = np.arange(d)
    # (X^a Z^b)|j> = w^(bj) |j+a>
    D = np.zeros((d, d), dtype=complex)
    D[(j + a) % d, j] = np.exp(2j * np.pi * b * j / d)
    return _tau_powers(d)[(a * b) % symmetry_modulus(d)] * D


def as_symmetry_matrix(F: ModMatrix, d: int, det: int) -> ModMatrix:
    """Bring ``F`` to modulus d (odd d) or 2d (even d), checking its determinant."""
    db = symmetry_modulus(d)
    if F.modulus == db:
        G = F
    elif F.modulus == d:
        G = lift(F, db, det)
    elif F.modulus % db == 0:
        G = F.reduce(db)
    else:
        raise ValueError(f"{F} is not a matrix over Z_{db}")
    if G.det() != det % db:
        raise ValueError(f"{F} has determinant {G.det()}, expected {det % db} mod {db}")
    return G


def _gauss_unitary(F: ModMatrix, d: int) -> np.ndarray:
    # Appleby's quadratic-phase formula; needs an invertible upper-right entry
    db = F.modulus
    beta_inv = pow(F.b, -1, db)
    u = np.arange(d)[:, None]
    v = np.arange(d)[None, :]
    exponent = (beta_inv * (F.a * v * v - 2 * u * v + F.d * u * u)) % db
    return _tau_powers(d)[exponent] / np.sqrt(d)


def clifford_unitary(F: ModMatrix, d: int) -> np.ndarray:
    """Unitary U_F with ``U_F D(p) U_F^+ = e^(i theta) D(F p)`` for every p."""
    F = as_symmetry_matrix(F, d, 1)
    db = F.modulus
    if np.gcd(F.b, db) == 1:
        return _gauss_unitary(F, d)
    # F = M N with M = [[0, -1], [1, x]] and N = M^-1 F; pick x so that
    # N has a unit in the upper-right corner too
    for x in range(db):
        if np.gcd(x * F.b + F.d, db) == 1:
            M = ModMatrix(0, -1, 1, x, db)
            N = M.inverse() @ F
            return _gauss_unitary(M, d) @ _gauss_unitary(N, d)
    raise AssertionError(f"no Clifford decomposition for {F}")  # unreachable when det = 1


def antiunitary_unitary_part(F: ModMatrix, d: int) -> np.ndarray:
    """U_{F'} for ``F = J F'`` with ``det F = -1``; the symmetry is ``v -> conj(U v)``."""
    F = as_symmetry_matrix(F, d, -1)
    Jm = ModMatrix(1, 0, 0, -1, F.modulus)
    return clifford_unitary(Jm @ F, d)


def antiunitary_apply(F: ModMatrix, v: np.ndarray, d: int | None = None) -> np.ndarray:
    """Apply the anti-unitary of a ``det = -1`` matrix: ``J U_{F'} v``."""
    v = np.asarray(v, dtype=complex)
    U = antiunitary_unitary_part(F, len(v) if d is None else d)
    return np.conj(U @ v)


def weyl_orbit(fiducial: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """All d^2 vectors D(a, b) psi, row-major in (a, b); shape (d*d, d)."""
    psi = np.asarray(fiducial, dtype=complex)
    d = len(psi)
    if abs(np.linalg.norm(psi) - 1) > atol:
        raise ValueError("fiducial must be normalized")
    j = np.arange(d)
    taus = _tau_powers(d)
    out = np.empty((d * d, d), dtype=complex)
    for a in range(d):
        shifted = np.roll(psi, a)  # (X^a v)_i = v_{i-a}
        for b in range(d):
            phase = np.exp(2j * np.pi * b * ((j - a) % d) / d)
            out[a * d + b] = taus[(a * b) % len(taus)] * phase * shifted
    return out


def phase_distance(A: np.ndarray, B: np.ndarray) -> float:
    """min over theta of max |A - e^(i theta) B| (theta from the overlap)."""
    overlap = np.vdot(B, A)
    theta = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.abs(A - theta * B).max())
