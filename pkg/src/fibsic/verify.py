"""Certificates for candidate fiducials.

All pairwise traces over the Weyl-Heisenberg orbit reduce to the d^2
overlaps ``<psi|D(a, b)|psi>``, because ``tr(P_i P_j) = |<psi|D_i^+ D_j|psi>|^2``
and ``D_i^+ D_j`` is a displacement up to phase.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .search import frame_potential
from .modmat import ModMatrix, generated_group_order, symmetry_modulus
from .weyl import _tau_powers, antiunitary_unitary_part, clifford_unitary, weyl_orbit

__all__ = [
    "VerificationReport",
    "overlaps",
    "cross_overlaps",
    "gram_check",
    "TripleProductTensor",
    "triple_products",
    "ProbeResult",
    "stabilizer_probe",
    "verify",
]

DEFAULT_TOLERANCE = 1e-9


def _unit(psi: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > atol:
        raise ValueError(f"fiducial must be normalized (norm {np.linalg.norm(psi):.12g})")
    return psi


def cross_overlaps(psi: np.ndarray, chi: np.ndarray) -> np.ndarray:
    """``T[a, b] = <D(a, b) psi | chi>`` for all displacements."""
    d = len(psi)
    j = np.arange(d)
    # <D(a,b) psi|chi> = conj(tau^ab) sum_l conj(psi_l) chi_{l+a} w^(-bl)
    rows = np.conj(psi)[None, :] * chi[(j[:, None] + j[None, :]) % d]
    taus = _tau_powers(d)
    return np.conj(taus[(j[:, None] * j[None, :]) % len(taus)]) * np.fft.fft(rows, axis=1)


def overlaps(fiducial: np.ndarray) -> np.ndarray:
    """``O[a, b] = <psi|D(a, b)|psi>``; ``O[0, 0] = 1``."""
    psi = _unit(fiducial)
    return np.conj(cross_overlaps(psi, psi))


@dataclass
class VerificationReport:
    d: int
    tolerance: float
    max_gram_deviation: float
    overlap_modulus_deviation: float
    passed: bool
    phases: dict[tuple[int, int], float] = field(default_factory=dict)
    frame_potential: float | None = None
    coneigen_residual: float | None = None
    accepted_symmetries: list[tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    detected_antiunitary_order: int | None = None
    detected_group_order: int | None = None
    sublattice_phase_max: float | None = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["phases"] = [[a, b, ph] for (a, b), ph in sorted(self.phases.items())]
        out["accepted_symmetries"] = [[list(r) for r in rows] for rows in self.accepted_symmetries]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        data = dict(data)
        data["phases"] = {(int(a), int(b)): float(ph) for a, b, ph in data.get("phases", [])}
        data["accepted_symmetries"] = [
            tuple(tuple(int(x) for x in row) for row in rows) for rows in data.get("accepted_symmetries", [])
        ]
        return cls(**data)


def gram_check(fiducial: np.ndarray, tolerance: float = DEFAULT_TOLERANCE,
               phase_divisor: int | None = None) -> VerificationReport:
    """SIC condition ``tr(P_i P_j) = (1 + d delta_ij)/(d + 1)`` over the whole orbit."""
    psi = _unit(fiducial)
    d = len(psi)
    O = overlaps(psi)
    sq = np.abs(O) ** 2
    off = np.ones((d, d), dtype=bool)
    off[0, 0] = False
    gram_dev = max(float(np.abs(sq[off] - 1 / (d + 1)).max(initial=0.0)), abs(sq[0, 0] - 1))
    mod_dev = float(np.abs(np.abs(O[off]) - 1 / np.sqrt(d + 1)).max(initial=0.0))
    ang = np.angle(O)
    ang[np.isclose(ang, -np.pi, rtol=0, atol=1e-15)] = np.pi
    phases = {(a, b): float(ang[a, b]) for a in range(d) for b in range(d) if (a, b) != (0, 0)}
    sub = None
    if phase_divisor:
        sel = [abs(ang[a, b]) for a in range(0, d, phase_divisor) for b in range(0, d, phase_divisor)
               if (a, b) != (0, 0)]
        sub = float(max(sel, default=0.0))
    return VerificationReport(
        d=d,
        tolerance=tolerance,
        max_gram_deviation=gram_dev,
        overlap_modulus_deviation=mod_dev,
        passed=bool(gram_dev <= tolerance and mod_dev <= tolerance),
        phases=phases,
        sublattice_phase_max=sub,
    )


@dataclass(frozen=True)
class TripleProductTensor:
    """``values[i, j] = t_0ij = <psi_0|psi_i><psi_i|psi_j><psi_j|psi_0>``, orbit order (a, b) row-major."""

    d: int
    values: np.ndarray

    def __getitem__(self, ij: tuple[int, int]) -> complex:
        return self.values[ij]


def triple_products(fiducial: np.ndarray, max_dim: int = 64) -> TripleProductTensor:
    psi = _unit(fiducial)
    d = len(psi)
    if d > max_dim:
        raise ValueError(f"d = {d} gives a {d**2}x{d**2} tensor; raise max_dim to force it")
    orbit = weyl_orbit(psi)
    G = np.conj(orbit) @ orbit.T  # G[i, j] = <psi_i|psi_j>
    return TripleProductTensor(d, G[0][:, None] * G * G[:, 0][None, :])


@dataclass(frozen=True)
class ProbeResult:
    matrix: ModMatrix
    antiunitary: bool
    accepted: bool
    displacement: tuple[int, int] | None
    best_overlap: float


def _apply_symmetry(F: ModMatrix, psi: np.ndarray) -> tuple[np.ndarray, bool]:
    d = len(psi)
    m = F.modulus
    if m not in (d, symmetry_modulus(d)):
        raise ValueError(f"{F} is not over Z_{d} or Z_{symmetry_modulus(d)}")
    if F.det() == 1 % m:
        return clifford_unitary(F, d) @ psi, False
    if F.det() == (-1) % m:
        return np.conj(antiunitary_unitary_part(F, d) @ psi), True
    raise ValueError(f"{F} has determinant neither +1 nor -1")


def stabilizer_probe(fiducial: np.ndarray, candidates: Sequence[ModMatrix], atol: float = 1e-8,
                     require_sic: bool = True) -> tuple[list[ProbeResult], int]:
    """Test which candidate (anti-)unitaries map the SIC onto itself.

    A candidate is accepted when its image of psi equals some ``D(a, b) psi``
    up to phase. Returns per-candidate results and the order of the group
    the accepted matrices generate over Z_d, which is the order of the
    operator group modulo phases.
    """
    psi = _unit(fiducial)
    d = len(psi)
    if require_sic and not gram_check(psi, 1e-8).passed:
        raise ValueError("fiducial does not pass the SIC check at 1e-8")
    results = []
    for F in candidates:
        chi, anti = _apply_symmetry(F, psi)
        T = np.abs(cross_overlaps(psi, chi))
        a, b = np.unravel_index(np.argmax(T), T.shape)
        best = float(T[a, b])
        ok = abs(best - 1) <= atol
        results.append(ProbeResult(F, anti, ok, (int(a), int(b)) if ok else None, best))
    accepted = [r.matrix.reduce(d) if r.matrix.modulus != d else r.matrix for r in results if r.accepted]
    return results, generated_group_order(accepted)


def verify(fiducial: np.ndarray, tolerance: float = DEFAULT_TOLERANCE,
           candidates: Sequence[ModMatrix] = (), phase_divisor: int | None = None,
           coneigen_symmetry: ModMatrix | None = None) -> VerificationReport:
    """Gram check, frame potential and (if the SIC check passes) stabilizer probes.

    With ``coneigen_symmetry`` (a det -1 matrix) the report also carries
    ``|J U psi - psi|`` for its anti-unitary.
    """
    psi = np.asarray(fiducial, dtype=complex)
    report = gram_check(psi, tolerance, phase_divisor)
    report.frame_potential = frame_potential(psi)
    if coneigen_symmetry is not None:
        U = antiunitary_unitary_part(coneigen_symmetry, len(psi))
        report.coneigen_residual = float(np.linalg.norm(np.conj(U @ psi) - psi))
    if candidates and gram_check(psi, 1e-8).passed:
        results, order = stabilizer_probe(psi, candidates, require_sic=False)
        report.accepted_symmetries = [r.matrix.rows for r in results if r.accepted]
        report.detected_group_order = order
        if any(r.accepted and r.antiunitary for r in results):
            report.detected_antiunitary_order = order
    return report
