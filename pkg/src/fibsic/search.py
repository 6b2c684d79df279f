"""Fiducial search restricted to the con-eigenvectors of an anti-unitary symmetry.

A raw vector ``phi`` is pushed into the symmetric set by
``psi' = conj(U Q phi) + Q phi`` (then normalized), where ``Q`` projects on
the fixed space of ``conj(U) U``. The frame potential of ``psi`` is
minimized with L-BFGS from Haar-random starts until it meets 2/(d+1).
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .kernels import get_kernels
from .modmat import ModMatrix, canonical_matrices, symmetry_modulus
from .weyl import antiunitary_unitary_part

__all__ = [
    "ConEigenData",
    "DegenerateSymmetrization",
    "ConEigenOrderError",
    "coneigen_projector",
    "coneigen_data",
    "symmetrize",
    "frame_potential",
    "frame_potential_and_grad",
    "frame_potential_grad",
    "SymmetricObjective",
    "haar_random_vector",
    "restart_seed",
    "SearchConfig",
    "SearchResult",
    "search",
    "welch_bound",
]

log = logging.getLogger(__name__)


class DegenerateSymmetrization(ValueError):
    """The symmetrized vector vanished; draw a fresh start."""


class ConEigenOrderError(ArithmeticError):
    """conj(U) U has no power proportional to the identity within the cap,
    or its periodic power is -I (no con-eigenvectors with eigenvalue 1)."""


def welch_bound(d: int) -> float:
    return 2.0 / (d + 1)


@dataclass(frozen=True, eq=False)
class ConEigenData:
    U: np.ndarray
    n: int
    Q: np.ndarray

    @property
    def d(self) -> int:
        return self.U.shape[0]

    @property
    def real_dimension(self) -> int:
        """Real dimension of the fixed set of ``J U`` (= rank of Q)."""
        return int(round(np.trace(self.Q).real))

    def residual(self, psi: np.ndarray) -> float:
        """``|J U psi - psi|``."""
        return float(np.linalg.norm(np.conj(self.U @ psi) - psi))


def coneigen_projector(U: np.ndarray, cap: int = 1000, atol: float = 1e-8) -> ConEigenData:
    """Order n of ``V = conj(U) U`` and the projector ``Q = (1/n) sum_j V^j``.

    ``V`` does not depend on the global phase of ``U``, so neither does n.
    """
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    V = np.conj(U) @ U
    eye = np.eye(d)
    power = eye.copy()
    total = np.zeros((d, d), dtype=complex)
    for n in range(1, cap + 1):
        total += power
        power = power @ V
        c = np.trace(power) / d
        if abs(abs(c) - 1) < atol and np.abs(power - c * eye).max() < atol:
            if abs(c - 1) > atol:
                # c is real for an anti-unitary square; c = -1 leaves no fixed vectors
                raise ConEigenOrderError(f"(conj(U) U)^{n} = {c:.6g} I, not I")
            Q = total / n
            Q = (Q + Q.conj().T) / 2
            return ConEigenData(U=U, n=n, Q=Q)
    raise ConEigenOrderError(f"order of conj(U) U exceeds cap {cap}")


def coneigen_data(F: ModMatrix | None, d: int, cap: int = 1000) -> ConEigenData:
    """Con-eigen data for the anti-unitary of a ``det = -1`` matrix (default F_f)."""
    if F is None:
        F = canonical_matrices(d, symmetry_modulus(d)).F_f
    return coneigen_projector(antiunitary_unitary_part(F, d), cap=cap)


def _lift_raw(phi: np.ndarray, ce: ConEigenData | None) -> np.ndarray:
    if ce is None:
        return phi
    Qphi = ce.Q @ phi
    return np.conj(ce.U @ Qphi) + Qphi


def symmetrize(phi: np.ndarray, ce: ConEigenData) -> np.ndarray:
    """Unit con-eigenvector ``psi`` with ``J U psi = psi`` built from ``phi``."""
    phi = np.asarray(phi, dtype=complex)
    psi = _lift_raw(phi, ce)
    norm = np.linalg.norm(psi)
    if norm < 1e-8 * np.linalg.norm(phi) or norm == 0:
        raise DegenerateSymmetrization("symmetrized vector vanished")
    return psi / norm


def _check_unit(phi: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex)
    if abs(np.linalg.norm(phi) - 1) > atol:
        raise ValueError(f"vector must be normalized (norm {np.linalg.norm(phi):.12g})")
    return phi


def frame_potential(phi: np.ndarray, fft: bool = False, backend: str | None = None) -> float:
    """LHS of the SIC bound: ``sum_{j,k} |sum_l <phi|j+l><l|phi><phi|k+l><j+k+l|phi>|^2``."""
    phi = _check_unit(phi)
    return get_kernels(backend, fft).frame_sum(phi)


class SymmetricObjective:
    """Objective on 2d raw reals: symmetrize, normalize, evaluate.

    ``excess_and_grad`` is the frame potential minus 2/(d+1) in
    overlap-residual form (accurate down to ~1e-30 near a fiducial);
    ``potential_and_grad`` is the frame potential from the direct sum.
    They differ by the constant 2/(d+1) and share their gradient.
    """

    def __init__(self, d: int, ce: ConEigenData | None = None, fft: bool = False,
                 backend: str | None = None):
        self.d = d
        self.ce = ce
        self.kernels = get_kernels(backend, fft)
        if ce is not None:
            self._M_adj = (ce.U @ ce.Q).conj().T

    def split(self, x: np.ndarray) -> np.ndarray:
        return x[: self.d] + 1j * x[self.d :]

    def lifted(self, x: np.ndarray) -> np.ndarray:
        phi = self.split(np.asarray(x, dtype=float))
        psi = _lift_raw(phi, self.ce)
        if np.linalg.norm(psi) < 1e-8 * np.linalg.norm(phi):
            raise DegenerateSymmetrization("symmetrized vector vanished")
        return psi

    def point(self, x: np.ndarray) -> np.ndarray:
        psi = self.lifted(x)
        return psi / np.linalg.norm(psi)

    def _pull_back(self, g: np.ndarray) -> np.ndarray:
        # chain rule through psi' = conj(M phi) + Q phi, M = U Q
        if self.ce is None:
            h = g
        else:
            h = self.ce.Q @ g + self._M_adj @ np.conj(g)
        return np.concatenate([2 * h.real, 2 * h.imag])

    def potential_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        psi = self.lifted(x)
        N = float(np.vdot(psi, psi).real)
        f, g = self.kernels.frame_sum_grad(psi)
        # the frame sum is homogeneous of degree 8 in |psi|
        value = f / N**4
        grad = g / N**4 - 4 * f * psi / N**5
        return value, self._pull_back(grad)

    def excess_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        E, g = self.kernels.excess_grad(self.lifted(x))
        return E, self._pull_back(g)


def frame_potential_and_grad(x: np.ndarray, ce: ConEigenData | None = None,
                             fft: bool = False, backend: str | None = None) -> tuple[float, np.ndarray]:
    x = np.asarray(x, dtype=float)
    return SymmetricObjective(len(x) // 2, ce, fft, backend).potential_and_grad(x)


def frame_potential_grad(x: np.ndarray, ce: ConEigenData | None = None,
                         fft: bool = False, backend: str | None = None) -> np.ndarray:
    """Gradient of raw 2d reals -> symmetrize -> normalize -> frame potential."""
    return frame_potential_and_grad(x, ce, fft, backend)[1]


def haar_random_vector(d: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Unit vector from normalized standard complex Gaussians (Haar on the sphere)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def restart_seed(master_seed: int, index: int) -> int:
    """64-bit seed of restart ``index``; a pure function of both arguments."""
    state = np.random.SeedSequence([master_seed & (2**64 - 1), index]).generate_state(1, np.uint64)
    return int(state[0])


@dataclass
class SearchConfig:
    d: int
    symmetry: ModMatrix | None = None  # det -1 matrix; F_f when None
    max_restarts: int = 1000
    max_iterations: int = 10000
    convergence_gap: float = 1e-13
    master_seed: int = 0
    jobs: int = 1
    fft: bool = False
    backend: str | None = None
    max_resamples: int = 100
    order_cap: int = 1000

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if not self.convergence_gap > 0:
            raise ValueError("convergence_gap must be positive")
        if self.max_restarts < 1 or self.max_iterations < 1:
            raise ValueError("max_restarts and max_iterations must be >= 1")
        if self.symmetry is None:
            self.symmetry = canonical_matrices(self.d, symmetry_modulus(self.d)).F_f


@dataclass
class SearchResult:
    fiducial: np.ndarray
    achieved_potential: float
    restarts_used: int
    converged: bool
    restart_index: int = 0
    excess: float = float("nan")
    iterations: int = 0
    seed: int = 0
    history: list[dict] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return self.achieved_potential - welch_bound(len(self.fiducial))


def _local_search(obj: SymmetricObjective, config: SearchConfig, index: int) -> dict:
    seed = restart_seed(config.master_seed, index)
    rng = np.random.default_rng(seed)
    bound = welch_bound(config.d)
    for _ in range(config.max_resamples):
        phi = haar_random_vector(config.d, rng)
        x0 = np.concatenate([phi.real, phi.imag])
        try:
            obj.point(x0)
        except DegenerateSymmetrization:
            continue
        try:
            res = minimize(
                obj.excess_and_grad,
                x0,
                jac=True,
                method="L-BFGS-B",
                options={"maxcor": 10, "maxiter": config.max_iterations,
                         "maxfun": 2 * config.max_iterations + 20, "ftol": 0.0, "gtol": 0.0},
            )
            psi = obj.point(res.x)
        except DegenerateSymmetrization:
            break
        potential = obj.kernels.frame_sum(psi)
        return {
            "index": index,
            "seed": seed,
            "fiducial": psi,
            "potential": potential,
            "excess": float(res.fun),
            "iterations": int(res.nit),
            "converged": bool(potential - bound <= config.convergence_gap),
        }
    return {"index": index, "seed": seed, "fiducial": None, "potential": np.inf,
            "excess": np.inf, "iterations": 0, "converged": False}


_WORKER: dict = {}


def _init_worker(ce: ConEigenData, config: SearchConfig) -> None:
    _WORKER["obj"] = SymmetricObjective(config.d, ce, config.fft, config.backend)
    _WORKER["config"] = config


def _worker_restart(index: int) -> dict:
    return _local_search(_WORKER["obj"], _WORKER["config"], index)


def search(config: SearchConfig, ce: ConEigenData | None = None) -> SearchResult:
    """Repeat local searches until one converges or the restart budget is spent.

    The answer is the earliest converged restart; without one, the lowest
    potential (earliest index on ties). Both are independent of ``jobs``.
    """
    if ce is None:
        ce = coneigen_data(config.symmetry, config.d, cap=config.order_cap)
    log.info("d=%d: con-eigenspace order n=%d, real dimension %d", config.d, ce.n, ce.real_dimension)
    history: list[dict] = []
    jobs = max(1, config.jobs)

    def pick() -> SearchResult:
        best = min(
            (r for r in history if r["fiducial"] is not None),
            key=lambda r: (not r["converged"], r["potential"], r["index"]),
            default=None,
        )
        summary = [{k: v for k, v in r.items() if k != "fiducial"} for r in history]
        if best is None:
            return SearchResult(np.full(config.d, np.nan, dtype=complex), np.inf,
                                len(history), False, history=summary)
        return SearchResult(
            fiducial=best["fiducial"],
            achieved_potential=float(best["potential"]),
            restarts_used=best["index"] + 1 if best["converged"] else len(history),
            converged=best["converged"],
            restart_index=best["index"],
            excess=best["excess"],
            iterations=best["iterations"],
            seed=best["seed"],
            history=summary,
        )

    if jobs == 1:
        obj = SymmetricObjective(config.d, ce, config.fft, config.backend)
        for i in range(config.max_restarts):
            r = _local_search(obj, config, i)
            history.append(r)
            log.debug("restart %d: potential gap %.3e", i, r["potential"] - welch_bound(config.d))
            if r["converged"]:
                break
        return pick()

    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(ce, config)) as pool:
        for start in range(0, config.max_restarts, jobs):
            batch = range(start, min(start + jobs, config.max_restarts))
            results = list(pool.map(_worker_restart, batch))
            for r in results:
                history.append(r)
                if r["converged"]:
                    # drop later restarts of the batch so the outcome matches jobs=1
                    return pick()
    return pick()
