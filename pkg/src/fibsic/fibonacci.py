"""Exact Fibonacci/Lucas arithmetic and the Lucas dimension sequence.

Python integers are unbounded, so every check here is an exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "fibonacci",
    "lucas",
    "fibonacci_table",
    "lucas_table",
    "DimensionEntry",
    "dimension",
    "dimensions",
    "PropertyReport",
    "check_dimension_properties",
    "check_identities",
    "check_closed_forms",
]


def fibonacci(n: int) -> int:
    """Return F_n with F_0 = 0, F_1 = 1."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def lucas(n: int) -> int:
    """Return L_n with L_0 = 2, L_1 = 1."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fibonacci_table(n_max: int) -> list[int]:
    """F_0 .. F_{n_max} in one pass."""
    out = [0, 1]
    while len(out) <= n_max:
        out.append(out[-1] + out[-2])
    return out[: n_max + 1]


def lucas_table(n_max: int) -> list[int]:
    out = [2, 1]
    while len(out) <= n_max:
        out.append(out[-1] + out[-2])
    return out[: n_max + 1]


@dataclass(frozen=True)
class DimensionEntry:
    """One term d_k = L_{2k} + 1 of the dimension sequence."""

    k: int
    d: int
    d_mod3: int
    squarefree_witness: int  # F_{2k}; (d+1)(d-3) = 5 * witness**2

    @property
    def symmetry_order(self) -> int:
        return 6 * self.k


def dimension(k: int) -> DimensionEntry:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    d = lucas(2 * k) + 1
    return DimensionEntry(k=k, d=d, d_mod3=d % 3, squarefree_witness=fibonacci(2 * k))


def dimensions(k_max: int) -> list[DimensionEntry]:
    return [dimension(k) for k in range(1, k_max + 1)]


@dataclass
class PropertyReport:
    """Named pass/fail checks; failures keep every violating instance."""

    name: str
    checks: dict[str, int] = field(default_factory=dict)
    failures: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    def record(self, check: str, ok: bool, *where: int) -> None:
        self.checks[check] = self.checks.get(check, 0) + 1
        if not ok:
            self.failures.append((check, tuple(where)))

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = []
        for check, count in self.checks.items():
            bad = [w for c, w in self.failures if c == check]
            status = "PASS" if not bad else f"FAIL at {bad[:5]}"
            out.append(f"{self.name}: {check} ({count} instances) {status}")
        return out


def check_dimension_properties(k_max: int) -> PropertyReport:
    """Recurrence, mod-3 period, d_{4l} = 3 mod 9 and the square-free part 5."""
    if k_max < 4:
        raise ValueError(f"k_max must be >= 4, got {k_max}")
    report = PropertyReport("dimension")
    F = fibonacci_table(2 * k_max + 6)
    d = {k: dimension(k).d for k in range(1, k_max + 4)}
    for k in range(1, k_max + 1):
        report.record("recurrence", d[k + 3] == 4 * d[k + 2] - 4 * d[k + 1] + d[k], k)
        report.record("mod3_pattern", d[k] % 3 == (1, 2, 1, 0)[(k - 1) % 4], k)
        report.record("divisible_by_3_iff_k_multiple_of_4", (d[k] % 3 == 0) == (k % 4 == 0), k)
        if k % 4 == 0:
            report.record("d_4l_mod9", d[k] % 9 == 3, k)
        report.record("squarefree_part", (d[k] + 1) * (d[k] - 3) == 5 * F[2 * k] ** 2, k)
        report.record("increasing", d[k + 1] > d[k] >= 4, k)
    return report


def check_identities(n_max: int, k_max: int = 6) -> PropertyReport:
    """The six Fibonacci/Lucas identities for 1 <= n <= n_max, divisibility for k <= k_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    report = PropertyReport("identities")
    F = fibonacci_table(max(6, k_max) * n_max + 2)
    L = lucas_table(4 * n_max + 2)
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            report.record("F_n divides F_kn", F[k * n] % F[n] == 0, n, k)
        report.record("L_n = F_(n-1) + F_(n+1)", L[n] == F[n - 1] + F[n + 1], n)
        report.record("L_2n^2 = 5 F_2n^2 + 4", L[2 * n] ** 2 == 5 * F[2 * n] ** 2 + 4, n)
        report.record("F_6n = F_2n (L_4n + 1)", F[6 * n] == F[2 * n] * (L[4 * n] + 1), n)
        report.record("L_4n + 1 = L_2n^2 - 1", L[4 * n] + 1 == L[2 * n] ** 2 - 1, n)
        report.record(
            "F_(6n-1) + L_2n = F_(2n-1) (L_4n + 1)",
            F[6 * n - 1] + L[2 * n] == F[2 * n - 1] * (L[4 * n] + 1),
            n,
        )
    for n in range(1, n_max):
        report.record("recurrences", F[n + 1] == F[n] + F[n - 1] and L[n + 1] == L[n] + L[n - 1], n)
    return report


def check_closed_forms(n_max: int = 40) -> PropertyReport:
    """Golden-ratio closed forms in ``np.longdouble``, rounded to the nearest integer.

    Kept to n <= 40 so the float carries enough digits; the exact checks do the real work.
    """
    report = PropertyReport("closed_forms")
    sqrt5 = np.sqrt(np.longdouble(5))
    phi = (1 + sqrt5) / 2
    for n in range(1, n_max + 1):
        fib = (phi**n - (-phi) ** -n) / sqrt5
        luc = phi**n + (-phi) ** -n
        report.record("fibonacci", int(np.rint(fib)) == fibonacci(n), n)
        report.record("lucas", int(np.rint(luc)) == lucas(n), n)
        if n % 2 == 0:
            k = n // 2
            dk = phi ** (2 * k) + phi ** (-2 * k) + 1
            report.record("dimension", int(np.rint(dk)) == dimension(k).d, k)
    return report
