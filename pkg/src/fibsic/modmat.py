"""2x2 integer matrices modulo m.

Covers the symmetry matrices F_z, F_f, F_a, their orders and traces, and
conjugacy over Z_m. Conjugators are found by solving the linear system
``G F1 = F2 G`` prime-power by prime-power and gluing with the CRT, which
stays cheap at moduli where enumerating GL(2, Z_m) is hopeless.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Sequence

from sympy import factorint

from .fibonacci import dimension

__all__ = [
    "ModMatrix",
    "OrderExceedsCap",
    "mat_mul",
    "mat_pow",
    "mat_order",
    "identity",
    "symmetry_modulus",
    "canonical_matrices",
    "CanonicalMatrices",
    "solve_conjugator",
    "classify_order3",
    "Order3Class",
    "SymmetryAnalysis",
    "analyze_fibonacci_symmetry",
    "generated_group_order",
    "QuotedConjugation",
    "QUOTED_CONJUGATIONS",
    "J",
]


class OrderExceedsCap(ArithmeticError):
    """No power up to the cap gives the identity."""


@dataclass(frozen=True)
class ModMatrix:
    """Matrix ``[[a, b], [c, d]]`` with entries reduced into ``[0, modulus)``."""

    a: int
    b: int
    c: int
    d: int
    modulus: int

    def __post_init__(self) -> None:
        m = self.modulus
        if m < 2:
            raise ValueError(f"modulus must be >= 2, got {m}")
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % m)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: int) -> "ModMatrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, modulus)

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.modulus

    def trace(self) -> int:
        return (self.a + self.d) % self.modulus

    def is_invertible(self) -> bool:
        return gcd(self.det(), self.modulus) == 1

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_identity(self) -> bool:
        return self.is_scalar() and self.a == 1 % self.modulus

    def inverse(self) -> "ModMatrix":
        det_inv = pow(self.det(), -1, self.modulus)  # ValueError if singular
        return ModMatrix(
            det_inv * self.d, -det_inv * self.b, -det_inv * self.c, det_inv * self.a, self.modulus
        )

    def reduce(self, modulus: int) -> "ModMatrix":
        """Reduce to a modulus dividing the current one."""
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return ModMatrix(self.a, self.b, self.c, self.d, modulus)

    def apply(self, a: int, b: int) -> tuple[int, int]:
        """Action on a column vector (a, b)."""
        m = self.modulus
        return ((self.a * a + self.b * b) % m, (self.c * a + self.d * b) % m)

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        return mat_mul(self, other)

    def __pow__(self, n: int) -> "ModMatrix":
        if n < 0:
            return mat_pow(self.inverse(), -n)
        return mat_pow(self, n)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]] mod {self.modulus}"


def identity(modulus: int) -> ModMatrix:
    return ModMatrix(1, 0, 0, 1, modulus)


def J(modulus: int) -> ModMatrix:
    """diag(1, -1): complex conjugation in the standard basis."""
    return ModMatrix(1, 0, 0, -1, modulus)


def mat_mul(X: ModMatrix, Y: ModMatrix) -> ModMatrix:
    if X.modulus != Y.modulus:
        raise ValueError(f"modulus mismatch: {X.modulus} vs {Y.modulus}")
    return ModMatrix(
        X.a * Y.a + X.b * Y.c,
        X.a * Y.b + X.b * Y.d,
        X.c * Y.a + X.d * Y.c,
        X.c * Y.b + X.d * Y.d,
        X.modulus,
    )


def mat_pow(X: ModMatrix, n: int) -> ModMatrix:
    if n < 0:
        raise ValueError(f"negative exponent {n}; use X.inverse()")
    result = identity(X.modulus)
    base = X
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def mat_order(X: ModMatrix, cap: int = 10000) -> int:
    """Least n >= 1 with X**n = I, by plain iteration."""
    if not X.is_invertible():
        raise ValueError(f"{X} is not invertible")
    power = X
    for n in range(1, cap + 1):
        if power.is_identity():
            return n
        power = power @ X
    raise OrderExceedsCap(f"order of {X} exceeds cap {cap}")


def symmetry_modulus(d: int) -> int:
    """Modulus of the Clifford correspondence: d for odd d, 2d for even d."""
    return d if d % 2 else 2 * d


def lift(X: ModMatrix, modulus: int, det: int) -> ModMatrix:
    """Lift a matrix mod d to mod 2d with a prescribed determinant.

    Entries keep their least non-negative representatives; if the
    determinant is off, d is added to a subset of entries, trying the
    16 subsets in a fixed order.
    """
    if X.modulus == modulus:
        return X
    if modulus != 2 * X.modulus:
        raise ValueError(f"can only lift mod {X.modulus} to mod {2 * X.modulus}")
    d = X.modulus
    target = det % modulus
    for mask in range(16):
        entries = [x + (d if mask >> i & 1 else 0) for i, x in enumerate((X.a, X.b, X.c, X.d))]
        Y = ModMatrix(*entries, modulus)
        if Y.det() == target:
            return Y
    raise ValueError(f"{X} has no lift with determinant {det} mod {modulus}")


@dataclass(frozen=True)
class CanonicalMatrices:
    F_z: ModMatrix
    F_f: ModMatrix
    F_a: ModMatrix | None


def canonical_matrices(d: int, modulus: int | None = None) -> CanonicalMatrices:
    """Zauner's matrix, the Fibonacci matrix and, for d = 9l + 3, Appleby's F_a."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    m = d if modulus is None else modulus
    F_a = None
    if d % 9 == 3:
        ell = (d - 3) // 9
        F_a = ModMatrix(1, 3, 3 * ell, -2, m)
    return CanonicalMatrices(
        F_z=ModMatrix(0, -1, 1, -1, m),
        F_f=ModMatrix(0, 1, 1, 1, m),
        F_a=F_a,
    )


# -- conjugacy -------------------------------------------------------------


def _diagonalize(M: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Integer row/column reduction to diagonal form.

    Returns the diagonal and the unimodular column transform V, so that
    ``U M V = diag`` for some unimodular U.
    """
    A = [row[:] for row in M]
    rows, cols = len(A), len(A[0])
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def col_op(j: int, k: int, q: int) -> None:
        # column j -= q * column k
        for r in range(rows):
            A[r][j] -= q * A[r][k]
        for r in range(cols):
            V[r][j] -= q * V[r][k]

    def col_swap(j: int, k: int) -> None:
        for r in range(rows):
            A[r][j], A[r][k] = A[r][k], A[r][j]
        for r in range(cols):
            V[r][j], V[r][k] = V[r][k], V[r][j]

    diag = []
    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
            if not nonzero:
                return diag + [0] * (min(rows, cols) - t), V
            _, i, j = min(nonzero)
            A[t], A[i] = A[i], A[t]
            col_swap(t, j)
            p = A[t][t]
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    col_op(j, t, q)
            if all(A[i][t] == 0 for i in range(t + 1, rows)) and all(
                A[t][j] == 0 for j in range(t + 1, cols)
            ):
                break
        diag.append(A[t][t])
    return diag, V


def _commutation_system(F1: ModMatrix, F2: ModMatrix) -> list[list[int]]:
    # unknowns (g0, g1, g2, g3) of G = [[g0, g1], [g2, g3]] in G F1 - F2 G = 0
    a, b, c, e = F1.a, F1.b, F1.c, F1.d
    p, q, r, s = F2.a, F2.b, F2.c, F2.d
    return [
        [a - p, c, -q, 0],
        [b, e - p, 0, -q],
        [-r, 0, a - s, c],
        [0, -r, b, e - s],
    ]


def _solutions_mod(diag: list[int], V: list[list[int]], q: int) -> Iterator[tuple[int, ...]]:
    """All g with M g = 0 mod q, given the diagonal form of M."""
    steps = []
    for dk in diag:
        g = gcd(dk, q)
        steps.append([t * (q // g) for t in range(g)])
    for h in itertools.product(*steps):
        yield tuple(sum(V[i][k] * h[k] for k in range(4)) % q for i in range(4))


def solve_conjugator(F1: ModMatrix, F2: ModMatrix, scan_cap: int = 5_000_000) -> ModMatrix | None:
    """Invertible G with ``G F1 G^-1 = F2``, or None if there is none.

    The first invertible solution in a fixed scan order is returned, so the
    witness is reproducible. ``scan_cap`` bounds the candidates tried per
    prime-power component.
    """
    if F1.modulus != F2.modulus:
        raise ValueError(f"modulus mismatch: {F1.modulus} vs {F2.modulus}")
    m = F1.modulus
    if F1 == F2:
        return identity(m)
    diag, V = _diagonalize(_commutation_system(F1, F2))
    parts: list[tuple[int, tuple[int, ...]]] = []
    for p, e in sorted(factorint(m).items()):
        q = p**e
        found = None
        for n, g in enumerate(_solutions_mod(diag, V, q)):
            if n >= scan_cap:
                break
            if (g[0] * g[3] - g[1] * g[2]) % p:
                found = g
                break
        if found is None:
            return None
        parts.append((q, found))
    entries = [_crt([(g[i], q) for q, g in parts]) for i in range(4)]
    G = ModMatrix(*entries, m)
    assert G @ F1 == F2 @ G and G.is_invertible()
    return G


def _crt(residues: Iterable[tuple[int, int]]) -> int:
    x, m = 0, 1
    for r, q in residues:
        # x + m t = r mod q
        t = ((r - x) * pow(m, -1, q)) % q
        x, m = x + m * t, m * q
    return x


@dataclass(frozen=True)
class Order3Class:
    kind: str  # "zauner", "appleby_Fa", "neither", "not_order3"
    witness: ModMatrix | None = None


def classify_order3(X: ModMatrix, d: int) -> Order3Class:
    """Decide whether X is a canonical order-three element and which class it is in."""
    if X.modulus != d:
        X = X.reduce(d)
    if not X.is_invertible() or X.trace() != (-1) % d:
        return Order3Class("not_order3")
    try:
        if mat_order(X, cap=3) != 3:
            return Order3Class("not_order3")
    except OrderExceedsCap:
        return Order3Class("not_order3")
    canon = canonical_matrices(d)
    G = solve_conjugator(X, canon.F_z)
    if G is not None:
        return Order3Class("zauner", G)
    if canon.F_a is not None:
        G = solve_conjugator(X, canon.F_a)
        if G is not None:
            return Order3Class("appleby_Fa", G)
    return Order3Class("neither")


@dataclass(frozen=True)
class SymmetryAnalysis:
    k: int
    d: int
    order: int
    det: int
    trace_at_2k: int
    scalar_at_3k: int | None  # diagonal value of F_f**(3k) when it is scalar
    order3_class: str
    conjugator: ModMatrix | None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "order": self.order,
            "det": self.det,
            "trace_at_2k": self.trace_at_2k,
            "scalar_at_3k": self.scalar_at_3k,
            "order3_class": self.order3_class,
            "conjugator": None if self.conjugator is None else self.conjugator.rows,
        }


def analyze_fibonacci_symmetry(k: int, cap: int | None = None) -> SymmetryAnalysis:
    """Order, determinant, traces and order-3 class of F_f over Z_{d_k}."""
    d = dimension(k).d
    F = canonical_matrices(d).F_f
    order = mat_order(F, cap=12 * k if cap is None else cap)
    P = F ** (3 * k)
    cls = classify_order3(F ** (2 * k), d)
    return SymmetryAnalysis(
        k=k,
        d=d,
        order=order,
        det=F.det(),
        trace_at_2k=(F ** (2 * k)).trace(),
        scalar_at_3k=P.a if P.is_scalar() else None,
        order3_class=cls.kind,
        conjugator=cls.witness,
    )


def generated_group_order(generators: Sequence[ModMatrix], cap: int = 200_000) -> int:
    """Size of the matrix group generated by ``generators`` (closure by BFS)."""
    if not generators:
        return 1
    m = generators[0].modulus
    seen = {identity(m)}
    frontier = [identity(m)]
    while frontier:
        nxt = []
        for X in frontier:
            for g in generators:
                Y = X @ g
                if Y not in seen:
                    seen.add(Y)
                    nxt.append(Y)
                    if len(seen) > cap:
                        raise OrderExceedsCap(f"group exceeds {cap} elements")
        frontier = nxt
    return len(seen)


# -- conjugation identities quoted for the known solutions -----------------


@dataclass(frozen=True)
class QuotedConjugation:
    """``G X**power G^-1 = F_f`` for a symmetry X of a published solution."""

    label: str
    d: int
    modulus: int
    base: tuple[tuple[int, int], tuple[int, int]]
    power: int
    conjugator: tuple[tuple[int, int], tuple[int, int]]
    base_power: tuple[tuple[int, int], tuple[int, int]] | None = None
    conjugator_inverse: tuple[tuple[int, int], tuple[int, int]] | None = None

    def matrices(self) -> tuple[ModMatrix, ModMatrix]:
        return (
            ModMatrix.from_rows(self.base, self.modulus),
            ModMatrix.from_rows(self.conjugator, self.modulus),
        )

    def evaluate(self) -> ModMatrix:
        X, G = self.matrices()
        return G @ X**self.power @ G.inverse()

    def holds(self) -> bool:
        X, G = self.matrices()
        ok = self.evaluate() == ModMatrix(0, 1, 1, 1, self.modulus)
        if self.base_power is not None:
            ok &= X**self.power == ModMatrix.from_rows(self.base_power, self.modulus)
        if self.conjugator_inverse is not None:
            ok &= G.inverse() == ModMatrix.from_rows(self.conjugator_inverse, self.modulus)
        return ok


QUOTED_CONJUGATIONS: tuple[QuotedConjugation, ...] = (
    QuotedConjugation("4a: (F_c F_z)^7", 4, 8, ((2, 1), (7, 3)), 7, ((1, 3), (3, 2)),
                      ((2, 5), (3, 7)), ((2, 5), (5, 1))),
    QuotedConjugation("8b: F^11", 8, 16, ((6, 11), (5, 1)), 11, ((5, 5), (4, 1)),
                      ((7, 3), (13, 10)), ((1, 11), (12, 5))),
    QuotedConjugation("8b: F'", 8, 16, ((1, 5), (13, 0)), 1, ((1, 4), (5, 5))),
    QuotedConjugation("19e: F^17", 19, 19, ((3, 12), (7, 15)), 17, ((11, 10), (0, 7)),
                      ((4, 12), (7, 16)), ((7, 9), (0, 11))),
    QuotedConjugation("19e: F' = diag(15, 5)", 19, 19, ((15, 0), (0, 5)), 1, ((8, 5), (6, 6))),
    QuotedConjugation("48g: F^41", 48, 96, ((4, 37), (25, 63)), 41, ((10, 47), (21, 22)),
                      ((61, 25), (61, 36)), ((22, 49), (75, 10))),
    QuotedConjugation("124a: F", 124, 248, ((58, 133), (115, 191)), 1, ((100, 15), (85, 45)),
                      None, ((45, 233), (163, 100))),
)

# F_c and F_z as quoted over Z_8 for d = 4; their product is the 4a generator.
QUOTED_FC_FZ_D4 = (ModMatrix(1, 2, 6, 3, 8), ModMatrix(0, 3, 5, 3, 8))
