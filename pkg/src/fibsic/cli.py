"""``fibsic`` command line.

Exit codes: 0 success, 1 usage, 2 search did not converge,
3 verification failed, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .fibonacci import check_closed_forms, check_dimension_properties, check_identities, dimension, dimensions
from .formats import FiducialFileError, RunReport, read_fiducial, write_fiducial
from .modmat import (
    QUOTED_CONJUGATIONS,
    ModMatrix,
    OrderExceedsCap,
    analyze_fibonacci_symmetry,
    canonical_matrices,
    classify_order3,
    mat_order,
    solve_conjugator,
    symmetry_modulus,
)
from .search import SearchConfig, SymmetricObjective, coneigen_data, search, welch_bound
from .verify import verify
from .weyl import clifford_unitary, displacement, phase_distance, shift_and_clock

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_VERIFY_FAILED = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default, which we reserve
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


_NAMED = {"fibonacci": "F_f", "f_f": "F_f", "zauner": "F_z", "f_z": "F_z", "appleby": "F_a", "f_a": "F_a"}


def parse_matrix(text: str, d: int, modulus: int) -> ModMatrix:
    """``fibonacci`` / ``zauner`` / ``appleby`` / ``J`` or four comma-separated integers."""
    key = text.strip().lower()
    if key == "j":
        return ModMatrix(1, 0, 0, -1, modulus)
    if key in _NAMED:
        M = getattr(canonical_matrices(d, modulus), _NAMED[key])
        if M is None:
            raise UsageError(f"F_a is not defined for d = {d} (needs d = 3 mod 9)")
        return M
    try:
        a, b, c, e = (int(x) for x in text.replace(";", ",").split(","))
    except ValueError:
        raise UsageError(f"cannot parse matrix {text!r}; use a,b,c,d or a name") from None
    return ModMatrix(a, b, c, e, modulus)


def _dimension_of(args) -> int:
    if args.k is not None:
        return dimension(args.k).d
    if args.dim < 2:
        raise UsageError(f"dimension must be >= 2, got {args.dim}")
    return args.dim


# -- subcommands ------------------------------------------------------------


def cmd_dims(args) -> int:
    print(f"{'k':>3} {'d_k':>12} {'d mod 3':>8} {'d mod 9':>8} {'order 6k':>9}")
    for e in dimensions(args.k_max):
        mod9 = str(e.d % 9) if e.d_mod3 == 0 else "-"
        print(f"{e.k:>3} {e.d:>12} {e.d_mod3:>8} {mod9:>8} {e.symmetry_order:>9}")
    return EXIT_OK


def cmd_symmetry(args) -> int:
    d = _dimension_of(args)
    if args.k is not None and args.matrix is None:
        a = analyze_fibonacci_symmetry(args.k)
        print(f"d = {a.d} (k = {a.k}), F_f = [[0, 1], [1, 1]] mod {a.d}")
        print(f"order: {a.order}")
        print(f"det: {a.det}")
        print(f"trace of F_f^{2 * a.k}: {a.trace_at_2k}")
        print(f"F_f^{3 * a.k} scalar: {'no' if a.scalar_at_3k is None else a.scalar_at_3k}")
        print(f"order-3 class of F_f^{2 * a.k}: {a.order3_class}")
        if args.witness and a.conjugator is not None:
            print(f"conjugator: {a.conjugator}")
        return EXIT_OK

    modulus = args.modulus or d
    X = parse_matrix(args.matrix or "fibonacci", d, modulus)
    if not X.is_invertible():
        raise UsageError(f"{X} is not invertible mod {modulus}")
    X = X ** args.power
    label = f"({args.matrix or 'fibonacci'})^{args.power}" if args.power != 1 else (args.matrix or "fibonacci")
    print(f"matrix {label} = {X}")
    try:
        print(f"order: {mat_order(X, cap=args.cap)}")
    except OrderExceedsCap:
        print(f"order: exceeds cap {args.cap}")
    print(f"det: {X.det()}")
    print(f"trace: {X.trace()}")
    if args.classify:
        cls = classify_order3(X, d)
        print(f"order-3 class: {cls.kind}")
        if args.witness and cls.witness is not None:
            print(f"conjugator: {cls.witness}")
    if args.conjugate_to is not None:
        target = parse_matrix(args.conjugate_to, d, modulus)
        G = solve_conjugator(X, target)
        if G is None:
            print(f"no invertible G with G X G^-1 = {target}")
        else:
            print(f"conjugator G with G X G^-1 = {target}: {G}")
    return EXIT_OK


def cmd_search(args) -> int:
    d = _dimension_of(args)
    symmetry = parse_matrix(args.symmetry, d, symmetry_modulus(d))
    if symmetry.det() != (-1) % symmetry.modulus:
        raise UsageError(f"search symmetry {symmetry} must have determinant -1")
    try:
        config = SearchConfig(
            d=d,
            symmetry=symmetry,
            max_restarts=args.restarts,
            max_iterations=args.max_iter,
            convergence_gap=args.gap,
            master_seed=args.seed,
            jobs=args.jobs,
            fft=args.fft,
            backend=args.backend,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = search(config)

    out = Path(args.out or f"fiducial_d{d}_seed{args.seed}.txt")
    report_path = Path(args.report) if args.report else out.with_suffix(".json")
    report = RunReport(config={
        "command": "search",
        "d": d,
        "seed": args.seed,
        "symmetry": [list(r) for r in symmetry.rows],
        "symmetry_modulus": symmetry.modulus,
        "restarts": args.restarts,
        "max_iter": args.max_iter,
        "gap": args.gap,
        "fft": args.fft,
    })
    report.search = RunReport.search_section(result)
    have_vector = bool(np.all(np.isfinite(result.fiducial)))
    if result.converged:
        report.verification = verify(result.fiducial, args.tol, [symmetry], coneigen_symmetry=symmetry)

    try:
        if have_vector:
            write_fiducial(out, result.fiducial, {
                "seed": args.seed,
                "symmetry": str(symmetry),
                "potential": f"{result.achieved_potential:.16e}",
            })
        report_path.write_text(report.to_json() + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"d = {d}: potential {result.achieved_potential:.16e} (bound {welch_bound(d):.16e}, gap {result.gap:.3e})")
    print(f"restarts used: {result.restarts_used}, converged: {'yes' if result.converged else 'no'}")
    if have_vector:
        print(f"fiducial written to {out}")
    print(f"report written to {report_path}")
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_verify(args) -> int:
    try:
        fid = read_fiducial(args.file)
    except FiducialFileError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    psi = fid.vector
    d = len(psi)
    if d < 2:
        raise UsageError("fiducial must have dimension >= 2")
    modulus = symmetry_modulus(d)
    candidates = [] if args.no_default_probe else [canonical_matrices(d, modulus).F_f]
    candidates += [parse_matrix(p, d, modulus) for p in args.probe]
    for M in candidates:
        if M.det() not in (1, modulus - 1):
            raise UsageError(f"probe {M} must have determinant +1 or -1")
    report = verify(psi, args.tol, candidates, phase_divisor=args.phase_divisor,
                    coneigen_symmetry=None if args.no_default_probe else candidates[0])
    doc = RunReport(config={"command": "verify", "file": str(args.file), "tol": args.tol,
                            "probes": [[list(r) for r in M.rows] for M in candidates]},
                    verification=report)
    if args.report:
        try:
            Path(args.report).write_text(doc.to_json() + "\n")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.json:
        print(doc.to_json())
    else:
        print(f"d = {d}: {'PASSED' if report.passed else 'FAILED'} at tolerance {args.tol:g}")
        print(f"max gram deviation: {report.max_gram_deviation:.3e}")
        print(f"overlap modulus deviation: {report.overlap_modulus_deviation:.3e}")
        print(f"frame potential: {report.frame_potential:.16e} (bound {welch_bound(d):.16e})")
        if report.coneigen_residual is not None:
            print(f"con-eigen residual (F_f): {report.coneigen_residual:.3e}")
        if report.detected_group_order is not None:
            print(f"accepted symmetries: {len(report.accepted_symmetries)} of {len(candidates)}")
            print(f"generated group order: {report.detected_group_order}")
        if report.detected_antiunitary_order is not None:
            print(f"detected anti-unitary order: {report.detected_antiunitary_order}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


# -- selftest ---------------------------------------------------------------


def _gradient_check(d: int, points: int, seed: int, h: float = 1e-6) -> float:
    """Worst relative error of the analytic symmetric-objective gradient against central differences."""
    rng = np.random.default_rng(seed)
    obj = SymmetricObjective(d, coneigen_data(None, d))
    worst = 0.0
    for _ in range(points):
        x = rng.standard_normal(2 * d)
        g = obj.potential_and_grad(x)[1]
        fd = np.empty_like(x)
        for i in range(len(x)):
            e = np.zeros_like(x)
            e[i] = h
            fd[i] = (obj.potential_and_grad(x + e)[0] - obj.potential_and_grad(x - e)[0]) / (2 * h)
        worst = max(worst, float(np.linalg.norm(fd - g) / np.linalg.norm(g)))
    return worst


def selftest_lines() -> list[tuple[str, bool]]:
    out: list[tuple[str, bool]] = []

    for rep in (check_identities(60), check_dimension_properties(20), check_closed_forms(40)):
        out.append((f"{rep.name}: {sum(rep.checks.values())} checks", rep.passed))

    for q in QUOTED_CONJUGATIONS:
        out.append((f"conjugation {q.label} over Z_{q.modulus}", q.holds()))
    for k in range(1, 9):
        a = analyze_fibonacci_symmetry(k)
        expected = "appleby_Fa" if k % 4 == 0 else "zauner"
        ok = a.order == 6 * k and a.trace_at_2k == a.d - 1 and a.order3_class == expected
        if ok:
            X = canonical_matrices(a.d).F_f ** (2 * k)
            target = getattr(canonical_matrices(a.d), "F_a" if k % 4 == 0 else "F_z")
            ok = a.conjugator @ X @ a.conjugator.inverse() == target
        out.append((f"F_f over Z_{a.d}: order {a.order}, F_f^{2 * k} {a.order3_class}", ok))

    worst = 0.0
    for d in range(2, 49):
        X, Z = shift_and_clock(d)
        worst = max(worst, float(np.abs(Z @ X - np.exp(2j * np.pi / d) * X @ Z).max()))
    out.append((f"Weyl commutation d = 2..48 (max error {worst:.1e})", worst < 1e-12))

    worst = 0.0
    for d in (3, 4, 5, 8, 19):
        F = canonical_matrices(d, symmetry_modulus(d)).F_z
        U = clifford_unitary(F, d)
        for p in ((1, 0), (0, 1), (1, 1)):
            worst = max(worst, phase_distance(U @ displacement(p, d) @ U.conj().T, displacement(F.apply(*p), d)))
    out.append((f"Clifford covariance of F_z (max error {worst:.1e})", worst < 1e-10))

    err = _gradient_check(4, points=5, seed=0)
    out.append((f"gradient vs finite differences at d = 4 (max rel error {err:.1e})", err <= 1e-6))
    return out


def cmd_selftest(args) -> int:
    results = selftest_lines()
    for text, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {text}")
    failed = sum(not ok for _, ok in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fibsic", description="SIC fiducials with Fibonacci-Lucas symmetry.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dims", help="table of the dimensions d_k = L_2k + 1")
    s.add_argument("k_max", type=_positive)
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("symmetry", help="order and class of a symmetry matrix")
    where = s.add_mutually_exclusive_group(required=True)
    where.add_argument("--k", type=_positive)
    where.add_argument("--dim", type=int)
    s.add_argument("--matrix", help="fibonacci, zauner, appleby, J or a,b,c,d (default fibonacci)")
    s.add_argument("--power", type=int, default=1)
    s.add_argument("--modulus", type=int, help="work over Z_m instead of Z_d")
    s.add_argument("--classify", action="store_true", help="order-3 classification")
    s.add_argument("--conjugate-to", help="solve G X G^-1 = this matrix")
    s.add_argument("--witness", action="store_true", help="print the conjugator found by --classify")
    s.add_argument("--cap", type=_positive, default=10000, help="order search cap")
    s.set_defaults(func=cmd_symmetry)

    s = sub.add_parser("search", help="search for a symmetric fiducial")
    where = s.add_mutually_exclusive_group(required=True)
    where.add_argument("--k", type=_positive)
    where.add_argument("--dim", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=_positive, default=1000)
    s.add_argument("--max-iter", type=_positive, default=10000)
    s.add_argument("--gap", type=float, default=1e-13)
    s.add_argument("--symmetry", default="fibonacci", help="anti-unitary symmetry (det -1)")
    s.add_argument("--out", help="fiducial file (default fiducial_d<d>_seed<seed>.txt)")
    s.add_argument("--report", help="JSON report (default: fiducial file with .json suffix)")
    s.add_argument("--fft", action="store_true", help="FFT kernels")
    s.add_argument("--backend", choices=["cython", "python", "fft"])
    s.add_argument("--jobs", type=_positive, default=_default_jobs())
    s.add_argument("--tol", type=float, default=1e-9, help="verification tolerance for the report")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", help="certify a fiducial file")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--probe", action="append", default=[], help="extra candidate symmetry (repeatable)")
    s.add_argument("--no-default-probe", action="store_true", help="do not probe F_f")
    s.add_argument("--phase-divisor", type=_positive, help="report max |phase| on this sublattice")
    s.add_argument("--report", help="write the JSON report here")
    s.add_argument("--json", action="store_true", help="print the JSON report")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the built-in consistency checks")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fibsic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
