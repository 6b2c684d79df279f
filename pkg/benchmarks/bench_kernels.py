"""Time the kernel backends on the hot calls of the search.

    python benchmarks/bench_kernels.py [--dims 8 19 48 124] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from fibsic.kernels import available_backends, get_kernels


def bench(d: int, repeat: int) -> dict[str, dict[str, float]]:
    rng = np.random.default_rng(d)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    out = {}
    for name in available_backends():
        k = get_kernels(name)
        row = {}
        for call in ("frame_sum", "frame_sum_grad", "excess_grad"):
            fn = getattr(k, call)
            number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(psi), number=1), 1e-6)))
            best = min(timeit.repeat(lambda: fn(psi), number=number, repeat=repeat)) / number
            row[call] = best
        out[name] = row
    return out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--dims", type=int, nargs="+", default=[8, 19, 48, 124])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    calls = ("frame_sum", "frame_sum_grad", "excess_grad")
    print(f"{'d':>5} {'backend':>8} " + " ".join(f"{c:>16}" for c in calls))
    for d in args.dims:
        results = bench(d, args.repeat)
        base = results.get("python")
        for name, row in results.items():
            cells = []
            for c in calls:
                speedup = f" x{base[c] / row[c]:.1f}" if base and name != "python" else ""
                cells.append(f"{row[c] * 1e3:9.3f}ms{speedup:>6}")
            print(f"{d:>5} {name:>8} " + " ".join(f"{x:>16}" for x in cells))


if __name__ == "__main__":
    main()
