"""Compare the compiled and pure-Python hom-search kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Each case enumerates every
map between two presheaves with both kernels, checks that they return the
same solutions and prints the best of ``--repeat`` timings.
"""

from __future__ import annotations

import argparse
import time

from reedyfib.corpus import grid_space
from reedyfib.search import HomSearch, backend
from reedyfib.shapes import F, boundary, delta, horn


def cases():
    T = (6,)
    yield "D[3] -> D[5]", delta(3, T), delta(5, T)
    yield "D[4] -> D[6]", delta(4, T), delta(6, T)
    yield "dD[5] -> D[6]", boundary(5, T)[0], delta(6, T)
    yield "L[5,2] -> D[6]", horn(5, 2, T)[0], delta(6, T)
    yield "F(2) -> J2 grid", F(2, (2, 2)), grid_space(3, (2, 2))


def best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if backend() != "compiled":
        raise SystemExit("compiled kernel not available; build with pip install -e . --no-build-isolation")
    print(f"{'case':<18}{'maps':>8}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, A, Y in cases():
        hs = HomSearch(A, Y)
        py = hs.keys(kernel="python")
        cc = hs.keys(kernel="compiled")
        assert sorted(py) == sorted(cc), name
        hs.count(kernel="compiled")  # warm the flattened tables
        tp = best(lambda: hs.count(kernel="python"), args.repeat)
        tc = best(lambda: hs.count(kernel="compiled"), args.repeat)
        print(f"{name:<18}{len(py):>8}{tp:>12.4f}{tc:>12.4f}{tp / max(tc, 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
