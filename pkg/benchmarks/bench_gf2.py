"""Compare the compiled and pure-Python GF(2) row reduction.

Run with ``python3 benchmarks/bench_gf2.py``.  Every timing is checked for
identical output between the two backends first.
"""

from __future__ import annotations

import argparse
import random
import time

from ademcartan import gf2
from ademcartan.cochains import load_model
from ademcartan.solver import assemble


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def random_rows(nrows: int, ncols: int, density: float, rng: random.Random) -> list[int]:
    rows = []
    for _ in range(nrows):
        r = 0
        for c in range(ncols):
            if rng.random() < density:
                r |= 1 << c
        rows.append(r)
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if gf2.BACKEND != "cython":
        print("compiled kernel not built; only the pure-Python backend is available")
        return
    rng = random.Random(args.seed)
    cases = [(f"random {n}x{n} dense", random_rows(n, n, 0.5, rng), n) for n in (256, 512, 1024, 2048)]
    cases += [(f"random {n}x{n} sparse", random_rows(n, n, 0.01, rng), n) for n in (1024, 2048)]
    S = assemble(load_model("torus"), 3)
    cases.append(("torus G-system N=3", list(S.matrix.rows), S.matrix.ncols))
    print(f"{'case':28s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, rows, ncols in cases:
        ref = gf2.rref(rows, ncols, backend="python")
        assert gf2.rref(rows, ncols, backend="cython") == ref, name
        tp = _time(lambda: gf2.rref(rows, ncols, backend="python"), args.repeat)
        tc = _time(lambda: gf2.rref(rows, ncols, backend="cython"), args.repeat)
        print(f"{name:28s} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
