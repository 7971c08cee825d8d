#!/usr/bin/env python3
"""Benchmark the compiled similarity kernels against the pure-Python fallback.

The language normalizer scores every incoming label against every name in
the language table, so these two functions dominate harmonization time.

    python3 benchmarks/bench_similarity.py [pair_count]
"""

from __future__ import annotations

import random
import string
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lrcat.harmonize import _kernels_py  # noqa: E402

try:
    from lrcat.harmonize import _kernels
except ImportError:
    _kernels = None


def make_pairs(n: int) -> list[tuple[str, str]]:
    rng = random.Random(1234)
    alphabet = string.ascii_lowercase + "   "
    def word() -> str:
        return "".join(rng.choice(alphabet) for _ in range(rng.randrange(3, 16)))
    return [(word(), word()) for _ in range(n)]


def bench(fn, pairs) -> float:
    start = time.perf_counter()
    for a, b in pairs:
        fn(a, b)
    return time.perf_counter() - start


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    pairs = make_pairs(n)

    rows = []
    for name, fn in [("levenshtein", "levenshtein"), ("dice", "dice")]:
        py_time = bench(getattr(_kernels_py, fn), pairs)
        if _kernels is not None:
            c_time = bench(getattr(_kernels, fn), pairs)
            rows.append((name, py_time, c_time, py_time / c_time))
        else:
            rows.append((name, py_time, None, None))

    print(f"{n} random pairs per kernel\n")
    print(f"{'kernel':<12} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for name, py_time, c_time, speedup in rows:
        if c_time is None:
            print(f"{name:<12} {py_time:>9.3f}s {'n/a':>10} {'n/a':>9}")
        else:
            print(f"{name:<12} {py_time:>9.3f}s {c_time:>9.3f}s {speedup:>8.1f}x")
    if _kernels is None:
        print("\ncompiled kernels not built; run: python3 setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
