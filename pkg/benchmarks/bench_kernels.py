#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallbacks.

Runs the three hot paths on identical workloads and prints per-kernel
timings plus an end-to-end solver comparison.  Invoke from the repository
root:

    python3 benchmarks/bench_kernels.py

Forcing the pure backend for the end-to-end row is done in a subprocess with
CCTU_PURE_PYTHON=1 (backend selection happens at import time).
"""

import os
import random
import subprocess
import sys
import time

from cctu import _kernels_py as pure

try:
    from cctu import _speedups as compiled
except ImportError:
    compiled = None


def timeit(fn, *args, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_tu_check():
    rng = random.Random(1)
    mats = []
    # consecutive-ones interval matrices: TU, so the scan never exits early
    for _ in range(12):
        k, n = 7, 7
        rows = []
        for _ in range(k):
            s = rng.randrange(n)
            e = rng.randrange(s, n)
            rows.append([1 if s <= j <= e else 0 for j in range(n)])
        mats.append(([v for row in rows for v in row], k, n))

    def run(mod):
        for flat, k, n in mats:
            assert mod.find_non_unit_subdet(list(flat), k, n) is None

    return run


def bench_box():
    rng = random.Random(2)
    cases = []
    for _ in range(6):
        n, k = 6, 8
        tflat = [rng.choice((-1, 0, 1)) for _ in range(k * n)]
        b = [rng.randint(0, 4) for _ in range(k)]
        gamma = [rng.randint(-3, 3) for _ in range(n)]
        cases.append((tflat, k, n, b, gamma))

    def run(mod):
        for tflat, k, n, b, gamma in cases:
            mod.box_search(
                list(tflat), k, n, list(b), list(gamma), 5, 0b100,
                [-4] * n, [4] * n, None, False,
            )

    return run


def bench_ghouila_houri():
    rng = random.Random(3)
    rows = []
    for _ in range(11):
        s = rng.randrange(10)
        e = rng.randrange(s, 10)
        rows.append([1 if s <= c <= e else 0 for c in range(10)])
    flat = [v for row in rows for v in row]  # interval matrix: TU, full scan

    def run(mod):
        assert mod.ghouila_houri_ok(list(flat), 11, 10)

    return run


def _subprocess_seconds(code, env_pure):
    env = dict(os.environ)
    if env_pure:
        env["CCTU_PURE_PYTHON"] = "1"
    else:
        env.pop("CCTU_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    return float(out.stdout.strip().splitlines()[-1])


END_TO_END = (
    (
        "appendable-row enumeration",
        "import time; "
        "from cctu.generators import random_network_matrix; "
        "from cctu.matrices import tu_appendable_rows; import random; "
        "rng=random.Random(5); mats=[random_network_matrix(rng,5,5) for _ in range(4)]; "
        "t0=time.perf_counter(); "
        "[tu_appendable_rows(m) for m in mats]; "
        "print(time.perf_counter()-t0)",
    ),
    (
        "fuzz 40 instances",
        "import time; from cctu.fuzz import run_fuzz; "
        "t0=time.perf_counter(); run_fuzz(40, 424242); print(time.perf_counter()-t0)",
    ),
)


def main():
    if compiled is None:
        print("compiled kernels unavailable; build with `pip install -e .`")
        return 1
    print(f"{'workload':<28}{'pure':>12}{'compiled':>12}{'speedup':>10}")
    for name, maker in (
        ("tu subdeterminant scan", bench_tu_check),
        ("ghouila-houri signing", bench_ghouila_houri),
        ("oracle box search", bench_box),
    ):
        run = maker()
        t_pure = timeit(run, pure)
        t_comp = timeit(run, compiled)
        print(f"{name:<28}{t_pure:>11.4f}s{t_comp:>11.4f}s{t_pure / t_comp:>9.1f}x")
    for name, code in END_TO_END:
        t_pure = _subprocess_seconds(code, True)
        t_comp = _subprocess_seconds(code, False)
        print(f"{name:<28}{t_pure:>11.4f}s{t_comp:>11.4f}s{t_pure / t_comp:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
