"""Compare the compiled and pure-Python convolution kernels.

Times the two raw products on synthetic workloads and the end-to-end
family solver on the order-four model; run from the repository root:

    python benchmarks/bench_kernel.py
"""

import os
import random
import statistics
import subprocess
import sys
import time

from segreode.backend import get_kernels
from segreode.series import pack


def bench(fn, args, min_time=0.4):
    times = []
    deadline = time.perf_counter() + min_time
    while time.perf_counter() < deadline or len(times) < 3:
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def uni_workload(rng, terms, span):
    return {rng.randrange(span): (rng.randint(-10**8, 10**8),
                                  rng.randint(-10**8, 10**8))
            for _ in range(terms)}


def tri_workload(rng, bounds, fill):
    tz, tx, te = bounds
    out = {}
    for k in range(tz):
        for l in range(tx):
            for j in range(te):
                if rng.random() < fill:
                    out[pack(k, l, j)] = (rng.randint(-999, 999),
                                          rng.randint(-999, 999))
    return out


def solver_elapsed(backend_name):
    """Wall time of the model-family solve in a forced-backend subprocess."""
    code = (
        "import time\n"
        "from segreode.segre import RealStructureData, build_real, solve_phi\n"
        "from segreode.series import USeries\n"
        "data = RealStructureData(a=USeries.from_list([1, 2], trunc=14),\n"
        "                         b=USeries.from_list([0, 1, 3], trunc=14),\n"
        "                         c=USeries.from_list([1, 2], trunc=14), m=2)\n"
        "ode = build_real(data)\n"
        "t0 = time.perf_counter()\n"
        "for _ in range(3):\n"
        "    solve_phi(ode, 2, 1, truncs=(7, 7, 14))\n"
        "print((time.perf_counter() - t0) / 3)\n"
    )
    env = dict(os.environ, SEGREODE_BACKEND=backend_name)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, check=True)
    return float(out.stdout.strip())


def main():
    kernels = get_kernels()
    rng = random.Random(12345)
    u1 = uni_workload(rng, 48, 64)
    u2 = uni_workload(rng, 48, 64)
    t1 = tri_workload(rng, (7, 7, 16), 0.55)
    t2 = tri_workload(rng, (7, 7, 16), 0.55)

    rows = []
    for name, k in sorted(kernels.items()):
        r1 = bench(k.mul1, (u1, u2, 64))
        r3 = bench(k.mul3, (t1, t2, 7, 7, 16))
        rows.append((name, r1, r3))
    print(f"{'kernel':<8} {'mul1 (ms)':>10} {'mul3 (ms)':>10}")
    for name, r1, r3 in rows:
        print(f"{name:<8} {r1 * 1e3:>10.3f} {r3 * 1e3:>10.3f}")
    if len(rows) == 2:
        py = next(r for r in rows if r[0] == "python")
        cc = next(r for r in rows if r[0] == "c")
        print(f"\nspeedup (python/c): mul1 {py[1] / cc[1]:.2f}x,"
              f" mul3 {py[2] / cc[2]:.2f}x")

    print("\nfamily solver, truncs (7, 7, 14), order-2 structure data:")
    for name in sorted(kernels):
        el = solver_elapsed(name)
        print(f"  {name:<8} {el * 1e3:>8.1f} ms/solve")


if __name__ == "__main__":
    main()
