"""Time the hot kernels under numba and under the pure-numpy fallback.

Each backend runs in its own interpreter, because the choice is fixed at import
time by ``POLYDIRICH_DISABLE_NUMBA``. Usage::

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit


def _workloads():
    import numpy as np

    from polydirich import _kernels
    from polydirich.harness import run_check

    rng = np.random.default_rng(0)
    a = rng.normal(size=(48, 48)) + 1j * rng.normal(size=(48, 48))
    b = rng.normal(size=(48, 48)) + 1j * rng.normal(size=(48, 48))
    big = rng.normal(size=(1024, 1024)) + 0j
    u, v = rng.uniform(size=4096), rng.uniform(size=4096)
    block = rng.uniform(size=(256, 8193))
    ns = np.array([1 << e for e in range(4, 14)], dtype=np.int64)
    out = np.zeros(ns.shape[0])
    return {
        "cauchy2d 48x48": lambda: _kernels.cauchy2d(a, b),
        "evaluate2d 1024^2": lambda: _kernels.evaluate2d(big, 0.3 + 0.1j, 0.2j),
        "weighted_sq_sum 1024^2": lambda: _kernels.weighted_sq_sum(big, 0.5, -1.0),
        "outer_sum 4096^2": lambda: _kernels.outer_sum(u, v),
        "box_accumulate 256x8193": lambda: _kernels.box_accumulate(block, 4000, ns, out),
        "conv_weight_1d 2048": lambda: _kernels.conv_weight_1d(2048, 2.0, 1.5),
        "check non_factoring": lambda: run_check("non_factoring", {"max_deg": 2048}),
    }


def worker(repeat):
    from polydirich import backend

    res = {}
    for name, fn in _workloads().items():
        fn()  # warm-up, includes JIT compilation
        res[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(json.dumps({"backend": backend(), "times": res}))


def run_backend(disable, repeat):
    env = dict(os.environ)
    env.pop("POLYDIRICH_DISABLE_NUMBA", None)
    if disable:
        env["POLYDIRICH_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                         capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = p.parse_args()
    if args.worker:
        worker(args.repeat)
        return
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    print(f"{'workload':28s} {fast['backend'] + ' ms':>12s} {slow['backend'] + ' ms':>12s} {'ratio':>8s}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:28s} {1e3 * t_fast:12.3f} {1e3 * t_slow:12.3f} {t_slow / t_fast:8.2f}")


if __name__ == "__main__":
    main()
