"""Compare the compiled and pure-Python kernels on the same workloads.

Each backend runs in its own interpreter (the backend is chosen at import),
so this script re-executes itself with and without SL2LOOPS_PURE.

    python3 bench/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit


def workloads():
    from sl2loops import kernels
    from sl2loops.matrix import loop_product
    from sl2loops.winding import PlaneLoop, eta, generator_power, winding_number

    g3 = generator_power(3)
    col = PlaneLoop.first_column(loop_product(g3, g3))
    coeffs = [(-1) ** i * (3 * i * i + 7) for i in range(40)]
    a = {(i, j): i - j + 1 for i in range(12) for j in range(12)}
    return kernels.BACKEND, {
        "sturm_chain(deg 39)": lambda: kernels.sturm_chain(coeffs),
        "mul_terms(144x144)": lambda: kernels.mul_terms(a, a),
        "eta(alpha^3)": lambda: eta(g3),
        "winding(alpha^6 column)": lambda: winding_number(col),
    }


def run_child(repeat):
    backend, jobs = workloads()
    out = {}
    for name, fn in jobs.items():
        fn()  # warm caches
        out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(json.dumps({"backend": backend, "times": out}))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.child:
        run_child(args.repeat)
        return 0
    results = []
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("SL2LOOPS_PURE", None)
        if pure:
            env["SL2LOOPS_PURE"] = "1"
        cmd = [sys.executable, __file__, "--child", "--repeat", str(args.repeat)]
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        results.append(json.loads(proc.stdout))
    fast, slow = results
    if fast["backend"] != "cython":
        print("compiled kernels are not built; both runs use the pure-Python backend")
    print(f"{'workload':28s} {fast['backend']:>10s} {slow['backend']:>10s} {'speedup':>8s}")
    for name, t in fast["times"].items():
        s = slow["times"][name]
        print(f"{name:28s} {t * 1e3:9.2f}ms {s * 1e3:9.2f}ms {s / t:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
