"""Compare the compiled and NumPy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Kernel timings call each backend directly; the end-to-end timing runs
``empirical_radius`` in a fresh interpreter with ``BOHRLAB_PURE_PYTHON``
set or unset, since the backend is fixed at import.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from bohrlab import kernels

END_TO_END = (
    "import time; from bohrlab import kernels; from bohrlab.radii import empirical_radius; "
    "t = time.perf_counter(); empirical_radius('G1'); print(kernels.BACKEND, time.perf_counter() - t)"
)


def kernel_cases(rng):
    for d in (1, 2, 4, 8):
        coeffs = rng.standard_normal((65, d, d)) + 1j * rng.standard_normal((65, d, d))
        zs = 0.7 * np.exp(2j * np.pi * np.arange(256) / 256)
        norms = np.abs(rng.standard_normal(65))
        yield f"coeff_norms d={d}", lambda b, c=coeffs: b.coeff_norms(c)
        yield f"matpoly_norms d={d} (256 pts)", lambda b, c=coeffs, z=zs: b.matpoly_norms(c, z)
        if d == 1:
            yield "power_sums N=64", lambda b, n=norms: b.power_sums(n, 0.5)


def end_to_end(pure):
    env = dict(os.environ)
    env.pop("BOHRLAB_PURE_PYTHON", None)
    if pure:
        env["BOHRLAB_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    name, secs = out.stdout.split()
    return name, float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--json", help="also write results as JSON")
    args = ap.parse_args(argv)

    backends = kernels.backends()
    rng = np.random.default_rng(0)
    results = {"kernels": {}, "empirical_radius_G1": {}}
    names = sorted(backends)
    print(f"{'case':32s}" + "".join(f"{n:>14s}" for n in names) + ("   speedup" if len(names) == 2 else ""))
    for label, fn in kernel_cases(rng):
        row = {}
        for n in names:
            best = min(timeit.repeat(lambda: fn(backends[n]), number=args.number, repeat=args.repeat))
            row[n] = best / args.number
        results["kernels"][label] = row
        line = f"{label:32s}" + "".join(f"{row[n] * 1e6:12.1f}us" for n in names)
        if len(names) == 2:
            line += f"  {row['python'] / row['cython']:7.1f}x"
        print(line)

    for pure in (False, True):
        name, secs = end_to_end(pure)
        results["empirical_radius_G1"][name] = secs
        print(f"empirical_radius('G1') [{name}]: {secs:.2f} s")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
