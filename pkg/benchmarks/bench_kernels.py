"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import os
import subprocess
import sys
import tempfile
import timeit

import numpy as np

from gridfuzz.kernels import available_backends


def _bench(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_table(repeat: int) -> None:
    rng = np.random.default_rng(0)
    shapes = np.sort(rng.uniform(0.8, 3.0, size=(18, 4)), axis=1)
    strengths = rng.uniform(0, 1, 18)
    print(f"{'backend':<10}{'aggregate_clipped':>20}{'mom':>12}{'bounding':>12}   (best of {repeat}, us)")
    for name, mod in available_backends().items():
        grades = mod.aggregate_clipped(shapes, strengths, 0.8, 3.0, 1001)
        agg = _bench(lambda: mod.aggregate_clipped(shapes, strengths, 0.8, 3.0, 1001), repeat)
        mom = _bench(lambda: mod.mom(grades, 0.8, 3.0, 1e-6), repeat)
        bnd = _bench(lambda: mod.bounding(grades, 0.8, 3.0, 1e-6), repeat)
        print(f"{name:<10}{agg * 1e6:>20.1f}{mom * 1e6:>12.1f}{bnd * 1e6:>12.1f}")


def full_run(repeat: int) -> None:
    # each backend is selected at import time, so time complete runs in fresh interpreters
    code = ("import time; from gridfuzz.cli import RunConfig, run; t=time.perf_counter(); "
            "run(RunConfig(__import__('pathlib').Path(r'{out}'), '1', resolution=4001)); "
            "print(time.perf_counter()-t)")
    for name in available_backends():
        env = dict(os.environ)
        env.pop("GRIDFUZZ_PURE_PYTHON", None)
        if name == "python":
            env["GRIDFUZZ_PURE_PYTHON"] = "1"
        times = []
        with tempfile.TemporaryDirectory() as out:
            for _ in range(repeat):
                res = subprocess.run([sys.executable, "-c", code.format(out=out)], env=env,
                                     capture_output=True, text=True, check=True)
                times.append(float(res.stdout.strip()))
        print(f"full 9-case run at resolution 4001, {name:<7}: {min(times) * 1e3:8.1f} ms")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=50)
    args = p.parse_args()
    kernel_table(args.repeat)
    full_run(max(1, args.repeat // 10))


if __name__ == "__main__":
    main()
