"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--sizes 64,256,1024] [--repeat 5]

Prints per-kernel timings for both backends and an end-to-end timing of the
Lubin-Tate group law with each backend selected through LTPHI_PURE_PYTHON.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from ltphi import _kernels_py

try:
    from ltphi import _kernels as compiled
except ImportError:
    compiled = None

END_TO_END = (
    "import time; from ltphi import formal_group as fg; from ltphi.padic import BaseFieldSpec;"
    "t = time.perf_counter(); fg.fg_add(BaseFieldSpec.qp(3), {deg}, 25);"
    "print(time.perf_counter() - t)"
)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(n, repeat, rng):
    mod = 3**40
    a = [rng.randrange(mod) for _ in range(n)]
    b = [rng.randrange(mod) for _ in range(n)]
    pa = [rng.randrange(60) for _ in range(n)]
    va = [rng.randrange(60) for _ in range(n)]
    rows = []
    backends = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    for name, impl in backends:
        rows.append((name, "conv_trunc", n, best(lambda: impl.conv_trunc(a, b, n, mod), repeat)))
        rows.append((name, "minplus_trunc", n, best(lambda: impl.minplus_trunc(pa, va, pa, va, n), repeat)))
    return rows


def end_to_end(deg, pure):
    env = dict(os.environ)
    env.pop("LTPHI_PURE_PYTHON", None)
    if pure:
        env["LTPHI_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(deg=deg)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--deg", type=int, default=24)
    args = ap.parse_args()
    rng = random.Random(0)
    print(f"{'backend':<8} {'kernel':<14} {'n':>6} {'seconds':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        for backend, kernel, size, secs in kernel_rows(n, args.repeat, rng):
            print(f"{backend:<8} {kernel:<14} {size:>6} {secs:>10.5f}")
    if compiled is None:
        print("compiled kernels not built; end-to-end comparison skipped")
        return
    fast, slow = end_to_end(args.deg, False), end_to_end(args.deg, True)
    print(f"fg_add over Q_3, D={args.deg}, N=25: cython {fast:.3f}s, python {slow:.3f}s, ratio {slow / fast:.2f}")


if __name__ == "__main__":
    main()
