"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from artifact import _kernels_py

try:
    from artifact import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def cases(rng):
    pts = rng.integers(-20, 21, size=(4000, 4)).astype(float)
    w = rng.normal(size=4000) + 1j * rng.normal(size=4000)
    Z = rng.normal(size=(500, 4)) * 0.05 + 1j * rng.normal(size=(500, 4))
    inc = rng.normal(size=(2000, 1024, 3)) * 0.03
    return {"expsum 4000x500": ("expsum", (pts, w, Z)), "su2_mckean 2000x1024": ("su2_mckean", (inc,))}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':24s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s} {'max diff':>10s}")
    for name, (fn, inputs) in cases(rng).items():
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(lambda: py(*inputs), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:24s} {t_py:11.2f} {'n/a':>12s}")
            continue
        cy = getattr(_ckernels, fn)
        t_cy = min(timeit.repeat(lambda: cy(*inputs), number=1, repeat=args.repeat)) * 1e3
        diff = float(np.max(np.abs(py(*inputs) - cy(*inputs))))
        print(f"{name:24s} {t_py:11.2f} {t_cy:12.2f} {t_py / t_cy:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
