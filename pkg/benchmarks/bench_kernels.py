"""Compare the compiled and numpy kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--n 5000] [--repeat 5]

Every kernel is timed on both backends with the same inputs, the outputs are
checked against each other, and the best-of-``repeat`` wall time is reported.
"""

from __future__ import annotations

import argparse
import timeit
from contextlib import contextmanager

import numpy as np

from implicitnet import kernels
from implicitnet.operators import fp_parse
from implicitnet.timedomain import TimeSeries, simulate_explicit


@contextmanager
def _active(module):
    saved = kernels._impl
    kernels._impl = module
    try:
        yield
    finally:
        kernels._impl = saved


def _cases(n: int):
    rng = np.random.default_rng(0)
    u = rng.standard_normal(n)
    w = kernels.backend("python").gl_weights(0.5, n)
    b = np.diff(np.arange(n + 1, dtype=np.float64) ** 0.5)
    march_w = w * 1e3 + 1e3 * (np.arange(n) == 0)
    op = fp_parse("1*D^1.5 + 0.5*D^0.5 + 1")
    forcing = TimeSeries.step(1e-3, (n - 1) * 1e-3)
    return {
        "gl_weights": lambda m: m.gl_weights(0.5, n),
        "causal_convolve": lambda m: m.causal_convolve(u, w),
        "l1_history": lambda m: m.l1_history(u, b),
        "toeplitz_march": lambda m: m.toeplitz_march(march_w, u),
        "simulate_explicit": lambda m: _simulate(m, op, forcing),
    }


def _simulate(module, op, forcing):
    with _active(module):
        return simulate_explicit(op, forcing).values


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--n", type=int, default=5000, help="samples per signal")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    try:
        compiled = kernels.backend("cython")
    except ImportError:
        print("compiled extension not built; only the numpy backend is available")
        return 1
    python = kernels.backend("python")

    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<18} {'cython [ms]':>12} {'numpy [ms]':>12} {'speed-up':>9} {'max |diff|':>11}")
    for name, fn in _cases(args.n).items():
        diff = float(np.max(np.abs(fn(compiled) - fn(python))))
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(python), number=1, repeat=args.repeat))
        print(f"{name:<18} {tc * 1e3:12.3f} {tp * 1e3:12.3f} {tp / tc:9.1f} {diff:11.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
