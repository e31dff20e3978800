"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one line per (kernel, backend) with the best per-call time and the
speedup of the compiled build, plus the largest disagreement between the two.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from thermorate.kernels import available_backends


def _cases(rng: np.random.Generator):
    xs = [float(v) for v in rng.uniform(0.1, 40.0, 200)]
    series = [
        ((), (0.5, 1.5), -0.25),
        ((), (0.5, 1.3), 30.0),
        ((1.5,), (0.5, 2.0, 2.5), -4.0),
        ((), (1.0 / 3.0, 2.0 / 3.0, 1.2), 15.0),
    ]
    return xs, series


def _bench(mod, xs, series, repeat: int) -> dict[str, float]:
    calls = {
        "ln_gamma": (lambda: [mod.ln_gamma(x) for x in xs], len(xs)),
        "digamma": (lambda: [mod.digamma(x) for x in xs], len(xs)),
        "sinpi": (lambda: [mod.sinpi(x) for x in xs], len(xs)),
        "pfq_sum": (lambda: [mod.pfq_sum(u, l, x, 1e-15, 1e-300, 10_000) for u, l, x in series],
                    len(series)),
    }
    out = {}
    for name, (fn, n) in calls.items():
        number = max(1, int(2000 / n))
        best = min(timeit.repeat(fn, number=number, repeat=repeat))
        out[name] = best / (number * n)
    return out


def _disagreement(mods, xs, series) -> dict[str, float]:
    if len(mods) < 2:
        return {}
    a, b = mods["python"], mods["cython"]
    rel = lambda u, v: abs(u - v) / max(abs(v), 1e-300)
    return {
        "ln_gamma": max(rel(a.ln_gamma(x)[0], b.ln_gamma(x)[0]) for x in xs),
        "digamma": max(rel(a.digamma(x), b.digamma(x)) for x in xs),
        "pfq_sum": max(rel(a.pfq_sum(u, l, x, 1e-15, 1e-300, 10_000)[0],
                           b.pfq_sum(u, l, x, 1e-15, 1e-300, 10_000)[0]) for u, l, x in series),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    xs, series = _cases(np.random.default_rng(args.seed))
    mods = available_backends()
    timings = {name: _bench(mod, xs, series, args.repeat) for name, mod in mods.items()}

    print(f"{'kernel':<10} {'backend':<8} {'per call':>12} {'speedup':>8}")
    for kernel in timings["python"]:
        base = timings["python"][kernel]
        for backend, per in timings.items():
            t = per[kernel]
            speed = base / t if t > 0 else math.inf
            print(f"{kernel:<10} {backend:<8} {t * 1e6:>10.3f}us {speed:>7.1f}x")
    if "cython" not in mods:
        print("compiled extension not built; only the fallback was timed")
    for kernel, dev in _disagreement(mods, xs, series).items():
        print(f"max rel. disagreement {kernel}: {dev:.2e}")


if __name__ == "__main__":
    main()
