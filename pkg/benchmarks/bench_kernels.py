"""Time the compiled and numpy scan kernels on the same inputs.

    python benchmarks/bench_kernels.py [--states 4] [--transforms 2000] [--repeat 3]

The safer pair makes both scans run to completion; the unsafe pair shows
the early exit on the first hit.
"""

import argparse
import time

import numpy as np

from safer import kernels
from safer.crossing import belief_grid
from safer.oracle import sample_concave


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=4)
    ap.add_argument("--transforms", type=int, default=2000)
    ap.add_argument("--beliefs", type=int, default=None)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    n = args.states
    X = belief_grid(n, args.beliefs, seed=0)
    backends = {"numpy": kernels.fallback}
    if kernels.compiled is not None:
        backends["compiled"] = kernels.compiled
    print(f"{n} states, {len(X)} beliefs, {args.transforms} transforms, best of {args.repeat}")
    # a wins only in s0; the safer pair keeps its payoffs inside b's range
    cases = {"safer": ([3.0] + [2.0] * (n - 1), [1.0] + [4.0] * (n - 1)),
             "unsafe": ([5.0] + [3.0] * (n - 1), [1.0] + [4.0] * (n - 1))}
    for label, (alpha, beta) in cases.items():
        alpha, beta = np.array(alpha), np.array(beta)
        phis = [sample_concave((0, i), (1.0, 5.0), 1 + i % 3) for i in range(args.transforms)]
        pa = np.array([p(alpha) for p in phis])
        pb = np.array([p(beta) for p in phis])
        print(f"\n{label} pair\n{'backend':<10}{'crossing scan':>16}{'violation scan':>18}")
        results = set()
        for name, mod in backends.items():
            t_cross, r1 = best_of(
                lambda: mod.first_crossing_failure(alpha, beta, X, 1e-9, 1e-9), args.repeat)
            t_viol, r2 = best_of(
                lambda: mod.first_violation(alpha, beta, pa, pb, X, 1e-9, 1e-9), args.repeat)
            results.add((r1, tuple(r2)))
            print(f"{name:<10}{t_cross * 1e3:>13.2f} ms{t_viol * 1e3:>15.2f} ms")
        assert len(results) == 1, f"backends disagree: {results}"


if __name__ == "__main__":
    main()
