"""Benchmark the numba kernels against the pure-numpy fallback.

Usage:  python benchmarks/bench_backends.py [--repeats N]

Runs each hot kernel on inputs large enough to matter (the library's own
caps keep everyday work far smaller) and prints both timings.  The first
numba call per kernel is excluded via a warm-up pass, so JIT compilation
does not pollute the numbers.
"""

import argparse
import time

import numpy as np

from tolift.algebra import compile_term
from tolift.kernels import get_backend
from tolift.terms import Signature, parse_term

SIG = Signature((("m", 2), ("w", 3)))


def make_tables(rng, n):
    m = rng.integers(0, n, n * n, dtype=np.int64)
    w = rng.integers(0, n, n ** 3, dtype=np.int64)
    flat = np.concatenate([m, w])
    offs = np.array([0, n * n], dtype=np.int64)
    arities = np.array([2, 3], dtype=np.int64)
    return flat, offs, arities


def bench_satisfies_scan(impl, rng):
    # both sides are the same term, so the scan never exits early and both
    # backends must visit all 10^6 assignments
    n = 10
    flat, offs, _ = make_tables(rng, n)
    lhs = compile_term(parse_term("m(m(x,m(y,z)),m(u,m(v,w1)))", SIG), SIG,
                       ("x", "y", "z", "u", "v", "w1"))
    rhs = compile_term(parse_term("m(m(x,m(y,z)),m(u,m(v,w1)))", SIG), SIG,
                       ("x", "y", "z", "u", "v", "w1"))
    total = n ** 6
    return lambda: impl.find_identity_violation(
        lhs.code, lhs.child_ptr, lhs.child, rhs.code, rhs.child_ptr, rhs.child,
        flat, offs, n, 6, 0, total)


def bench_compat_scan(impl, rng):
    n = 8
    w = rng.integers(0, n, n ** 3, dtype=np.int64)
    rel = np.ones((n, n), dtype=np.uint8)  # full relation: no early exit
    members = np.argwhere(rel)
    pa = np.ascontiguousarray(members[:, 0].astype(np.int64))
    pb = np.ascontiguousarray(members[:, 1].astype(np.int64))
    return lambda: impl.compat_violation(w, 3, n, pa, pb, rel)


def bench_closure(impl, rng):
    n = 16
    flat, offs, arities = make_tables(rng, n)
    adj = np.eye(n, dtype=np.uint8)
    adj[0, 1] = adj[1, 0] = 1
    return lambda: impl.close_under_ops(flat, offs, arities, n, adj)


def bench_complex_table(impl, rng):
    n = 6
    w = rng.integers(0, n, n ** 3, dtype=np.int64)
    return lambda: impl.complex_op_table(w, 3, n)


BENCHES = [
    ("identity scan (no early exit), 10^6 points", bench_satisfies_scan),
    ("compatibility scan, 64^3 pair tuples", bench_compat_scan),
    ("tolerance closure fixpoint, n=16", bench_closure),
    ("complexwise ternary table, n=6", bench_complex_table),
]


def best_of(fn, repeats):
    fn()  # warm-up (absorbs JIT compilation on the numba path)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = {}
    for name in ("numpy", "numba"):
        try:
            backends[name] = get_backend(name)
        except ImportError:
            print(f"(backend {name} unavailable, skipping)")
    print(f"{'kernel':45s} " + " ".join(f"{n:>10s}" for n in backends))
    for label, make in BENCHES:
        row = [f"{label:45s}"]
        timings = {}
        for name, impl in backends.items():
            rng = np.random.default_rng(12345)
            timings[name] = best_of(make(impl, rng), args.repeats)
            row.append(f"{timings[name] * 1e3:9.2f}ms")
        if len(timings) == 2:
            ratio = timings["numpy"] / timings["numba"]
            row.append(f"  numba {ratio:.1f}x faster" if ratio >= 1
                       else f"  numpy {1 / ratio:.1f}x faster")
        print(" ".join(row))


if __name__ == "__main__":
    main()
