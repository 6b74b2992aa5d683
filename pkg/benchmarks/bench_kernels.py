"""Compare the numba and numpy backends of the table kernels.

Run: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from stackyaut import _kernels
from stackyaut.twogroups import FiniteGroup


def best_of(fn, repeat):
    fn()  # warm up (compiles the numba version)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases():
    s4 = FiniteGroup.symmetric(4)
    z = FiniteGroup.abelian([2, 4, 8])
    conj = np.array([[s4.conj(a, g) for g in range(s4.order)] for a in range(s4.order)])
    z6 = FiniteGroup.cyclic(6)
    triv6 = np.repeat(np.arange(6)[:, None], 6, axis=1)
    yield "associativity S4 x Z/2x4x8", lambda b: _kernels.associativity_failures(z.table, backend=b)
    yield "action automorphisms S4 conj", lambda b: _kernels.action_automorphism_failures(s4.table, conj, backend=b)
    yield "action compatibility S4 conj", lambda b: _kernels.action_compatibility_failures(s4.table, conj, backend=b)
    yield "interchange Z/6 -> Z/6", lambda b: _kernels.interchange_failures(
        z6.table, z6.table, np.arange(6), triv6, backend=b
    )
    masks = [sum(1 << i for i in c) for c in [(0, 1, 2), (2, 3, 4), (4, 5, 6), (6, 7, 8), (8, 9, 10)]]
    yield "minimal nonfaces n=20", lambda b: _kernels.minimal_nonfaces(masks, 20, backend=b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return
    print(f"{'kernel':34s} {'numba ms':>10s} {'numpy ms':>10s} {'ratio':>7s}  agree")
    for name, fn in cases():
        tn, on = best_of(lambda: fn("numba"), args.repeat)
        tp, op = best_of(lambda: fn("numpy"), args.repeat)
        if isinstance(on, tuple):
            agree = on[0] == op[0] and np.array_equal(on[1], op[1])
        else:
            agree = np.array_equal(on, op)
        print(f"{name:34s} {tn * 1e3:10.3f} {tp * 1e3:10.3f} {tp / tn:7.1f}  {agree}")


if __name__ == "__main__":
    main()
