"""Compare the compiled and pure-Python kernels on representative inputs.

Run with ``python3 benchmarks/bench_kernels.py``.  Each row reports the best
of several repeats for both backends and the speedup; results are also
checked for equality so the benchmark doubles as a consistency test.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from cextkit import _kernels_py
from cextkit.centrality import _membership
from cextkit.corpus import named_group
from cextkit.cubes import cube_of_quotients
from cextkit.groups import dihedral, normal_subgroups, symmetric

try:
    from cextkit import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def cases():
    S4 = symmetric(4)
    D8 = dihedral(8)
    X = named_group("C4×C4")
    yield ("associativity S4", lambda k: k.associativity_witness(S4.table))
    yield ("associativity D8", lambda k: k.associativity_witness(D8.table))
    yield ("closure S4", lambda k: k.closure(S4.table, [1, 2]))
    yield ("hom check D8->D8", lambda k: k.hom_witness(D8.table, D8.table, np.arange(16)))

    fours = [S for S in normal_subgroups(X) if S.order == 4]
    for n in (2, 3):
        F = cube_of_quotients(X, fours[:n])
        masks = list(range(F.top + 1))
        maps, cons = _membership(F, masks)
        sizes = [X.order] * len(masks)
        yield (f"diamonds C4×C4 n={n}",
               lambda k, s=sizes, m=maps, c=cons: k.enumerate_constrained(s, m, c, 10 ** 8))


def same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the pure backend is available")
    print(f"{'case':<24}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in cases():
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:<24}{tp:>14.2f}{'-':>14}{'-':>10}")
            continue
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        if not same(fn(_kernels_py), fn(_ckernels)):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<24}{tp:>14.2f}{tc:>14.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
