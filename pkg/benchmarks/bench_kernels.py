"""Compare the compiled and pure-Python enumeration kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--quick]

Each case runs once per backend (best of N), checks that both backends return
identical results, and prints the timings and speedup.
"""

from __future__ import annotations

import argparse
import time

from gpairs.corpus import corpus, free
from gpairs.enumerator import _pykernels
from gpairs.enumerator.lowindex import relator_rotations_by_column
from gpairs.presentations import Presentation
from gpairs.words import commutator, power, to_columns

try:
    from gpairs.enumerator import _ckernels
except ImportError:  # extension not built
    _ckernels = None


PSL27 = Presentation(("a", "b"), ((1, 1), (2, 2, 2), power((1, 2), 7), power(commutator((1,), (2,)), 4)),
                     "PSL(2,7)")


def tc_case(name, p, subgroup=(), max_cosets=200_000):
    rels = [to_columns(r) for r in p.relators]
    sub = [to_columns(w) for w in subgroup]
    return name, lambda k: k.coset_enumerate(2 * p.ngens, rels, sub, max_cosets)


def lis_case(name, p, n, normal_only=False):
    by_col = relator_rotations_by_column(p)
    return name, lambda k: k.low_index_search(2 * p.ngens, by_col, n, 10**9, [], 0, normal_only)


def cases(quick: bool):
    out = [
        tc_case("todd-coxeter triangle(2,3,5)", corpus("triangle(2,3,5)").presentation),
        tc_case("todd-coxeter PSL(2,7), 168 cosets", PSL27),
        tc_case("todd-coxeter weeks over <a>", corpus("weeks").presentation, [(1,)]),
        lis_case("low-index higman to 6", corpus("higman").presentation, 6),
        lis_case("low-index free(2) to 6", free(2), 6),
        lis_case("low-index weeks to 10", corpus("weeks").presentation, 10),
    ]
    if not quick:
        out += [
            lis_case("low-index higman to 8", corpus("higman").presentation, 8),
            lis_case("normal subgroups free(3) to 6", free(3), 6, normal_only=True),
        ]
    return out


def best_of(fn, kernels, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(kernels)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the slow cases")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python backend is available")
    print(f"{'case':<62} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in cases(args.quick):
        tp, rp = best_of(fn, _pykernels, 1 if not args.quick and "higman to 8" in name else args.repeat)
        if _ckernels is None:
            print(f"{name:<62} {tp:>10.4f} {'-':>10} {'-':>8}")
            continue
        tc, rc = best_of(fn, _ckernels, args.repeat)
        if rp != rc:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<62} {tp:>10.4f} {tc:>10.4f} {tp / max(tc, 1e-9):>7.1f}x")


if __name__ == "__main__":
    main()
