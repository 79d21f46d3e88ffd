"""Numba kernels vs the pure-numpy fallback.

Times partition refinement, per-class statistics, hidden-layer activation and a
full attribute reduction on both paths and checks that they agree.

    python3 benchmarks/bench_kernels.py [--rows N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from rough_elm import _accel, data, discretize, relm, rough
from rough_elm.elm import TargetEncoding


def hyperplane_table(n, d, seed):
    ds = data.gen_hyperplane(n, d, 0.1, seed)
    enc = TargetEncoding.fit(ds.labels)
    return relm.build_table(discretize.fit(ds, enc.n_classes), ds, enc)


def cases(n_rows):
    rng = np.random.default_rng(0)
    class_of = rng.integers(0, 50, size=n_rows).astype(np.int64)
    codes = rng.integers(0, 4, size=n_rows).astype(np.int64)
    decision = rng.integers(0, 3, size=n_rows).astype(np.int64)
    z = rng.normal(size=(n_rows, 100))
    table = hyperplane_table(min(n_rows, 2000), 40, seed=0)
    return {
        "refine": lambda: _accel.refine(class_of, 50, codes, 4),
        "class_stats": lambda: _accel.class_stats(class_of, 50, decision, 3),
        "activate(sigmoid)": lambda: _accel.activate_array(z, _accel.SIGMOID),
        "activate(tribas)": lambda: _accel.activate_array(z, _accel.TRIBAS),
        "reduce(d=40)": lambda: rough.reduce(table),
    }


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.allclose(a, b, rtol=1e-12, atol=0)
    return a == b


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
        return 1

    print(f"{'kernel':<20}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}  agree")
    for name, fn in cases(args.rows).items():
        _accel.USE_NUMBA = True
        fn()  # compile
        fast, ref = best_of(fn, args.repeat), fn()
        _accel.USE_NUMBA = False
        slow, ref_np = best_of(fn, args.repeat), fn()
        print(f"{name:<20}{fast * 1e3:>10.3f}{slow * 1e3:>10.3f}{slow / fast:>8.1f}x  "
              f"{same(ref, ref_np)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
