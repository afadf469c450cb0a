"""Wall-time comparison of the numba and pure-numpy kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Each kernel is called once untimed (so numba compilation is excluded), then
timed as the best of ``--repeat`` runs.  Results are checked for equality
before any timing is reported.
"""

import argparse
import time

import numpy as np

from qprime.kernels import numba_impl, numpy_impl
from qprime.numtheory import factorize

CASES = [
    ("powmod_vec", lambda k: k.powmod_vec(np.arange(1 << 20, dtype=np.int64), 65520, 65521)),
    ("work_register", lambda k: k.work_register(3, 1000003, 1 << 22)),
    ("unit_order_census", lambda k: k.unit_order_census(4093)),
    ("totient_sieve", lambda k: k.totient_sieve(10 ** 6)),
    ("phase_distribution", lambda k: k.phase_distribution(1000, 21)),
    ("strong_liar_count", lambda k: k.strong_liar_count(999999)),
    ("fermat_liar_count", lambda k: k.fermat_liar_count(999999)),
    ("full_order_count", lambda k: k.full_order_count(65537, [p for p, _ in factorize(65536)])),
]


def _best(fn, impl, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(impl)
        times.append(time.perf_counter() - start)
    return min(times)


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray) and a.dtype.kind == "f":
        return np.allclose(a, b, rtol=0, atol=1e-15)
    return np.array_equal(a, b)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    print(f"{'kernel':<20} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for name, fn in CASES:
        ref, fast = fn(numpy_impl), fn(numba_impl)
        if not _same(ref, fast):
            raise SystemExit(f"{name}: backends disagree")
        t_np = _best(fn, numpy_impl, args.repeat)
        t_nb = _best(fn, numba_impl, args.repeat)
        print(f"{name:<20} {t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
