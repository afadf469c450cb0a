"""The numba and numpy kernels must agree exactly (or to rounding for floats)."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qprime.kernels import numpy_impl
from qprime.numtheory import euler_phi, factorize, order_bruteforce

numba_impl = pytest.importorskip("qprime.kernels.numba_impl")

IMPLS = [numpy_impl, numba_impl]


@pytest.mark.parametrize("impl", IMPLS, ids=["numpy", "numba"])
def test_powmod_vec(impl):
    bases = np.arange(0, 700, dtype=np.int64)
    for n, e in [(2, 5), (561, 560), (65521, 12345), (2 ** 31 - 1, 2 ** 40 + 3)]:
        got = impl.powmod_vec(bases, e, n)
        assert got.tolist() == [pow(int(b), e, n) for b in bases]


@pytest.mark.parametrize("impl", IMPLS, ids=["numpy", "numba"])
def test_work_register(impl):
    for a, n, size in [(7, 15, 16), (2, 21, 100), (1, 9, 5), (3, 1000003, 37)]:
        assert impl.work_register(a, n, size).tolist() == [pow(a, x, n) for x in range(size)]


@pytest.mark.parametrize("impl", IMPLS, ids=["numpy", "numba"])
def test_unit_order_census(impl):
    for n in [1, 2, 3, 8, 15, 97, 561, 1024]:
        orders, violations = impl.unit_order_census(n)
        assert violations == 0
        for a in range(n):
            expected = order_bruteforce(a, n, "iterate") if n > 1 and math.gcd(a, n) == 1 else 0
            if n == 1:
                expected = 0
            assert orders[a] == expected
        fast, zero = impl.unit_order_census(n, audit=False)
        assert zero == 0 and fast.tolist() == orders.tolist()


@pytest.mark.parametrize("impl", IMPLS, ids=["numpy", "numba"])
def test_totient_sieve(impl):
    phi = impl.totient_sieve(3000)
    assert phi[0] == 0
    assert [int(x) for x in phi[1:]] == [euler_phi(m) for m in range(1, 3001)]


def test_phase_distribution_paths_agree():
    for r, t in [(1, 3), (4, 4), (6, 7), (5, 9), (40, 13), (1000, 21)]:
        a = numpy_impl.phase_distribution(r, t)
        b = numba_impl.phase_distribution(r, t)
        assert np.max(np.abs(a - b)) < 1e-15
        assert abs(a.sum() - 1) < 1e-12


@pytest.mark.parametrize("impl", IMPLS, ids=["numpy", "numba"])
def test_liar_counts(impl):
    def strong(n):
        s = (n - 1 & -(n - 1)).bit_length() - 1
        d = (n - 1) >> s
        count = 0
        for a in range(1, n):
            if math.gcd(a, n) != 1:
                continue
            x = pow(a, d, n)
            seq = [x] + [pow(a, d << r, n) for r in range(1, s)]
            count += x == 1 or (n - 1) in seq
        return count

    for n in [9, 15, 21, 91, 561, 1105, 2047]:
        assert impl.strong_liar_count(n) == strong(n)
        assert impl.fermat_liar_count(n) == sum(
            1 for a in range(1, n) if math.gcd(a, n) == 1 and pow(a, n - 1, n) == 1)


@pytest.mark.parametrize("impl", IMPLS, ids=["numpy", "numba"])
def test_full_order_count(impl):
    for n in [5, 7, 13, 97, 561, 1009, 1024]:
        primes = [p for p, _ in factorize(n - 1)]
        expected = sum(1 for a in range(1, n)
                       if math.gcd(a, n) == 1 and order_bruteforce(a, n) == n - 1)
        assert impl.full_order_count(n, primes) == expected


def test_env_flag_selects_numpy():
    code = "import qprime.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, QPRIME_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["QPRIME_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
