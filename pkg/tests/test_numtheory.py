import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qprime.errors import InvalidInputError, NotAUnitError
from qprime.numtheory import (
    DENSITY_THRESHOLD, DensityConstants, E_GAMMA, count_modmuls, decompose_pow2,
    density_crossover, density_lower_bound, euler_phi, factorize, gcd, integer_nth_root,
    is_prime_deterministic, is_prime_trial, jacobi, modpow, order_bruteforce, perfect_power,
)


def naive_pow(b, e, m):
    out = 1 % m
    for _ in range(e):
        out = out * b % m
    return out


def coprime_count(m):
    return sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)


def trial_gcd(a, b):
    return max(d for d in range(1, max(a, b) + 1) if a % d == 0 and b % d == 0)


class TestGcd:
    def test_examples(self):
        assert gcd(12, 18) == 6
        assert gcd(7, 1) == 1
        assert gcd(4, 15) == trial_gcd(4, 15) == 1
        assert gcd(9, 0) == 9

    def test_both_zero(self):
        with pytest.raises(InvalidInputError):
            gcd(0, 0)

    @given(st.integers(0, 300), st.integers(1, 300))
    def test_matches_trial_division(self, a, b):
        assert gcd(a, b) == trial_gcd(a, b)


class TestModpow:
    def test_examples(self):
        assert modpow(3, 3, 7) == naive_pow(3, 3, 7) == 6
        assert modpow(2, 560, 561) == naive_pow(2, 560, 561) == 1
        for x, m in [(0, 2), (5, 9), (123456789, 1000)]:
            assert modpow(x, 0, m) == 1

    def test_rejects_small_modulus(self):
        with pytest.raises(InvalidInputError):
            modpow(3, 2, 1)

    @settings(max_examples=300)
    @given(st.integers(0, 10 ** 6), st.integers(0, 500), st.integers(2, 500))
    def test_agrees_with_repeated_multiplication(self, b, e, m):
        assert modpow(b, e, m) == naive_pow(b % m, e, m)

    @given(st.integers(0, 10 ** 6), st.integers(1, 10 ** 6), st.integers(2, 10 ** 6))
    def test_counted_path_matches(self, b, e, m):
        with count_modmuls() as c:
            got = modpow(b, e, m)
        assert got == pow(b, e, m)
        assert c.total == (e.bit_length() - 1) + (bin(e).count("1") - 1)


class TestDecompose:
    @pytest.mark.parametrize("m,s,d", [(560, 4, 35), (35, 0, 35), (64, 6, 1)])
    def test_examples(self, m, s, d):
        assert decompose_pow2(m) == (s, d)

    @given(st.integers(1, 10 ** 12))
    def test_reconstructs(self, m):
        s, d = decompose_pow2(m)
        assert d % 2 == 1 and d << s == m

    def test_zero(self):
        with pytest.raises(InvalidInputError):
            decompose_pow2(0)


def jacobi_oracle(a, n):
    # product of Legendre symbols, each by brute-force squares
    out = 1
    for p, e in factorize(n):
        r = a % p
        if r == 0:
            return 0
        leg = 1 if any(x * x % p == r for x in range(1, p)) else -1
        out *= leg ** e
    return out


class TestJacobi:
    def test_examples(self):
        assert jacobi(1, 15) == 1
        assert jacobi(2, 15) == jacobi_oracle(2, 15) == 1
        assert jacobi(3, 15) == 0

    @pytest.mark.parametrize("n", [2, 1, 10])
    def test_bad_modulus(self, n):
        with pytest.raises(InvalidInputError):
            jacobi(3, n)

    @given(st.integers(0, 500), st.integers(1, 150).map(lambda k: 2 * k + 1))
    def test_matches_legendre_products(self, a, n):
        assert jacobi(a, n) == jacobi_oracle(a, n)


class TestOrder:
    def test_examples(self):
        assert order_bruteforce(1, 97) == 1
        assert order_bruteforce(3, 7) == 6
        assert order_bruteforce(2, 561) == 40
        assert order_bruteforce(2, 561, method="iterate") == 40

    def test_not_a_unit(self):
        with pytest.raises(NotAUnitError):
            order_bruteforce(3, 15)

    def test_fast_path_equals_literal_iteration(self):
        for n in list(range(2, 400)) + [65521, 65535, 65536]:
            step = 1 if n < 400 else 97
            for a in range(1, n, step):
                if math.gcd(a, n) == 1:
                    assert order_bruteforce(a, n) == order_bruteforce(a, n, method="iterate")


class TestTotientAndFactorize:
    def test_phi_examples(self):
        assert euler_phi(6) == 2
        assert euler_phi(560) == coprime_count(560) == 192
        assert euler_phi(1) == 1
        assert all(euler_phi(p) == p - 1 for p in (2, 3, 101, 65537))

    def test_phi_matches_coprime_count(self):
        for m in range(1, 10 ** 4 + 1):
            assert euler_phi(m) == coprime_count(m)

    def test_factorize_examples(self):
        assert factorize(560) == [(2, 4), (5, 1), (7, 1)]
        assert factorize(561) == [(3, 1), (11, 1), (17, 1)]
        assert factorize(64) == [(2, 6)]

    @given(st.integers(2, 10 ** 9))
    def test_factorize_reconstructs(self, m):
        f = factorize(m)
        assert math.prod(p ** e for p, e in f) == m
        assert [p for p, _ in f] == sorted({p for p, _ in f})
        assert all(is_prime_trial(p) for p, _ in f)

    def test_factorize_large_semiprime(self):
        p, q = 1000003, 998244353
        assert factorize(p * q) == [(p, 1), (q, 1)]

    @pytest.mark.parametrize("m", [0, 1])
    def test_factorize_rejects(self, m):
        with pytest.raises(InvalidInputError):
            factorize(m)

    def test_deterministic_mr_matches_trial(self):
        assert [n for n in range(2000) if is_prime_deterministic(n)] == \
            [n for n in range(2000) if is_prime_trial(n)]


class TestRoots:
    def test_nth_root_examples(self):
        assert integer_nth_root(27, 3) == 3
        assert integer_nth_root(26, 3) == 2
        assert integer_nth_root(12345, 1) == 12345
        with pytest.raises(InvalidInputError):
            integer_nth_root(8, 0)

    @given(st.integers(1, 10 ** 40), st.integers(1, 12))
    def test_nth_root_floor(self, m, k):
        r = integer_nth_root(m, k)
        assert r ** k <= m < (r + 1) ** k

    def test_perfect_power_examples(self):
        assert perfect_power(16) == (2, 4)
        assert perfect_power(12) is None
        assert perfect_power(27) == (3, 3)

    @given(st.integers(2, 50), st.integers(2, 12))
    def test_perfect_power_canonical(self, b, k):
        base, exp = perfect_power(b ** k)
        assert base ** exp == b ** k and exp >= k
        assert perfect_power(base) is None


class TestDensity:
    def test_constants(self):
        c = DensityConstants()
        assert c.euler_mascheroni == pytest.approx(0.57721, abs=1e-5)
        assert c.e_gamma == pytest.approx(math.exp(c.euler_mascheroni), rel=1e-6)
        assert round(c.e_gamma, 3) == 1.781
        assert c.rs_additive == 2.50637
        assert c.threshold == DENSITY_THRESHOLD == 49.2

    def test_crossover_recomputed(self):
        # DENSITY_THRESHOLD is conservative: the constants themselves give ~66.36
        assert density_crossover() == pytest.approx(66.357, abs=1e-3)

    def test_m100(self):
        ratio, rs, simple = density_lower_bound(100)
        assert ratio == Fraction(coprime_count(100), 100) == Fraction(40, 100)
        assert simple == pytest.approx(1 / (3 * math.log(math.log(100))))
        assert simple == pytest.approx(0.2183, abs=1e-4)
        assert float(ratio) > simple
        assert rs == pytest.approx(1 / (E_GAMMA * math.log(math.log(100)) + 2.50637 / math.log(math.log(100))))

    def test_m6_below_threshold(self):
        ratio, _, simple = density_lower_bound(6)
        assert ratio == Fraction(1, 3)
        assert simple == pytest.approx(0.572, abs=1e-3)
        assert float(ratio) < simple

    def test_rejects_small(self):
        with pytest.raises(InvalidInputError):
            density_lower_bound(2)

    def test_rs_exhaustive_direct(self):
        # independent of the sieve kernel: factorization-based phi
        for m in range(50, 20001):
            ratio, rs, _ = density_lower_bound(m)
            assert float(ratio) > rs
