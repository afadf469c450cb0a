import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qprime import kernels
from qprime.certificates import verify
from qprime.errors import InvalidInputError, NotAUnitError
from qprime.numtheory import euler_phi, is_prime_trial, perfect_power
from qprime.order_finding import QofConfig
from qprime.primality import (
    Candidates, Composite, CompositeBy, EulerWitness, GcdFactor, MRClass, OrderDividesHalf, Prime,
    PrimePower, ProbablyComposite, ProceedMinusOne, TestConfig, miller_rabin_classify, prescreen,
    screen_candidate, test_prime_power, test_primality,
)
from qprime.sweeps import carmichael_numbers


def mr_sequence(a, n):
    s = ((n - 1) & -(n - 1)).bit_length() - 1
    d = (n - 1) >> s
    return [pow(a, d << r, n) for r in range(s + 1)]


class TestScreen:
    def test_examples(self):
        assert screen_candidate(3, 7) == ProceedMinusOne(3)
        assert screen_candidate(2, 7) == OrderDividesHalf(2)
        assert screen_candidate(5, 15) == GcdFactor(5)
        assert screen_candidate(4, 15) == EulerWitness(4)

    @pytest.mark.parametrize("a,n", [(1, 7), (7, 7), (3, 8), (2, 3)])
    def test_rejects(self, a, n):
        with pytest.raises(InvalidInputError):
            screen_candidate(a, n)

    @given(st.integers(2, 2000).map(lambda k: 2 * k + 1), st.integers(2, 10 ** 6))
    def test_agrees_with_euler_criterion(self, n, a):
        a = 2 + a % (n - 3)
        out = screen_candidate(a, n)
        g = math.gcd(a, n)
        h = pow(a, (n - 1) // 2, n)
        if g > 1:
            assert out == GcdFactor(g)
        elif h == 1:
            assert isinstance(out, OrderDividesHalf)
        elif h == n - 1:
            assert isinstance(out, ProceedMinusOne)
        else:
            assert isinstance(out, EulerWitness)


class TestMillerRabin:
    def test_examples(self):
        assert miller_rabin_classify(2, 561) is MRClass.STRONG_WITNESS
        assert mr_sequence(2, 561) == [263, 166, 67, 1, 1]
        assert miller_rabin_classify(3, 7) is MRClass.LIAR_HIT_MINUS_ONE
        assert miller_rabin_classify(2, 7) is MRClass.LIAR_ONE_AT_D

    def test_non_unit(self):
        with pytest.raises(NotAUnitError):
            miller_rabin_classify(3, 15)

    def test_matches_sequence_oracle(self):
        for n in range(5, 600, 2):
            for a in range(2, n - 1):
                if math.gcd(a, n) != 1:
                    continue
                seq = mr_sequence(a, n)
                cls = miller_rabin_classify(a, n)
                if seq[0] == 1:
                    assert cls is MRClass.LIAR_ONE_AT_D
                elif n - 1 in seq[:-1]:
                    assert cls is MRClass.LIAR_HIT_MINUS_ONE
                else:
                    assert cls is MRClass.STRONG_WITNESS

    def test_strong_liar_bound(self):
        # at most phi(N)/4 strong liars for odd composite N > 9
        for n in range(11, 3001, 2):
            if not is_prime_trial(n):
                assert 4 * kernels.strong_liar_count(n) <= euler_phi(n), n

    def test_fermat_liars_half_unless_carmichael(self):
        carmichael = set(carmichael_numbers(10 ** 4))
        for n in range(9, 10 ** 4 + 1, 2):
            if is_prime_trial(n):
                continue
            liars = kernels.fermat_liar_count(n)
            if n in carmichael:
                assert liars == euler_phi(n)
            else:
                assert 2 * liars <= euler_phi(n)


class TestPrescreen:
    def test_prime_keeps_minus_one_bases(self):
        out = prescreen(101, 16, np.random.default_rng(0))
        assert isinstance(out, Candidates)
        assert len(out.tested) == 16 and len(set(out.tested)) == 16
        assert all(miller_rabin_classify(a, 101) is MRClass.LIAR_HIT_MINUS_ONE for a in out.bases)
        assert set(out.bases) <= set(out.tested)

    def test_small_pool_exhausts(self):
        out = prescreen(7, 16, np.random.default_rng(0))
        assert sorted(out.tested) == [2, 3, 4, 5]

    def test_composite(self):
        out = prescreen(561, 16, np.random.default_rng(1))
        assert isinstance(out, CompositeBy)
        if out.factor is None:
            assert miller_rabin_classify(out.a, 561) is MRClass.STRONG_WITNESS
        else:
            assert 561 % out.factor == 0

    def test_zero_rounds(self):
        assert prescreen(561, 0) == Candidates((), ())

    def test_rejects_even(self):
        with pytest.raises(InvalidInputError):
            prescreen(10, 4)


class TestPrimality:
    def test_seven(self):
        v = test_primality(7, TestConfig(seed=1))
        assert isinstance(v, Prime)
        assert v.certificate.witness["a"] in (3, 5)
        assert verify(v.certificate, "both")

    def test_fifteen(self):
        v = test_primality(15, TestConfig(seed=1))
        assert isinstance(v, Composite)
        assert verify(v.certificate)

    def test_carmichael_561(self):
        v = test_primality(561, TestConfig(seed=1))
        assert isinstance(v, Composite) and verify(v.certificate)

    def test_carmichael_with_five_rounds(self):
        for n in carmichael_numbers(10 ** 4):
            hits = sum(isinstance(test_primality(n, TestConfig(seed=s, mr_rounds=5)), Composite)
                       for s in range(100))
            assert hits >= 99, n

    def test_561_without_prescreen_never_prime(self):
        for seed in range(40):
            v = test_primality(561, TestConfig(seed=seed, mr_rounds=0))
            assert not isinstance(v, Prime)
            if isinstance(v, Composite):
                assert verify(v.certificate)

    def test_small_and_even(self):
        for n in (2, 3):
            v = test_primality(n)
            assert isinstance(v, Prime) and verify(v.certificate, "classical")
        v = test_primality(4)
        assert isinstance(v, Composite)
        assert v.certificate.kind == "composite_gcd" and v.certificate.witness == {"g": 2}

    def test_rejects(self):
        with pytest.raises(InvalidInputError):
            test_primality(1)

    def test_deterministic_for_seed(self):
        a = test_primality(1000003, TestConfig(seed=77))
        b = test_primality(1000003, TestConfig(seed=77))
        assert a == b

    def test_large_prime(self):
        p = (1 << 61) - 1
        v = test_primality(p, TestConfig(seed=3))
        assert isinstance(v, Prime) and verify(v.certificate, "classical")

    def test_statevector_backend(self):
        v = test_primality(101, TestConfig(seed=2, qof=QofConfig(backend="statevector")))
        assert isinstance(v, Prime) and verify(v.certificate, "classical")

    def test_cap(self):
        assert TestConfig().effective_cap(101) == 10
        assert TestConfig(cap_min=1).effective_cap(2 ** 1000) == math.ceil(3 * math.log(1000))
        assert TestConfig(cap_mode="three_ln_ln_N", cap_min=1).effective_cap(101) == \
            math.ceil(3 * math.log(math.log(101)))

    def test_unlucky_prime_is_probably_composite(self):
        # a single-measurement, single-bit budget cannot prove anything
        cfg = TestConfig(cap_min=1, qof=QofConfig(control_bits=1, max_measurements=1, multiple_bound=1))
        v = test_primality(1009, cfg)
        assert isinstance(v, ProbablyComposite)
        assert v.certificate is None

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 1 << 20), st.integers(0, 2 ** 64 - 1))
    def test_sound(self, n, seed):
        v = test_primality(n, TestConfig(seed=seed))
        if isinstance(v, Prime):
            assert is_prime_trial(n)
        if isinstance(v, Composite):
            assert not is_prime_trial(n)
            assert verify(v.certificate)


class TestPrimePower:
    @pytest.mark.parametrize("n,p,k", [(9, 3, 2), (25, 5, 2), (27, 3, 3), (1024, 2, 10), (3 ** 7, 3, 7)])
    def test_examples(self, n, p, k):
        v = test_prime_power(n, TestConfig(seed=4))
        assert isinstance(v, PrimePower) and (v.p, v.k) == (p, k)
        assert verify(v.certificate)

    def test_not_a_power(self):
        for n in (15, 21, 45, 561):
            v = test_prime_power(n, TestConfig(seed=2))
            assert not isinstance(v, PrimePower)
            if v.certificate is not None:
                assert verify(v.certificate)

    def test_prime_is_not_a_power(self):
        assert not isinstance(test_prime_power(101), PrimePower)

    def test_never_claims_non_power(self):
        for n in range(4, 600):
            v = test_prime_power(n, TestConfig(seed=n))
            if isinstance(v, PrimePower):
                pp = perfect_power(n)
                assert pp is not None and v.p ** v.k == n and is_prime_trial(v.p)
