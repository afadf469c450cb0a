"""Modular arithmetic, desk-scale oracles and totient-density bounds.

Every integer is a plain Python ``int`` so nothing here overflows.  The
brute-force helpers (``order_bruteforce``, ``euler_phi``, ``factorize``) are
meant for moduli up to roughly 2**24; they are the reference answers the
rest of the package is tested against.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple

from .errors import InvalidInputError, NotAUnitError

EULER_MASCHERONI = 0.5772156649015329
E_GAMMA = math.exp(EULER_MASCHERONI)
RS_ADDITIVE = 2.50637
# Cut-off above which 1/(3 ln ln M) is implied by the Rosser-Schoenfeld
# bound.  Re-deriving it from the constants gives ~66.36; see density_crossover().
DENSITY_THRESHOLD = 49.2


@dataclass(frozen=True)
class DensityConstants:
    euler_mascheroni: float = EULER_MASCHERONI
    e_gamma: float = E_GAMMA
    rs_additive: float = RS_ADDITIVE
    threshold: float = DENSITY_THRESHOLD


class Pow2Decomposition(NamedTuple):
    s: int
    d: int


class DensityBounds(NamedTuple):
    ratio: Fraction
    rs_bound: float
    simple_bound: float


# ---------------------------------------------------------------------------
# multiplication counting (used by the benchmark)

class MulCounter:
    """Tally of modular multiplications, split by origin."""

    def __init__(self):
        self.counts: dict[str, int] = {}
        self.exponentiations: list[tuple[int, int]] = []  # (bits(modulus), mults)

    def add(self, n: int = 1, kind: str = "classical") -> None:
        self.counts[kind] = self.counts.get(kind, 0) + n

    @property
    def total(self) -> int:
        return sum(self.counts.values())


_COUNTER: contextvars.ContextVar[MulCounter | None] = contextvars.ContextVar(
    "qprime_mul_counter", default=None)


@contextmanager
def count_modmuls() -> Iterator[MulCounter]:
    """Count modular multiplications performed inside the ``with`` block."""
    counter = MulCounter()
    token = _COUNTER.set(counter)
    try:
        yield counter
    finally:
        _COUNTER.reset(token)


def active_counter() -> MulCounter | None:
    return _COUNTER.get()


def mulmod(x: int, y: int, n: int) -> int:
    counter = _COUNTER.get()
    if counter is not None:
        counter.add()
    return x * y % n


# ---------------------------------------------------------------------------
# basic arithmetic

def gcd(a: int, b: int) -> int:
    """Greatest common divisor by Euclid's algorithm."""
    if a < 0 or b < 0:
        raise InvalidInputError("gcd expects non-negative integers")
    if a == 0 and b == 0:
        raise InvalidInputError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _square_and_multiply(base: int, exponent: int, modulus: int, counter: MulCounter) -> int:
    # left-to-right; the leading 1 bit just loads the base
    result = base
    mults = 0
    for bit in bin(exponent)[3:]:
        result = result * result % modulus
        mults += 1
        if bit == "1":
            result = result * base % modulus
            mults += 1
    counter.add(mults)
    counter.exponentiations.append((modulus.bit_length(), mults))
    return result % modulus


def modpow(base: int, exponent: int, modulus: int) -> int:
    """Return ``base**exponent % modulus`` by binary exponentiation.

    Uses the built-in ``pow`` (itself a square-and-multiply routine) unless a
    :func:`count_modmuls` block is active, in which case an explicit
    left-to-right loop runs so every multiplication is tallied.
    """
    if modulus < 2:
        raise InvalidInputError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise InvalidInputError("negative exponents are not supported")
    base %= modulus
    counter = _COUNTER.get()
    if counter is None:
        return pow(base, exponent, modulus)
    if exponent == 0:
        return 1
    return _square_and_multiply(base, exponent, modulus, counter)


def decompose_pow2(m: int) -> Pow2Decomposition:
    """Split ``m`` as ``2**s * d`` with ``d`` odd."""
    if m < 1:
        raise InvalidInputError("decompose_pow2 needs m >= 1")
    s = (m & -m).bit_length() - 1
    return Pow2Decomposition(s, m >> s)


def jacobi(a: int, n: int) -> int:
    if n < 3 or n % 2 == 0:
        raise InvalidInputError(f"Jacobi symbol needs odd n >= 3, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def integer_nth_root(m: int, k: int) -> int:
    """floor(m ** (1/k)) computed exactly with integer Newton steps."""
    if k < 1:
        raise InvalidInputError("root index must be >= 1")
    if m < 0:
        raise InvalidInputError("integer_nth_root needs m >= 0")
    if m < 2 or k == 1:
        return m
    if k == 2:
        return math.isqrt(m)
    x = 1 << -(-m.bit_length() // k)  # power of two >= true root
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def perfect_power(m: int) -> tuple[int, int] | None:
    """Return ``(b, k)`` with ``b**k == m``, ``k >= 2`` and ``b`` minimal, else None."""
    if m < 2:
        raise InvalidInputError("perfect_power needs m >= 2")
    for k in range(m.bit_length(), 1, -1):
        b = integer_nth_root(m, k)
        if b >= 2 and b ** k == m:
            return b, k
    return None


# ---------------------------------------------------------------------------
# primality / factorization oracles

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 1 << 16


def is_prime_trial(n: int) -> bool:
    """Trial-division primality; the ground-truth oracle for desk-scale sweeps."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_prime_deterministic(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n >= 3317044064679887385961981:
        raise InvalidInputError("deterministic check only covers n < 3.3e24")
    s, d = decompose_pow2(n - 1)
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise InvalidInputError(f"Pollard rho failed to split {n}")


def _split_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime_deterministic(n):
        out[n] = out.get(n, 0) + 1
        return
    g = _pollard_brent(n)
    _split_into(g, out)
    _split_into(n // g, out)


@lru_cache(maxsize=1 << 16)
def _factorize_cached(m: int) -> tuple[tuple[int, int], ...]:
    factors: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    f, step = 5, 2
    while f * f <= m and f < _TRIAL_LIMIT:
        while m % f == 0:
            factors[f] = factors.get(f, 0) + 1
            m //= f
        f += step
        step = 6 - step
    if m > 1:
        if f * f > m:
            factors[m] = factors.get(m, 0) + 1
        else:
            _split_into(m, factors)
    return tuple(sorted(factors.items()))


def factorize(m: int) -> list[tuple[int, int]]:
    """Prime factorization as ``[(p, e), ...]`` with ascending primes.

    Trial division (6k±1 wheel) up to 2**16, then Pollard-Brent on whatever
    cofactor remains.
    """
    if m < 2:
        raise InvalidInputError(f"factorize needs m >= 2, got {m}")
    return list(_factorize_cached(m))


def euler_phi(m: int) -> int:
    if m < 1:
        raise InvalidInputError("euler_phi needs m >= 1")
    if m == 1:
        return 1
    result = m
    for p, _ in factorize(m):
        result -= result // p
    return result


def carmichael_lambda(m: int) -> int:
    """Exponent of the unit group mod m (every unit order divides it)."""
    if m < 1:
        raise InvalidInputError("carmichael_lambda needs m >= 1")
    if m <= 2:
        return 1
    result = 1
    for p, e in factorize(m):
        if p == 2 and e >= 3:
            part = 1 << (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        result = lcm(result, part)
    return result


def reduce_to_order(a: int, n: int, multiple: int) -> int:
    """Shrink a known multiple of ord(a) to the exact order."""
    if multiple == 1:
        return 1
    order = multiple
    for p, _ in factorize(multiple):
        while order % p == 0 and modpow(a, order // p, n) == 1:
            order //= p
    return order


def order_bruteforce(a: int, n: int, method: str = "auto") -> int:
    """Multiplicative order of ``a`` modulo ``n``.

    ``method="iterate"`` multiplies until 1 appears (literal definition, used
    as the cross-check below 2**16).  ``"auto"`` reduces the group exponent
    by its prime factors, which gives the same minimal value much faster.
    """
    if n < 2:
        raise InvalidInputError("modulus must be >= 2")
    a %= n
    if math.gcd(a, n) != 1:
        raise NotAUnitError(f"{a} is not a unit modulo {n}")
    if n == 2 or a == 1:
        return 1
    if method == "iterate":
        x, r = a, 1
        while x != 1:
            x = x * a % n
            r += 1
        return r
    if method != "auto":
        raise InvalidInputError(f"unknown method {method!r}")
    return reduce_to_order(a, n, carmichael_lambda(n))


# ---------------------------------------------------------------------------
# density bounds

def _lnln(m) -> float:
    return math.log(math.log(m))


def rosser_schoenfeld_bound(m: int) -> float:
    ll = _lnln(m)
    return 1.0 / (E_GAMMA * ll + RS_ADDITIVE / ll)


def simple_density_bound(m: int) -> float:
    return 1.0 / (3.0 * _lnln(m))


def nicolas_bound(m: int) -> float:
    """1/(e^gamma ln ln m): infinitely many m have phi(m)/m below this."""
    return 1.0 / (E_GAMMA * _lnln(m))


def density_crossover(e_gamma: float = 1.781, additive: float = RS_ADDITIVE) -> float:
    """M above which the Rosser-Schoenfeld bound implies 1/(3 ln ln M)."""
    return math.exp(math.exp(math.sqrt(additive / (3.0 - e_gamma))))


def density_lower_bound(m: int) -> DensityBounds:
    """phi(m)/m exactly, with the Rosser-Schoenfeld and 1/(3 ln ln m) bounds."""
    if m < 3:
        raise InvalidInputError("density bounds need m >= 3 (ln ln m must be defined)")
    return DensityBounds(Fraction(euler_phi(m), m), rosser_schoenfeld_bound(m),
                         simple_density_bound(m))
