"""numba-compiled versions of the hot loops (see numpy_impl for contracts)."""

import numpy as np
from numba import njit

MAX_MODULUS = 1 << 31


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _powmod(b, e, n):
    result = 1 % n
    b %= n
    while e:
        if e & 1:
            result = result * b % n
        e >>= 1
        if e:
            b = b * b % n
    return result


@njit(cache=True)
def _powmod_vec(bases, exponent, n):
    out = np.empty(bases.shape[0], dtype=np.int64)
    for i in range(bases.shape[0]):
        out[i] = _powmod(bases[i], exponent, n)
    return out


def powmod_vec(bases, exponent, n):
    return _powmod_vec(np.asarray(bases, dtype=np.int64), np.int64(exponent), np.int64(n))


@njit(cache=True)
def _work_register(a, n, size):
    out = np.empty(size, dtype=np.int64)
    x = 1 % n
    a %= n
    for i in range(size):
        out[i] = x
        x = x * a % n
    return out


def work_register(a, n, size):
    return _work_register(np.int64(a), np.int64(n), size)


@njit(cache=True)
def _census_one(a, n, orders, audit):
    x = a % n
    r = 1
    while x != 1:
        x = x * a % n
        r += 1
    orders[a] = r
    if not audit:
        return 0
    # x == a**r == 1 here; continue the sequence out to 3r, tracking h mod r
    violations = 0
    phase = 0
    for _ in range(2 * r):
        x = x * a % n
        phase += 1
        if phase == r:
            phase = 0
        if (x == 1) != (phase == 0):
            violations += 1
    return violations


@njit(cache=True)
def _unit_order_census(n, audit):
    orders = np.zeros(n, dtype=np.int64)
    violations = 0
    if n == 1:
        return orders, violations
    small = n < 65536
    for a in range(1, n):
        if _gcd(a, n) != 1:
            continue
        if small:
            # 32-bit division is markedly cheaper and a*x < 2**32 here
            violations += _census_one(np.uint32(a), np.uint32(n), orders, audit)
        else:
            violations += _census_one(a, n, orders, audit)
    return orders, violations


def unit_order_census(n, audit=True):
    orders, violations = _unit_order_census(n, audit)
    return orders, int(violations)


@njit(cache=True)
def totient_sieve(limit):
    phi = np.arange(limit + 1).astype(np.int64)
    if limit >= 1:
        phi[1] = 1
    for p in range(2, limit + 1):
        if phi[p] == p:
            for k in range(p, limit + 1, p):
                phi[k] -= phi[k] // p
    return phi


@njit(cache=True)
def _phase_distribution(r, t):
    size = np.int64(1) << t
    m_lo = size // r
    m_hi = m_lo + 1
    c_hi = size % r
    c_lo = r - c_hi
    probs = np.empty(size, dtype=np.float64)
    norm = float(size) * float(size)
    for y in range(size):
        frac = y * (r % size) % size
        if frac == 0:
            total = c_lo * float(m_lo) * float(m_lo)
            if c_hi:
                total += c_hi * float(m_hi) * float(m_hi)
        else:
            s_den = np.sin(np.pi * frac / size)
            s_den *= s_den
            s_lo = np.sin(np.pi * (frac * m_lo % size) / size)
            total = c_lo * (s_lo * s_lo) / s_den
            if c_hi:
                s_hi = np.sin(np.pi * (frac * m_hi % size) / size)
                total += c_hi * (s_hi * s_hi) / s_den
        probs[y] = total / norm
    return probs


def phase_distribution(r, t):
    return _phase_distribution(np.int64(r), np.int64(t))


@njit(cache=True)
def strong_liar_count(n):
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    count = 0
    for a in range(1, n):
        if _gcd(a, n) != 1:
            continue
        x = _powmod(a, d, n)
        if x == 1 or x == n - 1:
            count += 1
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                count += 1
                break
    return count


@njit(cache=True)
def fermat_liar_count(n):
    count = 0
    for a in range(1, n):
        if _gcd(a, n) == 1 and _powmod(a, n - 1, n) == 1:
            count += 1
    return count


@njit(cache=True)
def _full_order_count(n, primes):
    m = n - 1
    count = 0
    for a in range(1, n):
        if _gcd(a, n) != 1 or _powmod(a, m, n) != 1:
            continue
        ok = True
        for p in primes:
            if _powmod(a, m // p, n) == 1:
                ok = False
                break
        if ok:
            count += 1
    return count


def full_order_count(n, primes):
    """Bases a in [1, n-1] passing the Lucas-Lehmer test (order exactly n-1)."""
    return int(_full_order_count(np.int64(n), np.asarray(primes, dtype=np.int64)))
