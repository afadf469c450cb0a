"""Pure-numpy versions of the hot loops.

Same signatures and results as :mod:`qprime.kernels.numba_impl`.  Moduli must
stay below 2**31 so that a product of two residues fits in int64.
"""

import numpy as np

MAX_MODULUS = 1 << 31


def powmod_vec(bases, exponent, n):
    """Elementwise ``bases**exponent % n`` for an int64 array of bases."""
    result = np.ones(len(bases), dtype=np.int64)
    sq = np.asarray(bases, dtype=np.int64) % n
    e = int(exponent)
    while e:
        if e & 1:
            result = result * sq % n
        e >>= 1
        if e:
            sq = sq * sq % n
    return result % n


def work_register(a, n, size):
    """``a**x % n`` for x in [0, size), filled by doubling blocks."""
    out = np.empty(size, dtype=np.int64)
    out[0] = 1 % n
    filled = 1
    step = a % n  # a**filled
    while filled < size:
        take = min(filled, size - filled)
        out[filled:filled + take] = out[:take] * step % n
        filled += take
        step = step * step % n
    return out


def unit_order_census(n, audit=True):
    """Literal orders of every unit mod n, plus a divisibility-law audit.

    Returns ``(orders, violations)``: ``orders[a]`` is the least r >= 1 with
    a**r == 1 (0 for non-units) and ``violations`` counts exponents
    h <= 3*ord(a) where ``a**h == 1`` disagrees with ``ord(a) | h``
    (always 0 when ``audit`` is false, which skips the replay).
    """
    a = np.arange(n, dtype=np.int64)
    units = a[np.gcd(a, n) == 1] if n > 1 else a[:0]
    orders = np.zeros(n, dtype=np.int64)
    if n == 1:
        return orders, 0
    x = units % n
    found = np.zeros(len(units), dtype=np.int64)
    h = 1
    pending = np.ones(len(units), dtype=bool)
    while pending.any():
        hit = pending & (x == 1)
        found[hit] = h
        pending &= ~hit
        x = x * units % n
        h += 1
    orders[units] = found
    if not audit:
        return orders, 0
    # replay the sequence to 3*ord and compare with the divisibility law
    violations = 0
    x = units % n
    limit = 3 * found
    for h in range(1, int(limit.max()) + 1):
        live = h <= limit
        is_one = x == 1
        divides = h % found == 0
        violations += int(np.count_nonzero(live & (is_one != divides)))
        x = x * units % n
    return orders, violations


def totient_sieve(limit):
    """phi(m) for 0 <= m <= limit (phi(0) stored as 0)."""
    phi = np.arange(limit + 1, dtype=np.int64)
    if limit >= 1:
        phi[1] = 1
    is_comp = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if is_comp[p]:
            continue
        is_comp[2 * p::p] = True
        phi[p::p] -= phi[p::p] // p
    return phi


def _fejer(m, num, den, size):
    # sin^2(pi m alpha) / sin^2(pi alpha) with alpha = den/size; exact m^2 at alpha integer
    out = np.empty(len(den), dtype=np.float64)
    zero = den == 0
    out[zero] = float(m) * float(m)
    nz = ~zero
    s_num = np.sin(np.pi * num[nz] / size)
    s_den = np.sin(np.pi * den[nz] / size)
    out[nz] = (s_num * s_num) / (s_den * s_den)
    return out


def phase_distribution(r, t):
    """Outcome probabilities of order finding with true order r and t control bits."""
    size = 1 << t
    y = np.arange(size, dtype=np.int64)
    frac = y * (r % size) % size
    m_lo = size // r
    c_hi = size % r
    c_lo = r - c_hi
    probs = c_lo * _fejer(m_lo, frac * (m_lo % size) % size, frac, size)
    if c_hi:
        m_hi = m_lo + 1
        probs += c_hi * _fejer(m_hi, frac * (m_hi % size) % size, frac, size)
    return probs / (float(size) * float(size))


def strong_liar_count(n):
    """Units a in [1, n-1] passing the Miller-Rabin condition for odd n."""
    m = n - 1
    s = 0
    d = m
    while d % 2 == 0:
        d //= 2
        s += 1
    a = np.arange(1, n, dtype=np.int64)
    a = a[np.gcd(a, n) == 1]
    x = powmod_vec(a, d, n)
    liar = (x == 1) | (x == n - 1)
    for _ in range(s - 1):
        x = x * x % n
        liar |= x == n - 1
    return int(np.count_nonzero(liar))


def fermat_liar_count(n):
    a = np.arange(1, n, dtype=np.int64)
    a = a[np.gcd(a, n) == 1]
    return int(np.count_nonzero(powmod_vec(a, n - 1, n) == 1))


def full_order_count(n, primes):
    """Bases a in [1, n-1] passing the Lucas-Lehmer test (order exactly n-1)."""
    a = np.arange(1, n, dtype=np.int64)
    a = a[np.gcd(a, n) == 1]
    ok = powmod_vec(a, n - 1, n) == 1
    for p in primes:
        ok &= powmod_vec(a, (n - 1) // int(p), n) != 1
    return int(np.count_nonzero(ok))
