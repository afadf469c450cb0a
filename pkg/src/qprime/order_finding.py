"""Simulated order finding: phase-estimation outcomes and their classical decoding.

Two exact backends describe the control-register measurement of the order
finding circuit for ``U|w> = |a*w mod N>``:

* ``analytic`` takes the true order r from the classical oracle and evaluates
  the closed form ``P(y) = 2**(-2t) * sum_b G(m_b, y*r/2**t)``.  Sampling uses
  an exact rejection scheme, so nothing of size 2**t is ever allocated.
* ``statevector`` builds the register contents ``a**x mod N`` and Fourier
  transforms each work-value branch; it never looks at r.

Decoding follows the usual continued-fraction route, tests small multiples
of each denominator and combines failed measurements with lcm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from ._rng import make_rng, randbelow
from .errors import InvalidInputError, NotAUnitError, OrderFindingError, ResourceLimitError
from .numtheory import active_counter, lcm, modpow, mulmod, order_bruteforce, reduce_to_order

STATEVECTOR_MAX_BITS = 40
# dense vectors of 2**t doubles; above this the allocation is refused outright
DENSE_MAX_BITS = 26
BACKENDS = ("analytic", "statevector")


def default_control_bits(n: int) -> int:
    """2*bits(N) + 1, which guarantees 2**t >= N**2."""
    return 2 * n.bit_length() + 1


@dataclass(frozen=True)
class QofConfig:
    control_bits: int | None = None
    max_measurements: int = 20
    multiple_bound: int | None = None
    backend: str = "analytic"

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise InvalidInputError(f"unknown backend {self.backend!r}")
        if self.control_bits is not None and self.control_bits < 1:
            raise InvalidInputError("control_bits must be positive")
        if self.max_measurements < 1:
            raise InvalidInputError("max_measurements must be positive")
        if self.multiple_bound is not None and self.multiple_bound < 1:
            raise InvalidInputError("multiple_bound must be positive")

    def bits_for(self, n: int) -> int:
        return self.control_bits if self.control_bits is not None else default_control_bits(n)

    def bound_for(self, n: int) -> int:
        return self.multiple_bound if self.multiple_bound is not None else n.bit_length()


@dataclass
class OutcomeDistribution:
    t: int
    probabilities: np.ndarray

    def total_variation(self, other: "OutcomeDistribution") -> float:
        if self.t != other.t:
            raise InvalidInputError("distributions over different registers")
        return 0.5 * float(np.abs(self.probabilities - other.probabilities).sum())


@dataclass
class OrderResult:
    order: int
    measurements_used: int
    raw_outcomes: list[int] = field(default_factory=list)


def _check_unit(a: int, n: int) -> None:
    if n < 2:
        raise InvalidInputError("modulus must be >= 2")
    if math.gcd(a, n) != 1:
        raise NotAUnitError(f"{a} is not a unit modulo {n}")


def _check_dense(t: int, n: int) -> None:
    if t < 1:
        raise InvalidInputError("need at least one control bit")
    if t > DENSE_MAX_BITS:
        raise ResourceLimitError(
            f"a dense distribution over 2**{t} outcomes exceeds the 2**{DENSE_MAX_BITS} guard")
    if n >= kernels.MAX_MODULUS:
        raise ResourceLimitError("dense simulation is limited to moduli below 2**31")


def outcome_distribution_analytic(a: int, n: int, t: int) -> OutcomeDistribution:
    _check_unit(a, n)
    _check_dense(t, n)
    r = order_bruteforce(a, n)
    return OutcomeDistribution(t, kernels.phase_distribution(r, t))


def outcome_distribution_statevector(a: int, n: int, t: int) -> OutcomeDistribution:
    _check_unit(a, n)
    if t > STATEVECTOR_MAX_BITS:
        raise ResourceLimitError(f"statevector backend is capped at {STATEVECTOR_MAX_BITS} control bits")
    _check_dense(t, n)
    size = 1 << t
    work = kernels.work_register(a, n, size)
    _, branch = np.unique(work, return_inverse=True)
    branch = branch.reshape(-1)
    probs = np.zeros(size, dtype=np.float64)
    # measuring the work register leaves one branch; its control amplitudes
    # after the inverse QFT are (1/2**t) sum_x exp(2 pi i x y / 2**t) = ifft
    indicator = np.empty(size, dtype=np.float64)
    for w in range(int(branch.max()) + 1):
        np.equal(branch, w, out=indicator, casting="unsafe")
        amp = np.fft.ifft(indicator)
        probs += amp.real ** 2 + amp.imag ** 2
    return OutcomeDistribution(t, probs)


def sample_outcome(dist: OutcomeDistribution, rng) -> int:
    rng = make_rng(rng)
    cdf = np.cumsum(dist.probabilities)
    y = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return min(y, len(cdf) - 1)


def _fejer_weight(m: int, z: int, period: int) -> float:
    """|sum_{k<m} exp(2 pi i k z / period)|**2, exact m**2 on the singular point."""
    z %= period
    if z == 0:
        return float(m) * float(m)
    num = math.sin(math.pi * ((m * z) % period) / period)
    den = math.sin(math.pi * z / period)
    return (num * num) / (den * den)


def _sample_fejer(m: int, period: int, rng: np.random.Generator) -> int:
    """Draw z in Z_period with probability proportional to _fejer_weight(m, z, period).

    Rejection sampling against min(m**2, period**2 / (4 z**2)) on the signed
    representatives; the 1/z**2 tail is drawn through the telescoping
    envelope 1/(z-1) - 1/z so that it can be inverted in closed form.
    """
    c = max(1, period // (2 * m))
    zpos, zneg = period // 2, (period - 1) // 2
    flat_lo, flat_hi = -min(c, zneg), min(c, zpos)
    n_flat = flat_hi - flat_lo + 1
    mm = float(m) * float(m)
    scale = float(period) * float(period) / 4.0
    w_flat = n_flat * mm
    w_pos = scale * (1.0 / c - 1.0 / zpos) if zpos > c else 0.0
    w_neg = scale * (1.0 / c - 1.0 / zneg) if zneg > c else 0.0
    total = w_flat + w_pos + w_neg
    while True:
        u = rng.random() * total
        if u < w_flat:
            z = flat_lo + randbelow(rng, n_flat)
            envelope = mm
        else:
            zmax, sign = (zpos, 1) if u < w_flat + w_pos else (zneg, -1)
            inv = 1.0 / c - rng.random() * (1.0 / c - 1.0 / zmax)
            mag = min(max(math.ceil(1.0 / inv), c + 1), zmax)
            z = sign * mag
            envelope = scale / (mag * (mag - 1.0))
        if rng.random() * envelope < _fejer_weight(m, z, period):
            return z % period


def sample_outcome_analytic(a: int, n: int, t: int, rng, order: int | None = None) -> int:
    """One exact draw from the analytic outcome law without materializing it.

    The work register collapses to a residue class b (weight m_b / 2**t);
    the control register then follows a Fejer law in y*r mod 2**t, which is
    reduced to the cyclic group of size 2**t / gcd(r, 2**t) and mapped back.
    """
    _check_unit(a, n)
    rng = make_rng(rng)
    r = order if order is not None else order_bruteforce(a, n)
    size = 1 << t
    b = randbelow(rng, size) % r
    m = (size - 1 - b) // r + 1
    g = min(r & -r, size)
    period = size // g
    z = _sample_fejer(m, period, rng)
    y0 = z * pow(r // g, -1, period) % period if period > 1 else 0
    return y0 + randbelow(rng, g) * period


def convergents(y: int, denominator: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents (p, q) of y/denominator, ascending q."""
    if denominator < 1 or not 0 <= y < denominator:
        raise InvalidInputError("need 0 <= y < denominator")
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = y, denominator
    while den:
        a_k, rem = divmod(num, den)
        p0, p1 = p1, a_k * p1 + p0
        q0, q1 = q1, a_k * q1 + q0
        out.append((p1, q1))
        num, den = den, rem
    assert Fraction(*out[-1]) == Fraction(y, denominator)
    return out


def _candidate_denominators(y: int, t: int, n: int) -> list[int]:
    # p = 0 carries no phase information (y = 0 or the leading 0/1 term)
    return [q for p, q in convergents(y, 1 << t) if p and q <= n]


def recover_order(y: int, t: int, a: int, n: int, multiple_bound: int) -> int | None:
    """Smallest verified c*q over convergent denominators q <= N and 1 <= c <= bound."""
    best = None
    for q in _candidate_denominators(y, t, n):
        step = modpow(a, q, n)
        x = step
        for c in range(1, multiple_bound + 1):
            if best is not None and c * q >= best:
                break
            if x == 1:
                best = c * q
                break
            x = mulmod(x, step, n)
    return best


def combine_measurements(q1: int, q2: int, a: int, n: int) -> int | None:
    if q1 < 1 or q2 < 1:
        raise InvalidInputError("denominators must be positive")
    cand = lcm(q1, q2)
    return cand if modpow(a, cand, n) == 1 else None


@lru_cache(maxsize=16)
def _statevector_cached(a: int, n: int, t: int) -> OutcomeDistribution:
    return outcome_distribution_statevector(a, n, t)


def _measure(a: int, n: int, t: int, backend: str, rng, order: int | None) -> int:
    counter = active_counter()
    if counter is not None:
        # circuit constants a**(2**j) and one controlled multiply per control qubit
        counter.add(t - 1, "classical")
        counter.add(t, "circuit")
    if backend == "statevector":
        return sample_outcome(_statevector_cached(a, n, t), rng)
    return sample_outcome_analytic(a, n, t, rng, order=order)


def find_order(a: int, n: int, config: QofConfig | None = None, rng=None) -> OrderResult:
    """Order of a mod N from simulated measurements.

    Raises OrderFindingError once ``max_measurements`` draws fail to produce
    a verified order.
    """
    if n < 3:
        raise InvalidInputError("find_order needs N >= 3")
    _check_unit(a, n)
    config = config or QofConfig()
    rng = make_rng(rng)
    if a % n == 1:
        return OrderResult(1, 0, [])
    t = config.bits_for(n)
    bound = config.bound_for(n)
    if config.backend == "statevector" and t > STATEVECTOR_MAX_BITS:
        raise ResourceLimitError(f"statevector backend is capped at {STATEVECTOR_MAX_BITS} control bits")
    true_order = order_bruteforce(a, n) if config.backend == "analytic" else None
    raw: list[int] = []
    partials: list[int] = []
    for used in range(1, config.max_measurements + 1):
        y = _measure(a, n, t, config.backend, rng, true_order)
        raw.append(y)
        r = recover_order(y, t, a, n, bound)
        if r is None:
            qs = _candidate_denominators(y, t, n)
            if qs:
                q = qs[-1]
                for prev in partials:
                    r = combine_measurements(prev, q, a, n)
                    if r is not None:
                        break
                partials.append(q)
        if r is not None:
            return OrderResult(reduce_to_order(a, n, r), used, raw)
    raise OrderFindingError(
        f"no verified order for a={a} mod {n} after {config.max_measurements} measurements", raw)
