"""Batch checks over integer ranges: verdict soundness, density bounds, theorem audits."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._rng import stream_for
from .certificates import verify
from .errors import InvalidInputError
from .numtheory import (
    DENSITY_THRESHOLD, E_GAMMA, RS_ADDITIVE, euler_phi, factorize, is_prime_trial, rosser_schoenfeld_bound,
    simple_density_bound,
)
from .primality import TestConfig, test_primality


def prime_sieve(limit: int) -> np.ndarray:
    """Boolean primality table for 0..limit."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


def carmichael_numbers(limit: int) -> list[int]:
    """Composite squarefree n <= limit with (p-1) | (n-1) for each prime p | n."""
    out = []
    for n in range(3, limit + 1, 2):
        f = factorize(n)
        if len(f) < 2 or any(e > 1 for _, e in f):
            continue
        if all((n - 1) % (p - 1) == 0 for p, _ in f):
            out.append(n)
    return out


# ---------------------------------------------------------------------------
# verdict sweeps

@dataclass
class RangeSummary:
    lo: int
    hi: int
    tested: int = 0
    primes: int = 0
    proved: int = 0
    verdicts: Counter = field(default_factory=Counter)
    iterations: Counter = field(default_factory=Counter)
    soundness_violations: list[int] = field(default_factory=list)
    unverified_certificates: list[int] = field(default_factory=list)

    @property
    def completeness(self) -> float:
        return self.proved / self.primes if self.primes else 1.0

    def merge(self, other: "RangeSummary") -> None:
        self.tested += other.tested
        self.primes += other.primes
        self.proved += other.proved
        self.verdicts += other.verdicts
        self.iterations += other.iterations
        self.soundness_violations += other.soundness_violations
        self.unverified_certificates += other.unverified_certificates

    def to_dict(self) -> dict:
        return {
            "lo": str(self.lo), "hi": str(self.hi), "tested": self.tested,
            "primes": self.primes, "proved": self.proved,
            "completeness": self.completeness,
            "verdicts": dict(self.verdicts),
            "iteration_histogram": {str(k): v for k, v in sorted(self.iterations.items())},
            "soundness_violations": [str(n) for n in self.soundness_violations],
            "unverified_certificates": [str(n) for n in self.unverified_certificates],
        }


def _sweep_chunk(args) -> RangeSummary:
    lo, hi, config, check_certs = args
    summary = RangeSummary(lo, hi)
    for n in range(lo, hi + 1):
        verdict = test_primality(n, config, stream_for(config.seed, n))
        is_prime = is_prime_trial(n)
        summary.tested += 1
        summary.verdicts[verdict.label] += 1
        summary.iterations[verdict.iterations] += 1
        if is_prime:
            summary.primes += 1
            summary.proved += verdict.label == "prime"
        if (verdict.label == "prime") != is_prime and verdict.label != "probably_composite":
            summary.soundness_violations.append(n)
        if check_certs and verdict.certificate is not None and not verify(verdict.certificate, "classical"):
            summary.unverified_certificates.append(n)
    return summary


def range_sweep(lo: int, hi: int, config: TestConfig | None = None, jobs: int = 1,
                check_certs: bool = True) -> RangeSummary:
    """Run test_primality on every n in [lo, hi] against trial division.

    Each n gets its own random stream derived from (seed, n), so the result
    does not depend on ``jobs``.
    """
    if lo < 2 or hi < lo:
        raise InvalidInputError("range needs 2 <= lo <= hi")
    config = config or TestConfig()
    if jobs <= 1:
        return _sweep_chunk((lo, hi, config, check_certs))
    step = max(1, (hi - lo + 1) // (8 * jobs))
    chunks = [(s, min(s + step - 1, hi), config, check_certs) for s in range(lo, hi + 1, step)]
    total = RangeSummary(lo, hi)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_sweep_chunk, chunks):
            total.merge(part)
    return total


# ---------------------------------------------------------------------------
# density bounds

@dataclass(frozen=True)
class DensityRow:
    n: int
    phi_ratio: float
    bound_eq6: float
    bound_eq7: float
    flag: str


def _flag(m: int, ratio: float, simple: float, rs: float) -> str:
    if m < 3:
        return "below-threshold"
    if ratio <= rs:
        return "violation"
    if m <= DENSITY_THRESHOLD:
        return "below-threshold"
    return "ok" if ratio > simple else "violation"


def density_rows(lo: int, hi: int) -> list[DensityRow]:
    """phi(N-1)/(N-1) against both lower bounds for every prime N in [lo, hi]."""
    if lo < 3 or hi < lo:
        raise InvalidInputError("density needs 3 <= lo <= hi")
    phi = kernels.totient_sieve(hi)
    primes = np.flatnonzero(prime_sieve(hi))
    rows = []
    for n in primes[primes >= lo]:
        n = int(n)
        m = n - 1
        ratio = int(phi[m]) / m
        if m >= 3:
            simple, rs = simple_density_bound(m), rosser_schoenfeld_bound(m)
        else:
            simple = rs = math.nan
        rows.append(DensityRow(n, ratio, simple, rs, _flag(m, ratio, simple, rs)))
    return rows


def density_ratio_array(limit: int) -> np.ndarray:
    """phi(m)/m for 0..limit as doubles (index 0 set to nan)."""
    phi = kernels.totient_sieve(limit)
    m = np.arange(limit + 1, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = phi / m
    ratio[0] = np.nan
    return ratio


def rs_violations(lo: int, hi: int) -> list[int]:
    """m in [lo, hi] where phi(m)/m does not exceed the Rosser-Schoenfeld bound."""
    lo = max(lo, 3)
    ratio = density_ratio_array(hi)
    m = np.arange(lo, hi + 1, dtype=np.float64)
    ll = np.log(np.log(m))
    bound = 1.0 / (E_GAMMA * ll + RS_ADDITIVE / ll)
    return [int(x) for x in np.flatnonzero(ratio[lo:] <= bound) + lo]


def simple_bound_violations(limit: int, threshold: float = DENSITY_THRESHOLD) -> list[int]:
    """Primes N <= limit with N-1 > threshold and phi(N-1)/(N-1) <= 1/(3 ln ln(N-1))."""
    ratio = density_ratio_array(limit)
    primes = np.flatnonzero(prime_sieve(limit))
    m = primes - 1
    m = m[m > threshold]
    bound = 1.0 / (3.0 * np.log(np.log(m.astype(np.float64))))
    return [int(x) + 1 for x in m[ratio[m] <= bound]]


# ---------------------------------------------------------------------------
# group-theory audits

@dataclass
class TheoremAudit:
    limit: int
    order_divides_phi: int = 0       # ord(a) | phi(N)
    order_census: int = 0            # #{ord = d} == phi(d) for primes
    divisibility_law: int = 0        # a^h == 1  <=>  ord(a) | h, h <= 3 ord(a)
    fermat: int = 0                  # a^(p-1) == 1 for primes

    @property
    def total(self) -> int:
        return self.order_divides_phi + self.order_census + self.divisibility_law + self.fermat


def theorem_audit(limit: int, lo: int = 2) -> TheoremAudit:
    """Exhaustive check of the unit-group facts the test relies on, for lo <= N <= limit."""
    audit = TheoremAudit(limit)
    primes = prime_sieve(limit)
    for n in range(lo, limit + 1):
        orders, law_violations = kernels.unit_order_census(n)
        audit.divisibility_law += law_violations
        phi = euler_phi(n)
        units = np.flatnonzero(orders)
        audit.order_divides_phi += int(np.count_nonzero(phi % orders[units]))
        if primes[n]:
            counts = np.bincount(orders[units], minlength=n)
            for d in range(1, n):
                expected = euler_phi(d) if (n - 1) % d == 0 else 0
                if counts[d] != expected:
                    audit.order_census += 1
            bases = np.arange(1, n, dtype=np.int64)
            audit.fermat += int(np.count_nonzero(kernels.powmod_vec(bases, n - 1, n) != 1))
    return audit
