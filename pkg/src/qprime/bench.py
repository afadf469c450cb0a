"""Seeded workload with modular-multiplication counts.

Counts rather than asymptotic operation totals: for each bit length n the
workload tests a few n-bit primes, tallies multiplications per exponentiation
and per order-finding measurement, and runs a plain Miller-Rabin baseline on
the same inputs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ._rng import make_rng, randbelow, stream_for
from .numtheory import count_modmuls, decompose_pow2, is_prime_deterministic, modpow, mulmod
from .order_finding import QofConfig, find_order
from .primality import TestConfig, test_primality


def next_prime(m: int) -> int:
    m = max(m, 2)
    while not is_prime_deterministic(m):
        m += 1
    return m


def miller_rabin_baseline(n: int, k: int, rng) -> tuple[bool, int]:
    """Plain Miller-Rabin; returns (probably_prime, squarings after a**d)."""
    s, d = decompose_pow2(n - 1)
    squarings = 0
    for _ in range(k):
        a = 2 + randbelow(rng, n - 3)
        x = modpow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = mulmod(x, x, n)
            squarings += 1
            if x == n - 1:
                break
        else:
            return False, squarings
    return True, squarings


@dataclass
class BitRow:
    bits: int
    primes: list[int] = field(default_factory=list)
    mults_per_exponentiation: float = 0.0
    circuit_mults_per_measurement: float = 0.0
    classical_mults_per_measurement: float = 0.0
    test_mults: dict[str, list[int]] = field(default_factory=dict)
    mr_mults: int = 0
    mr_squarings: int = 0
    mr_squaring_bound: int = 0
    seconds: float = 0.0


@dataclass
class LinearFit:
    slope: float
    intercept: float
    max_rel_residual: float

    def ok(self, tolerance: float = 0.2) -> bool:
        return self.slope > 0 and self.max_rel_residual <= tolerance


def fit_linear(xs, ys) -> LinearFit:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * xs + intercept
    return LinearFit(float(slope), float(intercept), float(np.max(np.abs(ys - pred) / ys)))


def run_bench(seed: int = 0, bits=range(8, 25), per_bits: int = 4, bases: int = 8,
              mr_rounds: int = 16) -> list[BitRow]:
    rng = make_rng(seed)
    rows = []
    for nbits in bits:
        row = BitRow(nbits)
        start = time.perf_counter()
        exp_counts, circuit, classical, measures = [], 0, 0, 0
        while len(row.primes) < per_bits:
            p = next_prime((1 << (nbits - 1)) + randbelow(rng, 1 << (nbits - 1)))
            if p.bit_length() != nbits or p in row.primes:
                continue
            row.primes.append(p)
            stream = stream_for(seed, p)
            for _ in range(bases):
                a = 2 + randbelow(stream, p - 3)
                with count_modmuls() as c:
                    modpow(a, (p - 1) // 2, p)
                exp_counts.append(c.total)
                with count_modmuls() as c:
                    res = find_order(a, p, QofConfig(), stream)
                circuit += c.counts.get("circuit", 0)
                classical += c.counts.get("classical", 0)
                measures += res.measurements_used
            with count_modmuls() as c:
                verdict = test_primality(p, TestConfig(seed=seed, mr_rounds=mr_rounds), stream)
            row.test_mults.setdefault(verdict.label, []).append(c.total)
            with count_modmuls() as c:
                _, squarings = miller_rabin_baseline(p, mr_rounds, stream)
            row.mr_mults += c.total
            row.mr_squarings += squarings
            s, _ = decompose_pow2(p - 1)
            row.mr_squaring_bound += mr_rounds * (s + 1)
        row.mults_per_exponentiation = float(np.mean(exp_counts))
        row.circuit_mults_per_measurement = circuit / measures if measures else 0.0
        row.classical_mults_per_measurement = classical / measures if measures else 0.0
        row.seconds = time.perf_counter() - start
        rows.append(row)
    return rows


def summarize(rows: list[BitRow]) -> dict:
    bits = [r.bits for r in rows]
    exp_fit = fit_linear(bits, [r.mults_per_exponentiation for r in rows])
    circ_fit = fit_linear(bits, [r.circuit_mults_per_measurement for r in rows])
    return {
        "rows": [
            {
                "bits": r.bits,
                "primes": [str(p) for p in r.primes],
                "mults_per_exponentiation": r.mults_per_exponentiation,
                "circuit_mults_per_measurement": r.circuit_mults_per_measurement,
                "classical_mults_per_measurement": r.classical_mults_per_measurement,
                "test_mults": r.test_mults,
                "mr_mults": r.mr_mults,
                "mr_squarings": r.mr_squarings,
                "mr_squaring_bound": r.mr_squaring_bound,
                "seconds": r.seconds,
            }
            for r in rows
        ],
        "exponentiation_fit": vars(exp_fit) | {"ok": exp_fit.ok()},
        "circuit_fit": vars(circ_fit) | {"ok": circ_fit.ok()},
    }
