"""Primality certificates and compositeness witnesses.

A ``quantum_prime`` certificate is just a base ``a`` claimed to have order
n-1.  It can be checked two ways: by simulated order finding
(:func:`verify_quantum`) or classically from the factorization of n-1
(:func:`verify_classical`).  The JSON encoding keeps every integer as a
decimal string.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Any

from .errors import CertificateError, IndeterminateError, InvalidInputError, OrderFindingError
from .numtheory import decompose_pow2, factorize, is_prime_deterministic, modpow
from .order_finding import QofConfig, find_order

VERSION = 1
KINDS = {
    "quantum_prime": ("a",),
    "composite_gcd": ("g",),
    "composite_euler": ("a",),
    "composite_strong": ("a",),
    "composite_fermat": ("a",),
    "prime_power": ("p", "k"),
}
OPTIONAL_WITNESS = {"prime_power": ("a",)}
COMPOSITE_KINDS = ("composite_gcd", "composite_euler", "composite_strong", "composite_fermat")
META_FIELDS = ("seed", "mr_rounds", "control_bits", "iterations")
_DECIMAL = re.compile(r"0|[1-9][0-9]*")


@dataclass
class Certificate:
    n: int
    kind: str
    witness: dict[str, int]
    meta: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CertificateError(f"unknown certificate kind {self.kind!r}")

    @property
    def is_composite(self) -> bool:
        return self.kind in COMPOSITE_KINDS

    def to_dict(self) -> dict[str, Any]:
        meta = {
            "seed": str(self.meta.get("seed", 0)),
            "mr_rounds": int(self.meta.get("mr_rounds", 0)),
            "control_bits": int(self.meta.get("control_bits", 0)),
            "iterations": int(self.meta.get("iterations", 0)),
        }
        return {
            "version": VERSION,
            "n": str(self.n),
            "kind": self.kind,
            "witness": {k: str(v) for k, v in self.witness.items()},
            "meta": meta,
        }


def serialize(cert: Certificate) -> bytes:
    return json.dumps(cert.to_dict(), indent=2, sort_keys=True).encode() + b"\n"


def _decimal(value, where: str) -> int:
    if not isinstance(value, str) or not _DECIMAL.fullmatch(value):
        raise CertificateError(f"{where} must be a decimal string, got {value!r}")
    return int(value)


def _plain_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise CertificateError(f"{where} must be a non-negative integer, got {value!r}")
    return value


def _check_keys(obj, required, optional, where, strict):
    if not isinstance(obj, dict):
        raise CertificateError(f"{where} must be an object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise CertificateError(f"{where} is missing {', '.join(missing)}")
    extra = set(obj) - set(required) - set(optional)
    if extra and strict:
        raise CertificateError(f"{where} has unknown fields {sorted(extra)}")


def from_dict(doc, strict: bool = True) -> Certificate:
    _check_keys(doc, ("version", "n", "kind", "witness", "meta"), (), "certificate", strict)
    if doc["version"] != VERSION:
        raise CertificateError(f"unsupported version {doc['version']!r}")
    kind = doc["kind"]
    if kind not in KINDS:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    n = _decimal(doc["n"], "n")
    optional = OPTIONAL_WITNESS.get(kind, ())
    _check_keys(doc["witness"], KINDS[kind], optional, "witness", strict)
    witness = {k: _decimal(doc["witness"][k], f"witness.{k}")
               for k in KINDS[kind] + optional if k in doc["witness"]}
    _check_keys(doc["meta"], META_FIELDS, (), "meta", strict)
    meta = {"seed": _decimal(doc["meta"]["seed"], "meta.seed")}
    for key in META_FIELDS[1:]:
        meta[key] = _plain_int(doc["meta"][key], f"meta.{key}")
    return Certificate(n, kind, witness, meta)


def parse(data: bytes | str, strict: bool = True) -> Certificate:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CertificateError(f"not valid JSON: {exc}") from None
    return from_dict(doc, strict=strict)


# ---------------------------------------------------------------------------
# verification

def _require(cert: Certificate, *kinds: str) -> None:
    if cert.kind not in kinds:
        raise CertificateError(f"expected a {' or '.join(kinds)} certificate, got {cert.kind}")


def _base_in_range(a: int, n: int) -> bool:
    # n = 2 is the one prime whose only unit, 1, has order n-1
    return 1 < a < n or (n == 2 and a == 1)


def has_order_n_minus_1(a: int, n: int) -> bool:
    """Lucas-Lehmer check: a**(n-1) == 1 and a**((n-1)/p) != 1 for primes p | n-1."""
    if n < 2 or not _base_in_range(a, n):
        return False
    if n == 2:
        return True
    if modpow(a, n - 1, n) != 1:
        return False
    try:
        primes = [p for p, _ in factorize(n - 1)]
    except InvalidInputError as exc:
        raise IndeterminateError(f"cannot factor n-1: {exc}") from None
    return all(modpow(a, (n - 1) // p, n) != 1 for p in primes)


def verify_classical(cert: Certificate) -> bool:
    _require(cert, "quantum_prime")
    return has_order_n_minus_1(cert.witness["a"], cert.n)


def verify_quantum(cert: Certificate, qof: QofConfig | None = None, rng=None) -> bool:
    """Run simulated order finding on the certificate base; True iff ord(a) = n-1."""
    _require(cert, "quantum_prime")
    n, a = cert.n, cert.witness["a"]
    if n < 2 or not _base_in_range(a, n):
        return False
    if n == 2:
        return True
    if math.gcd(a, n) != 1:
        return False
    try:
        result = find_order(a, n, qof or QofConfig(), rng)
    except OrderFindingError as exc:
        raise IndeterminateError(str(exc)) from None
    return result.order == n - 1


def verify_composite(cert: Certificate) -> bool:
    _require(cert, *COMPOSITE_KINDS)
    n = cert.n
    if cert.kind == "composite_gcd":
        g = cert.witness["g"]
        return 1 < g < n and n % g == 0
    a = cert.witness["a"]
    if not 1 < a < n:
        return False
    if cert.kind == "composite_fermat":
        return modpow(a, n - 1, n) != 1
    if n % 2 == 0:
        return False
    if cert.kind == "composite_euler":
        return modpow(a, (n - 1) // 2, n) not in (1, n - 1)
    s, d = decompose_pow2(n - 1)
    x = modpow(a, d, n)
    if x == 1:
        return False
    for _ in range(s):
        if x == n - 1:
            return False
        x = x * x % n
    return True


def verify_prime_power(cert: Certificate) -> bool:
    _require(cert, "prime_power")
    p, k, n = cert.witness["p"], cert.witness["k"], cert.n
    if k < 2 or p < 2 or p ** k != n:
        return False
    a = cert.witness.get("a")
    if a is not None and (not 1 < a < n or math.gcd(a, n) != 1):
        return False
    try:
        return is_prime_deterministic(p)
    except InvalidInputError as exc:
        raise IndeterminateError(str(exc)) from None


def verify(cert: Certificate, mode: str = "both", qof: QofConfig | None = None, rng=None) -> bool:
    """Dispatch on certificate kind; ``mode`` only matters for quantum_prime."""
    if cert.kind == "quantum_prime":
        if mode not in ("classical", "quantum", "both"):
            raise InvalidInputError(f"unknown verification mode {mode!r}")
        ok = True
        if mode in ("classical", "both"):
            ok = verify_classical(cert)
        if mode in ("quantum", "both"):
            ok = verify_quantum(cert, qof, rng) and ok
        return ok
    if cert.kind == "prime_power":
        return verify_prime_power(cert)
    return verify_composite(cert)
