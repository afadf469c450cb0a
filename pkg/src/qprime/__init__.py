"""Primality proofs by order finding, with a simulated quantum subroutine."""

__version__ = "0.1.0"

from .certificates import Certificate, parse, serialize, verify, verify_classical, verify_quantum
from .errors import (
    CertificateError, IndeterminateError, InvalidInputError, NotAUnitError, OrderFindingError,
    ResourceLimitError,
)
from .order_finding import QofConfig, find_order
from .primality import (
    Composite, Prime, PrimePower, ProbablyComposite, TestConfig, Verdict, test_prime_power,
    test_primality,
)

__all__ = [
    "Certificate", "CertificateError", "Composite", "IndeterminateError", "InvalidInputError",
    "NotAUnitError", "OrderFindingError", "Prime", "PrimePower", "ProbablyComposite", "QofConfig",
    "ResourceLimitError", "TestConfig", "Verdict", "find_order", "parse", "serialize",
    "test_prime_power", "test_primality", "verify", "verify_classical", "verify_quantum",
]
