"""Hot numeric loops, compiled with numba when available.

Set ``QPRIME_DISABLE_NUMBA=1`` before import to force the pure-numpy path.
Both implementations are importable directly for cross-checks.
"""

import os

from . import numpy_impl

_DISABLED = os.environ.get("QPRIME_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

if _DISABLED:
    _impl = numpy_impl
    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:  # numba missing or broken
        _impl = numpy_impl
        BACKEND = "numpy"

MAX_MODULUS = numpy_impl.MAX_MODULUS

powmod_vec = _impl.powmod_vec
work_register = _impl.work_register
unit_order_census = _impl.unit_order_census
totient_sieve = _impl.totient_sieve
phase_distribution = _impl.phase_distribution
strong_liar_count = _impl.strong_liar_count
fermat_liar_count = _impl.fermat_liar_count
full_order_count = _impl.full_order_count

__all__ = [
    "BACKEND", "MAX_MODULUS", "powmod_vec", "work_register", "unit_order_census",
    "totient_sieve", "phase_distribution", "strong_liar_count", "fermat_liar_count",
    "full_order_count",
]
