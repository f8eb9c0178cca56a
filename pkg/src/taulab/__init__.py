"""Exact computation of the Ramanujan tau function and checks of its arithmetic."""

from .errors import (
    CacheFormatError,
    InternalInconsistencyError,
    OutOfRangeError,
    ResourceLimitError,
    TauLabError,
    VanishingTauError,
)
from .factor import (
    Factorization,
    count_smooth,
    factor,
    is_prime,
    is_smooth,
    largest_prime_factor,
    omega,
    primes_up_to,
    radical,
)
from .report import Report
from .tau import TauTable, build_tau_table, load_table, save_table, tau_at, tau_prime_power, verify_table

__version__ = "0.1.0"
