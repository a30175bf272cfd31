"""Prime tables via a numpy sieve of Eratosthenes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())


@lru_cache(maxsize=16)
def _sieve(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, int(limit**0.5) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    out = np.flatnonzero(is_prime).astype(np.int64)
    out.setflags(write=False)
    return out


def sieve_primes(limit: int) -> PrimeTable:
    """Return every prime ``<= limit`` in ascending order."""
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"no primes below {limit}: the table would be empty")
    return PrimeTable(limit, _sieve(limit))


def primes_upto(limit: int) -> np.ndarray:
    """Read-only array of primes ``<= limit`` (empty for ``limit < 2``)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    return _sieve(int(limit))
