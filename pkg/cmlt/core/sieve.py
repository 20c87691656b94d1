"""
Segmented odd-only sieve of Eratosthenes on numpy boolean masks.

Ranges are half-open ``[lo, hi)`` with ``2 <= lo <= hi <= 10^9``. Sieving
disjoint subranges and concatenating them in order reproduces the serial
stream, which is what the parallel sweeps rely on.
"""

import logging
import math
from typing import Iterator, List, Optional, Tuple

import numpy as np

from cmlt.core.config import get_settings
from cmlt.core.errors import ArithmeticDomainError, ErrorCode

logger = logging.getLogger(__name__)

MAX_SIEVE = 10**9


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p:limit + 1:p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _validate(lo: int, hi: int) -> None:
    if not 2 <= lo <= hi <= MAX_SIEVE:
        raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"sieve range must satisfy 2 <= lo <= hi <= 1e9, got [{lo}, {hi})")


def iter_prime_segments(lo: int, hi: int, segment_odds: Optional[int] = None) -> Iterator[np.ndarray]:
    """Yield ascending int64 arrays whose concatenation is the primes in [lo, hi)."""
    _validate(lo, hi)
    if lo <= 2 < hi:
        yield np.array([2], dtype=np.int64)
    start = max(lo, 3)
    if start % 2 == 0:
        start += 1
    if start >= hi:
        return

    span = 2 * (segment_odds or get_settings().sieve_segment)
    odd_base = [int(p) for p in base_primes(math.isqrt(hi - 1)) if p != 2]

    while start < hi:
        stop = min(start + span, hi)
        mask = np.ones((stop - start + 1) // 2, dtype=bool)
        for p in odd_base:
            p2 = p * p
            if p2 >= stop:
                break
            first = max(p2, ((start + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first >= stop:
                continue
            mask[(first - start) // 2::p] = False  # vectorized strided clear
        yield start + 2 * np.flatnonzero(mask).astype(np.int64)
        start = stop


def primes_in_range(lo: int, hi: int) -> Iterator[int]:
    """Stream the primes in [lo, hi) in ascending order."""
    for segment in iter_prime_segments(lo, hi):
        yield from segment.tolist()


def prime_array(lo: int, hi: int) -> np.ndarray:
    segments = list(iter_prime_segments(lo, hi))
    if not segments:
        return np.array([], dtype=np.int64)
    return np.concatenate(segments)


def prime_count(lo: int, hi: int) -> int:
    return sum(int(seg.size) for seg in iter_prime_segments(lo, hi))


def split_range(lo: int, hi: int, chunks: int) -> List[Tuple[int, int]]:
    """Contiguous half-open pieces covering [lo, hi) in order."""
    chunks = max(1, chunks)
    size = max(1, -(-(hi - lo) // chunks))
    pieces = []
    start = lo
    while start < hi:
        pieces.append((start, min(start + size, hi)))
        start += size
    return pieces
