"""
Integer utilities shared by every module.

- Deterministic Miller-Rabin primality on the full 64-bit range
- Factorization by trial division with a Brent rho fallback
- Kronecker and Jacobi symbols
- Tonelli-Shanks square roots modulo a prime
- Exact rationals with an overflow guard
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from cmlt.core.errors import ArithmeticDomainError, ErrorCode

logger = logging.getLogger(__name__)

Rational = Fraction

RATIONAL_LIMIT = 2**127

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_BOUND = 1000


# ============== Primality and factorization ==============


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Canonical factorization: primes strictly increasing, exponents >= 1."""

    value: int
    factors: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for prime, e in self.factors:
            if prime == p:
                return e
        return 0

    def reassemble(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def __iter__(self):
        return iter(self.factors)


def _brent_rho(n: int) -> int:
    """Return a non-trivial factor of the odd composite n."""
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"rho failed on {n}")


def _split(n: int, out: Dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, out)
        _split(root, out)
        return
    d = _brent_rho(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> Factorization:
    """Factor 1 <= n <= 2^62."""
    if n < 1:
        raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"factorize needs n >= 1, got {n}")
    out: Dict[int, int] = {}
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    # wheel over 7, 11, 13, ... skipping multiples of 2, 3, 5
    p, steps, i = 7, (4, 2, 4, 2, 4, 6, 2, 6), 0
    while p <= _TRIAL_BOUND and p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += steps[i]
        i = (i + 1) % 8
    if m > 1:
        if m < p * p:
            out[m] = out.get(m, 0) + 1
        else:
            _split(m, out)
    return Factorization(n, tuple(sorted(out.items())))


def ord_p(n: int, p: int) -> int:
    """Largest v with p^v | n."""
    if n == 0:
        raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, "ord_p of zero")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        return 0
    while n % 2 == 0:
        n //= 2
    return n


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def prime_support(n: int) -> Tuple[int, ...]:
    """Distinct primes dividing |n| (empty for 0 and +-1)."""
    n = abs(n)
    if n <= 1:
        return ()
    return factorize(n).primes


def radical(n: int) -> int:
    return math.prod(prime_support(n))


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def integer_root(n: int, k: int) -> Optional[int]:
    """Exact k-th root of n (negative n allowed for odd k), else None."""
    if n < 0:
        if k % 2 == 0:
            return None
        root = integer_root(-n, k)
        return None if root is None else -root
    if n < 2:
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float drift for very large n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


# ============== Quadratic symbols ==============


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ArithmeticDomainError(ErrorCode.NOT_ODD, f"jacobi needs odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for any integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    if n == 1:
        return sign
    return sign * jacobi(a, n)


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """Smaller square root of a modulo the odd prime p, or None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, x = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, x = t * c % p, x * b % p
    return min(x, p - x)


# ============== Rationals ==============


def checked(value: Fraction) -> Fraction:
    """Raise OVERFLOW when a rational leaves the 128-bit range."""
    if abs(value.numerator) >= RATIONAL_LIMIT or value.denominator >= RATIONAL_LIMIT:
        logger.error(f"Rational overflow: {value}")
        raise ArithmeticDomainError(ErrorCode.OVERFLOW, f"{value} exceeds 2^127")
    return value


def rational_product(values: Iterable[Fraction]) -> Fraction:
    out = Fraction(1)
    for v in values:
        out = checked(out * v)
    return out


def format_rational(value: Fraction) -> str:
    """Serialize as "num/den" (integers keep a denominator of 1)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"
