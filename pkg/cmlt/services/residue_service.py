"""
Solution counts of quadratic congruences.

N0, N1, N2 and N+- for a primitive quadratic f modulo an odd q, both by
direct enumeration and by the prime-power case tables; rho and rho_D count
representations of a residue by the trace-fixed norm polynomials.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from cmlt.core.arith import factorize, is_square, jacobi, kronecker, sqrt_mod
from cmlt.core.errors import ConstantError, CountingError, ErrorCode
from cmlt.models.curve import QuadPoly

logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 10**6


@dataclass(frozen=True)
class ResidueCounts:
    n0: int
    n1: int
    n2: int
    n_plus: int
    n_minus: int

    @classmethod
    def from_parts(cls, n0: int, n1: int, n2: int) -> "ResidueCounts":
        return cls(n0, n1, n2, (n1 + n2) // 2, (n1 - n2) // 2)


@dataclass(frozen=True)
class RhoCounts:
    """rho (the 2t^2 + r^2/4 form) and rho_D (the D = 3 mod 4 form); None where undefined."""

    rho: Optional[int]
    rho_D: Optional[int]


def _check_modulus(q: int) -> None:
    if q < 1 or q % 2 == 0:
        raise CountingError(ErrorCode.BAD_MODULUS, f"q must be odd and positive, got {q}")


def _gcd3(a: int, b: int, c: int) -> int:
    return int(np.gcd.reduce(np.array([a, b, c], dtype=object)))


def _sqrt_count(delta: int, p: int, nu: int) -> int:
    """Number of s mod p^nu with s^2 = delta."""
    modulus = p**nu
    delta %= modulus
    if delta == 0:
        return p ** (nu // 2)
    e = 0
    while delta % p == 0:
        delta //= p
        e += 1
    if e % 2 or sqrt_mod(delta, p) is None:
        return 0
    return 2 * p ** (e // 2)


class ResidueService:
    """Counting residues t mod q by the value of f(t)."""

    # ============== N-counts ==============

    def residue_counts_bruteforce(self, poly: QuadPoly, q: int) -> ResidueCounts:
        _check_modulus(q)
        if q > BRUTEFORCE_LIMIT:
            raise CountingError(ErrorCode.TOO_LARGE, f"q={q} exceeds {BRUTEFORCE_LIMIT}")
        values = [poly(t) % q for t in range(q)]
        n0 = sum(1 for v in values if v == 0)
        symbols = [jacobi(v, q) for v in values]
        n1 = sum(1 for s in symbols if s != 0)
        return ResidueCounts.from_parts(n0, n1, sum(symbols))

    def residue_counts_closed(self, poly: QuadPoly, q: int) -> ResidueCounts:
        """Multiplicative evaluation over p^v || q from the prime case tables."""
        _check_modulus(q)
        a, b, c = poly.a, poly.b, poly.c
        if _gcd3(a, b, c) != 1:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"{poly} is not primitive")
        delta = poly.discriminant
        if is_square(delta):
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"discriminant {delta} of {poly} is a square")
        n0 = n1 = n2 = 1
        for p, nu in factorize(q):
            n0 *= self._n0_prime_power(a, b, c, delta, p, nu)
            n0_p = self._n0_prime_power(a, b, c, delta, p, 1)
            n1_local = p**nu - p ** (nu - 1) * n0_p
            n1 *= n1_local
            n2 *= n1_local if nu % 2 == 0 else p ** (nu - 1) * self._n2_prime(a, b, c, delta, p)
        return ResidueCounts.from_parts(n0, n1, n2)

    def residue_counts(self, poly: QuadPoly, q: int, method: str = "closed") -> ResidueCounts:
        if method == "bruteforce":
            return self.residue_counts_bruteforce(poly, q)
        return self.residue_counts_closed(poly, q)

    def _n0_prime_power(self, a: int, b: int, c: int, delta: int, p: int, nu: int) -> int:
        if a % p:
            # 4a f(t) = (2at + b)^2 - delta and t -> 2at + b is a bijection
            return _sqrt_count(delta, p, nu)
        if b % p:
            return 1
        return 0

    def _n2_prime(self, a: int, b: int, c: int, delta: int, p: int) -> int:
        if a % p == 0 and b % p == 0:
            return p * kronecker(c, p)
        if a % p == 0:
            return 0
        if delta % p == 0:
            return (p - 1) * kronecker(a, p)
        return -kronecker(a, p)

    # ============== rho counts ==============

    def rho(self, r: int, q: int, a: int) -> int:
        """#{t mod q : 2t^2 + r^2/4 = a mod q}."""
        if r % 2:
            raise CountingError(ErrorCode.UNDEFINED, f"r^2/4 is not integral for r={r}")
        return self._count_values(QuadPoly(2, 0, r * r // 4), q, a)

    def rho_D(self, D: int, r: int, q: int, a: int) -> int:
        """#{t mod q : D t^2 - D r t + (D+1) r^2/4 = a mod q}."""
        if D % 4 != 3:
            raise CountingError(ErrorCode.UNDEFINED, f"(D+1)r^2/4 form needs D = 3 mod 4, got D={D}")
        return self._count_values(QuadPoly(D, -D * r, (D + 1) * r * r // 4), q, a)

    def rho_counts(self, D: int, r: int, q: int, a: int) -> RhoCounts:
        rho = self.rho(r, q, a) if r % 2 == 0 else None
        rho_D = self.rho_D(D, r, q, a) if D % 4 == 3 else None
        if rho is None and rho_D is None:
            raise CountingError(ErrorCode.UNDEFINED, f"no representation count is defined for D={D}, r={r}")
        return RhoCounts(rho, rho_D)

    def rho_D_mod8_closed(self, D: int, r: int, k: int) -> int:
        """rho_D(r, 8, 2k + 1) from the case table."""
        if D % 4 != 3:
            raise CountingError(ErrorCode.UNDEFINED, f"D must be 3 mod 4, got {D}")
        k %= 4
        if r % 2:
            return 2 if D % 8 == 3 else 0
        if r % 4 == 2:
            return 2 if k in ((r * r - 4) // 8 % 4, (r * r + 12) // 8 % 4) else 0
        return 4 if k == (r * r // 8 + (D - 1) // 2) % 4 else 0

    def _count_values(self, poly: QuadPoly, q: int, a: int) -> int:
        if q < 1:
            raise CountingError(ErrorCode.BAD_PARAMS, f"q must be positive, got {q}")
        t = np.arange(q, dtype=object)
        values = (poly.a * t * t + poly.b * t + poly.c) % q
        return int(np.count_nonzero(values == a % q))


residue_service = ResidueService()
