"""
Traces of Frobenius for the nine CM families.

- split/inert classification and Cornacchia norm-form solving
- closed trace formulas driven by quartic, cubic and quadratic symbols
- a Legendre-sum point count over F_p as an independent oracle
"""

import logging
import math
from fractions import Fraction
from typing import FrozenSet

import numpy as np

from cmlt.core.arith import is_prime, kronecker, prime_support, sqrt_mod
from cmlt.core.curve_catalog import curve_catalog
from cmlt.core.errors import CurveError, ErrorCode
from cmlt.models.curve import (
    CurveSpec,
    Normalization,
    SplitPrime,
    SplitType,
    check_discriminant,
)
from cmlt.models.eisenstein import EisInt, primary_associate_eis
from cmlt.models.gaussian import GaussInt, primary_associate
from cmlt.services.eisenstein_service import eisenstein_service
from cmlt.services.gaussian_service import gaussian_service

logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 10**5


def field_discriminant(D: int) -> int:
    """Discriminant of Q(sqrt(-D)): -4D for D = 1, 2 mod 4, else -D."""
    return -D if D % 4 == 3 else -4 * D


def cornacchia(D: int, p: int):
    """(m, n) with m, n > 0 and p = m^2 + D n^2, or None."""
    x0 = sqrt_mod(-D, p)
    if x0 is None:
        return None
    if 2 * x0 < p:
        x0 = p - x0
    a, b = p, x0
    while b * b > p:
        a, b = b, a % b
    rem = p - b * b
    if rem % D:
        return None
    n = math.isqrt(rem // D)
    if n * n * D != rem:
        return None
    return b, n


def cornacchia_4p(D: int, p: int):
    """(t, s) with t, s > 0 and 4p = t^2 + D s^2 for D = 3 mod 4, or None."""
    x0 = sqrt_mod(-D, p)
    if x0 is None:
        return None
    if x0 % 2 != D % 2:
        x0 = p - x0
    a, b, limit = 2 * p, x0, math.isqrt(4 * p)
    while b > limit:
        a, b = b, a % b
    rem = 4 * p - b * b
    if rem % D:
        return None
    s = math.isqrt(rem // D)
    if s * s * D != rem:
        return None
    return b, s


class FrobeniusService:
    """
    Explicit a_p formulas for y^2 = x^3 - gx (D=1), y^2 = x^3 + g (D=3) and
    y^2 = 4x^3 + a g^2 x + b g^3 (the remaining discriminants).
    """

    def split_type(self, D: int, p: int) -> SplitType:
        check_discriminant(D)
        if not is_prime(p):
            raise CurveError(ErrorCode.NOT_PRIME, f"{p} is not prime")
        symbol = kronecker(field_discriminant(D), p)
        if symbol == 0:
            return SplitType.RAMIFIED
        return SplitType.SPLIT if symbol == 1 else SplitType.INERT

    def norm_form_solve(self, D: int, p: int) -> SplitPrime:
        if self.split_type(D, p) != SplitType.SPLIT:
            raise CurveError(ErrorCode.NOT_SPLIT, f"{p} does not split in Q(sqrt(-{D}))")
        if D in (1, 2):
            m, n = cornacchia(D, p)
            if D == 1 and m % 2 == 0:
                m, n = n, m
            if D == 1:
                pi = primary_associate(GaussInt(m, n))
                return SplitPrime(p, D, (m, n), pi, pi.trace(), Normalization.PRIMARY_GAUSS)
            return SplitPrime(p, D, (m, n), (m, n), 2 * m, Normalization.POSITIVE_TRACE)
        t, s = cornacchia_4p(D, p)
        if D == 3:
            pi = primary_associate_eis(EisInt((t + s) // 2, s))
            return SplitPrime(p, D, (t, s), pi, pi.trace(), Normalization.PRIMARY_EIS)
        return SplitPrime(p, D, (t, s), (t, s), t, Normalization.POSITIVE_TRACE)

    def bad_primes(self, curve: CurveSpec) -> FrozenSet[int]:
        model = curve_catalog.get(curve.D)
        return frozenset(prime_support(2 * curve.D * curve.g)) | frozenset(model.extra_bad_primes)

    def _check_good(self, curve: CurveSpec, p: int) -> None:
        if not is_prime(p) or p in self.bad_primes(curve):
            raise CurveError(ErrorCode.BAD_PRIME, f"{p} is not a good prime for {curve}")

    # ============== Closed formulas ==============

    def ap_formula(self, curve: CurveSpec, p: int) -> int:
        self._check_good(curve, p)
        if self.split_type(curve.D, p) == SplitType.INERT:
            return 0
        return self.ap_split(curve, self.norm_form_solve(curve.D, p))

    def ap_split(self, curve: CurveSpec, split: SplitPrime) -> int:
        """Trace at a split good prime from its norm-form solution."""
        D, g, p = curve.D, curve.g, split.p
        if D == 1:
            pi = split.element
            # (g/conj pi)_4 = conj((g/pi)_4)
            chi = gaussian_service.quartic_symbol_prime(GaussInt(g), pi)
            return (chi.conj() * pi).trace()
        if D == 3:
            pi = split.element
            chi = eisenstein_service.cubic_symbol_prime(EisInt(4 * g), pi)
            return -kronecker(g, p) * (chi * pi).trace()
        if D == 2:
            m = split.coords[0]
            return kronecker(g, p) * (-1) ** (p // 8 + (m - 1) // 2) * 2 * m
        t = split.trace
        return kronecker(g, p) * kronecker(2 * t, D) * t

    def ap_formula_d2_original(self, curve: CurveSpec, p: int) -> int:
        """D=2 trace with pi = a + b sqrt(-2) normalized by a = 1 mod 4."""
        if curve.D != 2:
            raise CurveError(ErrorCode.BAD_PARAMS, "the sqrt(-2) normalization applies to D=2 only")
        self._check_good(curve, p)
        if self.split_type(2, p) == SplitType.INERT:
            return 0
        m, _ = self.norm_form_solve(2, p).coords
        a = m if m % 4 == 1 else -m
        shift = (p - 1) // 8 if p % 8 == 1 else (p - 3) // 8
        return kronecker(curve.g, p) * (-1) ** shift * 2 * a

    # ============== Point counting oracle ==============

    def cubic_coefficients(self, curve: CurveSpec, p: int):
        """[c3, c2, c1, c0] mod p of the cubic f with y^2 = f(x)."""
        model = curve_catalog.get(curve.D)
        g = curve.g % p
        if model.kind == "quartic_twist":
            return [1, 0, -g % p, 0]
        if model.kind == "sextic_twist":
            return [1, 0, 0, g]
        if model.integral:
            c3, c2, c1, c0 = model.integral
            return [c3 % p, c2 * g % p, c1 * g * g % p, c0 * g**3 % p]
        return [4 % p, 0, _reduce(model.a_coeff * g * g, p), _reduce(model.b_coeff * g**3, p)]

    def ap_bruteforce(self, curve: CurveSpec, p: int) -> int:
        """-sum over x in F_p of (f(x)/p)."""
        self._check_good(curve, p)
        if p > BRUTEFORCE_LIMIT:
            raise CurveError(ErrorCode.TOO_LARGE, f"p={p} exceeds {BRUTEFORCE_LIMIT}")
        c3, c2, c1, c0 = self.cubic_coefficients(curve, p)
        x = np.arange(p, dtype=np.int64)
        f = (((c3 * x + c2) % p * x + c1) % p * x + c0) % p
        is_square = np.zeros(p, dtype=bool)
        is_square[x * x % p] = True
        chi = np.where(f == 0, 0, np.where(is_square[f], 1, -1))
        return -int(chi.sum())


def _reduce(value: Fraction, p: int) -> int:
    return value.numerator * pow(value.denominator, -1, p) % p


frobenius_service = FrobeniusService()
