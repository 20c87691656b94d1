"""
Cubic and sextic residue symbols and cubic character sums over Z[w].

Cubic symbols return elements of {0, 1, w, w^2}; the sextic symbol returns
one of the six units or 0. All values are EisInt.
"""

import logging
from functools import lru_cache
from math import gcd

import numpy as np

from cmlt.core.arith import euler_phi, factorize, is_prime, kronecker, sqrt_mod
from cmlt.core.errors import ArithmeticDomainError, ErrorCode
from cmlt.core.tables import eis_pow_array, modpow_array
from cmlt.models.eisenstein import ONE_MINUS_OMEGA, EisInt, is_eisenstein_prime, primary_associate_eis
from cmlt.models.units import ScaledUnit, UnitW6
from cmlt.services.local_factors import local_product, omega_j

logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 10**3
ROUNDING_TOLERANCE = 1e-6

_CUBE_ROOTS = (EisInt(1, 0), EisInt(0, 1), EisInt(-1, -1))
ZERO = EisInt(0, 0)


def _root(k: int) -> EisInt:
    return _CUBE_ROOTS[k % 3]


def cube_root_of_unity(p: int) -> int:
    """s with s^2 + s + 1 = 0 mod p, for p = 1 mod 3."""
    r = sqrt_mod(-3, p)
    return (-1 + r) * pow(2, -1, p) % p


def _omega_image(p: int, a: int, b: int) -> int:
    """s with w = s mod (a + b w), for a + b w of prime norm p."""
    return (-a * pow(b, -1, p)) % p


class EisensteinService:
    """
    Cubic symbols via exponentiation and via the reciprocity loop, the sextic
    symbol for rational numerators, the cubic Gauss sums and C_beta(q, t; kappa).
    """

    # ============== Residue symbols ==============

    def primary_associate_eis(self, z: EisInt) -> EisInt:
        return primary_associate_eis(z)

    def _check_prime(self, pi: EisInt) -> None:
        if not is_eisenstein_prime(pi):
            raise ArithmeticDomainError(ErrorCode.NOT_PRIME, f"{pi} is not an Eisenstein prime")

    def _unit_power(self, alpha: EisInt, pi: EisInt, order: int):
        """alpha^((N(pi)-1)/order) mod pi as (sign, k) with value sign * w^k."""
        n = pi.norm()
        if pi.re != 0 and pi.om != 0 and pi.re != pi.om:
            s = _omega_image(n, pi.re, pi.om)
            v = pow((alpha.re + alpha.om * s) % n, (n - 1) // order, n)
            for sign in (1, -1):
                for k in range(3):
                    if v == sign * pow(s, k, n) % n:
                        return sign, k
        else:
            w = pow(alpha, (n - 1) // order, pi)
            for unit in UnitW6.all():
                if pi.divides(w - unit.to_eis()):
                    return unit.sign, unit.k
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"{alpha}^((N-1)/{order}) mod {pi} is not a root of unity")

    def cubic_symbol_prime(self, alpha: EisInt, pi: EisInt) -> EisInt:
        """alpha^((N(pi)-1)/3) mod pi, reduced to {0, 1, w, w^2}."""
        alpha, pi = EisInt.of(alpha), EisInt.of(pi)
        if pi.norm() % 3 == 0:
            raise ArithmeticDomainError(ErrorCode.NOT_COPRIME_TO_3, f"{pi} has norm divisible by 3")
        self._check_prime(pi)
        if pi.divides(alpha):
            return ZERO
        sign, k = self._unit_power(alpha, pi, 3)
        if sign != 1:
            raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, "cubic symbol landed on a negative unit")
        return _root(k)

    def cubic_symbol_jacobi(self, alpha: EisInt, xi: EisInt) -> EisInt:
        """Cubic Jacobi symbol by primary normalization and reciprocity flips, no factoring."""
        alpha, xi = EisInt.of(alpha), EisInt.of(xi)
        if xi.norm() % 3 == 0:
            raise ArithmeticDomainError(ErrorCode.NOT_COPRIME_TO_3, f"{xi} has norm divisible by 3")
        e = 0
        a, x = alpha, primary_associate_eis(xi)
        while True:
            nx = x.norm()
            if nx == 1:
                return _root(e)
            a = a % x
            if a.is_zero():
                return ZERO
            m = 0
            while a.norm() % 3 == 0:
                a = a.exact_div(ONE_MINUS_OMEGA)
                m += 1
            a_prim = primary_associate_eis(a)
            # a = +-w^k * a_prim; the sign contributes nothing
            k = next(j for j in range(3) if a_prim.times_omega(j) in (a, -a))
            e += k * (nx - 1) // 3
            e += m * 2 * (x.re + 1) // 3
            a, x = x, a_prim

    def cubic_symbol_rational(self, z: EisInt, q: int) -> EisInt:
        """(z/q)_3 for q >= 1 coprime to 3, multiplicative over the rational primes of q."""
        z = EisInt.of(z)
        if q < 1 or q % 3 == 0:
            raise ArithmeticDomainError(ErrorCode.NOT_COPRIME_TO_3, f"modulus must be positive and prime to 3, got {q}")
        e = 0
        for p, v in factorize(q):
            k = self._rational_prime_exponent(z, p)
            if k is None:
                return ZERO
            e += k * v
        return _root(e)

    def _rational_prime_exponent(self, z: EisInt, p: int):
        if p % 3 == 1:
            s = cube_root_of_unity(p)
            e = 0
            for root, weight in ((s, 1), (s * s % p, 2)):
                v = (z.re + z.om * root) % p
                if v == 0:
                    return None
                w = pow(v, (p - 1) // 3, p)
                e += weight * next(k for k in range(3) if w == pow(s, k, p))
            return e
        if z.re % p == 0 and z.om % p == 0:
            return None
        w = pow(z, (p * p - 1) // 3, EisInt(p))
        for k, u in enumerate(_CUBE_ROOTS):
            if (u.re - w.re) % p == 0 and (u.om - w.om) % p == 0:
                return k
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"{z}^((p^2-1)/3) mod {p} is not a cube root of unity")

    def sextic_symbol_rational(self, alpha: int, pi: EisInt) -> EisInt:
        """alpha^((N(pi)-1)/6) mod pi for rational alpha, as one of the six units or 0."""
        pi = EisInt.of(pi)
        n = pi.norm()
        if gcd(n, 6) != 1:
            raise ArithmeticDomainError(ErrorCode.BAD_NORM, f"N({pi}) = {n} is not prime to 6")
        self._check_prime(pi)
        if pi.divides(EisInt(alpha)):
            return ZERO
        sign, k = self._unit_power(EisInt(alpha), pi, 6)
        return UnitW6(sign, k).to_eis()

    # ============== Symbol tables ==============

    def symbol_table(self, q: int) -> np.ndarray:
        """Exponent table T[x, y] of ((x + y w)/q)_3 as powers of w, -1 where the symbol is 0."""
        return _cubic_table(q)

    def norm_sign_table(self, q: int) -> np.ndarray:
        """Table of the Jacobi symbol (N(x + y w)/q)."""
        return _norm_jacobi_table(q)

    # ============== Gauss sums ==============

    def gauss_sum_cubic(self, p: int, kappa: int) -> EisInt:
        """Sum over Z[w]/(p) of (z/p)_3 (N(z)/p)^kappa e(Tr(z)/p), rounded to the exact element."""
        if p <= 3 or not is_prime(p):
            raise ArithmeticDomainError(ErrorCode.NOT_PRIME, f"{p} is not a prime > 3")
        if kappa not in (0, 1):
            raise ArithmeticDomainError(ErrorCode.BAD_PARAMS, f"kappa must be 0 or 1, got {kappa}")
        table = _cubic_table(p)
        x = np.arange(p).reshape(p, 1)
        y = np.arange(p).reshape(1, p)
        roots = np.exp(2j * np.pi * np.arange(3) / 3)
        values = np.where(table >= 0, roots[np.clip(table, 0, 2)], 0)
        if kappa:
            values = values * _norm_jacobi_table(p)
        values = values * np.exp(2j * np.pi * ((2 * x - y) % p) / p)
        total = complex(values.sum())
        return _round_eis(total)

    # ============== Incomplete sums ==============

    def C_bruteforce(self, q: int, t: int, beta: UnitW6, kappa: int) -> ScaledUnit:
        """Literal sum of (z/q)_3 (N(z)/q)^kappa over z mod q with Tr(beta z) = t mod q."""
        _check_cubic_modulus(q)
        if q > BRUTEFORCE_LIMIT:
            raise ArithmeticDomainError(ErrorCode.TOO_LARGE, f"q={q} exceeds {BRUTEFORCE_LIMIT}")
        table = _cubic_table(q).astype(np.int64)
        signs = _norm_jacobi_table(q) if kappa else np.ones((q, q), dtype=np.int64)
        x = np.arange(q).reshape(q, 1)
        y = np.arange(q).reshape(1, q)
        # Tr(w^k (x + y w)) is 2x - y, -x - y, 2y - x for k = 0, 1, 2
        cx, cy = ((2, -1), (-1, -1), (-1, 2))[beta.k]
        on_line = (beta.sign * (cx * x + cy * y) - t) % q == 0
        live = on_line & (table >= 0)
        re = om = 0
        for k, (ur, uo) in enumerate(((1, 0), (0, 1), (-1, -1))):
            weight = int(signs[live & (table == k)].sum())
            re += weight * ur
            om += weight * uo
        return ScaledUnit.from_eis(re, om)

    def C_closed(self, q: int, t: int, beta: UnitW6, kappa: int) -> ScaledUnit:
        """phi(q) (conj(beta)/q)_3 (3/q)^kappa Omega_{3|6}(3; q, t) prod_{p | q, p !| t} (1 - (-3/p)/(p-1))."""
        _check_cubic_modulus(q)
        unit = self.cubic_symbol_rational(beta.conj().to_eis(), q)
        j = 6 if kappa else 3
        coefficient = euler_phi(q) * kronecker(3, q) ** kappa * omega_j(3, q, t, j) * local_product(3, q, t)
        return ScaledUnit(coefficient, UnitW6.from_eis(unit))


def _check_cubic_modulus(q: int) -> None:
    if q < 1 or gcd(q, 6) != 1:
        raise ArithmeticDomainError(ErrorCode.BAD_MODULUS, f"q must be prime to 6, got {q}")


def _round_eis(total: complex) -> EisInt:
    # x + y w = (x - y/2) + (y sqrt(3)/2) i
    y = total.imag * 2 / np.sqrt(3)
    x = total.real + y / 2
    re, om = round(x), round(y)
    residual = abs(total - (re + om * np.exp(2j * np.pi / 3)))
    if residual > ROUNDING_TOLERANCE:
        logger.error(f"Gauss sum rounding residual {residual:.3e} exceeds tolerance")
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"rounding residual {residual:.3e}")
    return EisInt(int(re), int(om))


@lru_cache(maxsize=256)
def _cubic_prime_table(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64).reshape(p, 1)
    y = np.arange(p, dtype=np.int64).reshape(1, p)
    if p % 3 == 1:
        s = cube_root_of_unity(p)
        logs = np.full(p, -1, dtype=np.int64)
        w = modpow_array(np.arange(p, dtype=np.int64), (p - 1) // 3, p)
        for k in range(3):
            logs[(w == pow(s, k, p)) & (np.arange(p) != 0)] = k
        first = logs[(x + y * s) % p]
        second = logs[(x + y * (s * s % p)) % p]
        # the conjugate embedding sends w to s^2
        table = (first + 2 * second) % 3
        table[(first < 0) | (second < 0)] = -1
        return table.astype(np.int8)
    wr, wo = eis_pow_array(np.broadcast_to(x, (p, p)), np.broadcast_to(y, (p, p)), (p * p - 1) // 3, p)
    table = np.full((p, p), -1, dtype=np.int8)
    for k, (ur, uo) in enumerate(((1, 0), (0, 1), (-1, -1))):
        table[(wr == ur % p) & (wo == uo % p)] = k
    table[0, 0] = -1
    return table


@lru_cache(maxsize=64)
def _cubic_table(q: int) -> np.ndarray:
    table = np.zeros((q, q), dtype=np.int64)
    zero = np.zeros((q, q), dtype=bool)
    idx = np.arange(q)
    for p, v in factorize(q):
        local = _cubic_prime_table(p)[np.ix_(idx % p, idx % p)].astype(np.int64)
        zero |= local < 0
        table = (table + v * local) % 3
    table[zero] = -1
    return table.astype(np.int8)


@lru_cache(maxsize=64)
def _norm_jacobi_table(q: int) -> np.ndarray:
    x = np.arange(q, dtype=np.int64).reshape(q, 1)
    y = np.arange(q, dtype=np.int64).reshape(1, q)
    out = np.ones((q, q), dtype=np.int64)
    for p, v in factorize(q):
        norms = (x * x - x * y + y * y) % p
        legendre = modpow_array(norms, (p - 1) // 2, p)
        legendre = np.where(legendre == p - 1, -1, legendre)
        out = out * legendre**v
    return out


eisenstein_service = EisensteinService()
