"""
Quartic residue symbols and quartic character sums over Z[i].

Symbols return elements of {0, 1, i, -1, -i} as GaussInt values.
"""

import logging
from functools import lru_cache

import numpy as np

from cmlt.core.arith import euler_phi, factorize, is_prime, sqrt_mod
from cmlt.core.errors import ArithmeticDomainError, ErrorCode
from cmlt.core.tables import gauss_pow_array, modpow_array
from cmlt.models.gaussian import I, GaussInt, is_gaussian_prime, primary_associate
from cmlt.models.units import ScaledUnit, UnitI4
from cmlt.services.local_factors import local_product, omega_j

logger = logging.getLogger(__name__)

BRUTEFORCE_LIMIT = 10**3
ROUNDING_TOLERANCE = 1e-6

_UNITS = (GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1))
ZERO = GaussInt(0, 0)


def _unit(k: int) -> GaussInt:
    return _UNITS[k % 4]


def _split_root(p: int, a: int, b: int) -> int:
    """s with i = s mod (a + b i), for a + b i of prime norm p."""
    return (-a * pow(b, -1, p)) % p


def _match_power(v: int, s: int, p: int) -> int:
    """k with v = s^k mod p, for s of order 4."""
    for k in range(4):
        if v == pow(s, k, p):
            return k
    raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"{v} is not a fourth root of unity mod {p}")


class GaussianService:
    """
    Quartic symbols via exponentiation and via the reciprocity loop, the
    quartic Gauss sum and the incomplete sums Q_beta(q, t).
    """

    # ============== Residue symbols ==============

    def primary_associate(self, z: GaussInt) -> GaussInt:
        return primary_associate(z)

    def quartic_symbol_prime(self, alpha: GaussInt, pi: GaussInt) -> GaussInt:
        """alpha^((N(pi)-1)/4) mod pi, reduced to {0, +-1, +-i}."""
        alpha, pi = GaussInt.of(alpha), GaussInt.of(pi)
        if not pi.is_odd():
            raise ArithmeticDomainError(ErrorCode.NOT_ODD, f"{pi} has even norm")
        if not is_gaussian_prime(pi):
            raise ArithmeticDomainError(ErrorCode.NOT_PRIME, f"{pi} is not a Gaussian prime")
        if pi.divides(alpha):
            return ZERO
        n = pi.norm()
        if pi.im != 0 and pi.re != 0:
            # split: Z[i]/(pi) = F_p with i -> s
            s = _split_root(n, pi.re, pi.im)
            v = pow((alpha.re + alpha.im * s) % n, (n - 1) // 4, n)
            return _unit(_match_power(v, s, n))
        w = pow(alpha, (n - 1) // 4, pi)
        for u in _UNITS:
            if pi.divides(w - u):
                return u
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"no unit matches {alpha}^((N-1)/4) mod {pi}")

    def quartic_symbol_jacobi(self, alpha: GaussInt, xi: GaussInt) -> GaussInt:
        """Quartic Jacobi symbol by primary normalization and reciprocity flips, no factoring."""
        alpha, xi = GaussInt.of(alpha), GaussInt.of(xi)
        if not xi.is_odd():
            raise ArithmeticDomainError(ErrorCode.NOT_ODD, f"{xi} is divisible by 1+i")
        e = 0
        a, x = alpha, primary_associate(xi)
        while True:
            nx = x.norm()
            if nx == 1:
                return _unit(e)
            a = a % x
            if a.is_zero():
                return ZERO
            m = 0
            while not a.is_odd():
                # a / (1+i) = a (1-i) / 2
                a = GaussInt((a.re + a.im) // 2, (a.im - a.re) // 2)
                m += 1
            a_prim = primary_associate(a)
            k = next(j for j in range(4) if a_prim.times_i(j) == a)
            e += k * (nx - 1) // 4
            e += m * (x.re - x.im - x.im * x.im - 1) // 4
            na = a_prim.norm()
            e += 2 * ((na - 1) // 4) * ((nx - 1) // 4)
            a, x = x, a_prim

    def quartic_symbol_rational(self, z: GaussInt, q: int) -> GaussInt:
        """(z/q)_4 for odd q >= 1, multiplicative over the rational primes of q."""
        z = GaussInt.of(z)
        if q < 1 or q % 2 == 0:
            raise ArithmeticDomainError(ErrorCode.NOT_ODD, f"modulus must be odd and positive, got {q}")
        e = 0
        for p, v in factorize(q):
            k = self._rational_prime_exponent(z, p)
            if k is None:
                return ZERO
            e += k * v
        return _unit(e)

    def _rational_prime_exponent(self, z: GaussInt, p: int):
        if p % 4 == 1:
            s = sqrt_mod(-1, p)
            e = 0
            for root in (s, p - s):
                v = (z.re + z.im * root) % p
                if v == 0:
                    return None
                e += _match_power(pow(v, (p - 1) // 4, p), root, p)
            return e
        if z.re % p == 0 and z.im % p == 0:
            return None
        w = pow(z, (p * p - 1) // 4, GaussInt(p))
        w = GaussInt(w.re % p, w.im % p)
        for k, u in enumerate(_UNITS):
            if (u.re - w.re) % p == 0 and (u.im - w.im) % p == 0:
                return k
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"{z}^((p^2-1)/4) mod {p} is not a unit")

    # ============== Symbol tables ==============

    def symbol_table(self, q: int) -> np.ndarray:
        """Exponent table T[x, y] of ((x + y i)/q)_4 as powers of i, -1 where the symbol is 0."""
        return _quartic_table(q)

    # ============== Gauss sums ==============

    def gauss_sum_quartic(self, p: int) -> GaussInt:
        """Sum over Z[i]/(p) of (z/p)_4 e(Tr(z)/p), rounded to the exact Gaussian integer."""
        if p % 2 == 0 or not is_prime(p):
            raise ArithmeticDomainError(ErrorCode.NOT_PRIME, f"{p} is not an odd prime")
        table = _quartic_table(p)
        x = np.arange(p).reshape(p, 1)
        phase = np.exp(2j * np.pi * (2 * x % p) / p)
        units = np.array([1, 1j, -1, -1j])
        values = np.where(table >= 0, units[np.clip(table, 0, 3)], 0) * phase
        total = complex(values.sum())
        return _round_gauss(total)

    # ============== Incomplete sums ==============

    def Q_bruteforce(self, q: int, t: int, beta: UnitI4) -> ScaledUnit:
        """Literal sum of (z/q)_4 over z mod q with Tr(beta z) = 2t mod q."""
        if q < 1 or q % 2 == 0:
            raise ArithmeticDomainError(ErrorCode.BAD_MODULUS, f"q must be odd, got {q}")
        if q > BRUTEFORCE_LIMIT:
            raise ArithmeticDomainError(ErrorCode.TOO_LARGE, f"q={q} exceeds {BRUTEFORCE_LIMIT}")
        line = _trace_line(_quartic_table(q), q, t, beta)
        counts = np.bincount(line[line >= 0], minlength=4)
        re, im = int(counts[0] - counts[2]), int(counts[1] - counts[3])
        return ScaledUnit.from_gauss(re, im)

    def Q_closed(self, q: int, t: int, beta: UnitI4) -> ScaledUnit:
        """phi(q) (i beta/q)_4 Omega_4(1; q, t) prod_{p | q, p !| t} (1 - (-1/p)/(p-1))."""
        if q < 1 or q % 2 == 0:
            raise ArithmeticDomainError(ErrorCode.BAD_MODULUS, f"q must be odd, got {q}")
        unit = self.quartic_symbol_rational(I * beta.to_gauss(), q)
        coefficient = euler_phi(q) * omega_j(1, q, t, 4) * local_product(1, q, t)
        return ScaledUnit(coefficient, UnitI4.from_gauss(unit))


def _round_gauss(total: complex) -> GaussInt:
    re, im = round(total.real), round(total.imag)
    residual = abs(total - complex(re, im))
    if residual > ROUNDING_TOLERANCE:
        logger.error(f"Gauss sum rounding residual {residual:.3e} exceeds tolerance")
        raise ArithmeticDomainError(ErrorCode.NONCONVERGENT, f"rounding residual {residual:.3e}")
    return GaussInt(int(re), int(im))


def _trace_line(table: np.ndarray, q: int, t: int, beta: UnitI4) -> np.ndarray:
    # Tr(beta z) for z = x + y i: 2x, -2y, -2x, 2y for beta = 1, i, -1, -i
    if beta.k == 0:
        return table[t % q, :]
    if beta.k == 1:
        return table[:, (-t) % q]
    if beta.k == 2:
        return table[(-t) % q, :]
    return table[:, t % q]


@lru_cache(maxsize=256)
def _quartic_prime_table(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64).reshape(p, 1)
    y = np.arange(p, dtype=np.int64).reshape(1, p)
    if p % 4 == 1:
        s = sqrt_mod(-1, p)
        logs = np.full(p, -1, dtype=np.int64)
        w = modpow_array(np.arange(p, dtype=np.int64), (p - 1) // 4, p)
        for k in range(4):
            logs[(w == pow(s, k, p)) & (np.arange(p) != 0)] = k
        first = logs[(x + y * s) % p]
        second = logs[(x - y * s) % p]
        # the conjugate embedding sends i to -s = s^3
        table = (first - second) % 4
        table[(first < 0) | (second < 0)] = -1
        return table.astype(np.int8)
    wr, wi = gauss_pow_array(np.broadcast_to(x, (p, p)), np.broadcast_to(y, (p, p)), (p * p - 1) // 4, p)
    table = np.full((p, p), -1, dtype=np.int8)
    for k, (ur, ui) in enumerate(((1, 0), (0, 1), (p - 1, 0), (0, p - 1))):
        table[(wr == ur % p) & (wi == ui % p)] = k
    table[0, 0] = -1
    return table


@lru_cache(maxsize=64)
def _quartic_table(q: int) -> np.ndarray:
    table = np.zeros((q, q), dtype=np.int64)
    zero = np.zeros((q, q), dtype=bool)
    idx = np.arange(q)
    for p, v in factorize(q):
        local = _quartic_prime_table(p)[np.ix_(idx % p, idx % p)].astype(np.int64)
        zero |= local < 0
        table = (table + v * local) % 4
    table[zero] = -1
    return table.astype(np.int8)


gaussian_service = GaussianService()
