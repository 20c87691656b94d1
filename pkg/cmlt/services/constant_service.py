"""
Explicit constants for the fixed-trace prime counts.

- xi, theta and the F4 table
- Euler products (direct and L-value accelerated), h_{D,r} and the second constant c_{D,r}
- Hardy-Littlewood densities for quadratic polynomials
- exact finite factors of the four curve families and the resulting varpi
- predicted densities for the symbol-constrained counts and for Pi_D
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from cmlt.core.arith import (
    checked,
    euler_phi,
    is_square,
    jacobi,
    kronecker,
    odd_part,
    ord_p,
    prime_support,
)
from cmlt.core.config import get_settings
from cmlt.core.curve_catalog import curve_catalog
from cmlt.core.errors import ConstantError, ErrorCode
from cmlt.core.sieve import prime_array
from cmlt.core.tables import legendre_array
from cmlt.models.curve import QuadPoly, check_discriminant, g_factorize, GFactorization
from cmlt.models.eisenstein import EisInt
from cmlt.models.units import UnitI4, UnitW6
from cmlt.schemas import ConstantReport
from cmlt.services.eisenstein_service import eisenstein_service
from cmlt.services.frobenius_service import field_discriminant
from cmlt.services.gaussian_service import gaussian_service
from cmlt.services.local_factors import frak_A, omega_j, sigma_D
from cmlt.services.residue_service import residue_service

logger = logging.getLogger(__name__)

METHODS = ("direct", "accelerated")

# F4(D, r) by D class, indexed by r mod 4
_F4_ROWS = {
    "1mod4": (Fraction(2), Fraction(0), Fraction(2), Fraction(0)),
    "2mod4": (Fraction(0), Fraction(0), Fraction(4), Fraction(0)),
    "3mod8": (Fraction(2, 3), Fraction(4, 3), Fraction(2, 3), Fraction(4, 3)),
    "7mod8": (Fraction(2), Fraction(0), Fraction(2), Fraction(0)),
}


# ============== Small exact helpers ==============


def re_omega(k: int) -> Fraction:
    """Re(w^k): 1 when 3 | k, else -1/2."""
    return Fraction(1) if k % 3 == 0 else Fraction(-1, 2)


def sign(e: int) -> int:
    """(-1)^e for any integer e."""
    return -1 if e % 2 else 1


def xi_theta(D: int, r: int) -> Tuple[int, int]:
    check_discriminant(D)
    if r == 0:
        raise ConstantError(ErrorCode.ZERO_R, "r must be non-zero")
    coprime = math.gcd(D, r) == 1
    if D == 1:
        return (1 if r % 2 == 0 else 0), 0
    if D == 2:
        hit = 1 if r % 4 == 2 else 0
        return hit, hit
    if r % 2 == 0 and coprime:
        return 1, 1
    if D % 8 == 3 and coprime:
        return 2, 1
    return 0, 0


def F4(D: int, r: int) -> Fraction:
    if D % 4 == 1:
        row = "1mod4"
    elif D % 4 == 2:
        row = "2mod4"
    elif D % 8 == 3:
        row = "3mod8"
    else:
        row = "7mod8"
    return _F4_ROWS[row][r % 4]


def J_member(p: int, D: int, g: int, r: int, j: int) -> bool:
    """j in J_p(g, r): j does not divide ord_p(g1), p does not divide r and A_j(g1) | p r."""
    g1 = g_factorize(D, g).g1
    return ord_p(g1, p) % j != 0 and r % p != 0 and (p * r) % frak_A(g1, j) == 0


def l_value(D: int) -> float:
    """L(1, chi_D) from the class number formula with class number one."""
    check_discriminant(D)
    w = curve_catalog.units(D)
    return 2 * math.pi / (w * math.sqrt(abs(field_discriminant(D))))


# ============== Family quantities ==============


def d1_sign_s(r: int, g1: int) -> int:
    """(-1)^((r-2)/4 + (g1^2-1)/8) for r = 2 mod 4."""
    return sign((r - 2) // 4 + (g1 * g1 - 1) // 8)


def d1_exponent_e(f: GFactorization) -> int:
    return f.delta + (f.lam + f.g1 - 1) // 2


def d3_u(g1: int) -> int:
    assert (g1 * g1 - 1) % 3 == 0
    return (g1 * g1 - 1) // 3 % 3


def varsigma1(f: GFactorization, r: int) -> Fraction:
    u = d3_u(f.g1)
    if r % 2 == 0:
        return 1 + 2 * re_omega(f.mu) * re_omega(f.lam + u)
    return re_omega(1 + u) + re_omega(f.mu) * (re_omega(2 - f.lam + u) + re_omega(2 + f.lam))


def varsigma2(f: GFactorization, r: int) -> Fraction:
    half = (f.g1 - 1) // 2
    if r % 24 in (8, 16):
        value = Fraction(sign(f.delta + f.lam + f.mu + half))
        return value if r % 24 == 8 else -value
    if r % 24 in (20, 4):
        value = Fraction(sign(f.delta + f.mu + half))
        return value if r % 24 == 20 else -value
    if r % 12 in (2, 10):
        value = Fraction(1 + sign(f.lam), 2)
        return value if r % 12 == 2 else -value
    if r % 6 in (5, 1):
        value = Fraction((1 + sign(f.lam)) * (1 + sign(f.delta + f.mu + half)), 4)
        return value if r % 6 == 5 else -value
    return Fraction(0)


def epsilon_D(f: GFactorization, r: int) -> Fraction:
    half = (f.g1 - 1) // 2
    if r % 4 == 2:
        return Fraction(sign(half) * (1 + sign(f.lam)), 2)
    if r % 4 == 0:
        return Fraction(sign(f.delta + f.mu + (f.lam * r) // 4))
    return Fraction((1 + sign(f.lam)) * (sign(half) + sign(f.delta + f.mu)), 4)


@dataclass(frozen=True)
class DensityConstant:
    """h_{D,r} with the pieces it is made of."""

    D: int
    r: int
    xi: int
    euler_value: float
    h: float
    method: str
    cutoff: int


@lru_cache(maxsize=256)
def _euler_cached(D: int, support: Tuple[int, ...], cutoff: int, method: str) -> float:
    primes = prime_array(3, cutoff + 1)
    keep = np.ones(primes.size, dtype=bool)
    for p in support:
        keep &= primes != p
    primes = primes[keep]
    chi = legendre_array(-D, primes).astype(np.float64)
    pf = primes.astype(np.float64)
    if method == "direct":
        return float(np.exp(np.sum(np.log1p(-chi / (pf - 1)))))

    chi_2 = kronecker(field_discriminant(D), 2)
    head = 1.0 / (1 - chi_2 / 2)
    for p in support:
        head /= 1 - kronecker(field_discriminant(D), p) / p
    head /= l_value(D)
    tail = float(np.exp(np.sum(np.log1p(-chi / ((pf - 1) * (pf - chi))))))
    return head * tail


class ConstantService:
    """Evaluates the constants; exact where a vanishing decision depends on them."""

    def sigma_D(self, D: int, p: int) -> int:
        return sigma_D(D, p)

    # ============== Euler products ==============

    def euler_product(self, D: int, r: int, cutoff: Optional[int] = None, method: str = "direct") -> float:
        """prod over odd p not dividing r of (1 - (-D/p)/(p-1)), truncated at cutoff."""
        check_discriminant(D)
        if method not in METHODS:
            raise ConstantError(ErrorCode.BAD_PARAMS, f"method must be one of {METHODS}, got {method}")
        if r == 0:
            raise ConstantError(ErrorCode.ZERO_R, "r must be non-zero")
        cutoff = cutoff or self._default_cutoff(method)
        if cutoff < 1000:
            raise ConstantError(ErrorCode.BAD_PARAMS, f"cutoff must be at least 1000, got {cutoff}")
        support = tuple(p for p in prime_support(abs(r)) if p != 2)
        value = _euler_cached(D, support, cutoff, method)
        logger.debug(f"Euler product D={D} r={r} {method} cutoff={cutoff}: {value:.10f}")
        return value

    def _default_cutoff(self, method: str) -> int:
        settings = get_settings()
        return settings.direct_cutoff if method == "direct" else settings.accelerated_cutoff

    def h_D_r(self, D: int, r: int, cutoff: Optional[int] = None, method: str = "direct") -> DensityConstant:
        xi, _ = xi_theta(D, r)
        cutoff = cutoff or self._default_cutoff(method)
        value = self.euler_product(D, r, cutoff, method)
        h = 0.0 if xi == 0 else xi * math.sqrt(D) / euler_phi(D) * value
        return DensityConstant(D, r, xi, value, h, method, cutoff)

    def c_D_r_second(self, D: int, r: int, cutoff: Optional[int] = None) -> float:
        """
        The Lang-Trotter second constant w_D/(2 pi) F4(D, r) prod A_p prod B_p.

        Returns 0 when D and r share an odd prime.
        """
        check_discriminant(D)
        if r == 0:
            raise ConstantError(ErrorCode.ZERO_R, "r must be non-zero")
        common = odd_part(math.gcd(D, r))
        if common > 1:
            logger.info(f"{ErrorCode.ODD_COMMON_FACTOR.value}: gcd(D={D}, r={r}) has odd part {common}")
            return 0.0
        cutoff = cutoff or get_settings().direct_cutoff
        value = curve_catalog.units(D) / (2 * math.pi) * float(F4(D, r))
        for p in prime_support(abs(r)):
            if p == 2:
                continue
            value /= 1 - kronecker(-D, p) / p
        primes = prime_array(3, cutoff + 1)
        primes = primes[abs(r) % primes != 0]
        chi = legendre_array(-D, primes)
        pf = primes.astype(np.float64)
        b = np.where(
            chi == 0,
            1 / (1 - 1 / pf),
            np.where(chi == 1, (1 - 2 / pf) / (1 - 1 / pf) ** 2, 1 / (1 - 1 / pf**2)),
        )
        return value * float(np.exp(np.sum(np.log(b))))

    # ============== Hardy-Littlewood ==============

    def _check_hl(self, poly: QuadPoly) -> None:
        if poly.a <= 0:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"leading coefficient must be positive in {poly}")
        if is_square(poly.discriminant):
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"discriminant {poly.discriminant} is a square")
        if math.gcd(poly.a, poly.b, poly.c) != 1:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"{poly} is not primitive")

    def _hl_product(self, disc: int, excluded: int, cutoff: int) -> float:
        primes = prime_array(3, cutoff + 1)
        primes = primes[excluded % primes != 0]
        chi = legendre_array(disc, primes)
        return float(np.exp(np.sum(np.log1p(-chi / (primes.astype(np.float64) - 1)))))

    def hl_constant(self, poly: QuadPoly, cutoff: Optional[int] = None) -> float:
        self._check_hl(poly)
        if (poly.a + poly.b) % 2 == 0 and poly.c % 2 == 0:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, "a + b and c are both even")
        cutoff = cutoff or get_settings().direct_cutoff
        delta = odd_part(math.gcd(poly.a, poly.b))
        head = math.gcd(2, poly.a + poly.b) / math.sqrt(poly.a) * delta / euler_phi(delta)
        return head * self._hl_product(poly.discriminant, poly.a, cutoff)

    def hl_constant_ap(self, poly: QuadPoly, q: int, u: int, cutoff: Optional[int] = None) -> float:
        """Density of primes a m^2 + b m + c with m = u mod q."""
        self._check_hl(poly)
        if q <= 0:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"q must be positive, got {q}")
        if math.gcd(q, poly(u)) != 1:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, f"gcd(q, f(u)) = {math.gcd(q, poly(u))}")
        if ((poly.a + poly.b) * q) % 2 == 0 and ((poly.a + poly.b) * u + poly.c) % 2 == 0:
            raise ConstantError(ErrorCode.HYPOTHESIS_FAIL, "(a + b) q and (a + b) u + c are both even")
        cutoff = cutoff or get_settings().direct_cutoff
        a, b = poly.a, poly.b
        big_delta = odd_part(q * math.gcd(a * q, 2 * a * u + b))
        head = math.gcd(2, (a + b) * q) / (q * math.sqrt(a)) * big_delta / euler_phi(big_delta)
        return head * self._hl_product(poly.discriminant, q * a, cutoff)

    # ============== Finite factors ==============

    def finite_factor(self, D: int, g: int, r: int) -> Tuple[Fraction, Dict[str, Fraction], Optional[str]]:
        """(finite factor, named intermediates, convention reason or None) in exact rationals."""
        if r == 0:
            raise ConstantError(ErrorCode.ZERO_R, "r must be non-zero")
        f = g_factorize(D, g)
        if D == 1:
            return self._finite_d1(f, r)
        if D == 3:
            return self._finite_d3(f, r)
        if D == 2:
            return self._finite_d2(f, r)
        return self._finite_large(D, f, r)

    def _finite_d1(self, f: GFactorization, r: int):
        if r % 2:
            return Fraction(0), {}, "r is odd"
        om2 = omega_j(1, f.g1, r, 2)
        om4 = omega_j(1, f.g1, r, 4)
        if r % 4 == 0:
            kappa = 1 - sign(f.lam * r // 4) * om2
        elif f.lam % 2:
            kappa = Fraction(1)
        else:
            e = d1_exponent_e(f)
            kappa = 1 + om2 + d1_sign_s(r, f.g1) * (1 - sign(e)) * om4
        kappa = checked(kappa)
        return kappa / 4, {"kappa": kappa, "Omega2": om2, "Omega4": om4}, None

    def _finite_d3(self, f: GFactorization, r: int):
        if r % 3 == 0:
            return Fraction(0), {}, "3 divides r"
        s1, s2 = varsigma1(f, r), varsigma2(f, r)
        om2, om3, om6 = (omega_j(3, f.g1, r, j) for j in (2, 3, 6))
        tau = s2 * jacobi(3, f.g1)
        bracket = checked(1 + Fraction(2, 3) * s1 * om3 + tau * (om2 + Fraction(2, 3) * s1 * om6))
        breakdown = {"varsigma1": s1, "varsigma2": s2, "Omega2": om2, "Omega3": om3, "Omega6": om6, "bracket": bracket}
        return bracket / 6, breakdown, None

    def _finite_d2(self, f: GFactorization, r: int):
        if r % 4 != 2:
            return Fraction(0), {}, "r is not 2 mod 4"
        om2 = omega_j(2, f.g1, r, 2)
        exponent = (r - 2) * (r + 10) // 32 + f.delta + f.lam + (f.g1 - 1) // 2
        bracket = 1 + Fraction(sign(exponent) * kronecker(2, f.g1), 2) * om2
        return bracket / 2, {"Omega2": om2, "bracket": bracket}, None

    def _finite_large(self, D: int, f: GFactorization, r: int):
        if r % D == 0:
            return Fraction(0), {}, f"{D} divides r"
        om2 = omega_j(D, f.g1, r, 2)
        eps = epsilon_D(f, r)
        chi = kronecker(2 ** (f.lam + 1) * f.g1 * r, D)
        bracket = 1 + eps * chi * om2
        return bracket / 2, {"epsilon": eps, "Omega2": om2, "bracket": bracket}, None

    def varpi(
        self, D: int, g: int, r: int, cutoff: Optional[int] = None, method: str = "direct"
    ) -> ConstantReport:
        density = self.h_D_r(D, r, cutoff, method)
        finite, breakdown, reason = self.finite_factor(D, g, r)
        if density.xi == 0:
            reason = "xi = 0"
        varpi = 0.0 if density.xi == 0 or finite == 0 else density.h * float(finite)
        logger.debug(f"varpi D={D} g={g} r={r}: finite={finite} h={density.h:.8f}")
        return ConstantReport(
            D=D,
            g=g,
            r=r,
            xi=density.xi,
            finite_factor=finite,
            euler_value=density.euler_value,
            method=method,
            cutoff=density.cutoff,
            h=density.h,
            varpi=varpi,
            breakdown=breakdown,
            reason=reason,
        )

    def predicted_count(
        self, D: int, g: int, r: int, x: int, cutoff: Optional[int] = None, method: str = "direct"
    ) -> float:
        """varpi * sqrt(x) / log x."""
        return self.varpi(D, g, r, cutoff, method).varpi * math.sqrt(x) / math.log(x)

    # ============== Predicted densities ==============

    def predicted_density_Gd(self, r: int, alpha: int, beta: UnitI4, gamma: Tuple[int, int], d: int) -> Fraction:
        """Delta_G * G_d for the Gaussian count; the count itself is (h_{1,r}/16) times this."""
        if alpha < 1 or alpha % 2 == 0:
            raise ConstantError(ErrorCode.BAD_PARAMS, f"alpha must be odd and positive, got {alpha}")
        if not 0 <= d <= 3:
            raise ConstantError(ErrorCode.BAD_PARAMS, f"d must lie in 0..3, got {d}")
        if beta.k >= 2:
            r, beta = -r, -beta
        g1_, g2_ = gamma
        if beta.k == 0:
            hit = (r - 4 * g1_ - 2) % 32 == 0
        else:
            hit = (r + 4 * g2_) % 32 == 0
        if not hit:
            return Fraction(0)
        eta = 0 if alpha % 4 == 1 else 1
        symbol = gaussian_service.quartic_symbol_rational((UnitI4(1) * beta).to_gauss(), alpha)
        if symbol.im != 0:
            raise ConstantError(ErrorCode.NONCONVERGENT, f"(i beta/{alpha})_4 = {symbol} is not real")
        re_id = (1, 0, -1, 0)[d % 4]
        value = (
            1
            + 2 * re_id * sign(eta * g2_) * symbol.re * omega_j(1, alpha, r, 4)
            + sign(d) * omega_j(1, alpha, r, 2)
        )
        return checked(value)

    def predicted_density_Ed(
        self, r: int, alpha: int, beta: UnitW6, gamma: EisInt, d: int, k: int, eps: int
    ) -> Fraction:
        """Delta_E * E_{d,k,eps} for the Eisenstein count; the count itself is (h_{3,r}/72) times this."""
        if alpha < 1 or math.gcd(alpha, 6) != 1:
            raise ConstantError(ErrorCode.BAD_PARAMS, f"alpha must be positive and prime to 6, got {alpha}")
        if beta.sign == -1:
            r, beta = -r, -beta
        delta_e = self._delta_E(r, k, gamma, beta)
        if delta_e == 0:
            return Fraction(0)
        cubic = eisenstein_service.cubic_symbol_rational(beta.to_eis(), alpha)
        root = UnitW6.from_eis(cubic).k
        twist = eps * sign(k * (alpha - 1) // 2) * jacobi(3, alpha)
        om2, om3, om6 = (omega_j(3, alpha, r, j) for j in (2, 3, 6))
        value = 1 + twist * om2 + 2 * re_omega(d + root) * (om3 + twist * om6)
        return checked(delta_e * value)

    def _delta_E(self, r: int, k: int, gamma: EisInt, beta: UnitW6) -> int:
        def mod2(z: EisInt):
            return z.re % 2, z.om % 2

        square = beta.to_eis() * beta.to_eis()
        g = mod2(gamma)
        if r % 24 == 16 and k % 4 == 1 and g == mod2(square):
            return 8
        if r % 24 == 4 and k % 4 == 3 and g == mod2(square):
            return 8
        if r % 12 == 10 and k % 2 == 0 and g == mod2(square):
            return 4
        if r % 6 == 1 and g in (mod2(square * EisInt(0, 1)), mod2(square * EisInt(1, 1))):
            return 1
        return 0

    def predicted_Pi_D(self, D: int, r: int, q: int, a: int, cutoff: Optional[int] = None) -> float:
        """
        Density of unordered pairs counted by Pi_D(x; r, q, a), i.e. half the
        element count of the conjecture; multiply by sqrt(x)/log x for a count.
        """
        check_discriminant(D)
        if q < 1 or math.gcd(q, a) != 1:
            raise ConstantError(ErrorCode.BAD_RESIDUE, f"a={a} is not a unit mod q={q}")
        _, theta = xi_theta(D, r)
        if theta == 0:
            return 0.0
        cutoff = cutoff or get_settings().direct_cutoff
        q_odd = odd_part(q)
        product = self.euler_product(D, q * r, cutoff, "direct")
        if D == 2:
            rho = residue_service.rho(r, q, a)
            value = rho * 2 * math.sqrt(2) / q * q_odd / euler_phi(q_odd) * product
        else:
            rho = residue_service.rho_D(D, r, q, a)
            value = (
                rho * 2 * math.gcd(2, q * (r + 1)) / q * math.sqrt(D) * q_odd / euler_phi(D * q_odd) * product
            )
        return value / 2


constant_service = ConstantService()
