"""
Prime counting by trace of Frobenius.

Histograms of a_p over good primes (serial and chunked across processes),
fixed-trace counts through prime elements and through quadratic
progressions, the symbol-constrained Gaussian and Eisenstein counts, and
primes represented by quadratic polynomials.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from cmlt.core.arith import is_prime, jacobi
from cmlt.core.config import get_settings
from cmlt.core.errors import CountingError, ErrorCode
from cmlt.core.observability import traced, traced_call
from cmlt.core.sieve import iter_prime_segments, prime_count, split_range
from cmlt.core.tables import legendre_array
from cmlt.models.curve import CurveSpec, QuadPoly, check_discriminant, g_factorize
from cmlt.models.eisenstein import EisInt
from cmlt.models.gaussian import GaussInt
from cmlt.models.units import UnitI4, UnitW6
from cmlt.schemas import TraceHistogram
from cmlt.services.constant_service import constant_service, sign
from cmlt.services.eisenstein_service import eisenstein_service
from cmlt.services.frobenius_service import field_discriminant, frobenius_service
from cmlt.services.gaussian_service import gaussian_service

logger = logging.getLogger(__name__)

ROUTES = ("auto", "formula", "polynomial")
POLYNOMIAL_THRESHOLD = 10**6
UPPER_BOUND_SCALE = 3.51
UPPER_BOUND_SLACK = 50
# units of Z[w]/(2) with the exponent of (2/pi)_3 on that class
EIS_CLASSES_MOD2 = ((EisInt(1, 0), 0), (EisInt(0, 1), 1), (EisInt(1, 1), 2))


# ============== Progressions ==============


def h_poly(D: int, r: int) -> Optional[QuadPoly]:
    """The progression whose prime values carry an element of trace r, or None."""
    check_discriminant(D)
    if D % 4 == 3:
        return QuadPoly(D, -D * r, (D + 1) * r * r // 4)
    if r % 2 == 0:
        return QuadPoly(D, 0, r * r // 4)
    return None


def progression_primes(poly: QuadPoly, x: int, q: int = 1, u: int = 1) -> FrozenSet[int]:
    """Distinct primes <= x of the form poly(m) with m >= 1 and m = u mod q."""
    if poly.a <= 0:
        raise CountingError(ErrorCode.BAD_PARAMS, f"leading coefficient must be positive in {poly}")
    vertex = -poly.b / (2 * poly.a)
    m = u % q or q
    found = set()
    while True:
        value = poly(m)
        if value > x and m > vertex:
            break
        if 2 <= value <= x and is_prime(value):
            found.add(value)
        m += q
    return frozenset(found)


def element_traces(D: int, coords: Tuple[int, int]) -> FrozenSet[int]:
    """Traces of all unit multiples of a prime element with the given norm-form coordinates."""
    u, v = coords
    if D == 1:
        return frozenset({2 * u, -2 * u, 2 * v, -2 * v})
    if D == 2:
        return frozenset({2 * u, -2 * u})
    if D == 3:
        return frozenset({u, -u, (u + 3 * v) // 2, -(u + 3 * v) // 2, (u - 3 * v) // 2, -(u - 3 * v) // 2})
    return frozenset({u, -u})


def _split_coords(D: int, p: int) -> Optional[Tuple[int, int]]:
    """Norm-form coordinates when p splits, else None."""
    if p == 2:
        # 8 = t^2 + D s^2 has a solution only for D = 7
        return (1, 1) if D == 7 else None
    if field_discriminant(D) % p == 0 or jacobi(field_discriminant(D), p) != 1:
        return None
    return frobenius_service.norm_form_solve(D, p).coords


def _check_window(r_min: int, r_max: int) -> None:
    if r_min > r_max:
        raise CountingError(ErrorCode.BAD_PARAMS, f"empty trace window [{r_min}, {r_max}]")


# ============== Histogram workers ==============


def _histogram_range(D: int, g: int, lo: int, hi: int, r_min: int, r_max: int, x: int) -> TraceHistogram:
    """Histogram over the primes in [lo, hi); module level so worker processes can import it."""
    curve = CurveSpec(D, g)
    bad = frobenius_service.bad_primes(curve)
    counts = {}
    overflow = good = 0
    skipped = []
    disc = field_discriminant(D)
    for segment in iter_prime_segments(lo, hi):
        symbols = legendre_array(disc, segment) if segment.size else segment
        for p, symbol in zip(segment.tolist(), np.asarray(symbols).tolist()):
            if p in bad:
                skipped.append(p)
                continue
            good += 1
            if symbol == 1:
                ap = frobenius_service.ap_split(curve, frobenius_service.norm_form_solve(D, p))
            else:
                ap = 0
            if r_min <= ap <= r_max:
                counts[ap] = counts.get(ap, 0) + 1
            else:
                overflow += 1
    return TraceHistogram(
        D=D,
        g=g,
        x=x,
        r_min=r_min,
        r_max=r_max,
        counts=counts,
        overflow=overflow,
        good_primes=good,
        bad_primes_skipped=skipped,
    )


class TraceCountService:
    """Counts of primes by trace, by prime elements and by quadratic progressions."""

    # ============== Histograms ==============

    def count_traces(self, curve: CurveSpec, x: int, r_min: int = -20, r_max: int = 20) -> TraceHistogram:
        _check_window(r_min, r_max)
        if x < 2:
            return TraceHistogram(D=curve.D, g=curve.g, x=x, r_min=r_min, r_max=r_max)
        with traced("traces.histogram", {"D": curve.D, "g": curve.g, "x": x}):
            histogram = _histogram_range(curve.D, curve.g, 2, x + 1, r_min, r_max, x)
        logger.info(f"Histogram for {curve} up to {x}: {histogram.good_primes} good primes")
        return histogram

    def count_traces_parallel(
        self, curve: CurveSpec, x: int, r_min: int = -20, r_max: int = 20, threads: Optional[int] = None
    ) -> TraceHistogram:
        """Same histogram as count_traces, with the prime range split across worker processes."""
        _check_window(r_min, r_max)
        threads = threads or get_settings().threads
        if x < 2:
            return TraceHistogram(D=curve.D, g=curve.g, x=x, r_min=r_min, r_max=r_max)
        if threads == 1:
            return self.count_traces(curve, x, r_min, r_max)
        pieces = split_range(2, x + 1, get_settings().chunk_count or 4 * threads)
        histogram = TraceHistogram(D=curve.D, g=curve.g, x=x, r_min=r_min, r_max=r_max)
        with traced("traces.histogram_parallel", {"D": curve.D, "x": x, "chunks": len(pieces)}):
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(_histogram_range, curve.D, curve.g, lo, hi, r_min, r_max, x) for lo, hi in pieces
                ]
                for future in futures:
                    histogram = histogram.merge(future.result())
        logger.info(f"Parallel histogram for {curve} up to {x}: {len(pieces)} chunks on {threads} workers")
        return histogram

    def count_trace_single(self, curve: CurveSpec, r: int, x: int, route: str = "auto") -> Tuple[int, str]:
        """pi_{E,r}(x) and the route that produced it."""
        if r == 0:
            raise CountingError(ErrorCode.ZERO_R, "use count_traces for r = 0")
        if route not in ROUTES:
            raise CountingError(ErrorCode.BAD_PARAMS, f"route must be one of {ROUTES}, got {route}")
        if route == "auto":
            large = x > POLYNOMIAL_THRESHOLD and curve.D not in (1, 3)
            route = "polynomial" if large else "formula"
        if route == "formula":
            return self.count_traces(curve, x, r, r).count(r), route

        poly = h_poly(curve.D, abs(r))
        if poly is None:
            return 0, route
        bad = frobenius_service.bad_primes(curve)
        with traced("traces.progression", {"D": curve.D, "r": r, "x": x}):
            count = sum(
                1
                for p in progression_primes(poly, x)
                if p not in bad and frobenius_service.ap_formula(curve, p) == r
            )
        return count, route

    def deuring_density(self, curve: CurveSpec, x: int) -> float:
        """pi_{E,0}(x) / pi(x) over good primes."""
        bad = frobenius_service.bad_primes(curve)
        disc = field_discriminant(curve.D)
        good = inert = 0
        for segment in iter_prime_segments(3, x + 1):
            keep = np.array([p not in bad for p in segment.tolist()], dtype=bool)
            segment = segment[keep]
            good += int(segment.size)
            # a split good prime is ordinary, so a_p = 0 exactly at the inert ones
            inert += int(np.count_nonzero(legendre_array(disc, segment) == -1))
        return inert / good if good else 0.0

    def upper_bound_check(self, curve: CurveSpec, r: int, x: int) -> Tuple[int, float, bool]:
        """pi_{E,r}(x) + pi_{E,-r}(x) against the sieve bound."""
        histogram = self.count_traces(curve, x, -abs(r), abs(r))
        lhs = histogram.count(r) + histogram.count(-r)
        h = constant_service.h_D_r(curve.D, r).h
        rhs = UPPER_BOUND_SCALE * h * math.sqrt(x) / math.log(x) + UPPER_BOUND_SLACK
        return lhs, rhs, lhs <= rhs

    # ============== Fixed trace ==============

    def count_fixed_trace(self, D: int, r: int, x: int) -> Tuple[int, int]:
        """(primes with an element of trace r, primes of the form h_{D,r}(n))."""
        if r == 0:
            raise CountingError(ErrorCode.ZERO_R, "r must be non-zero")
        via_elements = self.count_Pi_D(D, x, r, 1, 0)
        poly = h_poly(D, r)
        via_polynomial = len(progression_primes(poly, x)) if poly is not None else 0
        return via_elements, via_polynomial

    def count_Pi_D(self, D: int, x: int, r: int, q: int, a: int) -> int:
        """Primes p <= x, p = a mod q, carrying a prime element of trace r (one per conjugate pair)."""
        check_discriminant(D)
        if q < 1 or math.gcd(q, a) != 1:
            raise CountingError(ErrorCode.BAD_RESIDUE, f"a={a} is not a unit mod q={q}")
        if x < 2:
            return 0
        count = 0
        for segment in iter_prime_segments(2, x + 1):
            for p in segment.tolist():
                if (p - a) % q:
                    continue
                coords = _split_coords(D, p)
                if coords is not None and r in element_traces(D, coords):
                    count += 1
        return count

    # ============== Gaussian counts ==============

    def count_Gd(self, x: int, r: int, alpha: int, beta: UnitI4, gamma: Tuple[int, int], d: int) -> int:
        g1_, g2_ = gamma
        if alpha < 1 or alpha % 2 == 0 or not 0 <= d <= 3 or not (0 <= g1_ <= 7 and 0 <= g2_ <= 7) or (g1_ - g2_) % 2:
            raise CountingError(ErrorCode.BAD_PARAMS, f"invalid G_d parameters alpha={alpha} d={d} gamma={gamma}")
        target = UnitI4(d).to_gauss()
        count = 0
        for pi in _gauss_candidates(x, r, beta.k):
            if (pi.re - 2 * g1_ - 1) % 16 or (pi.im - 2 * g2_) % 16:
                continue
            if gaussian_service.quartic_symbol_prime(GaussInt(alpha), pi) == target:
                count += 1
        return count

    @traced_call("traces.via_Gd")
    def pi_E_via_Gd(self, g: int, r: int, x: int) -> int:
        """2 pi_{E,r}(x) + O(1) for y^2 = x^3 - g x, assembled from G_d counts."""
        f = g_factorize(1, g)
        total = 0
        for d in range(4):
            for g1_ in range(8):
                for g2_ in range(g1_ % 2, 8, 2):
                    a, b = 2 * g1_ + 1, 2 * g2_
                    shift = f.delta * (a * a + b * b - 1) // 2 + f.lam * (3 * a * a + b * b + 2 * a - 2 * b - 5) // 4
                    total += self.count_Gd(x, r, f.g1, UnitI4(d), (g1_, g2_), (-d - shift) % 4)
        return total

    # ============== Eisenstein counts ==============

    def count_Ed(
        self, x: int, r: int, alpha: int, beta: UnitW6, gamma: EisInt, d: int, k: int, eps: int
    ) -> int:
        if math.gcd(alpha, 6) != 1 or not 0 <= d <= 2 or not 0 <= k <= 3 or eps not in (1, -1):
            raise CountingError(ErrorCode.BAD_PARAMS, f"invalid E parameters alpha={alpha} d={d} k={k} eps={eps}")
        target = UnitW6(1, d).to_eis()
        count = 0
        for pi in _eis_candidates(x, r, beta.sign, beta.k):
            n = pi.norm()
            if n % 8 != 2 * k + 1 or (pi.re - gamma.re) % 2 or (pi.om - gamma.om) % 2:
                continue
            if jacobi(alpha, n) != eps:
                continue
            if eisenstein_service.cubic_symbol_prime(EisInt(alpha), pi) == target:
                count += 1
        return count

    @traced_call("traces.via_Ed")
    def pi_E_via_Ed(self, g: int, r: int, x: int) -> int:
        """2 pi_{E,r}(x) + O(1) for y^2 = x^3 + g, assembled from E_{d,k,eps} counts."""
        f = g_factorize(3, g)
        # (3/pi)_3 depends on pi mod 9, which the classes mod 2 cannot see
        if f.mu % 3:
            raise CountingError(
                ErrorCode.HYPOTHESIS_FAIL, f"the power of 3 in g={g} must be divisible by 3, got {f.mu}"
            )
        total = 0
        for gamma, step in EIS_CLASSES_MOD2:
            # (4g/pi)_3 = (2/pi)_3^(2 + lam) (g1/pi)_3 and (2/pi)_3 = w^step for pi = gamma mod 2
            d0 = step * (2 + f.lam)
            for k in range(4):
                eps = sign(f.lam * k * (k + 1) // 2 + (f.delta + f.mu) * k)
                for d in range(3):
                    beta = UnitW6(1, d)
                    total += self.count_Ed(x, -r, f.g1, beta, gamma, (d - d0) % 3, k, eps)
                    total += self.count_Ed(x, r, f.g1, beta, gamma, (d - d0) % 3, k, -eps)
        return total

    # ============== Polynomial primes ==============

    def count_hl(self, poly: QuadPoly, x: int) -> int:
        return len(progression_primes(poly, x))

    def count_hl_ap(self, poly: QuadPoly, x: int, q: int, u: int) -> int:
        if q < 1:
            raise CountingError(ErrorCode.BAD_PARAMS, f"q must be positive, got {q}")
        return len(progression_primes(poly, x, q, u))

    def prime_total(self, x: int) -> int:
        return prime_count(2, x + 1) if x >= 2 else 0


@lru_cache(maxsize=64)
def _gauss_candidates(x: int, r: int, beta_k: int) -> List[GaussInt]:
    """Primary Gaussian primes of prime norm <= x with Tr(i^beta_k pi) = r."""
    if r % 2:
        return []
    half = r // 2
    found = []
    bound = math.isqrt(max(x - half * half, 0))
    if half * half > x:
        return []
    for other in range(-bound, bound + 1):
        # Tr(pi) = 2a, Tr(i pi) = -2b, Tr(-pi) = -2a, Tr(-i pi) = 2b
        pi = (
            GaussInt(half, other),
            GaussInt(other, -half),
            GaussInt(-half, other),
            GaussInt(other, half),
        )[beta_k]
        if pi.is_primary() and is_prime(pi.norm()):
            found.append(pi)
    return found


@lru_cache(maxsize=64)
def _eis_candidates(x: int, r: int, beta_sign: int, beta_k: int) -> List[EisInt]:
    """Primary Eisenstein primes pi of prime norm <= x with Tr(beta pi) = r."""
    beta_bar = UnitW6(beta_sign, beta_k).conj().to_eis()
    found = []
    # pi' = a + (2a - r) w has trace r and norm 3a^2 - 3ar + r^2
    spread = math.isqrt(max(4 * x - r * r, 0) // 3) + 2
    for a in range((r - spread) // 2, (r + spread) // 2 + 1):
        n = 3 * a * a - 3 * a * r + r * r
        if n > x or not is_prime(n):
            continue
        pi = beta_bar * EisInt(a, 2 * a - r)
        if pi.is_primary():
            found.append(pi)
    return found


trace_count_service = TraceCountService()
