"""
Decision procedures on the constants.

- positivity: does varpi_{E,r} vanish, and which listed condition forces it
- anomalous: are there only finitely many primes with a_p = 1
- symmetry: is varpi_{E,r} = varpi_{E,-r}

Every verdict is decided from the factorization of g and r alone, so it can
be cross-checked against the exact finite factor.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from cmlt.core.arith import factorize, integer_root, is_square, jacobi, kronecker
from cmlt.core.errors import ConstantError, ErrorCode
from cmlt.models.curve import GFactorization, check_discriminant, g_factorize
from cmlt.schemas import Verdict
from cmlt.services.constant_service import (
    constant_service,
    d1_exponent_e,
    d1_sign_s,
    d3_u,
    epsilon_D,
    sigma_D,
    varsigma1,
    varsigma2,
    xi_theta,
)

logger = logging.getLogger(__name__)

VANISHES = "VANISHES"
POSITIVE = "POSITIVE"
FINITE = "FINITE"
INFINITE = "INFINITE"
SYMMETRIC = "SYMMETRIC"
ASYMMETRIC = "ASYMMETRIC"
CONVENTION = "CONVENTION"

# twists g = c * t^6 with finitely many anomalous primes on y^2 = x^3 + g
SEXTIC_CLASSES = (80, -2160, -268912, 7260624)


def _open_primes(f: GFactorization, r: int, j: int) -> List[int]:
    """Primes p | g1 with p not dividing r and j not dividing ord_p(g1)."""
    return [p for p, v in factorize(f.g1) if r % p != 0 and v % j != 0]


def _d3_class_index(r: int) -> int:
    """Position of r among the eight residue classes that fix varsigma2."""
    for index, (modulus, residue) in enumerate(
        ((24, 8), (24, 16), (24, 20), (24, 4), (12, 2), (12, 10), (6, 5), (6, 1)), start=1
    ):
        if r % modulus == residue:
            return index
    raise ValueError(f"r={r} is divisible by 3")


class ClassifierService:
    """Verdicts for positivity, finiteness of anomalous primes and symmetry in r."""

    # ============== Positivity ==============

    def classify_positivity(self, D: int, g: int, r: int) -> Verdict:
        check_discriminant(D)
        f = g_factorize(D, g)
        if D == 1:
            condition = self._positivity_d1(f, r)
        elif D == 3:
            condition = self._positivity_d3(f, r)
        elif D == 2:
            condition = None if r % 4 == 2 else CONVENTION
        else:
            condition = self._positivity_large(D, f, r)
        logger.debug(f"positivity D={D} g={g} r={r}: {condition or POSITIVE}")
        if condition is None:
            return Verdict(mode="positivity", result=POSITIVE)
        return Verdict(mode="positivity", result=VANISHES, fired_condition=condition)

    def _positivity_d1(self, f: GFactorization, r: int) -> Optional[str]:
        if r % 2:
            return CONVENTION
        open2 = _open_primes(f, r, 2)
        if r % 8 == 0 and not open2:
            return "I.1"
        if r % 8 == 4 and not open2 and f.lam % 2 == 0:
            return "I.2"
        if r % 4 != 2 or f.lam % 2 or d1_exponent_e(f) % 2 == 0:
            return None
        s = d1_sign_s(r, f.g1)
        g1_class = f.g1 % 8
        if s == -1 and not _open_primes(f, r, 4):
            order = {(2, 3): 1, (2, 5): 2, (6, 1): 3, (6, 7): 4}
            return f"II.{order[(r % 8, g1_class)]}"
        if s == 1:
            open4 = _open_primes(f, r, 4)
            if len(open2) == 1 and open2 == open4 and open2[0] in (3, 5):
                order = {(2, 1): 1, (2, 7): 2, (6, 3): 3, (6, 5): 4}
                return f"III.{order[(r % 8, g1_class)]}"
        return None

    def _positivity_d3(self, f: GFactorization, r: int) -> Optional[str]:
        if r % 3 == 0:
            return CONVENTION
        s1 = varsigma1(f, r)
        tau = varsigma2(f, r) * jacobi(3, f.g1)
        open2, open3 = _open_primes(f, r, 2), _open_primes(f, r, 3)
        index = _d3_class_index(r)
        if tau == 1 and s1 == 3 and len(open2) == 1 and open2 == open3 and open2[0] in (5, 7):
            return f"I.{index}"
        if tau == -1 and not open2:
            return f"II.{index}"
        if s1 == Fraction(-3, 2) and not open3:
            return "III.1" if d3_u(f.g1) == 0 else "III.2"
        return None

    def _positivity_large(self, D: int, f: GFactorization, r: int) -> Optional[str]:
        if r % D == 0:
            return CONVENTION
        if D == 7 and r % 2:
            return "9"
        eps_chi = epsilon_D(f, r) * kronecker(2 ** (f.lam + 1) * f.g1 * r, D)
        if r % 4 == 2:
            shape = 1
        elif r % 4 == 0:
            shape = 2 if f.lam % 2 == 0 else 3
        else:
            shape = 4
        open2 = _open_primes(f, r, 2)
        if not open2 and eps_chi == -1:
            return str(shape)
        # only D = 11 has a prime with sigma_D(p) = 1
        if eps_chi == 1 and len(open2) == 1 and sigma_D(D, open2[0]) == 1:
            return str(shape + 4)
        return None

    # ============== Anomalous primes ==============

    def anomalous_witness(self, D: int, g: int) -> Optional[str]:
        """The special shape g belongs to, or None when it has none."""
        check_discriminant(D)
        if D in (1, 2, 7):
            return "congruence obstruction"
        if g > 0 and is_square(g):
            return "□"
        if g % D == 0 and -g > 0 and is_square(-g // D):
            return f"-{D}·□"
        if D == 3:
            if integer_root(g, 3) is not None:
                return "⬡"
            for c in SEXTIC_CLASSES:
                if g % c == 0 and g // c > 0 and integer_root(g // c, 6) is not None:
                    return f"{c}·⬡²"
        if D == 11:
            if g % 33 == 0 and g // 33 > 0 and is_square(g // 33):
                return "33·□"
            if g % 3 == 0 and -g // 3 > 0 and is_square(-g // 3):
                return "-3·□"
        return None

    def classify_anomalous(self, D: int, g: int) -> Verdict:
        """FINITE when the set form matches; raises ConstantError if the r = 1 positivity verdict disagrees."""
        witness = self.anomalous_witness(D, g)
        by_condition = self.classify_positivity(D, g, 1)
        finite_by_condition = by_condition.result == VANISHES
        if (witness is not None) != finite_by_condition:
            logger.error(
                f"Anomalous forms disagree for D={D} g={g}: witness={witness} "
                f"condition={by_condition.fired_condition}"
            )
            raise ConstantError(ErrorCode.UNDEFINED, f"anomalous set form and r = 1 vanishing disagree for D={D} g={g}")
        if witness is None:
            return Verdict(mode="anomalous", result=INFINITE)
        return Verdict(
            mode="anomalous", result=FINITE, fired_condition=by_condition.fired_condition, witness=witness
        )

    def anomalous_forms_agree(self, D: int, g: int) -> bool:
        witness = self.anomalous_witness(D, g)
        return (witness is not None) == (self.classify_positivity(D, g, 1).result == VANISHES)

    # ============== Symmetry ==============

    def classify_symmetry(self, D: int, g: int, r: int) -> Verdict:
        """SYMMETRIC with the number of the listed case that holds, counted per family."""
        xi, _ = xi_theta(D, r)
        f = g_factorize(D, g)
        condition = self._symmetry_trivial(D, r) if xi == 0 else self._symmetry_condition(D, f, r)
        if condition is None:
            return Verdict(mode="symmetry", result=ASYMMETRIC)
        return Verdict(mode="symmetry", result=SYMMETRIC, fired_condition=condition)

    def _symmetry_trivial(self, D: int, r: int) -> str:
        # both constants vanish
        if D in (7, 11, 19, 43, 67, 163) and r % D != 0:
            return "2"
        return "1"

    def _symmetry_condition(self, D: int, f: GFactorization, r: int) -> Optional[str]:
        if D == 1:
            if r % 4 == 0:
                return "2"
            if f.lam % 2:
                return "3"
            return "4" if d1_exponent_e(f) % 2 == 0 else None
        if D == 3:
            if varsigma2(f, r) == 0:
                if f.lam % 2:
                    return "2"
                return "3" if f.g1 % 4 == 1 else "4"
            square_not_cube = [p for p, v in factorize(f.g1) if r % p != 0 and v % 2 == 0 and v % 3 != 0]
            if varsigma1(f, r) == Fraction(-3, 2) and not square_not_cube:
                return "5" if d3_u(f.g1) == 0 else "6"
            return None
        if D == 2:
            return None
        if epsilon_D(f, r) != 0:
            return None
        if r % 4 == 2:
            return "3"
        return "4" if f.lam % 2 else "5"

    def symmetry_matches_finite_factors(self, D: int, g: int, r: int) -> bool:
        """Cross-check: the verdict agrees with exact equality of the finite factors at r and -r."""
        xi, _ = xi_theta(D, r)
        symmetric = self.classify_symmetry(D, g, r).result == SYMMETRIC
        if xi == 0:
            return symmetric
        plus, _, _ = constant_service.finite_factor(D, g, r)
        minus, _, _ = constant_service.finite_factor(D, g, -r)
        return symmetric == (plus == minus)

    def positivity_matches_finite_factor(self, D: int, g: int, r: int) -> Tuple[bool, Verdict]:
        verdict = self.classify_positivity(D, g, r)
        xi, _ = xi_theta(D, r)
        finite, _, _ = constant_service.finite_factor(D, g, r)
        vanishes = xi == 0 or finite == 0
        return vanishes == (verdict.result == VANISHES), verdict


classifier_service = ClassifierService()
