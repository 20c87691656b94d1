"""Tests for split types, norm forms and the closed trace formulas."""
import math

import pytest
from sympy import primerange

from cmlt.core.errors import CurveError, ErrorCode
from cmlt.models.curve import CM_DISCRIMINANTS, CurveSpec, Normalization, SplitType
from cmlt.services.frobenius_service import frobenius_service

TWISTS = (1, -1, 2, -3, 5, 7)


def test_split_type_examples():
    """Test split, inert and ramified primes."""
    assert frobenius_service.split_type(1, 5) == SplitType.SPLIT
    assert frobenius_service.split_type(1, 7) == SplitType.INERT
    assert frobenius_service.split_type(11, 5) == SplitType.SPLIT
    assert frobenius_service.split_type(3, 3) == SplitType.RAMIFIED
    assert frobenius_service.split_type(7, 2) == SplitType.SPLIT


def test_split_type_rejects_composites_and_unknown_D():
    """Test argument validation."""
    with pytest.raises(CurveError) as exc:
        frobenius_service.split_type(1, 15)
    assert exc.value.code == ErrorCode.NOT_PRIME
    with pytest.raises(CurveError) as exc:
        frobenius_service.split_type(5, 7)
    assert exc.value.code == ErrorCode.BAD_PARAMS


def test_norm_form_examples():
    """Test Cornacchia solutions."""
    assert frobenius_service.norm_form_solve(1, 13).coords == (3, 2)
    assert frobenius_service.norm_form_solve(11, 5).coords == (3, 1)
    assert frobenius_service.norm_form_solve(2, 3).coords == (1, 1)
    assert frobenius_service.norm_form_solve(7, 2).coords == (1, 1)


@pytest.mark.parametrize("D", CM_DISCRIMINANTS)
def test_norm_form_solutions_satisfy_the_form(D):
    """Test p = m^2 + D n^2 or 4p = t^2 + D s^2 at every split prime below 2000."""
    for p in primerange(3, 2000):
        if frobenius_service.split_type(D, p) != SplitType.SPLIT:
            continue
        split = frobenius_service.norm_form_solve(D, p)
        u, v = split.coords
        assert u > 0 and v > 0
        if D in (1, 2):
            assert u * u + D * v * v == p
        else:
            assert u * u + D * v * v == 4 * p
        if D == 1:
            assert u % 2 == 1
            assert split.normalization == Normalization.PRIMARY_GAUSS
            assert split.element.norm() == p
        if D == 3:
            assert split.normalization == Normalization.PRIMARY_EIS
            assert split.element.is_primary()


def test_norm_form_rejects_inert_primes():
    """Test NOT_SPLIT."""
    with pytest.raises(CurveError) as exc:
        frobenius_service.norm_form_solve(1, 7)
    assert exc.value.code == ErrorCode.NOT_SPLIT


def test_bad_primes():
    """Test the bad prime sets."""
    assert frobenius_service.bad_primes(CurveSpec(1, -4)) == {2}
    assert frobenius_service.bad_primes(CurveSpec(3, 2)) == {2, 3}
    assert frobenius_service.bad_primes(CurveSpec(11, 1)) == {2, 3, 11}


def test_ap_spot_values():
    """Test traces against hand-computed values."""
    assert frobenius_service.ap_formula(CurveSpec(1, -4), 5) == -2
    assert frobenius_service.ap_formula(CurveSpec(3, 2), 7) == -1
    assert frobenius_service.ap_formula(CurveSpec(11, 1), 5) == -3
    assert frobenius_service.ap_formula(CurveSpec(2, 1), 3) == 2
    assert frobenius_service.ap_formula(CurveSpec(3, -432), 7) == -1


def test_ap_at_inert_prime_is_zero():
    """Test supersingular reduction."""
    assert frobenius_service.ap_formula(CurveSpec(1, 3), 7) == 0
    assert frobenius_service.ap_formula(CurveSpec(3, 2), 5) == 0


def test_ap_rejects_bad_primes():
    """Test primes of bad reduction and composites."""
    with pytest.raises(CurveError) as exc:
        frobenius_service.ap_formula(CurveSpec(3, 2), 3)
    assert exc.value.code == ErrorCode.BAD_PRIME
    with pytest.raises(CurveError) as exc:
        frobenius_service.ap_formula(CurveSpec(1, 1), 9)
    assert exc.value.code == ErrorCode.BAD_PRIME


@pytest.mark.parametrize("D", CM_DISCRIMINANTS)
def test_ap_formula_matches_point_count(D):
    """Test the closed formula against the Legendre-sum count for several twists."""
    for g in TWISTS:
        curve = CurveSpec(D, g)
        bad = frobenius_service.bad_primes(curve)
        for p in primerange(3, 400):
            if p in bad:
                continue
            assert frobenius_service.ap_formula(curve, p) == frobenius_service.ap_bruteforce(curve, p), (D, g, p)


@pytest.mark.parametrize("D", CM_DISCRIMINANTS)
def test_ap_satisfies_hasse_bound(D):
    """Test |a_p| <= 2 sqrt(p)."""
    curve = CurveSpec(D, 1)
    bad = frobenius_service.bad_primes(curve)
    for p in primerange(3, 5000):
        if p not in bad:
            assert abs(frobenius_service.ap_formula(curve, p)) <= 2 * math.sqrt(p)


def test_d2_normalizations_agree():
    """Test the sqrt(-2) normalization against the positive-trace one."""
    for g in (1, -1, 3, 5, -7):
        curve = CurveSpec(2, g)
        bad = frobenius_service.bad_primes(curve)
        for p in primerange(3, 3000):
            if p not in bad:
                assert frobenius_service.ap_formula_d2_original(curve, p) == frobenius_service.ap_formula(curve, p)


def test_d2_normalization_rejects_other_D():
    """Test BAD_PARAMS outside D=2."""
    with pytest.raises(CurveError) as exc:
        frobenius_service.ap_formula_d2_original(CurveSpec(1, 1), 5)
    assert exc.value.code == ErrorCode.BAD_PARAMS
