"""Tests for ring elements, units and curve value types."""
from fractions import Fraction

import pytest

from cmlt.core.errors import ArithmeticDomainError, CurveError, ErrorCode
from cmlt.models.curve import CurveSpec, GFactorization, QuadPoly, g_factorize
from cmlt.models.eisenstein import EisInt, is_eisenstein_prime, primary_associate_eis
from cmlt.models.gaussian import I, GaussInt, is_gaussian_prime, primary_associate
from cmlt.models.units import ScaledUnit, UnitI4, UnitW6


# ============== Gaussian integers ==============


def test_gaussian_arithmetic():
    z, w = GaussInt(3, 2), GaussInt(1, -4)
    assert z * w == GaussInt(11, -10)
    assert (z * w).norm() == z.norm() * w.norm()
    assert I * I == GaussInt(-1)
    assert z.conj() == GaussInt(3, -2)
    assert z.times_i(2) == -z


def test_gaussian_division_remainder_is_small():
    for a in range(-12, 13):
        for b in range(-12, 13):
            z = GaussInt(a, b)
            d = GaussInt(3, 2)
            q, r = divmod(z, d)
            assert q * d + r == z
            assert 2 * r.norm() <= d.norm()


def test_primary_associate_examples():
    assert primary_associate(GaussInt(1, 2)) == GaussInt(-1, -2)
    assert primary_associate(GaussInt(3)) == GaussInt(-3)
    assert primary_associate(GaussInt(1)) == GaussInt(1)
    with pytest.raises(ArithmeticDomainError) as e:
        primary_associate(GaussInt(1, 1))
    assert e.value.code == ErrorCode.NOT_ODD


def test_gaussian_primes():
    assert is_gaussian_prime(GaussInt(2, 1))
    assert is_gaussian_prime(GaussInt(7))
    assert not is_gaussian_prime(GaussInt(5))
    assert not is_gaussian_prime(GaussInt(3, 3))


# ============== Eisenstein integers ==============


def test_eisenstein_arithmetic():
    w = EisInt(0, 1)
    assert w * w * w == EisInt(1)
    assert w * w == EisInt(-1, -1)
    z = EisInt(2, 3)
    assert z.norm() == 7
    assert z.trace() == 1
    assert (z * z.conj()) == EisInt(7)


def test_eisenstein_division_remainder_is_small():
    d = EisInt(2, 3)
    for a in range(-10, 11):
        for b in range(-10, 11):
            z = EisInt(a, b)
            q, r = divmod(z, d)
            assert q * d + r == z
            assert r.norm() < d.norm()


def test_primary_associate_eis_examples():
    assert primary_associate_eis(EisInt(3, 1)) == EisInt(2, 3)
    assert primary_associate_eis(EisInt(2)) == EisInt(2)
    assert primary_associate_eis(EisInt(1, 1)) == EisInt(-1)
    with pytest.raises(ArithmeticDomainError) as e:
        primary_associate_eis(EisInt(1, -1))
    assert e.value.code == ErrorCode.NOT_COPRIME_TO_3


def test_eisenstein_primes():
    assert is_eisenstein_prime(EisInt(2, 3))
    assert is_eisenstein_prime(EisInt(5))
    assert not is_eisenstein_prime(EisInt(7))


# ============== Units ==============


def test_unit_groups():
    assert UnitI4(5) == UnitI4(1)
    assert (UnitI4(1) * UnitI4(3)) == UnitI4(0)
    assert UnitI4(1).to_gauss() == I
    assert UnitI4.from_gauss(GaussInt(0, -1)) == UnitI4(3)
    assert len(UnitW6.all()) == 6
    assert UnitW6(1, 1) ** 3 == UnitW6(1, 0)
    assert UnitW6.from_eis(EisInt(1, 1)) == UnitW6(-1, 2)
    with pytest.raises(ArithmeticDomainError):
        UnitI4.from_gauss(GaussInt(2))


def test_scaled_unit_canonical_form():
    """Test that sign and zero are normalized so equality is structural."""
    assert ScaledUnit(Fraction(-2), UnitI4(0)) == ScaledUnit(Fraction(2), UnitI4(2))
    assert ScaledUnit(Fraction(0), UnitI4(3)) == ScaledUnit(Fraction(0), UnitI4(0))
    assert ScaledUnit.from_gauss(0, -3) == ScaledUnit(Fraction(3), UnitI4(3))
    assert ScaledUnit.from_eis(2, 2) == ScaledUnit(Fraction(2), UnitW6(-1, 2))
    with pytest.raises(ArithmeticDomainError):
        ScaledUnit.from_gauss(1, 1)


# ============== Curves ==============


def test_g_factorize_examples():
    assert g_factorize(3, -432) == GFactorization(delta=1, lam=4, mu=3, g1=1)
    assert g_factorize(7, -98) == GFactorization(delta=1, lam=1, mu=2, g1=1)
    assert g_factorize(2, 12) == GFactorization(delta=0, lam=2, mu=0, g1=3)
    for D, g in ((1, -360), (3, 7260624), (11, -33), (163, 163 * 5)):
        assert g_factorize(D, g).reconstruct(D) == g


def test_curve_spec_validation():
    assert str(CurveSpec(3, 2)) == "E(D=3, g=2)"
    with pytest.raises(CurveError):
        CurveSpec(5, 1)
    with pytest.raises(CurveError):
        CurveSpec(1, 0)


def test_quad_poly():
    f = QuadPoly(1, 0, 1)
    assert f(4) == 17
    assert f.discriminant == -4
    assert QuadPoly(7, -21, 18).discriminant == 441 - 504
