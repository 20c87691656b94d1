"""Tests for quartic residue symbols, quartic Gauss sums and Q_beta(q, t)."""
from fractions import Fraction

import pytest
from sympy import primerange

from cmlt.core.errors import ArithmeticDomainError, ErrorCode
from cmlt.models.gaussian import I, GaussInt, is_gaussian_prime, primary_associate
from cmlt.models.units import ScaledUnit, UnitI4
from cmlt.services.gaussian_service import gaussian_service


def _primary_primes(limit):
    found = []
    for a in range(-limit, limit + 1):
        for b in range(-limit, limit + 1):
            z = GaussInt(a, b)
            if z.is_odd() and is_gaussian_prime(z) and primary_associate(z) == z:
                found.append(z)
    return found


# ============== Symbols ==============


def test_quartic_symbol_prime_examples():
    """Test the symbol at a split prime of norm 5."""
    pi = GaussInt(-1, 2)
    assert gaussian_service.quartic_symbol_prime(I, pi) == I
    assert gaussian_service.quartic_symbol_prime(GaussInt(1), pi) == GaussInt(1)
    assert gaussian_service.quartic_symbol_prime(pi * GaussInt(3, 1), pi) == GaussInt(0)


def test_quartic_symbol_prime_rejects_bad_moduli():
    """Test even and composite moduli."""
    with pytest.raises(ArithmeticDomainError) as exc:
        gaussian_service.quartic_symbol_prime(I, GaussInt(1, 1))
    assert exc.value.code == ErrorCode.NOT_ODD
    with pytest.raises(ArithmeticDomainError) as exc:
        gaussian_service.quartic_symbol_prime(I, GaussInt(5))
    assert exc.value.code == ErrorCode.NOT_PRIME


def test_quartic_jacobi_example():
    """Test the reciprocity loop on 2 over -1-2i."""
    xi = GaussInt(-1, -2)
    assert gaussian_service.quartic_symbol_jacobi(GaussInt(2), xi) == I
    assert gaussian_service.quartic_symbol_prime(GaussInt(2), xi) == I
    assert gaussian_service.quartic_symbol_jacobi(GaussInt(7, 3), GaussInt(1)) == GaussInt(1)


def test_quartic_jacobi_matches_exponentiation():
    """Test the reciprocity loop against alpha^((N-1)/4) at small primes."""
    primes = _primary_primes(6)
    assert primes
    for pi in primes:
        for a in range(-4, 5):
            for b in range(-4, 5):
                alpha = GaussInt(a, b)
                assert gaussian_service.quartic_symbol_jacobi(alpha, pi) == gaussian_service.quartic_symbol_prime(
                    alpha, pi
                ), f"{alpha} over {pi}"


def test_quartic_jacobi_is_multiplicative_in_modulus():
    """Test the symbol over a product of primes."""
    p1, p2 = GaussInt(-1, 2), GaussInt(3)
    xi = p1 * p2
    for alpha in (GaussInt(2, 1), GaussInt(5, -3), I, GaussInt(1, 1)):
        expected = gaussian_service.quartic_symbol_prime(alpha, p1) * gaussian_service.quartic_symbol_prime(alpha, p2)
        assert gaussian_service.quartic_symbol_jacobi(alpha, xi) == expected


def test_quartic_symbol_rational_examples():
    """Test rational moduli."""
    assert gaussian_service.quartic_symbol_rational(GaussInt(7), 15) == GaussInt(1)
    assert gaussian_service.quartic_symbol_rational(I, 3) == GaussInt(-1)
    assert gaussian_service.quartic_symbol_rational(GaussInt(1, 2), 3) == I
    assert gaussian_service.quartic_symbol_rational(GaussInt(6), 15) == GaussInt(0)
    assert gaussian_service.quartic_symbol_rational(GaussInt(5, 2), 1) == GaussInt(1)


def test_quartic_symbol_rational_matches_jacobi():
    """Test (z/q)_4 for rational q against the Jacobi symbol with xi = q."""
    for q in (3, 5, 7, 9, 13, 15, 21, 25):
        for a in range(-3, 4):
            for b in range(-3, 4):
                z = GaussInt(a, b)
                assert gaussian_service.quartic_symbol_rational(z, q) == gaussian_service.quartic_symbol_jacobi(
                    z, GaussInt(q)
                ), f"{z} over {q}"


def test_quartic_symbol_rational_rejects_even_modulus():
    """Test even rational moduli."""
    with pytest.raises(ArithmeticDomainError) as exc:
        gaussian_service.quartic_symbol_rational(I, 6)
    assert exc.value.code == ErrorCode.NOT_ODD


# ============== Gauss sums ==============


def test_gauss_sum_quartic_at_three():
    """Test the inert prime 3."""
    assert gaussian_service.gauss_sum_quartic(3) == GaussInt(-3)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_gauss_sum_quartic_has_norm_p_squared(p):
    """Test |G(p)|^2 = p^2."""
    assert gaussian_service.gauss_sum_quartic(p).norm() == p * p


def test_gauss_sum_quartic_rejects_non_primes():
    """Test 2 and composites."""
    for p in (2, 9, 15):
        with pytest.raises(ArithmeticDomainError):
            gaussian_service.gauss_sum_quartic(p)


# ============== Incomplete sums ==============


def test_Q_examples():
    """Test small closed-form values."""
    one = UnitI4(0)
    assert gaussian_service.Q_closed(3, 1, one) == ScaledUnit(Fraction(1), one)
    assert gaussian_service.Q_closed(3, 0, one) == ScaledUnit(Fraction(-2), one)
    assert gaussian_service.Q_bruteforce(3, 0, one) == ScaledUnit(Fraction(-2), one)
    for t in range(4):
        for k in range(4):
            assert gaussian_service.Q_closed(1, t, UnitI4(k)) == ScaledUnit(Fraction(1), one)
            assert gaussian_service.Q_bruteforce(1, t, UnitI4(k)) == ScaledUnit(Fraction(1), one)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 13, 15, 21, 25, 27])
def test_Q_closed_matches_bruteforce(q):
    """Test the closed form against the literal sum for every t and beta."""
    for t in range(q):
        for k in range(4):
            beta = UnitI4(k)
            assert gaussian_service.Q_closed(q, t, beta) == gaussian_service.Q_bruteforce(q, t, beta), (q, t, k)


def test_Q_rejects_even_and_large_moduli():
    """Test modulus checks."""
    with pytest.raises(ArithmeticDomainError) as exc:
        gaussian_service.Q_closed(4, 1, UnitI4(0))
    assert exc.value.code == ErrorCode.BAD_MODULUS
    with pytest.raises(ArithmeticDomainError) as exc:
        gaussian_service.Q_bruteforce(1001, 1, UnitI4(0))
    assert exc.value.code == ErrorCode.TOO_LARGE


def test_gauss_sum_quartic_closed_form():
    """Test G(p) = p (i/p)_4 for odd primes below 60."""
    for p in primerange(3, 60):
        assert gaussian_service.gauss_sum_quartic(p) == gaussian_service.quartic_symbol_rational(I, p) * GaussInt(p)
