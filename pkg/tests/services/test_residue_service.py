"""Tests for quadratic congruence counts and the rho representation counts."""
import pytest

from cmlt.core.errors import ConstantError, CountingError, ErrorCode
from cmlt.models.curve import QuadPoly
from cmlt.services.residue_service import ResidueCounts, residue_service

POLYS = [
    QuadPoly(1, 0, 1),
    QuadPoly(1, 1, 1),
    QuadPoly(2, 0, 9),
    QuadPoly(3, -6, 7),
    QuadPoly(5, 5, 2),
    QuadPoly(9, 3, 1),
    QuadPoly(1, 0, -3),
]

MODULI = [1, 3, 5, 7, 9, 15, 25, 27, 45, 49, 63, 75, 105, 121, 125]


def test_counts_for_x_squared_plus_one_mod_five():
    """Test x^2 + 1 mod 5."""
    expected = ResidueCounts(n0=2, n1=3, n2=-1, n_plus=1, n_minus=2)
    assert residue_service.residue_counts_bruteforce(QuadPoly(1, 0, 1), 5) == expected
    assert residue_service.residue_counts_closed(QuadPoly(1, 0, 1), 5) == expected


@pytest.mark.parametrize("poly", POLYS, ids=str)
def test_closed_counts_match_enumeration(poly):
    """Test the prime-power tables against direct enumeration."""
    for q in MODULI:
        assert residue_service.residue_counts_closed(poly, q) == residue_service.residue_counts_bruteforce(
            poly, q
        ), f"{poly} mod {q}"


def test_counts_partition_the_residues():
    """Test n0 + n1 = q for prime q."""
    for q in (3, 5, 7, 11, 13):
        counts = residue_service.residue_counts(QuadPoly(1, 1, 1), q)
        assert counts.n0 + counts.n1 == q
        assert counts.n_plus + counts.n_minus == counts.n1


def test_closed_counts_refuse_square_discriminant_and_imprimitive_poly():
    """Test HYPOTHESIS_FAIL."""
    with pytest.raises(ConstantError) as exc:
        residue_service.residue_counts_closed(QuadPoly(1, 0, -1), 5)
    assert exc.value.code == ErrorCode.HYPOTHESIS_FAIL
    with pytest.raises(ConstantError) as exc:
        residue_service.residue_counts_closed(QuadPoly(2, 4, 6), 5)
    assert exc.value.code == ErrorCode.HYPOTHESIS_FAIL


def test_counts_reject_even_modulus():
    """Test BAD_MODULUS."""
    for method in ("closed", "bruteforce"):
        with pytest.raises(CountingError) as exc:
            residue_service.residue_counts(QuadPoly(1, 0, 1), 8, method=method)
        assert exc.value.code == ErrorCode.BAD_MODULUS


# ============== rho counts ==============


def test_rho_counts_by_enumeration():
    """Test rho against a literal loop."""
    for r in (2, 4, -6, 10):
        for q in (5, 8, 9, 12):
            for a in range(q):
                expected = sum(1 for t in range(q) if (2 * t * t + r * r // 4 - a) % q == 0)
                assert residue_service.rho(r, q, a) == expected


def test_rho_D_for_seven_at_odd_residues_mod_eight():
    """Test rho_7(1, 8, a) = 0 for odd a."""
    for a in (1, 3, 5, 7):
        assert residue_service.rho_D(7, 1, 8, a) == 0


@pytest.mark.parametrize("D", [3, 7, 11, 19, 43, 67, 163])
def test_rho_D_mod8_table_matches_enumeration(D):
    """Test the mod-8 case table."""
    for r in range(-24, 25):
        if r == 0:
            continue
        for k in range(4):
            assert residue_service.rho_D_mod8_closed(D, r, k) == residue_service.rho_D(D, r, 8, 2 * k + 1), (D, r, k)


def test_rho_undefined_cases():
    """Test UNDEFINED for odd r and D not 3 mod 4."""
    with pytest.raises(CountingError) as exc:
        residue_service.rho(3, 5, 1)
    assert exc.value.code == ErrorCode.UNDEFINED
    with pytest.raises(CountingError) as exc:
        residue_service.rho_D(1, 2, 5, 1)
    assert exc.value.code == ErrorCode.UNDEFINED
    with pytest.raises(CountingError) as exc:
        residue_service.rho_counts(2, 3, 5, 1)
    assert exc.value.code == ErrorCode.UNDEFINED


def test_rho_counts_reports_both_forms():
    """Test the combined view."""
    counts = residue_service.rho_counts(7, 2, 5, 1)
    assert counts.rho == residue_service.rho(2, 5, 1)
    assert counts.rho_D == residue_service.rho_D(7, 2, 5, 1)
    assert residue_service.rho_counts(1, 2, 5, 1).rho_D is None
