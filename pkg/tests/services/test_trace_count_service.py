"""Tests for trace histograms, fixed-trace counts and polynomial prime counts."""
from collections import Counter

import pytest
from sympy import isprime, primerange

from cmlt.core.errors import CountingError, ErrorCode
from cmlt.models.curve import CurveSpec, QuadPoly
from cmlt.models.eisenstein import EisInt
from cmlt.models.units import UnitI4, UnitW6
from cmlt.services.frobenius_service import frobenius_service
from cmlt.services.trace_count_service import element_traces, h_poly, progression_primes, trace_count_service


# ============== Histograms ==============


def test_histogram_matches_point_counts(curve_432):
    """Test the histogram against Legendre-sum traces below 500."""
    bad = frobenius_service.bad_primes(curve_432)
    expected = Counter(frobenius_service.ap_bruteforce(curve_432, p) for p in primerange(2, 501) if p not in bad)
    histogram = trace_count_service.count_traces(curve_432, 500, -50, 50)
    assert histogram.counts == dict(expected)
    assert histogram.overflow == 0
    assert histogram.bad_primes_skipped == [2, 3]


def test_histogram_bookkeeping(curve_4x):
    """Test that good, bad and overflow primes add up."""
    histogram = trace_count_service.count_traces(curve_4x, 10**4, -10, 10)
    assert sum(histogram.counts.values()) + histogram.overflow == histogram.good_primes
    assert histogram.good_primes + len(histogram.bad_primes_skipped) == trace_count_service.prime_total(10**4)


def test_quartic_twist_has_only_even_traces(curve_4x):
    """Test that odd traces never occur for D=1."""
    histogram = trace_count_service.count_traces(curve_4x, 10**4, -40, 40)
    assert all(r % 2 == 0 for r in histogram.counts)


def test_parallel_histogram_matches_serial(curve_432):
    """Test the chunked histogram against the serial one."""
    serial = trace_count_service.count_traces(curve_432, 20000, -20, 20)
    parallel = trace_count_service.count_traces_parallel(curve_432, 20000, -20, 20, threads=2)
    assert parallel.counts == serial.counts
    assert parallel.overflow == serial.overflow
    assert parallel.good_primes == serial.good_primes
    assert sorted(parallel.bad_primes_skipped) == serial.bad_primes_skipped


def test_histogram_edge_cases(curve_4x):
    """Test tiny x and an empty window."""
    assert trace_count_service.count_traces(curve_4x, 1).good_primes == 0
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_traces(curve_4x, 100, 5, 3)
    assert exc.value.code == ErrorCode.BAD_PARAMS


# ============== Single traces ==============


@pytest.mark.parametrize("r", [2, -1, 5])
def test_routes_agree_for_sextic_twist(curve_432, r):
    """Test the formula route against the progression route for D=3."""
    formula, _ = trace_count_service.count_trace_single(curve_432, r, 10**5, "formula")
    polynomial, route = trace_count_service.count_trace_single(curve_432, r, 10**5, "polynomial")
    assert route == "polynomial"
    assert formula == polynomial


@pytest.mark.parametrize("r", [2, -2])
def test_routes_agree_for_quartic_twist(curve_4x, r):
    """Test both routes for D=1."""
    formula, _ = trace_count_service.count_trace_single(curve_4x, r, 10**5, "formula")
    polynomial, _ = trace_count_service.count_trace_single(curve_4x, r, 10**5, "polynomial")
    assert formula == polynomial


def test_routes_agree_for_large_discriminant():
    """Test both routes for D=11."""
    curve = CurveSpec(11, 1)
    for r in (1, -3, 4):
        formula, _ = trace_count_service.count_trace_single(curve, r, 10**5, "formula")
        polynomial, _ = trace_count_service.count_trace_single(curve, r, 10**5, "polynomial")
        assert formula == polynomial, r


def test_auto_route_stays_on_formula_for_small_x(curve_432):
    """Test the auto route choice."""
    _, route = trace_count_service.count_trace_single(curve_432, 2, 1000)
    assert route == "formula"


def test_single_trace_rejects_bad_arguments(curve_432):
    """Test ZERO_R and unknown routes."""
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_trace_single(curve_432, 0, 1000)
    assert exc.value.code == ErrorCode.ZERO_R
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_trace_single(curve_432, 2, 1000, "sieve")
    assert exc.value.code == ErrorCode.BAD_PARAMS


# ============== Fixed trace ==============


def test_h_poly_shapes():
    """Test the trace progressions."""
    assert h_poly(1, 2) == QuadPoly(1, 0, 1)
    assert h_poly(2, 2) == QuadPoly(2, 0, 1)
    assert h_poly(7, 1) == QuadPoly(7, -7, 2)
    assert h_poly(1, 3) is None


def test_element_traces():
    """Test traces of the unit multiples."""
    assert element_traces(1, (1, 2)) == {2, -2, 4, -4}
    assert element_traces(2, (3, 1)) == {6, -6}
    assert element_traces(3, (5, 1)) == {5, -5, 4, -4, 1, -1}
    assert element_traces(11, (3, 1)) == {3, -3}


def test_fixed_trace_two_routes_for_d2():
    """Test primes 2n^2 + 1 below 1000."""
    expected = sum(1 for n in range(1, 23) if 2 * n * n + 1 <= 1000 and isprime(2 * n * n + 1))
    assert trace_count_service.count_fixed_trace(2, 2, 1000) == (expected, expected)
    assert trace_count_service.count_Pi_D(2, 1000, 2, 1, 0) == expected


@pytest.mark.parametrize("D", [2, 7, 11, 19])
def test_fixed_trace_routes_within_slack(D):
    """Test that element and progression counts agree up to ramified primes."""
    for r in (1, 2, 3, 4):
        via_elements, via_polynomial = trace_count_service.count_fixed_trace(D, r, 10**5)
        assert abs(via_elements - via_polynomial) <= 10, (D, r)


def test_Pi_D_residue_classes_partition():
    """Test that the unit classes mod 5 cover every counted prime; 5 is inert for D=7."""
    total = trace_count_service.count_Pi_D(7, 10**4, 2, 1, 0)
    by_class = sum(trace_count_service.count_Pi_D(7, 10**4, 2, 5, a) for a in range(1, 5))
    assert by_class == total


def test_Pi_D_rejects_non_unit_residue():
    """Test BAD_RESIDUE."""
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_Pi_D(7, 1000, 2, 6, 3)
    assert exc.value.code == ErrorCode.BAD_RESIDUE


# ============== Symbol-constrained counts ==============


def test_Gd_decomposition_recovers_trace_count():
    """Test sum of G_d counts = 2 pi_{E,r}(x) up to a bounded error."""
    for g, r in ((-4, 2), (1, 6), (3, -2)):
        pi_er, _ = trace_count_service.count_trace_single(CurveSpec(1, g), r, 10**5, "formula")
        assert abs(trace_count_service.pi_E_via_Gd(g, r, 10**5) - 2 * pi_er) <= 4, (g, r)


def test_Gd_rejects_bad_parameters():
    """Test parameter validation."""
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_Gd(1000, 2, 1, UnitI4(0), (1, 2), 0)
    assert exc.value.code == ErrorCode.BAD_PARAMS
    for alpha in (2, -1, 0):
        with pytest.raises(CountingError) as exc:
            trace_count_service.count_Gd(10**4, 2, alpha, UnitI4(0), (0, 0), 0)
        assert exc.value.code == ErrorCode.BAD_PARAMS, alpha


def test_Ed_decomposition_recovers_trace_count():
    """Test sum of E_{d,k,eps} counts = 2 pi_{E,r}(x) up to a bounded error."""
    for g, r in ((-432, 2), (5, -1), (2, 4), (-7, 1)):
        pi_er, _ = trace_count_service.count_trace_single(CurveSpec(3, g), r, 10**5, "formula")
        assert abs(trace_count_service.pi_E_via_Ed(g, r, 10**5) - 2 * pi_er) <= 6, (g, r)


def test_Ed_decomposition_needs_cube_power_of_three():
    """Test that ord_3(g) must be a multiple of 3."""
    for g in (3, -18, 9):
        with pytest.raises(CountingError) as exc:
            trace_count_service.pi_E_via_Ed(g, 1, 1000)
        assert exc.value.code == ErrorCode.HYPOTHESIS_FAIL, g


def test_Ed_rejects_bad_parameters():
    """Test parameter validation."""
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_Ed(1000, 1, 3, UnitW6(1, 0), EisInt(0, 0), 0, 0, 1)
    assert exc.value.code == ErrorCode.BAD_PARAMS
    with pytest.raises(CountingError):
        trace_count_service.count_Ed(1000, 1, 5, UnitW6(1, 0), EisInt(0, 0), 0, 0, 2)


# ============== Polynomial primes and densities ==============


def test_hl_counts():
    """Test primes of the form n^2 + 1."""
    poly = QuadPoly(1, 0, 1)
    assert trace_count_service.count_hl(poly, 100) == 4
    assert trace_count_service.count_hl_ap(poly, 100, 2, 1) == 1
    assert progression_primes(poly, 100) == {2, 5, 17, 37}


def test_hl_ap_rejects_zero_modulus():
    """Test BAD_PARAMS."""
    with pytest.raises(CountingError) as exc:
        trace_count_service.count_hl_ap(QuadPoly(1, 0, 1), 100, 0, 1)
    assert exc.value.code == ErrorCode.BAD_PARAMS


def test_deuring_density_is_one_half(curve_4x):
    """Test that half the good primes are supersingular."""
    assert trace_count_service.deuring_density(curve_4x, 10**5) == pytest.approx(0.5, abs=0.01)


def test_upper_bound_holds(curve_432):
    """Test the sieve inequality at x = 10^5."""
    lhs, rhs, holds = trace_count_service.upper_bound_check(curve_432, 2, 10**5)
    assert holds
    assert lhs <= rhs


def test_prime_total():
    """Test pi(x)."""
    assert trace_count_service.prime_total(100) == 25
    assert trace_count_service.prime_total(1) == 0
