import pytest
from hypothesis import given, strategies as st

from twoint.errors import InfeasibleCountsError
from twoint.feasibility import (CountProfile, ParameterSet, check_divisibility,
                                check_integrality, complement_parameters,
                                count_profile, gauss, passes_screen,
                                scan_parameters)


def P(n, h1, h2, q=3, k=6):
    return ParameterSet(n=n, k=k, h1=h1, h2=h2, q=q)


def test_integrality_known_cases():
    assert check_integrality(P(56, 11, 20))
    assert not check_integrality(P(57, 11, 20))


def test_line_is_two_intersection():
    # points on a line: (q+1, k, 1, q+1)
    for q in (2, 3, 4, 5):
        for k in (4, 5, 6):
            assert check_integrality(ParameterSet(n=q + 1, k=k, h1=1, h2=q + 1, q=q))


def test_divisibility():
    assert check_divisibility(P(56, 11, 20))       # 9 | 81
    assert not check_divisibility(P(56, 11, 16))   # 5 does not divide 81
    assert check_divisibility(P(105, 10, 91))      # 81 | 81


def test_count_profile_hill():
    prof = count_profile(P(56, 11, 20))
    assert prof.t1 == 56 and prof.t2 == 308
    assert prof.rho2 - prof.sigma2 == 9            # q^(k-2)/(h2-h1) = 81/9


def test_count_profile_84():
    prof = count_profile(P(84, 21, 30))
    assert prof.t1 == 84 and prof.t2 == 280


def test_count_profile_sums():
    prof = count_profile(P(112, 31, 40))
    assert prof.t1 + prof.t2 == 364
    assert prof.rho1 + prof.rho2 == 121
    assert prof.sigma1 + prof.sigma2 == 121


def test_count_profile_rejects_infeasible():
    # integrality holds for the line but t-counts go negative for absurd h's
    with pytest.raises(InfeasibleCountsError):
        count_profile(P(7, 1, 3))


def test_scan_contains_published_types():
    results = scan_parameters(3, 6, 7)
    tuples = {(p.n, p.h1, p.h2) for p in results}
    for t in [(56, 11, 20), (84, 21, 30), (98, 26, 35), (91, 28, 37),
              (112, 31, 40), (126, 36, 45), (140, 41, 50), (154, 46, 55)]:
        assert t in tuples


def test_scan_divisibility_by_construction():
    for p in scan_parameters(3, 6, 7):
        assert 81 % (p.h2 - p.h1) == 0
        assert p.n % 7 == 0


def test_scan_sorted():
    results = scan_parameters(3, 6, 7)
    keys = [(p.n, p.h1, p.h2) for p in results]
    assert keys == sorted(keys)


def test_complement_closure():
    results = scan_parameters(3, 6, 7)
    tuples = {(p.n, p.h1, p.h2) for p in results}
    for p in results:
        c = complement_parameters(p)
        assert passes_screen(c)
        if c.n % 7 == 0 and c.n < 364:
            assert (c.n, c.h1, c.h2) in tuples


@given(st.integers(2, 5), st.integers(4, 7), st.integers(1, 400),
       st.integers(1, 120), st.integers(1, 120))
def test_weighted_sum_of_counting_equations_is_zero(q, k, n, a, b):
    """The three double counts, weighted by (h1 h2, 1-h1-h2, 1), cancel as a
    polynomial identity in n whenever t1, t2 solve the first two equations."""
    h1, h2 = min(a, b), max(a, b) + 1
    if n > gauss(q, k) or h2 > n:
        return
    hyperplanes = gauss(q, k)
    through = gauss(q, k - 1)
    pairs = gauss(q, k - 2)
    # solve the 2x2 system over the rationals
    from fractions import Fraction
    t2 = Fraction(n * through - h1 * hyperplanes, h2 - h1)
    t1 = hyperplanes - t2
    lhs1 = t1 + t2
    lhs2 = h1 * t1 + h2 * t2
    lhs3 = h1 * (h1 - 1) * t1 + h2 * (h2 - 1) * t2
    rhs1 = hyperplanes
    rhs2 = n * through
    rhs3 = Fraction(n * (n - 1) * pairs)
    combo = (h1 * h2 * (lhs1 - rhs1) + (1 - h1 - h2) * (lhs2 - rhs2) + (lhs3 - rhs3))
    q_int = check_integrality(ParameterSet(n=n, k=k, h1=h1, h2=h2, q=q)) \
        if h2 <= n <= gauss(q, k) else None
    # combo = -(integrality polynomial); both vanish together
    assert (combo == 0) == bool(q_int)


def brute_force_feasible(n, h1, h2, q=3, k=6):
    """Independent oracle: search integer t1, t2 >= 0 satisfying all three
    counting equations, and rho/sigma systems likewise, by enumeration."""
    hyperplanes = gauss(q, k)
    through = gauss(q, k - 1)
    pairs = gauss(q, k - 2)
    ok_t = False
    for t1 in range(hyperplanes + 1):
        t2 = hyperplanes - t1
        if h1 * t1 + h2 * t2 != n * through:
            continue
        if h1 * (h1 - 1) * t1 + h2 * (h2 - 1) * t2 != n * (n - 1) * pairs:
            continue
        ok_t = True
        break
    if not ok_t:
        return False
    ok_rho = any(
        (h1 - 1) * r1 + (h2 - 1) * (through - r1) == (n - 1) * pairs
        for r1 in range(through + 1))
    ok_sigma = any(
        h1 * s1 + h2 * (through - s1) == n * pairs
        for s1 in range(through + 1))
    return ok_rho and ok_sigma


def test_screen_equals_brute_force_sample():
    # full-grid agreement is acceptance criterion 6; spot-check a band here
    for n in range(7, 365, 7):
        for h1, h2 in [(11, 20), (11, 21), (26, 35), (31, 40), (1, 2), (40, 121)]:
            if h2 > n:
                continue
            p = ParameterSet(n=n, k=6, h1=h1, h2=h2, q=3)
            assert passes_screen(p) == brute_force_feasible(n, h1, h2)
