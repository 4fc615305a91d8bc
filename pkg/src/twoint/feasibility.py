"""Necessary conditions screening (n, k, h1, h2) parameter quadruples.

Everything here is exact integer arithmetic on Python ints; the quadratic
consistency condition involves products of order n^2 * q^k and must never
touch floating point.

The screen has three layers:

  1. check_integrality: the quadratic identity obtained by eliminating the
     hyperplane-type counts t1, t2 from the three standard double counts
     (hyperplanes; incident point-hyperplane pairs; collinear point pairs
     on a common hyperplane).
  2. check_divisibility: h2 - h1 must divide q^(k-2), which falls out of the
     in-point/out-point hyperplane counts rho/sigma.
  3. count_profile: solve both small linear systems exactly and demand
     non-negative integer solutions everywhere.

scan_parameters additionally restricts n to multiples of the orbit size,
because a tau-invariant set is a union of full orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleCountsError


@dataclass(frozen=True)
class ParameterSet:
    n: int
    k: int
    h1: int
    h2: int
    q: int

    def __post_init__(self):
        if not (0 < self.h1 < self.h2 <= self.n):
            raise ValueError(f"need 0 < h1 < h2 <= n, got {self}")
        if self.n > gauss(self.q, self.k):
            raise ValueError(f"n={self.n} exceeds the point count of PG({self.k - 1},{self.q})")


@dataclass(frozen=True)
class CountProfile:
    """Exact hyperplane counts: t1/t2 overall, rho1/rho2 through an in-set
    point, sigma1/sigma2 through an out-set point."""

    t1: int
    t2: int
    rho1: int
    rho2: int
    sigma1: int
    sigma2: int


def gauss(q: int, k: int) -> int:
    """(q^k - 1)/(q - 1): number of points of PG(k-1, q)."""
    return (q ** k - 1) // (q - 1)


def check_integrality(p: ParameterSet) -> bool:
    """The quadratic consistency condition must vanish exactly."""
    q, k, n, h1, h2 = p.q, p.k, p.n, p.h1, p.h2
    a = gauss(q, k - 2)
    b = gauss(q, k - 1)
    c = gauss(q, k)
    value = n * n * a + n * ((1 - h1 - h2) * b - a) + h1 * h2 * c
    return value == 0


def check_divisibility(p: ParameterSet) -> bool:
    """h2 - h1 must divide q^(k-2)."""
    return p.q ** (p.k - 2) % (p.h2 - p.h1) == 0


def count_profile(p: ParameterSet) -> CountProfile:
    """Solve the hyperplane-count systems exactly.

    Raises InfeasibleCountsError when any count is negative or fractional,
    which rules the parameter set out.
    """
    q, k, n, h1, h2 = p.q, p.k, p.n, p.h1, p.h2
    hyperplanes = gauss(q, k)
    through_point = gauss(q, k - 1)
    pair_count = gauss(q, k - 2)

    # t1 + t2 = #hyperplanes;  h1 t1 + h2 t2 = n * #hyperplanes-through-a-point
    t2 = Fraction(n * through_point - h1 * hyperplanes, h2 - h1)
    t1 = hyperplanes - t2
    # rho1 + rho2 = through_point;  (h1-1) rho1 + (h2-1) rho2 = (n-1) pair_count
    rho2 = Fraction((n - 1) * pair_count - (h1 - 1) * through_point, h2 - h1)
    rho1 = through_point - rho2
    # sigma1 + sigma2 = through_point;  h1 sigma1 + h2 sigma2 = n pair_count
    sigma2 = Fraction(n * pair_count - h1 * through_point, h2 - h1)
    sigma1 = through_point - sigma2

    values = (t1, t2, rho1, rho2, sigma1, sigma2)
    for v in values:
        if v.denominator != 1 or v < 0:
            raise InfeasibleCountsError(f"{p}: non-integral or negative count {v}")
    return CountProfile(*(int(v) for v in values))


def passes_screen(p: ParameterSet) -> bool:
    """Full screen: both checks plus an integral non-negative count profile."""
    if not check_integrality(p) or not check_divisibility(p):
        return False
    try:
        count_profile(p)
    except InfeasibleCountsError:
        return False
    return True


def scan_parameters(q: int, k: int, orbit_size: int) -> list[ParameterSet]:
    """All (n, h1, h2) with orbit_size | n, 0 < n < #points, passing the full
    screen; sorted by n then h1."""
    total = gauss(q, k)
    line = gauss(q, k - 1)
    out = []
    for n in range(orbit_size, total, orbit_size):
        hmax = min(n, line)
        for h1 in range(1, hmax):
            for h2 in range(h1 + 1, hmax + 1):
                try:
                    p = ParameterSet(n=n, k=k, h1=h1, h2=h2, q=q)
                except ValueError:
                    continue
                if passes_screen(p):
                    out.append(p)
    out.sort(key=lambda p: (p.n, p.h1, p.h2))
    return out


def complement_parameters(p: ParameterSet) -> ParameterSet:
    """Parameters of the complement set inside PG(k-1, q)."""
    total = gauss(p.q, p.k)
    line = gauss(p.q, p.k - 1)
    return ParameterSet(n=total - p.n, k=p.k, h1=line - p.h2, h2=line - p.h1, q=p.q)
