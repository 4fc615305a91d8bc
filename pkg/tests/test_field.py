import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoint.errors import NotIrreducibleError, NotPrimitiveError
from twoint.field import MODULUS_Q3, build_field, mul, subfield_member, trace


def test_group_order_and_identity(f3):
    assert f3.group_order == 728
    one = f3.one()
    assert one.log == 0
    assert one.coeffs == (1, 0, 0, 0, 0, 0)


def test_omega_364_is_minus_one(f3):
    # the unique involution of the cyclic group of order 728
    m1 = f3.element(364)
    assert m1.coeffs == (2, 0, 0, 0, 0, 0)
    assert f3.neg(f3.one()) == m1


def test_published_pair_products(f3):
    # (560, 182) -> w^14 through (672, 273) -> w^217
    pairs = [(560, 182, 14), (588, 182, 42), (560, 273, 105),
             (672, 182, 126), (588, 273, 133), (672, 273, 217)]
    for a, b, prod in pairs:
        assert mul(f3.element(a), f3.element(b)) == f3.element(prod)


def test_mul_by_one_and_zero(f3):
    a = f3.element(123)
    assert mul(a, f3.one()) == a
    assert mul(a, f3.zero()).is_zero()


@given(st.integers(0, 727), st.integers(0, 727))
def test_logs_add_mod_728(a, b):
    f = _F3
    assert mul(f.element(a), f.element(b)).log == (a + b) % 728


def test_subfield_membership(f3):
    assert subfield_member(f3.element(91), 2)      # w^91 in F_9
    assert subfield_member(f3.element(28), 3)      # w^28 in F_27
    assert not subfield_member(f3.element(1), 1)   # w is primitive
    assert subfield_member(f3.element(364), 1)     # -1 in F_3
    # F_9 intersect F_27 = F_3
    for log in range(0, 728, 91):
        if subfield_member(f3.element(log), 3):
            assert subfield_member(f3.element(log), 1)


def test_subfield_sizes(f3):
    for d, size in [(1, 2), (2, 8), (3, 26), (6, 728)]:
        members = [l for l in range(728) if subfield_member(f3.element(l), d)]
        assert len(members) == size


def test_trace_zero_and_linearity(f3):
    assert trace(f3.zero()) == 0
    a = f3.element(17)
    two = f3.element(364)  # the scalar 2 = -1
    assert trace(f3.mul(two, a)) == (2 * trace(a)) % 3
    b = f3.element(401)
    assert trace(f3.add(a, b)) == (trace(a) + trace(b)) % 3


def test_trace_kernel_size(f3):
    # oracle: exhaust all 728 nonzero elements; the kernel hyperplane minus
    # the origin must have 3^5 - 1 = 242 elements
    zeros = sum(1 for l in range(728) if trace(f3.element(l)) == 0)
    assert zeros == 242
    assert int(f3.trace_zero.sum()) == 242


def test_trace_surjective(f3):
    values = {trace(f3.element(l)) for l in range(728)}
    assert values == {0, 1, 2}


@given(st.integers(0, 727))
def test_frobenius_triples_log(log):
    f = _F3
    assert f.frobenius(f.element(log)).log == (3 * log) % 728


@given(st.integers(0, 727))
def test_coeffs_and_log_agree(log):
    f = _F3
    a = f.element(log)
    assert f.from_coeffs(a.coeffs) == a


def test_add_inverse(f3):
    a = f3.element(55)
    assert f3.add(a, f3.neg(a)).is_zero()


def test_rejects_reducible_modulus():
    # x^6 + 2 = (x^2+...)(...) over F_3? x^6+2 has root: x^6 = 1 for any
    # nonzero x in F_3 ... x=1: 1+2=0, so x-1 divides it.
    with pytest.raises(NotIrreducibleError):
        build_field(3, modulus=(2, 0, 0, 0, 0, 0, 1))


def test_rejects_irreducible_nonprimitive_modulus():
    # x^6 + x^3 + 2 is irreducible over F_3 but its root has order dividing
    # a proper divisor of 728 if not primitive; search for a concrete witness
    # is done in the helper below once, then pinned.
    with pytest.raises((NotPrimitiveError, NotIrreducibleError)):
        build_field(3, modulus=_NONPRIMITIVE_MODULUS)


def _find_nonprimitive_modulus():
    """Find an irreducible degree-6 polynomial over F_3 whose root is not
    primitive (exists because 728 has proper divisors with primitive
    polynomials only for some classes)."""
    from twoint.field import _is_irreducible, _ppowmod
    for enc in range(3 ** 6):
        coeffs = []
        v = enc
        for _ in range(6):
            coeffs.append(v % 3)
            v //= 3
        if coeffs[0] == 0:
            continue
        m = coeffs + [1]
        if not _is_irreducible(m, 3):
            continue
        for r in (2, 7, 13):
            if _ppowmod([0, 1], 728 // r, m, 3) == [1, 0, 0, 0, 0, 0]:
                return tuple(m)
    raise AssertionError("no non-primitive irreducible sextic found")


def test_q4_field_builds():
    f = build_field(4)
    assert f.group_order == 4095
    assert f.p == 2 and f.e == 2
    # F_4 = logs divisible by 1365
    assert f.subfield_member(f.element(1365), 1)
    assert not f.subfield_member(f.element(1), 1)
    # trace lands in F_4
    t = f.trace(f.element(7))
    assert 0 <= t <= 3


def test_default_modulus_is_pinned(f3):
    assert f3.modulus == MODULUS_Q3


_F3 = build_field(3)
_NONPRIMITIVE_MODULUS = _find_nonprimitive_modulus()
