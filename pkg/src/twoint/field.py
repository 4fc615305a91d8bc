"""Arithmetic in the field tower F_q < F_{q^2}, F_{q^3} < F_{q^6}.

The ambient field F_{q^6} is realized as F_p[x]/<m(x)> for the prime p with
q = p^e, and every nonzero element is kept in a dual representation:

  * its discrete log to the base omega := the residue class of x, which makes
    multiplication, inversion, subfield-membership tests and Frobenius O(1);
  * its coefficient vector over F_p, which makes addition and traces O(1).

For q = 3 the modulus is pinned to x^6 - x^4 + x^2 - x - 1 so that published
exponent pairs relative to omega reproduce exactly.  build_field verifies by
exponentiation that omega is primitive and aborts otherwise: substituting a
different primitive root would silently invalidate every catalogued exponent.

Subfields are located by discrete log: a nonzero a lies in F_{q^d} iff
(q^6-1)/(q^d-1) divides log(a).  The relative trace Tr : F_{q^6} -> F_q is
a |-> sum_{i<6} a^(q^i); its value is encoded as a small integer (the natural
residue for prime q, see FieldParams.trace).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .errors import NotIrreducibleError, NotPrimitiveError

# x^6 - x^4 + x^2 - x - 1 over F_3, constant term first.
MODULUS_Q3 = (2, 2, 1, 0, 2, 0, 1)


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, constant term first)

def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for d in range(len(a) - 1, dm - 1, -1):
        c = a[d]
        if c:
            f = (c * inv_lead) % p
            for k in range(dm + 1):
                a[d - dm + k] = (a[d - dm + k] - f * m[k]) % p
    out = a[:dm]
    out += [0] * (dm - len(out))
    return out


def _ppowmod(base: list[int], exp: int, m: list[int], p: int) -> list[int]:
    result = [1]
    b = _pmod(base, m, p)
    while exp:
        if exp & 1:
            result = _pmod(_pmul(result, b, p), m, p)
        b = _pmod(_pmul(b, b, p), m, p)
        exp >>= 1
    dm = len(m) - 1
    result += [0] * (dm - len(result))
    return result[:dm]


def _trim(u: list[int]) -> list[int]:
    while u and u[-1] == 0:
        u.pop()
    return u


def _prem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo b (b nonzero, trimmed)."""
    r = _trim(list(a))
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        if r[-1] == 0:
            r.pop()
            continue
        f = (r[-1] * inv_lead) % p
        shift = len(r) - len(b)
        for k in range(len(b)):
            r[shift + k] = (r[shift + k] - f * b[k]) % p
        r.pop()
    return _trim(r)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _prem(a, b, p)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Rabin test: x^(p^n) = x mod m and gcd(x^(p^(n/r)) - x, m) = 1 for r | n."""
    n = len(m) - 1
    x = [0, 1]
    xq = _ppowmod(x, p ** n, m, p)
    if xq != _pmod(x, m, p):
        return False
    for r in _prime_divisors(n):
        d = n // r
        xd = _ppowmod(x, p ** d, m, p)
        diff = [(u - v) % p for u, v in zip(xd, _pmod(x, m, p))]
        g = _pgcd(diff, m, p)
        if len(g) != 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{q^6} in dual representation.

    log is None exactly for the zero element; otherwise it is the discrete
    log base omega in {0, ..., q^6-2}.  coeffs is the length-6e coefficient
    vector over the prime field, constant term first.
    """

    params: "FieldParams" = dc_field(repr=False)
    log: int | None
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return self.log is None

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return self.params.mul(self, other)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return self.params.add(self, other)

    def __neg__(self) -> "FieldElement":
        return self.params.neg(self)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self.params.add(self, self.params.neg(other))

    def __pow__(self, exp: int) -> "FieldElement":
        return self.params.power(self, exp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.log == other.log and self.params.config == other.params.config

    def __hash__(self) -> int:
        return hash((self.log, self.params.config))

    def __repr__(self) -> str:
        if self.log is None:
            return "0"
        return f"w^{self.log}"


class FieldParams:
    """Tables for F_{q^6}; immutable after construction, safe to share."""

    def __init__(self, q: int, p: int, e: int, modulus: tuple[int, ...]):
        self.q = q
        self.p = p
        self.e = e
        self.degree = 6 * e
        self.modulus = modulus
        self.group_order = q ** 6 - 1
        # antilog[i] = coefficient vector of omega^i; filled by build_field
        self.antilog: np.ndarray | None = None
        self._log_of_enc: dict[int, int] = {}
        self.trace_code: np.ndarray | None = None
        self.trace_zero: np.ndarray | None = None
        self._enc_weights: np.ndarray | None = None

    # -- identity & config ---------------------------------------------------

    @property
    def config(self) -> tuple:
        return (self.q, self.modulus)

    def __repr__(self) -> str:
        return f"FieldParams(q={self.q}, degree={self.degree})"

    # -- element constructors -------------------------------------------------

    def zero(self) -> FieldElement:
        return FieldElement(self, None, (0,) * self.degree)

    def one(self) -> FieldElement:
        return self.element(0)

    def omega(self) -> FieldElement:
        return self.element(1)

    def element(self, log: int) -> FieldElement:
        log %= self.group_order
        return FieldElement(self, log, tuple(int(c) for c in self.antilog[log]))

    def from_coeffs(self, coeffs) -> FieldElement:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.degree:
            raise ValueError(f"need {self.degree} coefficients, got {len(coeffs)}")
        if all(c == 0 for c in coeffs):
            return self.zero()
        return FieldElement(self, self._log_of_enc[self._enc(coeffs)], coeffs)

    def _enc(self, coeffs) -> int:
        enc = 0
        for c in reversed(coeffs):
            enc = enc * self.p + int(c)
        return enc

    # -- arithmetic ------------------------------------------------------------

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if a.log is None or b.log is None:
            return self.zero()
        return self.element((a.log + b.log) % self.group_order)

    def inv(self, a: FieldElement) -> FieldElement:
        if a.log is None:
            raise ZeroDivisionError("zero has no inverse")
        return self.element((-a.log) % self.group_order)

    def power(self, a: FieldElement, exp: int) -> FieldElement:
        if a.log is None:
            if exp <= 0:
                raise ZeroDivisionError("0 ** nonpositive")
            return self.zero()
        return self.element((a.log * exp) % self.group_order)

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        coeffs = tuple((u + v) % self.p for u, v in zip(a.coeffs, b.coeffs))
        return self.from_coeffs(coeffs)

    def neg(self, a: FieldElement) -> FieldElement:
        return self.from_coeffs(tuple((-c) % self.p for c in a.coeffs))

    def frobenius(self, a: FieldElement) -> FieldElement:
        """a |-> a^q, the generator of Gal(F_{q^6}/F_q)."""
        if a.log is None:
            return a
        return self.element((a.log * self.q) % self.group_order)

    # -- tower structure ---------------------------------------------------------

    def subfield_member(self, a: FieldElement, d: int) -> bool:
        """True iff a lies in the intermediate field F_{q^d}, d | 6."""
        if 6 % d != 0:
            raise ValueError(f"d={d} does not divide 6")
        if a.log is None:
            return True
        step = self.group_order // (self.q ** d - 1)
        return a.log % step == 0

    def trace(self, a: FieldElement) -> int:
        """Relative trace into F_q, encoded as an integer.

        For prime q this is the natural residue in {0, ..., q-1}.  For
        q = p^e with e > 1 the encoding is 0 for zero and 1 + t for the
        t-th power of the fixed F_q generator omega^((q^6-1)/(q-1)).
        """
        if a.log is None:
            return 0
        return int(self.trace_code[a.log])

    # -- bulk tables used by the geometry/code layers ------------------------------

    @property
    def scalar_step(self) -> int:
        """Discrete-log step between scalar multiples: (q^6-1)/(q-1)."""
        return self.group_order // (self.q - 1)

    def element_count(self) -> int:
        return self.q ** 6

    def coeff_matrix(self) -> np.ndarray:
        """(q^6, 6e) coefficient vectors for all elements; row 0 is zero,
        row 1+i is omega^i.  Used to build difference tables and generator
        matrices without per-element objects."""
        out = np.zeros((self.element_count(), self.degree), dtype=np.int8)
        out[1:] = self.antilog
        return out

    @lru_cache(maxsize=1)
    def difference_table(self) -> np.ndarray:
        """(q^6, q^6) int32 table: entry (u, v) is the element index of
        u - v under the indexing of coeff_matrix (0 = zero, 1+log otherwise)."""
        coeffs = self.coeff_matrix().astype(np.int16)
        weights = self.p ** np.arange(self.degree, dtype=np.int64)
        enc_to_index = np.zeros(self.p ** self.degree, dtype=np.int32)
        encs = (coeffs.astype(np.int64) @ weights).astype(np.int64)
        enc_to_index[encs] = np.arange(self.element_count(), dtype=np.int32)
        diff = (coeffs[:, None, :] - coeffs[None, :, :]) % self.p
        diff_enc = (diff.astype(np.int64) @ weights)
        return enc_to_index[diff_enc]


def build_field(q: int = 3, modulus=None) -> FieldParams:
    """Construct the tables for F_{q^6} and verify that omega is primitive.

    modulus is a coefficient sequence, constant term first, over the prime
    field (degree 6 for prime q, degree 6e for q = p^e).  Defaults: the
    pinned polynomial for q = 3, a deterministic search otherwise.

    Raises NotIrreducibleError / NotPrimitiveError when the residue class
    of x cannot serve as the published primitive root.
    """
    p, e = _prime_power(q)
    degree = 6 * e
    if modulus is None:
        if q == 3:
            modulus = MODULUS_Q3
        else:
            modulus = _find_primitive_modulus(p, degree)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != degree + 1 or modulus[-1] % p == 0:
        raise ValueError(f"modulus must be monic-compatible of degree {degree}")

    if not _is_irreducible(list(modulus), p):
        raise NotIrreducibleError(f"{modulus} is reducible over F_{p}")

    params = FieldParams(q, p, e, modulus)
    group_order = params.group_order

    # fill the antilog table by iterating multiplication by x
    antilog = np.zeros((group_order, degree), dtype=np.int8)
    cur = [1] + [0] * (degree - 1)
    m = list(modulus)
    for i in range(group_order):
        antilog[i] = cur
        if i < group_order - 1:
            cur = _pmod(_pmul(cur, [0, 1], p), m, p)
            if all(c == 0 for c in cur):
                raise NotIrreducibleError("hit zero while iterating powers of x")
            if cur == antilog[0].tolist():
                raise NotPrimitiveError(
                    f"x has multiplicative order {i + 1} < {group_order}")
    # closing the cycle: x^(group_order) must return to 1
    nxt = _pmod(_pmul(list(map(int, antilog[-1])), [0, 1], p), m, p)
    if nxt != [1] + [0] * (degree - 1):
        raise NotPrimitiveError("x does not have full multiplicative order")

    params.antilog = antilog
    weights = p ** np.arange(degree, dtype=np.int64)
    encs = antilog.astype(np.int64) @ weights
    params._log_of_enc = {int(enc): i for i, enc in enumerate(encs)}
    params._enc_weights = weights

    params.trace_code = _build_trace_table(params)
    params.trace_zero = params.trace_code == 0
    return params


def _build_trace_table(params: FieldParams) -> np.ndarray:
    """trace_code[i] = encoded Tr(omega^i); vectorized over all logs."""
    go = params.group_order
    logs = np.arange(go, dtype=np.int64)
    acc = np.zeros((go, params.degree), dtype=np.int16)
    for k in range(6):
        idx = (logs * pow(params.q, k, go)) % go
        acc = (acc + params.antilog[idx]) % params.p
    if params.e == 1:
        if acc[:, 1:].any():
            raise AssertionError("trace left the prime field")
        return acc[:, 0].astype(np.int16)
    # q = p^e: label F_q elements 0 (zero), 1 + t for the t-th generator power
    weights = params._enc_weights
    encs = acc.astype(np.int64) @ weights
    code = np.zeros(go, dtype=np.int16)
    nu = params.group_order // (params.q - 1)
    label = {0: 0}
    for t in range(params.q - 1):
        el = params.antilog[(nu * t) % go].astype(np.int64)
        label[int(el @ weights)] = 1 + t
    for i in range(go):
        code[i] = label[int(encs[i])]
    return code


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"q={q} is not a prime power")
            return p, e
    raise ValueError(f"q={q} is not a prime power")


def _find_primitive_modulus(p: int, degree: int) -> tuple[int, ...]:
    """First (in lexicographic coefficient order) monic irreducible polynomial
    of the given degree whose root is primitive.  Deterministic, so every run
    of build_field(q) lands on the same field model."""
    group_order = p ** degree - 1
    prime_divs = _prime_divisors(group_order)
    for enc in range(p ** degree):
        coeffs = []
        v = enc
        for _ in range(degree):
            coeffs.append(v % p)
            v //= p
        if coeffs[0] == 0:
            continue
        m = coeffs + [1]
        if not _is_irreducible(m, p):
            continue
        # primitivity of the class of x: x^((p^degree-1)/r) != 1 for prime r
        ok = True
        for r in prime_divs:
            xr = _ppowmod([0, 1], group_order // r, m, p)
            if xr == [1] + [0] * (degree - 1):
                ok = False
                break
        if ok:
            return tuple(m)
    raise NotPrimitiveError(f"no primitive modulus of degree {degree} over F_{p}")


# module-level forms of the core operations

def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def subfield_member(a: FieldElement, d: int) -> bool:
    return a.params.subfield_member(a, d)


def trace(a: FieldElement) -> int:
    return a.params.trace(a)
