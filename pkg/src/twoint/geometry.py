"""PG(5,q) as F_{q^6}^x mod scalars, its tau-orbits, the Segre transversal,
and the orbit-level quotient incidence matrix.

Projective points are scalar classes of field elements.  Because scalars are
exactly the powers of omega^nu with nu = (q^6-1)/(q-1), the canonical
representative of every class is the member with discrete log < nu, so
class ids are simply logs in {0, ..., nu-1}.

tau is the collineation induced by omega^((q+1)(q^2+q+1)); writing
s = (q+1)(q^2+q+1), the tau-orbit of a point consists of the classes whose
logs are congruent mod s, which makes the orbit partition (and its ordering
by minimal log) pure modular arithmetic.  There are s orbits of q^2-q+1
points each.

For q != 2 (mod 3) every orbit contains exactly one class of the Segre
variety {x*y : x in F_{q^2}^x, y in F_{q^3}^x}; these classes are the ones
whose log is divisible by q^2-q+1.  Each orbit is identified externally by a
witness pair (a, b) of exponents with omega^a in F_{q^3} and omega^b in
F_{q^2}: the decomposition of the orbit's minimal-log Segre element with the
smallest second exponent (the convention that reproduces published tables).

The quotient matrix M counts, for Segre representatives s_i, s_j, the group
elements g in <tau> with Tr(s_i * g * s_j) = 0; the trace bilinear form plays
the role of point-hyperplane incidence.  M(i,j) depends only on
(i + j) mod s, so M is symmetric and constant on anti-diagonals.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedQError
from .field import FieldElement, FieldParams

ORBIT_ORDER_VERSION = "min-log-ascending/1"


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of PG(5,q): the scalar class of rep, identified by the least
    discrete log in the class (class_id = log of rep)."""

    rep: FieldElement
    class_id: int

    def __post_init__(self):
        assert self.rep.log == self.class_id


@dataclass(frozen=True)
class Orbit:
    index: int
    segre_rep: ProjectivePoint
    segre_pair: tuple[int, int]
    points: tuple[ProjectivePoint, ...]


class OrbitModel:
    """The tau-orbit partition of PG(5,q) with Segre representatives.

    Immutable once built.  point_logs[i] lists the canonical logs of orbit
    i's points in ascending order; segre_logs[i] is the log of its Segre
    representative.
    """

    def __init__(self, field: FieldParams):
        q = field.q
        self.field = field
        self.q = q
        self.tau_log = (q + 1) * (q * q + q + 1)
        self.orbit_count = (q + 1) * (q * q + q + 1)
        self.orbit_size = q * q - q + 1
        self.num_points = field.group_order // (q - 1)
        s = self.orbit_count
        nu = self.num_points
        self.point_logs = np.array(
            [[i + s * j for j in range(self.orbit_size)] for i in range(s)],
            dtype=np.int64)
        assert self.point_logs.max() == nu - 1

        if q % 3 != 2:
            r = self.orbit_size
            segre = []
            for i in range(s):
                hits = [int(l) for l in self.point_logs[i] if l % r == 0]
                assert len(hits) == 1
                segre.append(hits[0])
            self.segre_logs = np.array(segre, dtype=np.int64)
            self.segre_pairs = [segre_witness_pair(field, int(l)) for l in segre]
        else:
            self.segre_logs = None
            self.segre_pairs = None

        self._orbits: list[Orbit] | None = None

    @property
    def orbits(self) -> list[Orbit]:
        if self._orbits is None:
            if self.segre_logs is None:
                raise UnsupportedQError(
                    f"q={self.q} = 2 (mod 3): no Segre transversal")
            f = self.field
            self._orbits = [
                Orbit(
                    index=i,
                    segre_rep=projective_point(f, int(self.segre_logs[i])),
                    segre_pair=self.segre_pairs[i],
                    points=tuple(projective_point(f, int(l))
                                 for l in self.point_logs[i]),
                )
                for i in range(self.orbit_count)
            ]
        return self._orbits

    def orbit_of_log(self, log: int) -> int:
        """Orbit index of the point class containing omega^log."""
        return log % self.orbit_count

    def config_digest(self) -> str:
        payload = json.dumps({
            "q": self.q,
            "modulus": list(self.field.modulus),
            "orbit_order": ORBIT_ORDER_VERSION,
        }, sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


def projective_point(field: FieldParams, log: int) -> ProjectivePoint:
    """Canonical projective point for any member log of the class."""
    nu = field.group_order // (field.q - 1)
    canon = log % nu
    return ProjectivePoint(rep=field.element(canon), class_id=canon)


def build_orbits(field: FieldParams) -> OrbitModel:
    """Partition the points of PG(5,q) into tau-orbits, ordered by minimal
    representative log."""
    return OrbitModel(field)


def segre_transversal(field: FieldParams):
    """All projective classes of products F_{q^2}^x * F_{q^3}^x, with witness
    pairs; exactly one class per tau-orbit when q != 2 (mod 3)."""
    q = field.q
    if q % 3 == 2:
        raise UnsupportedQError(
            f"q={q} = 2 (mod 3): Segre classes do not form a transversal")
    go = field.group_order
    nu = go // (q - 1)
    step2 = go // (q * q - 1)          # F_{q^2}^x = <omega^step2>
    step3 = go // (q ** 3 - 1)         # F_{q^3}^x = <omega^step3>
    classes = sorted({(a + b) % go % nu
                      for a in range(0, go, step3)
                      for b in range(0, go, step2)})
    expected = (q + 1) * (q * q + q + 1)
    assert len(classes) == expected, (len(classes), expected)
    points = [projective_point(field, c) for c in classes]
    pairs = [segre_witness_pair(field, c) for c in classes]
    return points, pairs


def segre_witness_pair(field: FieldParams, class_log: int) -> tuple[int, int]:
    """Witness exponents (a, b) with omega^a in F_{q^3}, omega^b in F_{q^2}
    and omega^(a+b) the minimal-log element of the given Segre class; among
    the q-1 decompositions of that element, the one with smallest b."""
    go = field.group_order
    q = field.q
    step2 = go // (q * q - 1)
    step3 = go // (q ** 3 - 1)
    for beta in range(q * q - 1):
        b = beta * step2
        a = (class_log - b) % go
        if a % step3 == 0:
            return (a, b)
    raise ValueError(f"log {class_log} is not a Segre product class")


@dataclass(frozen=True)
class QuotientMatrix:
    """Orbit-vs-hyperplane-orbit incidence counts under the trace form."""

    q: int
    entries: np.ndarray           # (s, s) int16, entry range 0..q^2-q+1
    segre_logs: np.ndarray
    segre_pairs: tuple[tuple[int, int], ...]
    config_digest: str

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def validate(self) -> None:
        m = self.entries
        s = self.size
        line_sum = (self.q ** 5 - 1) // (self.q - 1)
        if not (m == m.T).all():
            raise AssertionError("quotient matrix is not symmetric")
        if m.min() < 0 or m.max() > self.q * self.q - self.q + 1:
            raise AssertionError("entry out of range")
        if not (m.sum(axis=0) == line_sum).all() or not (m.sum(axis=1) == line_sum).all():
            raise AssertionError(f"row/column sums differ from {line_sum}")
        ij = (np.arange(s)[:, None] + np.arange(s)[None, :]) % s
        if not (m == m[0][ij]).all():
            raise AssertionError("matrix not constant on (i+j) mod s anti-diagonals")

    def to_text(self) -> str:
        return "\n".join(" ".join(str(int(v)) for v in row) for row in self.entries) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "format": "twoint-matrix",
            "version": 1,
            "q": self.q,
            "orbit_order": ORBIT_ORDER_VERSION,
            "config_digest": self.config_digest,
            "segre_logs": [int(v) for v in self.segre_logs],
            "segre_pairs": [list(p) for p in self.segre_pairs],
            "entries": [[int(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "QuotientMatrix":
        if d.get("format") != "twoint-matrix":
            raise ValueError("not a quotient-matrix document")
        return cls(
            q=int(d["q"]),
            entries=np.array(d["entries"], dtype=np.int16),
            segre_logs=np.array(d["segre_logs"], dtype=np.int64),
            segre_pairs=tuple(tuple(p) for p in d["segre_pairs"]),
            config_digest=d["config_digest"],
        )


def build_quotient_matrix(model: OrbitModel) -> QuotientMatrix:
    """M(i,j) = #{g in <tau> : Tr(s_i * g * s_j) = 0} over the orbit's Segre
    representatives s_i."""
    if model.segre_logs is None:
        raise UnsupportedQError("quotient matrix needs the Segre transversal")
    field = model.field
    go = field.group_order
    s = model.orbit_count
    r = model.orbit_size
    z = field.trace_zero
    segre = model.segre_logs
    # sum trace-zero indicators over the r translates of s_i + s_j
    pair_sum = (segre[:, None] + segre[None, :]) % go
    m = np.zeros((s, s), dtype=np.int16)
    for t in range(r):
        m += z[(pair_sum + model.tau_log * t) % go]
    qm = QuotientMatrix(
        q=model.q,
        entries=m,
        segre_logs=segre.copy(),
        segre_pairs=tuple(model.segre_pairs),
        config_digest=model.config_digest(),
    )
    qm.validate()
    return qm


def intersection_spectrum(selection, matrix: QuotientMatrix) -> np.ndarray:
    """x*M for a 0-1 orbit selection: entry j is the number of selected
    points on (any) hyperplane of orbit j."""
    bits = np.asarray(getattr(selection, "bits", selection), dtype=np.int64)
    if bits.shape != (matrix.size,):
        raise ValueError(f"selection length {bits.shape} != {matrix.size}")
    return bits @ matrix.entries.astype(np.int64)
