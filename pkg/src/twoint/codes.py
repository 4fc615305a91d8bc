"""Point sets, the two-intersection property, and two-weight codes.

verify_two_intersection is the search's soundness oracle: it counts the
intersection of a point set with every single hyperplane of PG(5,q) through
the trace form, with no reference to the quotient matrix pathway.

to_code realizes the classical correspondence: columns of a generator
matrix are homogeneous coordinates of the points, and the codeword indexed
by a field element u is (Tr(p_1 u), ..., Tr(p_n u)), so its weight is
n minus the number of points on the hyperplane dual to u.  A set meeting
hyperplanes in h1 or h2 points therefore yields weights n - h2 < n - h1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import NotTwoIntersectionError, RankDeficientError
from .feasibility import ParameterSet
from .field import FieldParams
from .geometry import OrbitModel, ProjectivePoint


@dataclass(frozen=True)
class PointSet:
    """A union of full tau-orbits, as projective points with log bookkeeping."""

    field: FieldParams
    point_logs: tuple[int, ...]
    orbit_indices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.point_logs)

    @property
    def points(self) -> tuple[ProjectivePoint, ...]:
        from .geometry import projective_point
        return tuple(projective_point(self.field, l) for l in self.point_logs)

    def parameters(self, h1: int, h2: int) -> ParameterSet:
        return ParameterSet(n=self.n, k=6, h1=h1, h2=h2, q=self.field.q)


@dataclass(frozen=True)
class TwoWeightCode:
    """[n, 6] code over F_q presented through its point set; codewords are
    indexed by field elements (message space = F_{q^6})."""

    field: FieldParams
    n: int
    point_logs: tuple[int, ...]
    generator: np.ndarray                 # (6e, n) over F_p, point coordinates
    weights: tuple[int, ...]              # sorted, one or two values
    weight_distribution: dict[int, int]   # weight -> count, zero included
    zeros_per_log: np.ndarray             # hyperplane point-count per dual log

    @property
    def w1(self) -> int:
        return self.weights[0]

    @property
    def w2(self) -> int:
        return self.weights[-1]

    def codeword(self, u_log: int | None) -> np.ndarray:
        """Coordinates (Tr(p_i * u)) of the codeword indexed by omega^u_log
        (None = the zero codeword); prime q only."""
        if u_log is None:
            return np.zeros(self.n, dtype=np.int16)
        f = self.field
        plogs = np.asarray(self.point_logs)
        return f.trace_code[(plogs + u_log) % f.group_order].astype(np.int16)


def expand(selection, model: OrbitModel) -> PointSet:
    """Concatenate the orbits of all selected indices and assert spanning."""
    indices = getattr(selection, "indices", None)
    if indices is None:
        indices = tuple(i for i, b in enumerate(selection) if b)
    if not indices:
        raise ValueError("empty selection")
    logs = []
    for i in indices:
        logs.extend(int(v) for v in model.point_logs[i])
    ps = PointSet(field=model.field, point_logs=tuple(logs),
                  orbit_indices=tuple(indices))
    if _coordinate_rank(ps) != 6 * model.field.e:
        raise RankDeficientError(
            "expanded set does not span PG(5,q); the orbit model is broken")
    return ps


def _coordinate_rank(ps: PointSet) -> int:
    """Rank over F_p of the 6e x n coordinate matrix."""
    f = ps.field
    p = f.p
    mat = f.antilog[list(ps.point_logs)].astype(np.int64).T % p
    rows, cols = mat.shape
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if mat[r, c] % p:
                piv = r
                break
        if piv is None:
            continue
        mat[[rank, piv]] = mat[[piv, rank]]
        inv = pow(int(mat[rank, c]), p - 2, p)
        mat[rank] = (mat[rank] * inv) % p
        for r in range(rows):
            if r != rank and mat[r, c] % p:
                mat[r] = (mat[r] - mat[r, c] * mat[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def hyperplane_histogram(ps: PointSet) -> dict[int, int]:
    """Brute force |K ^ H| over every hyperplane {p : Tr(p u) = 0}, one u per
    projective class."""
    f = ps.field
    go = f.group_order
    nu = go // (f.q - 1)
    z = f.trace_zero.astype(np.int64)
    plogs = np.array(ps.point_logs, dtype=np.int64)
    counts = np.zeros(nu, dtype=np.int64)
    for u in range(nu):
        counts[u] = z[(plogs + u) % go].sum()
    return dict(Counter(int(c) for c in counts))


def verify_two_intersection(ps: PointSet) -> tuple[int, int, dict[int, int]]:
    """Histogram every hyperplane intersection; raise unless at most two
    distinct sizes occur.  Returns (h1, h2, histogram) with h1 <= h2."""
    hist = hyperplane_histogram(ps)
    sizes = sorted(hist)
    if len(sizes) > 2:
        raise NotTwoIntersectionError(
            f"{len(sizes)} distinct intersection sizes: {hist}")
    h1 = sizes[0]
    h2 = sizes[-1]
    return h1, h2, hist


def to_code(ps: PointSet) -> TwoWeightCode:
    """Weights and full weight distribution of the code generated by the
    point coordinates; weight(c_u) = n - #{i : Tr(p_i u) = 0}."""
    f = ps.field
    go = f.group_order
    z = f.trace_zero.astype(np.int64)
    plogs = np.array(ps.point_logs, dtype=np.int64)
    zeros = np.zeros(go, dtype=np.int64)
    for k, pl in enumerate(plogs):
        zeros += z[(np.arange(go) + pl) % go]
    weights_per_log = ps.n - zeros
    dist = Counter(int(w) for w in weights_per_log)
    dist[0] += 1          # the zero codeword (u = 0)
    nonzero_weights = sorted(w for w in dist if w != 0)
    if not 1 <= len(nonzero_weights) <= 2:
        raise NotTwoIntersectionError(
            f"code has {len(nonzero_weights)} nonzero weights")
    generator = f.antilog[list(ps.point_logs)].T.copy()
    return TwoWeightCode(
        field=f, n=ps.n, point_logs=tuple(int(v) for v in plogs),
        generator=generator, weights=tuple(nonzero_weights),
        weight_distribution=dict(dist), zeros_per_log=zeros)


def generator_matrix_text(code: TwoWeightCode) -> str:
    """Plain text export: one row per line, entries space-separated."""
    return "\n".join(" ".join(str(int(v)) for v in row)
                     for row in code.generator) + "\n"


def weight_distribution_json(code: TwoWeightCode) -> dict:
    return {str(w): int(c) for w, c in sorted(code.weight_distribution.items())}
