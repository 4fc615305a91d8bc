"""Delsarte graphs of two-weight codes, strong regularity, and canonical
certificates for equivalence classification.

The graph of a code puts one vertex per codeword and joins two codewords
when their difference has a designated weight.  Codewords are indexed by
field elements u (vertex 0 = zero element, vertex 1+i = omega^i), so the
graph is a Cayley graph on the additive group: adjacency depends only on
u - v, and the whole adjacency matrix falls out of the field's difference
table and the per-element weight classes.

verify_srg checks constant degree and both common-neighbour counts over all
pairs via one matrix product, then returns (v, k, lambda, mu).

Certificates are sha256 digests of the canonical form produced by canon;
identical digest == isomorphic graph, which is what collapses the residual
equivalences the orbit-level symmetry group cannot see.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canon import canonical_form
from .codes import TwoWeightCode
from .errors import NotStronglyRegularError

import hashlib


@dataclass(frozen=True)
class DelsarteGraph:
    """Graph on the q^6 codewords; adjacency when the difference codeword
    has weight weight_used."""

    adjacency: np.ndarray        # (v, v) uint8, symmetric, zero diagonal
    weight_used: int

    @property
    def vertex_count(self) -> int:
        return int(self.adjacency.shape[0])

    def degree(self) -> int:
        return int(self.adjacency[0].sum())


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def identity_holds(self) -> bool:
        return self.k * (self.k - self.lam - 1) == (self.v - self.k - 1) * self.mu

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def complement(self) -> "SrgParams":
        v, k, lam, mu = self.as_tuple()
        kc = v - k - 1
        return SrgParams(v=v, k=kc, lam=v - 2 - 2 * k + mu, mu=v - 2 * k + lam)


@dataclass(frozen=True)
class CanonicalCertificate:
    digest: str                       # lowercase hex sha256 of canonical form
    aut_order: int | None = None


def build_graph(code: TwoWeightCode, weight_choice: int | None = None) -> DelsarteGraph:
    """Cayley graph of the difference set {d != 0 : wt(c_d) = w}.

    weight_choice defaults to the larger weight (n - h1), matching the
    published SRG parameter tables; pass the smaller weight to flip.
    """
    w = code.w2 if weight_choice is None else weight_choice
    if w not in code.weights:
        raise ValueError(f"weight {w} is not one of {code.weights}")
    f = code.field
    weights_per_log = code.n - code.zeros_per_log     # weight of c_{omega^i}
    in_class = np.zeros(f.element_count(), dtype=np.uint8)
    in_class[1:] = weights_per_log == w
    diff = f.difference_table()
    adjacency = in_class[diff]
    np.fill_diagonal(adjacency, 0)
    return DelsarteGraph(adjacency=adjacency, weight_used=int(w))


def verify_srg(g: DelsarteGraph) -> SrgParams:
    """Full strong-regularity check; raises NotStronglyRegularError with the
    offending statistic otherwise."""
    a = g.adjacency
    v = g.vertex_count
    degs = a.sum(axis=1)
    k = int(degs[0])
    if not (degs == k).all():
        raise NotStronglyRegularError(f"degrees vary: {np.unique(degs)}")
    common = (a.astype(np.float32) @ a.astype(np.float32)).astype(np.int64)
    adj_mask = a.astype(bool)
    off = ~np.eye(v, dtype=bool)
    lam_vals = np.unique(common[adj_mask])
    mu_vals = np.unique(common[off & ~adj_mask])
    if len(lam_vals) != 1 or len(mu_vals) != 1:
        raise NotStronglyRegularError(
            f"common-neighbour counts vary: lambda {lam_vals}, mu {mu_vals}")
    params = SrgParams(v=v, k=k, lam=int(lam_vals[0]), mu=int(mu_vals[0]))
    if not params.identity_holds():
        raise NotStronglyRegularError(f"SRG identity fails for {params}")
    return params


def canonical_certificate(g: DelsarteGraph,
                          want_aut_order: bool = False) -> CanonicalCertificate:
    """Exact certificate: sha256 of the canonical adjacency serialization."""
    res = canonical_form(g.adjacency, want_aut_order=want_aut_order)
    return CanonicalCertificate(
        digest=hashlib.sha256(res.certificate_bytes).hexdigest(),
        aut_order=res.automorphism_group_order)


def graph_certificate(adjacency: np.ndarray) -> str:
    res = canonical_form(adjacency)
    return hashlib.sha256(res.certificate_bytes).hexdigest()


def edge_list_text(g: DelsarteGraph) -> str:
    """Sparse edge-list export: header line 'v e', then one 'u v' per edge."""
    a = g.adjacency
    us, vs = np.nonzero(np.triu(a, 1))
    lines = [f"{g.vertex_count} {len(us)}"]
    lines.extend(f"{int(u)} {int(v)}" for u, v in zip(us, vs))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EquivalenceClass:
    certificate: str
    representative: tuple[tuple[int, int], ...]   # lex-minimal Segre pairs
    members: tuple[tuple[int, ...], ...]          # orbit-index tuples
    srg: SrgParams


def dedup(solutions, model, matrix) -> list[EquivalenceClass]:
    """Group orbit selections by the certificate of their Delsarte graphs.

    solutions: iterable of OrbitSelection (all for one (h1, h2) run).
    Returns one class per certificate with the lex-minimal Segre-pair list
    as representative, sorted by (representative pairs).
    """
    from .codes import expand, to_code, verify_two_intersection

    groups: dict[str, dict] = {}
    for sel in solutions:
        ps = expand(sel, model)
        verify_two_intersection(ps)
        code = to_code(ps)
        graph = build_graph(code)
        params = verify_srg(graph)
        cert = canonical_certificate(graph).digest
        pairs = tuple(sorted(model.segre_pairs[i] for i in sel.indices))
        g = groups.setdefault(cert, {"members": [], "pairs": pairs,
                                     "srg": params})
        g["members"].append(tuple(sel.indices))
        if pairs < g["pairs"]:
            g["pairs"] = pairs
        if params != g["srg"]:
            raise NotStronglyRegularError(
                "one certificate, two SRG parameter sets; broken pipeline")
    out = [EquivalenceClass(certificate=cert,
                            representative=g["pairs"],
                            members=tuple(sorted(set(g["members"]))),
                            srg=g["srg"])
           for cert, g in groups.items()]
    out.sort(key=lambda c: c.representative)
    return out
