"""Exact enumeration of 0-1 orbit selections with two-valued spectra.

The core question: which unions of tau-orbits meet every hyperplane in h1 or
h2 points?  In quotient form this is x * M in {h1, h2}^s over 0-1 vectors x.
Writing y_j = 0/1 for columns hitting h1/h2 turns it into the exact linear
system x M + (h1 - h2) y = h1 * 1.

Equivalences are the normalizer elements that survive the orbit quotient:
the Singer shift (multiplication by omega, orbit index + 1) and the
Frobenius (cubing, index * q), generating the affine group
{r -> q^a r + b mod s}.  The search branches on orbit indices in ascending
order, forces the first orbit, prunes dominated prefixes in-tree and emits
one lex-minimal representative per group orbit; residual equivalence beyond
this subgroup is removed downstream by canonical graph certificates.

Enumeration runs per feasible popcount (n/7 must survive the parameter
screen, and the h1-hyperplane count t1 must be a multiple of the orbit
size).  Work is split at a fixed frontier depth into independent subtrees,
which gives worker parallelism and resumable checkpoints; outputs are
merged and sorted, so results are identical for any worker count or
interruption pattern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import ConfigMismatchError, InfeasibleCountsError
from .feasibility import ParameterSet, count_profile, passes_screen
from .geometry import QuotientMatrix, OrbitModel, intersection_spectrum

CHECKPOINT_VERSION = 1
DEFAULT_SPLIT_DEPTH = 14
_SOL_CAP = 1 << 20
_FRON_CAP = 1 << 22


@dataclass(frozen=True)
class OrbitSelection:
    """0-1 vector over orbit indices; a candidate point set in quotient form."""

    bits: tuple[int, ...]

    @property
    def popcount(self) -> int:
        return sum(self.bits)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.indices)

    @classmethod
    def from_indices(cls, indices, size: int) -> "OrbitSelection":
        bits = [0] * size
        for i in indices:
            bits[i] = 1
        return cls(bits=tuple(bits))

    @classmethod
    def from_mask(cls, mask: int, size: int) -> "OrbitSelection":
        return cls(bits=tuple((mask >> i) & 1 for i in range(size)))


@dataclass(frozen=True)
class HyperplaneLabels:
    """y vector: 0 where the hyperplane orbit meets the set in h1 points,
    1 where it meets in h2."""

    bits: tuple[int, ...]

    @classmethod
    def from_spectrum(cls, spectrum, h1: int, h2: int) -> "HyperplaneLabels":
        bits = []
        for v in spectrum:
            if v == h1:
                bits.append(0)
            elif v == h2:
                bits.append(1)
            else:
                raise ValueError(f"spectrum value {v} is neither h1 nor h2")
        return cls(bits=tuple(bits))


@dataclass(frozen=True)
class SearchSolution:
    selection: OrbitSelection
    labels: HyperplaneLabels


class SymmetryGroup:
    """Permutations of orbit indices generated by the Singer shift and the
    Frobenius map; elements enumerated by closure."""

    def __init__(self, size: int, singer: tuple[int, ...], frobenius: tuple[int, ...]):
        self.size = size
        self.singer = singer
        self.frobenius = frobenius
        seen = {tuple(range(size))}
        frontier = [tuple(range(size))]
        gens = [singer, frobenius]
        while frontier:
            new = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(size))
                    if q not in seen:
                        seen.add(q)
                        new.append(q)
            frontier = new
        self.elements = sorted(seen)
        self.perms = np.array(self.elements, dtype=np.int32)

    def __len__(self) -> int:
        return len(self.elements)

    def apply(self, perm, selection: OrbitSelection) -> OrbitSelection:
        return OrbitSelection.from_indices(
            [perm[i] for i in selection.indices], self.size)

    def selection_orbit(self, selection: OrbitSelection) -> set[tuple[int, ...]]:
        return {tuple(sorted(perm[i] for i in selection.indices))
                for perm in self.elements}

    def is_transitive(self) -> bool:
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for r in frontier:
                for g in (self.singer, self.frobenius):
                    if g[r] not in reached:
                        reached.add(g[r])
                        nxt.append(g[r])
            frontier = nxt
        return len(reached) == self.size


def build_symmetry_group(model: OrbitModel) -> SymmetryGroup:
    """Singer shift: orbit of x -> orbit of omega*x, i.e. index + 1 mod s.
    Frobenius: orbit of x -> orbit of x^q, i.e. index * q mod s."""
    s = model.orbit_count
    q = model.q
    singer = tuple((r + 1) % s for r in range(s))
    frobenius = tuple((r * q) % s for r in range(s))
    return SymmetryGroup(s, singer, frobenius)


def lex_leader_filter(x: OrbitSelection, sym: SymmetryGroup) -> bool:
    """True iff x is the lexicographically smallest member of its group
    orbit (sorted index tuples; the empty selection is its own leader).
    Nonempty leaders always contain the first orbit because the group is
    transitive."""
    mine = tuple(sorted(x.indices))
    if not mine:
        return True
    return mine == min(sym.selection_orbit(x))


# ---------------------------------------------------------------------------
# the documented single-step branching operation


@dataclass(frozen=True)
class PartialSelection:
    """Assigned prefix (values 0/1) and unassigned suffix (None)."""

    values: tuple

    def assigned_prefix_len(self) -> int:
        for i, v in enumerate(self.values):
            if v is None:
                return i
        return len(self.values)


@dataclass(frozen=True)
class BranchResult:
    pruned: bool
    complete: bool
    children: tuple
    forced: tuple


def branch(partial: PartialSelection, matrix: QuotientMatrix,
           h1: int, h2: int) -> BranchResult:
    """One step of the search tree on a partial assignment.

    Maintains per-column [min, max] achievable sums; prunes when some
    column's interval excludes both h1 and h2 (including the separating
    case, an interval strictly inside (h1, h2)); fixes variables whose
    alternative assignment would leave no feasible column target; emits
    when complete and inside {h1, h2} everywhere.
    """
    m = matrix.entries.astype(np.int64)
    s = matrix.size
    vals = list(partial.values)
    if len(vals) != s:
        raise ValueError(f"partial length {len(vals)} != {s}")

    def feasible(assignment) -> bool:
        base = np.zeros(s, dtype=np.int64)
        free = np.zeros(s, dtype=np.int64)
        for i, v in enumerate(assignment):
            if v == 1:
                base += m[i]
            elif v is None:
                free += m[i]
        lo, hi = base, base + free
        ok1 = (lo <= h1) & (h1 <= hi)
        ok2 = (lo <= h2) & (h2 <= hi)
        return bool((ok1 | ok2).all())

    if not feasible(vals):
        return BranchResult(pruned=True, complete=False, children=(), forced=())

    unassigned = [i for i, v in enumerate(vals) if v is None]
    if not unassigned:
        spectrum = intersection_spectrum([int(v) for v in vals], matrix)
        ok = set(spectrum.tolist()) <= {h1, h2}
        return BranchResult(pruned=not ok, complete=ok, children=(), forced=())

    # forced variables: only one value keeps every column feasible
    forced = []
    work = list(vals)
    changed = True
    while changed:
        changed = False
        for i in [j for j, v in enumerate(work) if v is None]:
            can = []
            for v in (0, 1):
                work[i] = v
                if feasible(work):
                    can.append(v)
                work[i] = None
            if not can:
                return BranchResult(pruned=True, complete=False,
                                    children=(), forced=tuple(forced))
            if len(can) == 1:
                work[i] = can[0]
                forced.append((i, can[0]))
                changed = True

    nxt = next(j for j, v in enumerate(work) if v is None) \
        if any(v is None for v in work) else None
    children = []
    if nxt is not None:
        for v in (1, 0):
            child = list(work)
            child[nxt] = v
            if feasible(child):
                children.append(PartialSelection(values=tuple(child)))
    else:
        children.append(PartialSelection(values=tuple(work)))
    return BranchResult(pruned=False, complete=False,
                        children=tuple(children), forced=tuple(forced))


# ---------------------------------------------------------------------------
# checkpointing


@dataclass
class SearchCheckpoint:
    """Resumable state: the frontier of deferred subtrees plus results of
    the ones already solved."""

    config_digest: str
    h1: int
    h2: int
    popcount: int
    split_depth: int
    frontier: list[int]
    pre_frontier_solutions: list[int]
    done: dict[int, list[int]]

    def to_json(self) -> str:
        return json.dumps({
            "format": "twoint-checkpoint",
            "version": CHECKPOINT_VERSION,
            "config_digest": self.config_digest,
            "h1": self.h1, "h2": self.h2,
            "popcount": self.popcount,
            "split_depth": self.split_depth,
            "frontier": self.frontier,
            "pre_frontier_solutions": self.pre_frontier_solutions,
            "done": {str(k): v for k, v in self.done.items()},
        })

    @classmethod
    def from_json(cls, text: str) -> "SearchCheckpoint":
        d = json.loads(text)
        if d.get("format") != "twoint-checkpoint" or d.get("version") != CHECKPOINT_VERSION:
            raise ConfigMismatchError("unknown checkpoint format/version")
        return cls(
            config_digest=d["config_digest"], h1=d["h1"], h2=d["h2"],
            popcount=d["popcount"], split_depth=d["split_depth"],
            frontier=list(d["frontier"]),
            pre_frontier_solutions=list(d["pre_frontier_solutions"]),
            done={int(k): v for k, v in d["done"].items()},
        )


# ---------------------------------------------------------------------------
# enumeration driver


def feasible_popcounts(matrix: QuotientMatrix, h1: int, h2: int,
                       orbit_size: int, num_points: int) -> list[tuple[int, int]]:
    """(popcount, t1cols) pairs surviving the parameter screen; t1 must
    split evenly into hyperplane orbits."""
    s = matrix.size
    out = []
    for m in range(1, s + 1):
        n = m * orbit_size
        try:
            p = ParameterSet(n=n, k=6, h1=h1, h2=h2, q=matrix.q)
        except ValueError:
            continue
        if not passes_screen(p):
            continue
        try:
            prof = count_profile(p)
        except InfeasibleCountsError:
            continue
        if prof.t1 % orbit_size:
            continue
        out.append((m, prof.t1 // orbit_size))
    return out


def _kernel_inputs(matrix: QuotientMatrix, sym: SymmetryGroup):
    m = np.ascontiguousarray(matrix.entries.astype(np.int32))
    s = matrix.size
    perms = sym.perms
    # group elements mapping z to 0, CSR over z
    zg_lists = [[] for _ in range(s)]
    for gi, perm in enumerate(sym.elements):
        for z in range(s):
            if perm[z] == 0:
                zg_lists[z].append(gi)
    zg_ptr = np.zeros(s + 1, dtype=np.int32)
    flat = []
    for z in range(s):
        zg_ptr[z + 1] = zg_ptr[z] + len(zg_lists[z])
        flat.extend(zg_lists[z])
    zg_list = np.array(flat, dtype=np.int32)
    # per (column, value) row buckets, CSR
    bucket_ptr = np.zeros(s * 8 + 1, dtype=np.int32)
    buckets = [[] for _ in range(s * 8)]
    for i in range(s):
        for j in range(s):
            buckets[j * 8 + int(m[i, j])].append(i)
    flatb = []
    for k in range(s * 8):
        bucket_ptr[k + 1] = bucket_ptr[k] + len(buckets[k])
        flatb.extend(buckets[k])
    bucket_rows = np.array(flatb, dtype=np.int32)
    return m, perms, zg_ptr, zg_list, bucket_ptr, bucket_rows


_WORKER_CTX = {}


def _subtree_worker(args):
    idx, word, nbits = args
    k = _WORKER_CTX
    prefix = np.array([(word >> b) & 1 for b in range(nbits)], dtype=np.int8)
    sol = np.zeros(_SOL_CAP, dtype=np.int64)
    fron = np.zeros(1, dtype=np.int64)
    nsol, _, nodes, overflow = _kernels.search_subtree(
        k["m"], k["h1"], k["h2"], k["pop"], k["t1cols"], k["perms"],
        k["zg_ptr"], k["zg_list"], k["bucket_ptr"], k["bucket_rows"],
        prefix, -1, sol, fron)
    if overflow:
        raise RuntimeError("solution buffer overflow in worker")
    return idx, sorted(int(v) for v in sol[:nsol]), nodes


def enumerate_selections(matrix: QuotientMatrix, h1: int, h2: int,
                         sym: SymmetryGroup, *, orbit_size: int | None = None,
                         num_points: int | None = None, threads: int = 1,
                         checkpoint_path: str | Path | None = None,
                         resume: bool = False,
                         split_depth: int = DEFAULT_SPLIT_DEPTH,
                         ) -> list[SearchSolution]:
    """Every two-valued selection up to the symmetry group, as lex-minimal
    representatives in deterministic ascending order, with hyperplane labels.

    Results are independent of threads / interruption; an empty list is a
    valid outcome.
    """
    if not h1 < h2:
        raise ValueError("need h1 < h2")
    q = matrix.q
    orbit_size = orbit_size or (q * q - q + 1)
    num_points = num_points or (q ** 6 - 1) // (q - 1)
    masks: list[int] = []
    for pop, t1cols in feasible_popcounts(matrix, h1, h2, orbit_size, num_points):
        pop_path = None
        if checkpoint_path is not None:
            base = Path(checkpoint_path)
            pop_path = base.with_name(f"{base.stem}.m{pop}{base.suffix or '.json'}")
        masks.extend(_enumerate_one_popcount(
            matrix, h1, h2, sym, pop, t1cols, threads=threads,
            checkpoint_path=pop_path, resume=resume,
            split_depth=split_depth))
    s = matrix.size
    selections = [OrbitSelection.from_mask(m_, s) for m_ in masks]
    selections.sort(key=lambda sel: sel.indices)
    out = []
    for sel in selections:
        spectrum = intersection_spectrum(sel, matrix)
        out.append(SearchSolution(
            selection=sel,
            labels=HyperplaneLabels.from_spectrum(spectrum, h1, h2)))
    return out


def _enumerate_one_popcount(matrix, h1, h2, sym, pop, t1cols, *, threads,
                            checkpoint_path, resume, split_depth) -> list[int]:
    m, perms, zg_ptr, zg_list, bucket_ptr, bucket_rows = _kernel_inputs(matrix, sym)

    ckpt = None
    path = Path(checkpoint_path) if checkpoint_path else None
    if path and resume and path.exists():
        ckpt = SearchCheckpoint.from_json(path.read_text())
        if (ckpt.config_digest != matrix.config_digest or ckpt.h1 != h1
                or ckpt.h2 != h2 or ckpt.popcount != pop):
            raise ConfigMismatchError(
                "checkpoint was produced under a different configuration")
        split_depth = ckpt.split_depth

    if ckpt is None:
        sol = np.zeros(_SOL_CAP, dtype=np.int64)
        fron = np.zeros(_FRON_CAP, dtype=np.int64)
        empty = np.zeros(0, dtype=np.int8)
        nsol, nfron, _, overflow = _kernels.search_subtree(
            m, h1, h2, pop, t1cols, perms, zg_ptr, zg_list,
            bucket_ptr, bucket_rows, empty, split_depth, sol, fron)
        if overflow:
            raise RuntimeError("frontier/solution buffer overflow")
        ckpt = SearchCheckpoint(
            config_digest=matrix.config_digest, h1=h1, h2=h2, popcount=pop,
            split_depth=split_depth,
            frontier=[int(v) for v in fron[:nfron]],
            pre_frontier_solutions=sorted(int(v) for v in sol[:nsol]),
            done={})
        if path:
            path.write_text(ckpt.to_json())

    todo = [(i, w) for i, w in enumerate(ckpt.frontier) if i not in ckpt.done]
    global _WORKER_CTX
    _WORKER_CTX = {"m": m, "h1": h1, "h2": h2, "pop": pop, "t1cols": t1cols,
                   "perms": perms, "zg_ptr": zg_ptr, "zg_list": zg_list,
                   "bucket_ptr": bucket_ptr, "bucket_rows": bucket_rows}
    jobs = [(i, w, split_depth) for i, w in todo]
    if threads > 1 and len(jobs) > 1:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(threads) as pool:
            for idx, sols, _ in pool.imap_unordered(_subtree_worker, jobs, chunksize=8):
                ckpt.done[idx] = sols
                if path:
                    path.write_text(ckpt.to_json())
    else:
        for job in jobs:
            idx, sols, _ = _subtree_worker(job)
            ckpt.done[idx] = sols
            if path:
                path.write_text(ckpt.to_json())

    masks = list(ckpt.pre_frontier_solutions)
    for i in range(len(ckpt.frontier)):
        masks.extend(ckpt.done.get(i, []))
    return masks


def brute_force_selections(matrix: QuotientMatrix, h1: int, h2: int,
                           max_popcount: int) -> list[int]:
    """Independent exhaustive oracle over all selections containing orbit 0
    with popcount <= max_popcount; returns solution masks."""
    out = np.zeros(1 << 20, dtype=np.int64)
    n = _kernels.brute_force_small(
        np.ascontiguousarray(matrix.entries.astype(np.int32)), h1, h2,
        max_popcount, out)
    return sorted(int(v) for v in out[:n])
