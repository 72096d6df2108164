"""Undirected simple graphs in CSR form plus the four random-graph families.

Node ids are always 0..n-1. Adjacency rows are sorted, self-loop free and
symmetric; every public constructor enforces that. Random generation is seeded
through numpy's PCG64 so a (family, parameters, seed) triple always yields the
same graph on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

INDEX_DTYPE = np.int32

FAMILIES = ("ER", "BA", "WS", "SER")


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class Graph:
    """Immutable undirected simple graph stored as CSR adjacency.

    Parameters
    ----------
    indptr : (n+1,) int32 row pointers.
    indices : (2m,) int32 concatenated neighbor lists, sorted within each row.

    Use :meth:`from_edges` unless the arrays are already in canonical form.
    """

    __slots__ = ("indptr", "indices", "_degrees", "_cache")

    def __init__(self, indptr, indices):
        self.indptr = np.asarray(indptr, dtype=INDEX_DTYPE)
        self.indices = np.asarray(indices, dtype=INDEX_DTYPE)
        self._degrees = None
        self._cache = {}

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph on nodes 0..n-1 from an iterable of (u, v) pairs.

        Duplicate edges (either orientation) collapse to one; self-loops and
        out-of-range endpoints are rejected.
        """
        if n < 1:
            raise ParameterError(f"graph needs at least one node, got n={n}")
        seen = set()
        for u, v in edges:
            u = int(u)
            v = int(v)
            if u == v:
                raise ParameterError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) outside 0..{n - 1}")
            seen.add((u, v) if u < v else (v, u))
        return cls._from_edge_set(n, seen)

    @classmethod
    def _from_edge_set(cls, n: int, edge_set) -> "Graph":
        m = len(edge_set)
        if m == 0:
            return cls(np.zeros(n + 1, dtype=INDEX_DTYPE), np.zeros(0, dtype=INDEX_DTYPE))
        arr = np.fromiter(
            (x for uv in edge_set for x in uv), dtype=INDEX_DTYPE, count=2 * m
        ).reshape(m, 2)
        both = np.concatenate([arr, arr[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        counts = np.bincount(both[:, 0], minlength=n)
        indptr = np.zeros(n + 1, dtype=INDEX_DTYPE)
        np.cumsum(counts, out=indptr[1:])
        return cls(indptr, np.ascontiguousarray(both[:, 1]))

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = np.diff(self.indptr).astype(np.int64)
        return self._degrees

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of v (a view, do not mutate)."""
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def edges(self):
        """Yield each edge once as (u, v) with u < v, ascending."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def check_graph(g: Graph) -> None:
    """Validate the CSR invariants; raises ParameterError on violation."""
    n = g.n
    if n < 1:
        raise ParameterError("empty graph")
    if g.indptr[0] != 0 or g.indptr[-1] != len(g.indices):
        raise ParameterError("indptr does not span indices")
    if np.any(np.diff(g.indptr) < 0):
        raise ParameterError("indptr not monotone")
    if len(g.indices) and (g.indices.min() < 0 or g.indices.max() >= n):
        raise ParameterError("neighbor id out of range")
    for v in range(n):
        row = g.neighbors(v)
        if np.any(np.diff(row) <= 0):
            raise ParameterError(f"row {v} not strictly sorted (dup or disorder)")
        if np.any(row == v):
            raise ParameterError(f"self-loop at {v}")
        for u in row:
            if not g.has_edge(int(u), v):
                raise ParameterError(f"edge ({v}, {u}) not symmetric")


def connected_components(g: Graph) -> np.ndarray:
    """Component id per node (ids assigned in order of lowest member)."""
    n = g.n
    comp = np.full(n, -1, dtype=np.int64)
    cid = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = cid
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if comp[u] < 0:
                    comp[u] = cid
                    stack.append(int(u))
        cid += 1
    return comp


def largest_component(g: Graph) -> Graph:
    """Restrict to the largest connected component, relabeling ids
    contiguously in increasing original order. Ties pick the component with
    the smallest member id."""
    comp = connected_components(g)
    sizes = np.bincount(comp)
    keep = int(np.argmax(sizes))  # argmax takes first max: lowest member id wins
    nodes = np.flatnonzero(comp == keep)
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[nodes] = np.arange(len(nodes))
    edges = set()
    for new_u, old_u in enumerate(nodes):
        for old_v in g.neighbors(int(old_u)):
            nv = remap[old_v]
            if nv > new_u:
                edges.add((new_u, int(nv)))
    return Graph._from_edge_set(len(nodes), edges)


def is_connected(g: Graph) -> bool:
    return bool(connected_components(g).max() == 0)


def disjoint_union(graphs) -> Graph:
    """Stack graphs side by side; block i occupies a contiguous id range."""
    graphs = list(graphs)
    if not graphs:
        raise ParameterError("union of zero graphs")
    indptrs = [graphs[0].indptr]
    chunks = [graphs[0].indices]
    off = graphs[0].n
    for g in graphs[1:]:
        indptrs.append(g.indptr[1:] + indptrs[-1][-1])
        chunks.append(g.indices + off)
        off += g.n
    return Graph(np.concatenate(indptrs), np.concatenate(chunks))


# ---------------------------------------------------------------------------
# Random families
# ---------------------------------------------------------------------------


def sparse_er_probability(n: int, avg_degree: float = 7.5, eps: float = 0.2) -> float:
    """Edge probability keeping expected degree near avg_degree while staying
    above the connectivity threshold: min(1, max(avg_degree/n, (1+eps)·ln n/n))."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    return min(1.0, max(avg_degree / n, (1.0 + eps) * math.log(n) / n))


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one random graph. Fields beyond (family, n, seed) are used
    only by the family that reads them; unset fields keep the defaults below.
    """

    family: str
    n: int
    seed: int = 0
    delta: int = 4  # BA: edges added per node
    p: float = 0.15  # ER: edge probability
    k: int = 5  # WS: ring degree budget, floor(k/2) neighbors per side
    q: float = 0.1  # WS: rewiring probability
    avg_degree: float = 7.5  # SER
    eps: float = 0.2  # SER

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}, want one of {FAMILIES}")
        if self.n < 1:
            raise ParameterError(f"n must be positive, got {self.n}")
        if self.family == "ER" and not (0.0 <= self.p <= 1.0):
            raise ParameterError(f"ER probability {self.p} outside [0, 1]")
        if self.family == "BA":
            if self.delta < 1:
                raise ParameterError(f"BA delta must be >= 1, got {self.delta}")
            if self.n <= self.delta:
                raise ParameterError(f"BA needs n > delta, got n={self.n} delta={self.delta}")
        if self.family == "WS":
            if self.k < 2:
                raise ParameterError(f"WS needs k >= 2, got {self.k}")
            if self.n <= self.k:
                raise ParameterError(f"WS needs n > k, got n={self.n} k={self.k}")
            if not (0.0 <= self.q <= 1.0):
                raise ParameterError(f"WS rewiring probability {self.q} outside [0, 1]")
        if self.family == "SER":
            if self.n < 2:
                raise ParameterError("SER needs n >= 2")
            if self.avg_degree <= 0:
                raise ParameterError(f"SER avg_degree must be positive, got {self.avg_degree}")

    def to_dict(self) -> dict:
        d = {"family": self.family, "n": self.n, "seed": self.seed}
        used = {
            "ER": ("p",),
            "BA": ("delta",),
            "WS": ("k", "q"),
            "SER": ("avg_degree", "eps"),
        }.get(self.family, ())
        for name in used:
            d[name] = getattr(self, name)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        allowed = {
            "family", "n", "seed", "delta", "p", "k", "q", "avg_degree", "eps",
        }
        bad = set(d) - allowed
        if bad:
            raise ParameterError(f"unknown generator fields {sorted(bad)}")
        if "family" not in d or "n" not in d:
            raise ParameterError("generator spec needs at least family and n")
        return cls(**d)


def _er_edge_set(n: int, p: float, rng) -> set:
    """All-pairs Bernoulli(p) edges via geometric gap skipping, O(m) draws."""
    if p <= 0.0 or n < 2:
        return set()
    total = n * (n - 1) // 2
    if p >= 1.0:
        return {(u, v) for u in range(n) for v in range(u + 1, n)}
    hits = []
    idx = -1
    log1mp = math.log1p(-p)
    while True:
        gap = 1 + int(math.log1p(-rng.random()) / log1mp)
        idx += gap
        if idx >= total:
            break
        hits.append(idx)
    if not hits:
        return set()
    hits = np.asarray(hits, dtype=np.int64)
    # row starts of the flattened upper triangle: row u covers n-1-u slots
    row_lengths = np.arange(n - 1, 0, -1, dtype=np.int64)
    starts = np.concatenate([[0], np.cumsum(row_lengths)])
    us = np.searchsorted(starts, hits, side="right") - 1
    vs = hits - starts[us] + us + 1
    return {(int(u), int(v)) for u, v in zip(us, vs)}


def _ba_edge_set(n: int, delta: int, rng) -> set:
    edges = set()
    repeated = []
    targets = list(range(delta))
    for v in range(delta, n):
        for t in targets:
            edges.add((t, v) if t < v else (v, t))
        repeated.extend(targets)
        repeated.extend([v] * delta)
        picked = set()
        while len(picked) < delta:
            picked.add(repeated[int(rng.integers(0, len(repeated)))])
        targets = sorted(picked)
    return edges


def _ws_edge_set(n: int, k: int, q: float, rng) -> set:
    half = k // 2
    edges = set()
    deg = np.zeros(n, dtype=np.int64)

    def key(a, b):
        return (a, b) if a < b else (b, a)

    for j in range(1, half + 1):
        for u in range(n):
            v = (u + j) % n
            if key(u, v) not in edges:
                edges.add(key(u, v))
                deg[u] += 1
                deg[v] += 1
    for j in range(1, half + 1):
        for u in range(n):
            if rng.random() >= q:
                continue
            v = (u + j) % n
            w = int(rng.integers(0, n))
            while w == u or key(u, w) in edges:
                w = int(rng.integers(0, n))
                if deg[u] >= n - 1:
                    break
            else:
                if key(u, v) in edges:
                    edges.remove(key(u, v))
                    deg[u] -= 1
                    deg[v] -= 1
                    edges.add(key(u, w))
                    deg[u] += 1
                    deg[w] += 1
    return edges


def generate_graph(spec: GeneratorSpec) -> Graph:
    """Draw one graph from the family, restricted to its largest connected
    component (ids relabeled contiguously). Deterministic in spec."""
    spec.validate()
    rng = _rng(spec.seed)
    n = spec.n
    if spec.family == "ER":
        edge_set = _er_edge_set(n, spec.p, rng)
    elif spec.family == "SER":
        edge_set = _er_edge_set(n, sparse_er_probability(n, spec.avg_degree, spec.eps), rng)
    elif spec.family == "BA":
        edge_set = _ba_edge_set(n, spec.delta, rng)
    elif spec.family == "WS":
        edge_set = _ws_edge_set(n, spec.k, spec.q, rng)
    else:  # pragma: no cover - validate() already rejected
        raise ParameterError(spec.family)
    g = Graph._from_edge_set(n, edge_set)
    if not is_connected(g):
        g = largest_component(g)
    return g
