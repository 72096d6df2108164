"""Classic greedy baselines: three coloring orderings and the matching-based
2-approximation for vertex cover. All tie-breaks are by ascending node id so
runs are reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ParameterError
from .graphs import Graph


@dataclass
class HeuristicResult:
    labels: np.ndarray
    cost: int
    order: list


def color_in_order(g: Graph, order) -> HeuristicResult:
    """Greedy coloring: each node in turn gets the smallest feasible color."""
    order = np.asarray(order, dtype=np.int32)
    labels, k = _kernels.color_rollout(g.indptr, g.indices, order)
    return HeuristicResult(labels, k, [int(v) for v in order])


def largest_first(g: Graph) -> HeuristicResult:
    """Color by descending degree (ties: lower id first)."""
    order = np.lexsort((np.arange(g.n), -g.degrees))
    return color_in_order(g, order)


def smallest_last(g: Graph) -> HeuristicResult:
    """Degeneracy ordering: repeatedly delete a node of minimum remaining
    degree (ties: lowest id), then color in reverse deletion order. Colors
    used never exceed degeneracy + 1."""
    n = g.n
    deg = g.degrees.copy()
    removed = np.zeros(n, dtype=bool)
    # bucket queue over degrees; lowest id wins inside a bucket
    buckets = [set() for _ in range(int(deg.max()) + 1 if n else 1)]
    for v in range(n):
        buckets[deg[v]].add(v)
    deletion = []
    cursor = 0
    for _ in range(n):
        while cursor < len(buckets) and not buckets[cursor]:
            cursor += 1
        v = min(buckets[cursor])
        buckets[cursor].remove(v)
        removed[v] = True
        deletion.append(v)
        for u in g.neighbors(v):
            u = int(u)
            if not removed[u]:
                buckets[deg[u]].remove(u)
                deg[u] -= 1
                buckets[deg[u]].add(u)
                if deg[u] < cursor:
                    cursor = deg[u]
    deletion.reverse()
    return color_in_order(g, deletion)


def dsatur(g: Graph) -> HeuristicResult:
    """Saturation-driven coloring: always color the uncolored node seeing the
    most distinct neighbor colors (ties: higher degree, then lower id)."""
    n = g.n
    colors = np.zeros(n, dtype=np.int32)
    sat_sets = [set() for _ in range(n)]
    sat = np.zeros(n, dtype=np.int64)
    deg = g.degrees
    ids = np.arange(n)
    uncolored = np.ones(n, dtype=bool)
    order = []
    for _ in range(n):
        cand = np.flatnonzero(uncolored)
        best = cand[np.lexsort((ids[cand], -deg[cand], -sat[cand]))[0]]
        v = int(best)
        used = {int(colors[u]) for u in g.neighbors(v) if colors[u] != 0}
        c = 1
        while c in used:
            c += 1
        colors[v] = c
        uncolored[v] = False
        order.append(v)
        for u in g.neighbors(v):
            u = int(u)
            if uncolored[u] and c not in sat_sets[u]:
                sat_sets[u].add(c)
                sat[u] += 1
    return HeuristicResult(colors, int(len(np.unique(colors))), order)


def mvc_approx(g: Graph, greedy: bool = False) -> HeuristicResult:
    """Matching-based 2-approximation for minimum vertex cover.

    Picks an uncovered edge, labels both endpoints 1, repeats. Edge choice:
    lexicographically smallest uncovered edge, or with greedy=True the edge
    maximizing degree(u)+degree(v) under the original degrees (ties
    lexicographic). The picked edges form a matching, so the cover is at
    most twice optimal.
    """
    labels = np.zeros(g.n, dtype=np.int32)
    edges = list(g.edges())
    if greedy:
        deg = g.degrees
        edges.sort(key=lambda e: (-(int(deg[e[0]]) + int(deg[e[1]])), e[0], e[1]))
    order = []
    for u, v in edges:
        if labels[u] != 1 and labels[v] != 1:
            labels[u] = 1
            labels[v] = 1
            order.extend((u, v))
    cost = int(np.count_nonzero(labels == 1))
    return HeuristicResult(labels, cost, order)


def _mvc_approx_greedy(g: Graph) -> HeuristicResult:
    return mvc_approx(g, greedy=True)


HEURISTICS = {
    "largest-first": largest_first,
    "smallest-last": smallest_last,
    "dsatur": dsatur,
    "mvc-approx": mvc_approx,
    "mvc-approx-greedy": _mvc_approx_greedy,
}


def run_heuristic(name: str, g: Graph) -> HeuristicResult:
    try:
        fn = HEURISTICS[name]
    except KeyError:
        raise ParameterError(f"unknown heuristic {name!r}") from None
    return fn(g)
