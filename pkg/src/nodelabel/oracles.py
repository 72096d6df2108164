"""Exact solvers for small instances, used as ground truth everywhere else.

Both are branch-and-bound searches with heuristic warm starts and cheap
bounds; they refuse graphs above a node limit and abort with their best
bounds when an explored-node budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, ParameterError, UsageError
from .graphs import Graph, _rng
from .heuristics import dsatur, mvc_approx
from .problems import ProblemDefinition, rollout_with_ordering

DEFAULT_NODE_LIMIT = 64
EXHAUSTIVE_LIMIT = 9


@dataclass
class OracleResult:
    optimum: int
    labels: np.ndarray
    explored: int


def _check_size(g: Graph, limit: int) -> None:
    if g.n > limit:
        raise ParameterError(f"oracle limited to n <= {limit}, got n={g.n}")


def _greedy_clique_size(g: Graph) -> int:
    """Greedy clique by descending degree; a lower bound on the chromatic
    number."""
    order = np.lexsort((np.arange(g.n), -g.degrees))
    clique = []
    for v in order:
        v = int(v)
        if all(g.has_edge(v, u) for u in clique):
            clique.append(v)
    return max(1, len(clique))


def exact_chromatic(g: Graph, node_budget: int | None = None, limit: int = DEFAULT_NODE_LIMIT) -> OracleResult:
    """Minimum number of colors, with a witness coloring.

    Branch and bound over a saturation-heuristic node order; prunes branches
    whose used-color count reaches the incumbent, seeds the incumbent with
    the saturation heuristic and stops early when a greedy clique matches it.
    """
    _check_size(g, limit)
    seed = dsatur(g)
    best_k = seed.cost
    best = seed.labels.copy()
    lower = _greedy_clique_size(g)
    if lower == best_k:
        return OracleResult(best_k, best, 0)

    order = np.asarray(seed.order, dtype=np.int64)
    n = g.n
    # neighbors of order[i] that appear earlier in the order
    earlier = []
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    for i in range(n):
        v = int(order[i])
        earlier.append(np.asarray([u for u in g.neighbors(v) if pos[u] < i], dtype=np.int64))

    colors = np.zeros(n, dtype=np.int32)
    explored = 0

    def recurse(i: int, used: int):
        nonlocal best_k, best, explored
        if used >= best_k:
            return
        if i == n:
            best_k = used
            best = colors.copy()
            return
        explored += 1
        if node_budget is not None and explored > node_budget:
            raise BudgetExceededError(
                f"chromatic search exceeded {node_budget} nodes",
                lower=lower, upper=best_k, witness=best, explored=explored,
            )
        v = int(order[i])
        forbidden = set(int(colors[u]) for u in earlier[i])
        top = min(used + 1, best_k - 1)
        for c in range(1, top + 1):
            if c in forbidden:
                continue
            colors[v] = c
            recurse(i + 1, max(used, c))
            colors[v] = 0

    recurse(0, 0)
    return OracleResult(best_k, best, explored)


def exact_mvc(g: Graph, node_budget: int | None = None, limit: int = DEFAULT_NODE_LIMIT) -> OracleResult:
    """Minimum vertex cover size, with a witness labeling.

    Branches on the highest-degree undecided node (take it, or take all its
    neighbors), applies the degree-0/degree-1 reductions, seeds the incumbent
    with the matching 2-approximation and lower-bounds with a greedy maximal
    matching.
    """
    _check_size(g, limit)
    n = g.n
    seed = mvc_approx(g, greedy=True)
    best_size = seed.cost
    best = seed.labels.copy()

    adj = [set(int(u) for u in g.neighbors(v)) for v in range(n)]
    status = np.full(n, -1, dtype=np.int8)  # -1 free, 1 cover, 0 excluded
    explored = 0

    def matching_bound() -> int:
        seen = set()
        size = 0
        for v in range(n):
            if status[v] != -1 or v in seen:
                continue
            for u in adj[v]:
                if status[u] == -1 and u not in seen and u != v:
                    seen.add(v)
                    seen.add(u)
                    size += 1
                    break
        return size

    def free_degree(v: int) -> int:
        return sum(1 for u in adj[v] if status[u] == -1)

    def recurse(in_cover: int):
        nonlocal best_size, best, explored
        explored += 1
        if node_budget is not None and explored > node_budget:
            raise BudgetExceededError(
                f"cover search exceeded {node_budget} nodes",
                lower=None, upper=best_size, witness=best, explored=explored,
            )
        # reductions: isolated free nodes leave the cover; leaves pull their
        # neighbor in
        forced = []
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if status[v] != -1:
                    continue
                fd = [u for u in adj[v] if status[u] == -1]
                # edges to excluded nodes must already be covered: an
                # excluded neighbor forces v into the cover
                if any(status[u] == 0 for u in adj[v]):
                    status[v] = 1
                    forced.append(v)
                    in_cover += 1
                    changed = True
                elif not fd:
                    status[v] = 0
                    forced.append(v)
                    changed = True
                elif len(fd) == 1:
                    status[v] = 0
                    forced.append(v)
                    changed = True
        undecided = [v for v in range(n) if status[v] == -1]
        if not undecided:
            if in_cover < best_size:
                best_size = in_cover
                best = np.where(status == 1, 1, 0).astype(np.int32)
        elif in_cover + matching_bound() < best_size:
            v = max(undecided, key=lambda u: (free_degree(u), -u))
            status[v] = 1
            recurse(in_cover + 1)
            status[v] = 0
            recurse(in_cover)
            status[v] = -1
        for v in forced:
            status[v] = -1

    recurse(0)
    return OracleResult(best_size, best, explored)


def best_ordering_cost(
    problem: ProblemDefinition,
    g: Graph,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int = 0,
) -> int:
    """Best rule-rollout cost over node orderings.

    mode="exhaustive" tries all n! orderings (n <= 9); mode="sampled" tries
    `samples` seeded random permutations.
    """
    if mode == "exhaustive":
        if g.n > EXHAUSTIVE_LIMIT:
            raise ParameterError(
                f"exhaustive ordering search limited to n <= {EXHAUSTIVE_LIMIT}, got {g.n}"
            )
        if problem.name == "gc":
            return int(_kernels.best_ordering_gc(g.indptr, g.indices))
        if problem.name == "mvc":
            return int(_kernels.best_ordering_mvc(g.indptr, g.indices))
        if problem.name == "mis":
            return int(_kernels.best_ordering_mis(g.indptr, g.indices))
        from itertools import permutations

        return min(
            rollout_with_ordering(problem, g, list(p)).terminal_cost
            for p in permutations(range(g.n))
        )
    if mode == "sampled":
        if samples is None or samples < 1:
            raise UsageError("sampled mode needs samples >= 1")
        rng = _rng(seed)
        best = None
        for _ in range(samples):
            order = rng.permutation(g.n).astype(np.int32)
            cost = rollout_with_ordering(problem, g, order).terminal_cost
            if best is None or cost < best:
                best = cost
        return int(best)
    raise UsageError(f"unknown mode {mode!r}, want 'exhaustive' or 'sampled'")
