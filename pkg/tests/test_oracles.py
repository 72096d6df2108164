"""Exact-solver tests: brute-force cross-checks on small graphs, pinned
instances where the search must actually branch, and the ordering search."""

from itertools import permutations, product

import numpy as np
import pytest

from nodelabel.errors import BudgetExceededError, ParameterError, UsageError
from nodelabel.graphs import Graph
from nodelabel.heuristics import dsatur
from nodelabel.oracles import (
    EXHAUSTIVE_LIMIT,
    best_ordering_cost,
    exact_chromatic,
    exact_mvc,
)
from nodelabel.problems import GC, MIS, MVC, rollout_with_ordering, verify_and_cost

from conftest import (
    complete_graph,
    cycle_graph,
    petersen_graph,
    random_graph,
    star_graph,
)


def brute_chromatic(g: Graph) -> int:
    edges = list(g.edges())
    for k in range(1, g.n + 1):
        for assign in product(range(k), repeat=g.n):
            if all(assign[u] != assign[v] for u, v in edges):
                return k
    return g.n


def brute_mvc(g: Graph) -> int:
    edges = list(g.edges())
    best = g.n
    for mask in range(1 << g.n):
        if all(mask >> u & 1 or mask >> v & 1 for u, v in edges):
            best = min(best, bin(mask).count("1"))
    return best


class TestExactChromatic:
    def test_brute_force_cross_check(self):
        for s in range(12):
            g = random_graph(6, 0.45, s)
            assert exact_chromatic(g).optimum == brute_chromatic(g), f"seed {s}"

    def test_known_values(self):
        assert exact_chromatic(petersen_graph()).optimum == 3
        assert exact_chromatic(complete_graph(5)).optimum == 5
        assert exact_chromatic(cycle_graph(6)).optimum == 2
        assert exact_chromatic(cycle_graph(7)).optimum == 3
        assert exact_chromatic(star_graph(6)).optimum == 2

    def test_witness_is_optimal_coloring(self):
        for s in range(8):
            g = random_graph(9, 0.5, s)
            r = exact_chromatic(g)
            ok, cost = verify_and_cost(GC, g, r.labels)
            assert ok and cost == r.optimum

    def test_beats_heuristic_when_it_is_suboptimal(self):
        g = random_graph(10, 0.45, 10476)
        assert dsatur(g).cost == 4
        r = exact_chromatic(g)
        assert r.optimum == 3
        assert r.explored > 0

    def test_clique_match_skips_search(self):
        # clique lower bound equals the heuristic cost: no nodes explored
        assert exact_chromatic(complete_graph(5)).explored == 0
        assert exact_chromatic(star_graph(5)).explored == 0

    def test_size_limit(self):
        with pytest.raises(ParameterError):
            exact_chromatic(complete_graph(8), limit=7)


class TestExactMvc:
    def test_brute_force_cross_check(self):
        for s in range(15):
            g = random_graph(12, 0.4, s)
            assert exact_mvc(g).optimum == brute_mvc(g), f"seed {s}"

    def test_known_values(self):
        assert exact_mvc(star_graph(8)).optimum == 1
        assert exact_mvc(cycle_graph(6)).optimum == 3
        assert exact_mvc(cycle_graph(7)).optimum == 4
        assert exact_mvc(complete_graph(5)).optimum == 4

    def test_witness_is_optimal_cover(self):
        for s in range(8):
            g = random_graph(11, 0.35, s)
            r = exact_mvc(g)
            ok, cost = verify_and_cost(MVC, g, r.labels)
            assert ok and cost == r.optimum

    def test_size_limit(self):
        with pytest.raises(ParameterError):
            exact_mvc(random_graph(10, 0.3, 0), limit=9)


class TestNodeBudget:
    def test_chromatic_budget_carries_bounds(self):
        # C5: heuristic gives 3, clique bound 2, so the search must run
        g = cycle_graph(5)
        with pytest.raises(BudgetExceededError) as exc:
            exact_chromatic(g, node_budget=1)
        e = exc.value
        assert e.lower == 2 and e.upper == 3
        assert e.explored > 1
        ok, cost = verify_and_cost(GC, g, e.witness)
        assert ok and cost == e.upper

    def test_mvc_budget_keeps_valid_incumbent(self):
        g = random_graph(12, 0.4, 5)  # explores 13 nodes unrestricted
        with pytest.raises(BudgetExceededError) as exc:
            exact_mvc(g, node_budget=2)
        e = exc.value
        ok, cost = verify_and_cost(MVC, g, e.witness)
        assert ok and cost == e.upper
        assert e.upper >= exact_mvc(g).optimum

    def test_budget_not_hit_returns_normally(self):
        g = cycle_graph(5)
        r = exact_chromatic(g, node_budget=10**6)
        assert r.optimum == 3


class TestBestOrdering:
    def test_exhaustive_matches_permutation_scan(self):
        # independent route: walk every permutation through the generic MDP
        for s in range(4):
            g = random_graph(6, 0.4, s)
            for problem in (GC, MVC, MIS):
                ref = min(
                    rollout_with_ordering(problem, g, list(p)).terminal_cost
                    for p in permutations(range(g.n))
                )
                assert best_ordering_cost(problem, g) == ref, (problem.name, s)

    def test_reaches_exact_optima(self):
        # some ordering always attains the exact optimum for all three rules
        for s in range(6):
            g = random_graph(7, 0.4, 100 + s)
            assert best_ordering_cost(GC, g) == exact_chromatic(g).optimum
            mvc_opt = exact_mvc(g).optimum
            assert best_ordering_cost(MVC, g) == mvc_opt
            assert best_ordering_cost(MIS, g) == -(g.n - mvc_opt)

    def test_sampled_upper_bounds_exhaustive(self):
        g = random_graph(8, 0.35, 7)
        exact = best_ordering_cost(GC, g)
        for samples in (1, 16, 256):
            got = best_ordering_cost(GC, g, mode="sampled", samples=samples, seed=3)
            assert got >= exact

    def test_sampled_deterministic(self):
        g = random_graph(12, 0.3, 9)
        a = best_ordering_cost(MVC, g, mode="sampled", samples=50, seed=11)
        b = best_ordering_cost(MVC, g, mode="sampled", samples=50, seed=11)
        assert a == b

    def test_exhaustive_size_limit(self):
        g = random_graph(EXHAUSTIVE_LIMIT + 1, 0.3, 0)
        with pytest.raises(ParameterError):
            best_ordering_cost(GC, g)

    def test_sampled_needs_samples(self):
        g = cycle_graph(5)
        with pytest.raises(UsageError):
            best_ordering_cost(GC, g, mode="sampled")
        with pytest.raises(UsageError):
            best_ordering_cost(GC, g, mode="annealed")
