import numpy as np
import pytest

from nodelabel.errors import ParseError
from nodelabel.graph_io import (
    load_graph,
    parse_dimacs,
    parse_edge_list,
    parse_graph,
    save_graph,
    write_dimacs,
    write_edge_list,
)
from nodelabel.graphs import Graph
from nodelabel.oracles import exact_chromatic

from conftest import cycle_graph, petersen_graph


class TestDimacs:
    def test_parse_basic(self):
        text = "c a comment\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n"
        g = parse_dimacs(text)
        assert g.n == 4 and g.m == 3
        assert g.has_edge(0, 1) and g.has_edge(2, 3)

    def test_edges_keyword_variant(self):
        g = parse_dimacs("p edges 3 2\ne 1 2\ne 2 3\n")
        assert g.n == 3 and g.m == 2

    def test_duplicate_edges_collapse(self):
        g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n")
        assert g.m == 1

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_dimacs("e 1 2\n")

    def test_vertex_out_of_range(self):
        with pytest.raises(ParseError) as ei:
            parse_dimacs("p edge 3 1\ne 1 4\n")
        assert "line 2" in str(ei.value)

    def test_self_loop_rejected(self):
        with pytest.raises(ParseError):
            parse_dimacs("p edge 3 1\ne 2 2\n")

    def test_malformed_edge_line(self):
        with pytest.raises(ParseError):
            parse_dimacs("p edge 3 1\ne 1\n")

    def test_round_trip(self, petersen):
        g = parse_dimacs(write_dimacs(petersen))
        assert g == petersen

    def test_write_is_one_based(self):
        text = write_dimacs(Graph.from_edges(2, [(0, 1)]))
        assert "e 1 2" in text
        assert text.startswith("p edge 2 1")


class TestEdgeList:
    def test_parse_contiguous_ids_kept(self):
        g = parse_edge_list("0 2\n1 2\n")
        assert g.n == 3
        assert g.has_edge(0, 2) and g.has_edge(1, 2) and not g.has_edge(0, 1)

    def test_parse_gap_ids_remapped_by_first_appearance(self):
        g = parse_edge_list("10 20\n20 30\n")
        assert g.n == 3
        assert g.has_edge(0, 1) and g.has_edge(1, 2)

    def test_comments_and_blanks(self):
        g = parse_edge_list("# header\n\n0 1\n")
        assert g.n == 2 and g.m == 1

    def test_round_trip(self, petersen):
        g = parse_edge_list(write_edge_list(petersen))
        assert g == petersen

    def test_malformed_line(self):
        with pytest.raises(ParseError):
            parse_edge_list("0 1 2\n")


class TestFileDispatch:
    def test_suffix_dispatch(self, tmp_path, petersen):
        col = tmp_path / "g.col"
        save_graph(petersen, col)
        assert load_graph(col) == petersen
        el = tmp_path / "g.edges"
        save_graph(petersen, el)
        assert load_graph(el) == petersen

    def test_parse_graph_fmt(self, petersen):
        assert parse_graph(write_dimacs(petersen), "dimacs") == petersen
        assert parse_graph(write_edge_list(petersen), "edgelist") == petersen


def mycielski(g: Graph) -> Graph:
    """Triangle-free chromatic-number booster: from (n, m) to (2n+1, 3m+n)."""
    n = g.n
    edges = list(g.edges())
    out = list(edges)
    for u, v in edges:
        out.append((u, n + v))
        out.append((v, n + u))
    out.extend((n + i, 2 * n) for i in range(n))
    return Graph.from_edges(2 * n + 1, out)


class TestMycielskiChain:
    """Cross-checks the parser, the construction arithmetic, and the exact
    coloring oracle against each other."""

    def test_sizes_and_chromatic_numbers(self):
        g = cycle_graph(5)
        expected = [(11, 20, 4), (23, 71, 5)]
        for n, m, chi in expected:
            g = mycielski(g)
            assert (g.n, g.m) == (n, m)
            # round-trip through the dimacs writer before solving
            g2 = parse_dimacs(write_dimacs(g))
            assert g2 == g
            assert exact_chromatic(g2).optimum == chi
