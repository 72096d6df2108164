"""Reading and writing graphs: DIMACS .col and plain edge lists.

DIMACS .col files are 1-based with a ``p edge N M`` header, ``e U V`` edge
lines and ``c`` comments. Edge lists are one 0-based ``U V`` pair per line.
Duplicate edges collapse silently; self-loops are parse errors. Node ids are
remapped to 0..n-1 preserving order of first appearance (DIMACS keeps the
header's 1..N numbering shifted down by one).
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ParseError
from .graphs import Graph

FORMATS = ("dimacs", "edgelist")


def parse_dimacs(text: str) -> Graph:
    n = None
    declared_m = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("second problem line", line=lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "edges", "col"):
                raise ParseError(f"malformed problem line {line!r}", line=lineno)
            try:
                n = int(parts[2])
                declared_m = int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer sizes in {line!r}", line=lineno) from None
            if n < 1:
                raise ParseError(f"vertex count {n} must be positive", line=lineno)
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before problem line", line=lineno)
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {line!r}", line=lineno)
            try:
                u = int(parts[1]) - 1
                v = int(parts[2]) - 1
            except ValueError:
                raise ParseError(f"non-integer endpoint in {line!r}", line=lineno) from None
            if u == v:
                raise ParseError(f"self-loop at vertex {u + 1}", line=lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"endpoint outside 1..{n}", line=lineno)
            edges.add((u, v) if u < v else (v, u))
        else:
            raise ParseError(f"unknown line type {parts[0]!r}", line=lineno)
    if n is None:
        raise ParseError("missing problem line")
    del declared_m  # informative only; duplicates make it unreliable in the wild
    return Graph._from_edge_set(n, edges)


def write_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    edges = []
    order = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two endpoints, got {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", line=lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative vertex id", line=lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        for x in (u, v):
            if x not in order:
                order[x] = len(order)
        edges.append((u, v))
    if not order:
        raise ParseError("no edges found")
    if set(order) == set(range(len(order))):
        # ids already contiguous: keep them, so write -> parse is the identity
        return Graph.from_edges(len(order), edges)
    return Graph.from_edges(len(order), [(order[u], order[v]) for u, v in edges])


def write_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def parse_graph(text: str, fmt: str) -> Graph:
    if fmt == "dimacs":
        return parse_dimacs(text)
    if fmt == "edgelist":
        return parse_edge_list(text)
    raise ParameterError(f"unknown format {fmt!r}, want one of {FORMATS}")


def load_graph(path, fmt: str | None = None) -> Graph:
    """Read a graph file; format inferred from the suffix unless given."""
    path = str(path)
    if fmt is None:
        fmt = "dimacs" if path.endswith(".col") else "edgelist"
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read(), fmt)


def save_graph(g: Graph, path, fmt: str | None = None) -> None:
    path = str(path)
    if fmt is None:
        fmt = "dimacs" if path.endswith(".col") else "edgelist"
    if fmt == "dimacs":
        text = write_dimacs(g)
    elif fmt == "edgelist":
        text = write_edge_list(g)
    else:
        raise ParameterError(f"unknown format {fmt!r}, want one of {FORMATS}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
