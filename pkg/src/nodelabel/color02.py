"""Public graph-coloring benchmark set (DIMACS .col files).

Twenty classic instances are referenced by name. The files are not bundled
with the package: put them in ./data/color02 or point NODELABEL_COLOR02_DIR
at a directory containing them (scripts/fetch_color02.py tries to download
the set). Loading validates the node count of every instance, and the edge
count where the manifest pins one.

Edge counts are pinned only where they follow from the instance family's
construction: queen graphs (two squares adjacent iff they share a row,
column or diagonal) and the iterated triangle-free construction that grows
(n, m) to (2n + 1, 3m + n) starting from the 5-cycle.
"""

from __future__ import annotations

import os

from .errors import ParameterError
from .graph_io import parse_dimacs
from .graphs import Graph

ENV_VAR = "NODELABEL_COLOR02_DIR"
DEFAULT_DIR = os.path.join("data", "color02")

# (name, nodes, edges or None when not derived independently)
INSTANCES = (
    ("queen5_5", 25, 160),
    ("queen6_6", 36, 290),
    ("myciel5", 47, 236),
    ("queen7_7", 49, 476),
    ("queen8_8", 64, 728),
    ("1-Insertions_4", 67, None),
    ("huck", 74, None),
    ("jean", 80, None),
    ("queen9_9", 81, 1056),
    ("david", 87, None),
    ("mug88_1", 88, None),
    ("myciel6", 95, 755),
    ("queen8_12", 96, 1368),
    ("games120", 120, None),
    ("queen11_11", 121, 1980),
    ("anna", 138, None),
    ("2-Insertions_4", 149, None),
    ("queen13_13", 169, 3328),
    ("myciel7", 191, 2360),
    ("homer", 561, None),
)

_BY_NAME = {name: (n, m) for name, n, m in INSTANCES}


def instance_dir() -> str:
    return os.environ.get(ENV_VAR) or DEFAULT_DIR


def instance_path(name: str) -> str:
    if name not in _BY_NAME:
        raise ParameterError(f"unknown benchmark instance {name!r}")
    return os.path.join(instance_dir(), name + ".col")


def missing() -> list:
    """Names whose .col file is not present."""
    return [name for name, _, _ in INSTANCES if not os.path.exists(instance_path(name))]


def available() -> bool:
    return not missing()


def load(name: str) -> Graph:
    path = instance_path(name)
    if not os.path.exists(path):
        raise ParameterError(
            f"benchmark file {path} not found; set {ENV_VAR} or run "
            "scripts/fetch_color02.py"
        )
    with open(path) as fh:
        g = parse_dimacs(fh.read())
    n, m = _BY_NAME[name]
    if g.n != n:
        raise ParameterError(f"{name}: expected {n} nodes, file has {g.n}")
    if m is not None and g.m != m:
        raise ParameterError(f"{name}: expected {m} edges, file has {g.m}")
    return g


def load_all() -> list:
    return [(name, load(name)) for name, _, _ in INSTANCES]
