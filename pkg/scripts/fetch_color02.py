#!/usr/bin/env python3
"""Download the public graph-coloring benchmark files named in
nodelabel.color02 into data/color02 (or NODELABEL_COLOR02_DIR).

Each file is fetched from the first mirror that serves it, parsed, and
checked against the manifest's node/edge counts before being kept. Needs
outbound network access; run from anywhere inside the repository.
"""

import os
import sys
import urllib.error
import urllib.request

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from nodelabel import color02
from nodelabel.graph_io import parse_dimacs

MIRRORS = (
    "https://mat.tepper.cmu.edu/COLOR02/INSTANCES/{name}.col",
    "https://cedric.cnam.fr/~porumbed/graphs/{name}.col",
    "https://raw.githubusercontent.com/heldstephan/exactcolors/master/data/{name}.col",
)

TIMEOUT = 30


def fetch(name: str) -> str | None:
    for template in MIRRORS:
        url = template.format(name=name)
        try:
            with urllib.request.urlopen(url, timeout=TIMEOUT) as resp:
                if resp.status != 200:
                    continue
                return resp.read().decode("utf-8", errors="replace")
        except (urllib.error.URLError, OSError, ValueError):
            continue
    return None


def main() -> int:
    target = color02.instance_dir()
    os.makedirs(target, exist_ok=True)
    failures = []
    for name, n, m in color02.INSTANCES:
        path = os.path.join(target, name + ".col")
        if os.path.exists(path):
            print(f"{name}: already present")
            continue
        text = fetch(name)
        if text is None:
            print(f"{name}: no mirror reachable")
            failures.append(name)
            continue
        try:
            g = parse_dimacs(text)
        except Exception as exc:
            print(f"{name}: unparseable download ({exc})")
            failures.append(name)
            continue
        if g.n != n or (m is not None and g.m != m):
            print(f"{name}: size mismatch (got n={g.n} m={g.m}, want n={n} m={m})")
            failures.append(name)
            continue
        with open(path, "w") as fh:
            fh.write(text)
        print(f"{name}: saved ({g.n} nodes, {g.m} edges)")
    if failures:
        print(f"\n{len(failures)} file(s) missing: {', '.join(failures)}")
        return 1
    print(f"\nall {len(color02.INSTANCES)} files present under {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
