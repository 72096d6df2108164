"""Benchmarks: decoder scaling across graph sizes and kernel backend timing.

The scaling run counts arithmetic and selection operations of one greedy
episode per size on sparse random graphs; the log-log slope of the
arithmetic count against n separates near-linear local decoding from the
quadratic global recompute. The backend comparison times the compiled
rollout kernels against the pure-Python twins on identical inputs and
checks they agree exactly.
"""

from __future__ import annotations

import time

import numpy as np

from . import _kernels
from .autodiff import count_operations
from .graphs import GeneratorSpec, generate_graph
from .model import init_parameters
from .problems import get_problem
from .rollout import greedy_rollout

DEFAULT_SIZES = (320, 640, 1280, 2560, 5120)


def scaling_run(problem_name: str = "gc", sizes=DEFAULT_SIZES,
                decode_mode: str = "local", d: int = 16, seed: int = 0,
                family: str = "SER") -> list:
    """One greedy episode per size; returns rows with op counts and timings."""
    problem = get_problem(problem_name)
    params = init_parameters(seed=seed, d=d, decode_mode=decode_mode)
    rows = []
    for n in sizes:
        g = generate_graph(GeneratorSpec(family=family, n=int(n), seed=seed))
        start = time.perf_counter()
        with count_operations() as ops:
            traj = greedy_rollout(problem, g, params)
        wall = time.perf_counter() - start
        rows.append({
            "n": g.n,
            "m": g.m,
            "cost": int(traj.terminal_cost),
            "wall_time": wall,
            "arithmetic": ops.arithmetic,
            "selection": ops.selection,
        })
    return rows


def loglog_slope(xs, ys) -> float:
    xs = np.log(np.asarray(xs, dtype=np.float64))
    ys = np.log(np.asarray(ys, dtype=np.float64))
    return float(np.polyfit(xs, ys, 1)[0])


def arithmetic_slope(rows: list) -> float:
    return loglog_slope([r["n"] for r in rows], [r["arithmetic"] for r in rows])


def compare_kernel_backends(seed: int = 0, n: int = 2000, orders: int = 50,
                            exhaustive_n: int = 8) -> dict:
    """Time pure-Python vs compiled rollout kernels on shared inputs.

    Always includes the python rows; compiled rows appear when the extension
    built. Outputs are cross-checked for exact equality.
    """
    backends = [("python", _kernels.get_backend("python"))]
    compiled_available = True
    try:
        backends.append(("compiled", _kernels.get_backend("compiled")))
    except ImportError:
        compiled_available = False

    g = generate_graph(GeneratorSpec(family="SER", n=n, seed=seed))
    rng = np.random.Generator(np.random.PCG64(seed))
    perms = [rng.permutation(g.n).astype(np.int32) for _ in range(orders)]
    small = generate_graph(GeneratorSpec(family="ER", n=exhaustive_n, seed=seed, p=0.4))

    rows = []
    reference: dict = {}
    for name, mod in backends:
        start = time.perf_counter()
        colors_out = [mod.color_rollout(g.indptr, g.indices, p) for p in perms]
        t_roll = time.perf_counter() - start
        start = time.perf_counter()
        best = mod.best_ordering_gc(small.indptr, small.indices)
        t_best = time.perf_counter() - start
        rows.append({
            "backend": name,
            "rollout_wall_time": t_roll,
            "exhaustive_wall_time": t_best,
            "best_cost": int(best),
        })
        outputs = ([tuple(c[0].tolist()) + (c[1],) for c in colors_out], int(best))
        reference[name] = outputs

    agree = True
    if compiled_available:
        agree = reference["python"] == reference["compiled"]
    result = {
        "default_backend": _kernels.BACKEND,
        "compiled_available": compiled_available,
        "outputs_match": agree,
        "rows": rows,
    }
    if compiled_available:
        py = rows[0]["rollout_wall_time"]
        cp = rows[1]["rollout_wall_time"]
        result["rollout_speedup"] = py / cp if cp > 0 else float("inf")
    return result
