"""Experiment harness: run solvers over an instance set and aggregate.

Every produced labeling is re-verified from scratch before its cost is
trusted. Each instance gets a reference value: a caller-supplied known
optimum, an exact oracle result when the instance is small enough, or the
best cost any evaluated algorithm found (flagged "best-known" and excluded
from optimality rates). Reports are deterministic apart from wall times,
which can be dropped entirely.
"""

from __future__ import annotations

import glob as globmod
import io
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UsageError
from .graph_io import load_graph
from .graphs import Graph, GeneratorSpec, generate_graph
from .heuristics import HEURISTICS, run_heuristic
from .model import load_checkpoint
from .oracles import exact_chromatic, exact_mvc
from .problems import (
    INFINITE_COST,
    InfiniteCost,
    ProblemDefinition,
    get_problem,
    rollout_with_ordering,
    verify_and_cost,
)
from .rollout import DEFAULT_SAMPLES, greedy_rollout, sample_rollout

REPORT_VERSION = 1

# which heuristics make sense for which problem
_HEURISTIC_PROBLEMS = {
    "largest-first": "gc",
    "smallest-last": "gc",
    "dsatur": "gc",
    "mvc-approx": "mvc",
    "mvc-approx-greedy": "mvc",
}

POLICY_ALGORITHMS = ("policy-greedy", "policy-sampling")


def algorithm_names(problem_name: str) -> list:
    """All algorithm names valid for a problem, stable order."""
    out = [name for name, p in _HEURISTIC_PROBLEMS.items() if p == problem_name]
    out.append("random")
    out.extend(POLICY_ALGORITHMS)
    return out


@dataclass
class ExperimentConfig:
    problem: str = "gc"
    algorithms: tuple = ()
    generators: list = field(default_factory=list)
    files: list = field(default_factory=list)
    checkpoint: str | None = None
    samples: int | None = None
    seed: int = 0
    oracle_limit: int = 0
    known_optima: dict = field(default_factory=dict)

    def __post_init__(self):
        self.algorithms = tuple(self.algorithms)
        if not self.algorithms:
            raise ParameterError("no algorithms selected")
        valid = set(algorithm_names(self.problem))
        for a in self.algorithms:
            if a not in valid:
                raise ParameterError(
                    f"algorithm {a!r} not available for problem {self.problem!r}"
                )
        if not self.generators and not self.files:
            raise ParameterError("no instances: provide generators or files")

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "algorithms": list(self.algorithms),
            "generators": list(self.generators),
            "files": list(self.files),
            "checkpoint": self.checkpoint,
            "samples": self.samples,
            "seed": self.seed,
            "oracle_limit": self.oracle_limit,
            "known_optima": dict(self.known_optima),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ParameterError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)


def _instances(cfg: ExperimentConfig) -> list:
    out = []
    for spec_dict in cfg.generators:
        spec = GeneratorSpec.from_dict(spec_dict) if isinstance(spec_dict, dict) else spec_dict
        name = f"{spec.family}_n{spec.n}_s{spec.seed}"
        out.append((name, generate_graph(spec)))
    for pattern in cfg.files:
        paths = sorted(globmod.glob(pattern)) or [pattern]
        for path in paths:
            if not os.path.exists(path):
                raise ParameterError(f"instance file not found: {path}")
            out.append((os.path.basename(path), load_graph(path)))
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        seen: dict = {}
        renamed = []
        for n, g in out:
            k = seen.get(n, 0)
            seen[n] = k + 1
            renamed.append((n if k == 0 else f"{n}#{k}", g))
        out = renamed
    return out


def solve_instance(problem: ProblemDefinition, graph: Graph, algorithm: str,
                   params=None, samples: int | None = None, seed: int = 0):
    """Run one algorithm on one instance; returns (labels, wall_time)."""
    start = time.perf_counter()
    if algorithm in _HEURISTIC_PROBLEMS:
        labels = run_heuristic(algorithm, graph).labels
    elif algorithm == "random":
        rng = np.random.Generator(np.random.PCG64(seed))
        order = rng.permutation(graph.n)
        labels = rollout_with_ordering(problem, graph, order).labels
    elif algorithm == "policy-greedy":
        if params is None:
            raise UsageError("policy algorithms need model parameters")
        labels = greedy_rollout(problem, graph, params).labels
    elif algorithm == "policy-sampling":
        if params is None:
            raise UsageError("policy algorithms need model parameters")
        k = DEFAULT_SAMPLES[problem.name] if samples is None else samples
        labels = sample_rollout(problem, graph, params, k, seed=seed).labels
    else:
        raise ParameterError(f"unknown algorithm {algorithm!r}")
    return labels, time.perf_counter() - start


def _oracle_optimum(problem: ProblemDefinition, graph: Graph, limit: int):
    if graph.n > limit:
        return None
    if problem.name == "gc":
        return exact_chromatic(graph, limit=limit).optimum
    if problem.name == "mvc":
        return exact_mvc(graph, limit=limit).optimum
    if problem.name == "mis":
        # independent set and vertex cover are complements of each other
        return -(graph.n - exact_mvc(graph, limit=limit).optimum)
    return None


def cost_ratio(cost, reference) -> float:
    """How many times worse than the reference (1.0 = matches it)."""
    if isinstance(cost, InfiniteCost):
        return math.inf
    if reference == 0:
        return 1.0 if cost == 0 else math.inf
    if reference > 0:
        return cost / reference
    return math.inf if cost == 0 else reference / cost


def run_experiment(cfg: ExperimentConfig, params=None, timing: bool = True) -> dict:
    """Evaluate all configured algorithms over all instances.

    params overrides the checkpoint file for policy algorithms. With
    timing=False the report carries no wall times and is bit-stable.
    """
    problem = get_problem(cfg.problem)
    needs_model = any(a in POLICY_ALGORITHMS for a in cfg.algorithms)
    if needs_model and params is None:
        if cfg.checkpoint is None:
            raise ParameterError("policy algorithms selected but no checkpoint given")
        params = load_checkpoint(cfg.checkpoint)
    instances = _instances(cfg)
    rows = []
    for name, graph in instances:
        results = {}
        for alg in cfg.algorithms:
            labels, wall = solve_instance(problem, graph, alg, params=params,
                                          samples=cfg.samples, seed=cfg.seed)
            feasible, cost = verify_and_cost(problem, graph, labels)
            entry = {
                "cost": "inf" if not feasible else int(cost),
                "feasible": bool(feasible),
            }
            if timing:
                entry["wall_time"] = wall
            results[alg] = entry
        if name in cfg.known_optima:
            reference, kind = int(cfg.known_optima[name]), "known"
        else:
            opt = _oracle_optimum(problem, graph, cfg.oracle_limit)
            if opt is not None:
                reference, kind = int(opt), "exact"
            else:
                finite = [r["cost"] for r in results.values() if r["feasible"]]
                reference = int(min(finite)) if finite else 0
                kind = "best-known"
        for alg, r in results.items():
            c = INFINITE_COST if not r["feasible"] else r["cost"]
            r["ratio"] = cost_ratio(c, reference)
        rows.append({
            "instance": name,
            "n": graph.n,
            "m": graph.m,
            "reference": reference,
            "reference_kind": kind,
            "results": results,
        })

    summary = {}
    for alg in cfg.algorithms:
        costs = [row["results"][alg]["cost"] for row in rows]
        finite = [c for c in costs if c != "inf"]
        ratios = [row["results"][alg]["ratio"] for row in rows]
        wins = 0
        optimal = 0
        scored = 0
        for row in rows:
            mine = row["results"][alg]["cost"]
            if mine == "inf":
                continue
            best = min(r["cost"] for r in row["results"].values() if r["cost"] != "inf")
            if mine == best:
                wins += 1
            if row["reference_kind"] != "best-known":
                scored += 1
                if mine == row["reference"]:
                    optimal += 1
        entry = {
            "mean_cost": float(np.mean(finite)) if finite else None,
            "mean_ratio": float(np.mean(ratios)),
            "win_share": wins / len(rows) if rows else 0.0,
            "optimal_share": optimal / scored if scored else None,
            "feasible_share": len(finite) / len(rows) if rows else 0.0,
        }
        if timing:
            entry["mean_wall_time"] = float(
                np.mean([row["results"][alg]["wall_time"] for row in rows])
            )
        summary[alg] = entry

    return {
        "report_version": REPORT_VERSION,
        "problem": cfg.problem,
        "algorithms": list(cfg.algorithms),
        "seed": cfg.seed,
        "instances": rows,
        "summary": summary,
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def report_to_csv(report: dict) -> str:
    """Per instance x algorithm rows; first line pins the format version."""
    buf = io.StringIO()
    buf.write(f"# nodelabel report v{report['report_version']}\n")
    cols = ["instance", "n", "m", "algorithm", "cost", "feasible", "ratio",
            "reference", "reference_kind"]
    has_time = any(
        "wall_time" in r for row in report["instances"] for r in row["results"].values()
    )
    if has_time:
        cols.append("wall_time")
    buf.write(",".join(cols) + "\n")
    for row in report["instances"]:
        for alg in report["algorithms"]:
            r = row["results"][alg]
            vals = [row["instance"], row["n"], row["m"], alg, r["cost"],
                    r["feasible"], f"{r['ratio']:.6f}", row["reference"],
                    row["reference_kind"]]
            if has_time:
                vals.append(f"{r['wall_time']:.6f}")
            buf.write(",".join(str(v) for v in vals) + "\n")
    return buf.getvalue()
