"""Command-line interface.

Subcommands: generate, solve, oracle, train, evaluate, bench. Exit codes:
0 success, 1 bad usage or parameters, 2 runtime failure (budget exhausted,
unreadable files, numeric trouble).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, color02
from .errors import NodeLabelError, ParameterError, ParseError, UsageError
from .evaluation import (
    ExperimentConfig,
    algorithm_names,
    report_to_csv,
    report_to_json,
    run_experiment,
)
from .graph_io import load_graph, parse_graph, write_dimacs, write_edge_list
from .graphs import FAMILIES, GeneratorSpec, Graph, generate_graph
from .model import load_checkpoint, save_checkpoint
from .oracles import exact_chromatic, exact_mvc
from .problems import PROBLEM_NAMES, get_problem, labeling_to_dict, verify_and_cost
from .rollout import DEFAULT_SAMPLES, greedy_rollout, sample_rollout
from .training import TrainConfig, train, write_log


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); route through our codes
        raise UsageError(message)


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="graph file (.col or edge list)")
    p.add_argument("--family", choices=FAMILIES, help="generator family")
    p.add_argument("--n", type=int, help="node count for the generator")
    p.add_argument("--graph-seed", type=int, default=0)
    p.add_argument("--delta", type=int, default=4)
    p.add_argument("--p", type=float, default=0.15)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--q", type=float, default=0.1)
    p.add_argument("--avg-degree", type=float, default=7.5)
    p.add_argument("--eps", type=float, default=0.2)


def _spec_from_args(args) -> GeneratorSpec:
    return GeneratorSpec(
        family=args.family, n=args.n, seed=args.graph_seed, delta=args.delta,
        p=args.p, k=args.k, q=args.q, avg_degree=args.avg_degree, eps=args.eps,
    )


def _resolve_graph(args) -> Graph:
    if args.input:
        return load_graph(args.input)
    if args.family and args.n:
        return generate_graph(_spec_from_args(args))
    raise UsageError("provide --input FILE or --family with --n")


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_generate(args) -> int:
    if not (args.family and args.n):
        raise UsageError("generate needs --family and --n")
    g = generate_graph(_spec_from_args(args))
    fmt = args.format
    if fmt is None:
        fmt = "dimacs" if args.output and args.output.endswith(".col") else "edgelist"
    text = write_dimacs(g) if fmt == "dimacs" else write_edge_list(g)
    _emit(text, args.output)
    if args.output:
        print(f"wrote {args.output}: n={g.n} m={g.m}")
    return 0


def _cmd_solve(args) -> int:
    problem = get_problem(args.problem)
    g = _resolve_graph(args)
    alg = args.algorithm
    if alg in ("policy-greedy", "policy-sampling"):
        if not args.checkpoint:
            raise UsageError(f"{alg} needs --checkpoint")
        params = load_checkpoint(args.checkpoint)
        if alg == "policy-greedy":
            traj = greedy_rollout(problem, g, params)
        else:
            k = args.samples if args.samples is not None else DEFAULT_SAMPLES[problem.name]
            traj = sample_rollout(problem, g, params, k, seed=args.seed)
        labels = traj.labels
    else:
        from .evaluation import solve_instance

        labels, _ = solve_instance(problem, g, alg, samples=args.samples,
                                   seed=args.seed)
    feasible, cost = verify_and_cost(problem, g, labels)
    payload = labeling_to_dict(problem, labels, cost)
    payload["algorithm"] = alg
    payload["feasible"] = bool(feasible)
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    if args.output:
        print(f"cost={payload['cost']} feasible={feasible}")
    return 0


def _cmd_oracle(args) -> int:
    problem = get_problem(args.problem)
    g = _resolve_graph(args)
    if problem.name == "gc":
        res = exact_chromatic(g, node_budget=args.budget, limit=args.limit)
        optimum = res.optimum
    elif problem.name == "mvc":
        res = exact_mvc(g, node_budget=args.budget, limit=args.limit)
        optimum = res.optimum
    else:
        res = exact_mvc(g, node_budget=args.budget, limit=args.limit)
        optimum = -(g.n - res.optimum)
    payload = {"problem": problem.name, "n": g.n, "m": g.m,
               "optimum": int(optimum), "explored": int(res.explored)}
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def _cmd_train(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = TrainConfig.from_dict(json.load(fh))
    else:
        model = {}
        if args.d is not None:
            model["d"] = args.d
        if args.decode_mode is not None:
            model["decode_mode"] = args.decode_mode
        cfg = TrainConfig(
            problem=args.problem,
            epochs=args.epochs,
            node_counts=tuple(int(x) for x in args.node_counts.split(",")),
            families=tuple(args.families.split(",")),
            train_size=args.train_size,
            batch_per_n=args.batch_per_n,
            learning_rate=args.lr,
            challenge_size=args.challenge_size,
            seed=args.seed,
            model=model,
        )

    def progress(rec):
        print(json.dumps(rec), flush=True)

    params, records = train(cfg, progress=progress)
    if args.output:
        save_checkpoint(params, args.output)
        print(f"checkpoint saved to {args.output}")
    if args.log:
        write_log(records, args.log)
    return 0


def _cmd_evaluate(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_dict(json.load(fh))
    else:
        files = list(args.files or [])
        if args.color02:
            miss = color02.missing()
            if miss:
                raise ParameterError(
                    f"benchmark files missing: {', '.join(miss)} "
                    f"(looked in {color02.instance_dir()})"
                )
            files.extend(color02.instance_path(name) for name, _, _ in color02.INSTANCES)
        algorithms = tuple(args.algorithms.split(",")) if args.algorithms else \
            tuple(algorithm_names(args.problem)[:3])
        cfg = ExperimentConfig(
            problem=args.problem,
            algorithms=algorithms,
            files=files,
            checkpoint=args.checkpoint,
            samples=args.samples,
            seed=args.seed,
            oracle_limit=args.oracle_limit,
        )
    report = run_experiment(cfg, timing=not args.no_timing)
    text = report_to_csv(report) if args.format == "csv" else report_to_json(report)
    _emit(text, args.output)
    return 0


def _cmd_bench(args) -> int:
    from . import bench

    if args.mode == "kernels":
        payload = bench.compare_kernel_backends(seed=args.seed)
    else:
        sizes = tuple(int(x) for x in args.sizes.split(","))
        rows = bench.scaling_run(problem_name=args.problem, sizes=sizes,
                                 decode_mode=args.decode_mode, d=args.d,
                                 seed=args.seed)
        payload = {"rows": rows, "arithmetic_slope": bench.arithmetic_slope(rows)}
    _emit(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="nodelabel", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nodelabel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random graph")
    _add_graph_source(p)
    p.add_argument("--format", choices=("edgelist", "dimacs"))
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="label one instance")
    _add_graph_source(p)
    p.add_argument("--problem", choices=PROBLEM_NAMES, default="gc")
    p.add_argument("--algorithm", "-a", required=True)
    p.add_argument("--checkpoint")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum by branch and bound")
    _add_graph_source(p)
    p.add_argument("--problem", choices=PROBLEM_NAMES, default="gc")
    p.add_argument("--budget", type=int, default=None, help="search node budget")
    p.add_argument("--limit", type=int, default=64, help="refuse graphs larger than this")
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("train", help="train the labeling policy")
    p.add_argument("--config", help="JSON training config (overrides the flags)")
    p.add_argument("--problem", choices=PROBLEM_NAMES, default="gc")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--node-counts", default="20,40,50,70,100")
    p.add_argument("--families", default="SER,WS,BA")
    p.add_argument("--train-size", type=int, default=2000)
    p.add_argument("--batch-per-n", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--challenge-size", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int)
    p.add_argument("--decode-mode", choices=("local", "static", "global"))
    p.add_argument("--output", "-o", help="checkpoint path")
    p.add_argument("--log", help="JSONL epoch log path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="run algorithms over an instance set")
    p.add_argument("--config", help="JSON experiment config (overrides the flags)")
    p.add_argument("--problem", choices=PROBLEM_NAMES, default="gc")
    p.add_argument("--algorithms", help="comma-separated algorithm names")
    p.add_argument("--files", nargs="*", help="instance files or globs")
    p.add_argument("--color02", action="store_true",
                   help="evaluate on the bundled benchmark manifest")
    p.add_argument("--checkpoint")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle-limit", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--no-timing", action="store_true",
                   help="omit wall times for bit-stable reports")
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("bench", help="scaling and backend benchmarks")
    p.add_argument("--mode", choices=("scaling", "kernels"), default="scaling")
    p.add_argument("--problem", choices=PROBLEM_NAMES, default="gc")
    p.add_argument("--sizes", default="320,640,1280,2560,5120")
    p.add_argument("--decode-mode", choices=("local", "static", "global"),
                   default="local")
    p.add_argument("--d", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ParameterError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NodeLabelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
