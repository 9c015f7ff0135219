"""Command line entry point: ``clusterdd {generate,solve,sweep,oracle}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import brute_force, parse_configs, run_sweep, summary_table
from .bnb import solve
from .errors import ContractViolation, GraphParseError
from .graph import generate_instance, parse_graph, serialize_graph
from .strategies import POLICIES, STRATEGIES, StrategyConfig


def _read_instance(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_graph(text)


def cmd_generate(args) -> int:
    g = generate_instance(args.n, args.density, args.seed)
    text = serialize_graph(g, comment=f"G(n={args.n}, p={args.density:g}) seed={args.seed}")
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def cmd_solve(args) -> int:
    g = _read_instance(args.instance)
    cfg = StrategyConfig(args.strategy, args.policy, args.width, args.seed)
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    res = solve(g, cfg, local_bounds=not args.global_bounds, trace=trace)
    print(f"optimum {res.optimum}")
    print("set " + " ".join(str(v + 1) for v in sorted(res.best_set)))
    print(
        f"nodes {res.nodes_processed} cand_evals {res.candidate_evaluations} "
        f"relaxed_dds {res.relaxed_compilations} wall_time_s {res.wall_time:.6f}"
    )
    return 0


def cmd_sweep(args) -> int:
    densities = [float(x) for x in args.densities.split(",")]
    configs = parse_configs(args.configs, args.width, args.seed)
    cache = Path(args.cache) if args.cache else None
    instance_files = None
    if args.instances:
        instance_files = {}
        for d in densities:
            instance_files[d] = sorted(Path(args.instances).glob(f"*_d{d:g}_*.txt"))
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        rows = list(run_sweep(
            densities, args.n, args.count, configs, out,
            base_seed=args.instance_seed, cache=cache, instance_files=instance_files,
        ))
    finally:
        if out is not sys.stdout:
            out.close()
    if args.summary:
        print(summary_table(rows), file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    print(brute_force(_read_instance(args.instance)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusterdd", description="DD branch-and-bound for weighted independent set")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random G(n, p) instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--density", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve an instance to optimality")
    s.add_argument("--instance", required=True, help="instance file, '-' for stdin")
    s.add_argument("--strategy", choices=STRATEGIES, default="baseline")
    s.add_argument("--policy", choices=POLICIES, default="fixed")
    s.add_argument("--width", type=int, default=100)
    s.add_argument("--seed", type=int, default=0, help="k-means seed")
    s.add_argument("--trace", action="store_true", help="per-layer trace on stderr")
    s.add_argument("--global-bounds", action="store_true",
                   help="give every cutset child the whole relaxed bound")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="solve instance sets under several configurations, CSV out")
    w.add_argument("--densities", default="0.9,0.8,0.7,0.6,0.5")
    w.add_argument("--n", type=int, default=100)
    w.add_argument("--count", type=int, default=5, help="instances per density")
    w.add_argument("--configs", default="all", help="'all' or e.g. baseline,cbc:adaptive,pas-vo:fixed")
    w.add_argument("--width", type=int, default=100)
    w.add_argument("--seed", type=int, default=0, help="k-means seed")
    w.add_argument("--instance-seed", type=int, default=0)
    w.add_argument("--cache", help="directory caching generated instances")
    w.add_argument("--instances", help="directory of instance files named *_d<density>_*.txt")
    w.add_argument("--out", default="-")
    w.add_argument("--summary", action="store_true", help="print a density x config table on stderr")
    w.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle", help="brute-force optimum (n <= 30)")
    o.add_argument("--instance", required=True)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (GraphParseError, ContractViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
