"""Command line: ``pbitsa anneal``, ``pbitsa tune`` and ``pbitsa summarize``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import BenchmarkStats, run_benchmark, summarize_table, write_json
from .errors import ConfigError, ParseError
from .graphio import load_problem
from .tuner import DEFAULT_TUNING_CYCLES, DEFAULT_TUNING_TRIALS, parse_grid, tune_alpha, tune_p


def _add_anneal(sub):
    p = sub.add_parser("anneal", help="run N trials of one engine on a graph or h/J instance")
    p.add_argument("--graph", required=True, help="G-set edge list or h/J instance file")
    p.add_argument("--algo", required=True, choices=["psa", "tapsa", "spsa", "sa"])
    p.add_argument("--alpha", type=int, help="TApSA window size")
    p.add_argument("--p", type=float, dest="p_stall", help="SpSA stall probability")
    p.add_argument("--cycles", type=int, default=1000)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=10.0)
    p.add_argument("--signal", choices=["uniform", "poisson"], default="uniform")
    p.add_argument("--lambda", type=float, dest="lam", default=10.0, help="Poisson signal rate")
    p.add_argument("--out", required=True, help="JSON result path")
    p.add_argument("--trace", help="directory for per-trial CSV traces")
    p.add_argument("--name", help="benchmark name for normalization (default: file stem)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--window", type=int, default=50, help="oscillation detection window")
    p.add_argument("--timing", action="store_true", help="include per-trial wall times (output no longer reproducible)")
    p.set_defaults(func=cmd_anneal)


def _add_tune(sub):
    p = sub.add_parser("tune", help="pick alpha (tapsa) or p (spsa) by short runs")
    p.add_argument("--graph", required=True)
    p.add_argument("--algo", required=True, choices=["tapsa", "spsa"])
    p.add_argument("--grid", required=True, help="comma list or start:stop:step, e.g. 1:10:1 or 0:0.9:0.1")
    p.add_argument("--tune-cycles", type=int, default=DEFAULT_TUNING_CYCLES)
    p.add_argument("--tune-trials", type=int, default=DEFAULT_TUNING_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=10.0)
    p.add_argument("--signal", choices=["uniform", "poisson"], default="uniform")
    p.add_argument("--lambda", type=float, dest="lam", default=10.0)
    p.add_argument("--out", help="JSON output path (default: stdout)")
    p.set_defaults(func=cmd_tune)


def _add_summarize(sub):
    p = sub.add_parser("summarize", help="tabulate anneal JSON results by graph and algorithm")
    p.add_argument("results", nargs="+", help="JSON files written by 'anneal'")
    p.set_defaults(func=cmd_summarize)


def cmd_anneal(args) -> int:
    stats = run_benchmark(
        args.graph, args.algo, alpha=args.alpha, p_stall=args.p_stall, trials=args.trials,
        cycles=args.cycles, seed=args.seed, gamma=args.gamma, delta=args.delta,
        signal=args.signal, lam=args.lam, name=args.name, trace_dir=args.trace,
        workers=args.workers, window=args.window,
    )
    write_json(stats, args.out, include_timing=args.timing)
    if stats.mean_cut is not None:
        line = f"{stats.graph} {stats.algorithm}: cut min/mean/max {stats.min_cut:g}/{stats.mean_cut:g}/{stats.max_cut:g}"
        if stats.normalized_mean is not None:
            line += f" (normalized mean {stats.normalized_mean:.4f})"
    else:
        line = f"{stats.graph} {stats.algorithm}: energy min/mean/max {stats.min_energy:g}/{stats.mean_energy:g}/{stats.max_energy:g}"
    print(line)
    print(f"oscillating trials: {stats.oscillating_trials}/{stats.trials}")
    return 0


def cmd_tune(args) -> int:
    graph, model = load_problem(args.graph)
    if graph is None:
        raise ConfigError("tuning needs a G-set graph (cut values), not an h/J instance")
    grid = parse_grid(args.grid, integer=args.algo == "tapsa")
    tuner = tune_alpha if args.algo == "tapsa" else tune_p
    result = tuner(model, graph, grid, gamma=args.gamma, delta=args.delta, seed=args.seed,
                   tuning_cycles=args.tune_cycles, tuning_trials=args.tune_trials,
                   signal=args.signal, lam=args.lam)
    text = json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"best {'alpha' if args.algo == 'tapsa' else 'p'}: {result.best_param:g}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_summarize(args) -> int:
    results = [BenchmarkStats.from_dict(json.loads(Path(p).read_text())) for p in args.results]
    sys.stdout.write(summarize_table(results).render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pbitsa", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_anneal(sub)
    _add_tune(sub)
    _add_summarize(sub)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParseError, OSError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
