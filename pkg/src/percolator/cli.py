"""Command-line front end.

Subcommands: ``exact`` (ground truth), ``approx`` (one estimator run),
``compare`` (estimator benchmark over an epsilon grid). Exit codes:
0 success, 2 usage, 3 input format, 4 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import gzip
import json
import logging
import math
import os
import sys
import time

import numpy as np

from .baselines import run_pab_naive, run_prk_fixed
from .exact import exact_all
from .graph import EdgeListParseError, Graph, bfs_level_counts, load_edge_list
from .percolation import PercolationModel, load_states, random_states
from .progressive import RunReport, ScheduleConfig, estimate
from .rng import combine, derive_rng

log = logging.getLogger("percolator")

ALGORITHMS = ("mcera", "p-rk-fixed", "p-ab-progressive-naive")
EXIT_OK = 0
EXIT_INPUT = 3
EXIT_BUDGET = 4


def _open_maybe_gzip(path: str):
    if path.endswith(".gz"):
        return gzip.open(path, "rt")
    return open(path, "r")


def _load_graph(args) -> Graph:
    with _open_maybe_gzip(args.graph) as fh:
        return load_edge_list(fh, directed=args.directed)


def _resolve_states(source: str, graph: Graph) -> np.ndarray:
    if source.startswith("random:"):
        return random_states(graph.n, int(source.split(":", 1)[1]))
    with open(source) as fh:
        return load_states(fh, graph)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("PERCOLATOR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_estimates(path: str, graph: Graph, values: np.ndarray, fmt: str) -> None:
    if fmt == "tsv":
        with open(path, "w") as fh:
            for v in range(graph.n):
                fh.write(f"{graph.orig_ids[v]}\t{_fmt(values[v])}\n")
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["original_id", "value"])
            for v in range(graph.n):
                writer.writerow([int(graph.orig_ids[v]), _fmt(values[v])])
    else:
        payload = {str(int(graph.orig_ids[v])): float(values[v]) for v in range(graph.n)}
        with open(path, "w") as fh:
            json.dump({"estimates": payload}, fh, indent=1)
            fh.write("\n")


def cmd_exact(args) -> int:
    graph = _load_graph(args)
    states = _resolve_states(args.states, graph)
    model = PercolationModel(states)
    t0 = time.perf_counter()
    result = exact_all(graph, model, threads=_threads(args))
    elapsed = time.perf_counter() - t0
    _write_estimates(args.output, graph, result.p, args.format)
    sidecar = {
        "n": graph.n,
        "m": graph.m,
        "rho": result.rho,
        "diameter": result.diameter,
        "vertex_diameter": result.vertex_diameter,
        "sum_p": float(result.p.sum()),
        "sum_b": float(result.b.sum()),
        "elapsed": elapsed,
        "all_states_equal": result.all_states_equal,
    }
    with open(args.output + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=1)
        fh.write("\n")
    return EXIT_OK


def _run_algorithm(name: str, graph: Graph, model: PercolationModel,
                   args, seed: int, vertex_diameter: int | None = None) -> dict:
    if name == "mcera":
        config = ScheduleConfig(epsilon=args.epsilon, delta=args.delta,
                                mc_trials=args.mc_trials, beta=args.beta,
                                bag_cap=args.alpha_cap)
        report: RunReport = estimate(graph, model, config, seed)
        out = report.as_dict()
        out["algorithm"] = "mcera"
        out["estimates"] = report.estimates
        return out
    if name == "p-rk-fixed":
        return run_prk_fixed(graph, model, args.epsilon, args.delta, seed,
                             vertex_diameter=vertex_diameter)
    return run_pab_naive(graph, model, args.epsilon, args.delta, seed,
                         mc_trials=args.mc_trials)


def _sampled_vertex_diameter(graph: Graph, seed: int, probes: int = 16) -> int:
    """Upper bound on the vertex diameter from sampled eccentricities.

    Used only when the exact pass is skipped; doubles the largest probed
    eccentricity, which bounds the diameter on undirected graphs and is
    a labeled heuristic on directed ones.
    """
    rng = derive_rng(seed, 97, 0)
    ecc = 0
    for _ in range(min(probes, graph.n)):
        s = int(rng.integers(graph.n))
        _, dist, _ = bfs_level_counts(graph, s)
        ecc = max(ecc, int(dist.max()))
    return 2 * ecc + 1


def cmd_approx(args) -> int:
    graph = _load_graph(args)
    states = _resolve_states(args.states, graph)
    model = PercolationModel(states)
    result = _run_algorithm(args.algorithm, graph, model, args, args.seed)
    estimates = np.asarray(result.pop("estimates"), dtype=np.float64)
    result["n"] = graph.n
    result["m"] = graph.m
    result["estimates"] = {str(int(graph.orig_ids[v])): float(estimates[v])
                           for v in range(graph.n)}
    with open(args.output, "w") as fh:
        json.dump(result, fh, indent=1)
        fh.write("\n")
    if args.format == "tsv":
        _write_estimates(args.output + ".tsv", graph, estimates, "tsv")
    return EXIT_OK


RAW_COLUMNS = ["algorithm", "epsilon", "rep", "samples", "seconds", "sd", "mad"]
AGG_COLUMNS = ["algorithm", "epsilon", "samples_mean", "samples_std",
               "seconds_mean", "seconds_std", "sd_mean", "sd_std",
               "mad_mean", "mad_std"]


def cmd_compare(args) -> int:
    if args.repetitions < 1:
        print("repetitions must be at least 1", file=sys.stderr)
        return 2
    graph = _load_graph(args)
    states = _resolve_states(args.states, graph)
    model = PercolationModel(states)

    exact_p = None
    vertex_diameter = None
    if args.no_exact:
        vertex_diameter = _sampled_vertex_diameter(graph, args.seed)
    else:
        if graph.n * graph.m > args.budget:
            print(f"refusing exact pass: n*m = {graph.n * graph.m} exceeds "
                  f"budget {args.budget}; rerun with --no-exact or --budget",
                  file=sys.stderr)
            return EXIT_BUDGET
        result = exact_all(graph, model, threads=_threads(args))
        exact_p = result.p
        vertex_diameter = result.vertex_diameter

    algorithms = args.algorithms.split(",") if args.algorithms else list(ALGORITHMS)
    for name in algorithms:
        if name not in ALGORITHMS:
            print(f"unknown algorithm {name!r}", file=sys.stderr)
            return 2

    rows = []
    for eps_idx, eps in enumerate(args.epsilon_grid):
        args.epsilon = eps
        for rep in range(args.repetitions):
            for algo_idx, name in enumerate(algorithms):
                sub_seed = combine(args.seed, eps_idx, rep, algo_idx)
                log.info("run algorithm=%s eps=%g rep=%d sub_seed=%d",
                         name, eps, rep, sub_seed)
                t0 = time.perf_counter()
                result = _run_algorithm(name, graph, model, args, sub_seed,
                                        vertex_diameter=vertex_diameter)
                seconds = time.perf_counter() - t0
                estimates = np.asarray(result["estimates"], dtype=np.float64)
                if exact_p is not None:
                    dev = np.abs(estimates - exact_p)
                    sd, mad = float(dev.max()), float(dev.mean())
                else:
                    sd = mad = math.nan
                rows.append([name, eps, rep, result["r_final"], seconds, sd, mad])

    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_COLUMNS)
        for row in rows:
            writer.writerow(row)

    base, ext = os.path.splitext(args.output)
    agg_path = base + ".agg" + (ext or ".csv")
    with open(agg_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGG_COLUMNS)
        for eps in args.epsilon_grid:
            for name in algorithms:
                sel = [r for r in rows if r[0] == name and r[1] == eps]
                cols = np.array([[r[3], r[4], r[5], r[6]] for r in sel], dtype=np.float64)
                out = [name, eps]
                for k in range(4):
                    out.append(float(cols[:, k].mean()))
                    out.append(float(cols[:, k].std()))
                writer.writerow(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percolator",
        description="Exact and approximate percolation centrality")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--graph", required=True, help="edge-list path (.gz ok)")
        p.add_argument("--directed", action="store_true")
        p.add_argument("--states", required=True,
                       help="states file path or random:SEED")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="defaults to PERCOLATOR_THREADS or all cores")
        p.add_argument("--output", required=True)

    p_exact = sub.add_parser("exact", help="exact centralities and graph stats")
    common(p_exact)
    p_exact.add_argument("--format", choices=["tsv", "json", "csv"], default="tsv")
    p_exact.set_defaults(func=cmd_exact)

    p_approx = sub.add_parser("approx", help="one approximation run")
    common(p_approx)
    p_approx.add_argument("--epsilon", type=float, default=0.05)
    p_approx.add_argument("--delta", type=float, default=0.1)
    p_approx.add_argument("--mc-trials", type=int, default=25)
    p_approx.add_argument("--beta", type=float, default=0.1)
    p_approx.add_argument("--alpha-cap", type=int, default=1 << 16,
                          help="max paths drawn per sampled pair")
    p_approx.add_argument("--algorithm", choices=ALGORITHMS, default="mcera")
    p_approx.add_argument("--format", choices=["tsv", "json", "csv"], default="json")
    p_approx.set_defaults(func=cmd_approx)

    p_cmp = sub.add_parser("compare", help="benchmark estimators on one graph")
    common(p_cmp)
    p_cmp.add_argument("--epsilon-grid", type=float, nargs="+",
                       default=[0.1, 0.05], metavar="EPS")
    p_cmp.add_argument("--repetitions", type=int, default=10)
    p_cmp.add_argument("--delta", type=float, default=0.1)
    p_cmp.add_argument("--mc-trials", type=int, default=25)
    p_cmp.add_argument("--beta", type=float, default=0.1)
    p_cmp.add_argument("--alpha-cap", type=int, default=1 << 16)
    p_cmp.add_argument("--algorithms", default=None,
                       help="comma-separated subset of: " + ",".join(ALGORITHMS))
    p_cmp.add_argument("--no-exact", action="store_true",
                       help="skip the exact pass (no sd/mad columns)")
    p_cmp.add_argument("--budget", type=int, default=100_000_000,
                       help="refuse the exact pass when n*m exceeds this")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EdgeListParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
