"""Ground-truth computations: exact centralities, rho, and diameter.

One level-synchronous BFS per source vertex builds the shortest-path DAG
with path counts; a backward pass accumulates the per-source dependencies,
weighted by the ramp difference of the endpoint states for percolation and
by one for betweenness. Everything here is O(n*m) and used as the oracle
side of the approximation tests, so clarity beats micro-optimization.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, bfs_level_counts
from .percolation import PercolationModel


class PathExplosionError(RuntimeError):
    """The brute-force oracle hit its shortest-path enumeration cap."""


@dataclass
class ExactResult:
    p: np.ndarray              # percolation centrality, in [0, 1]
    b: np.ndarray              # betweenness, normalized by n(n-1)
    rho: float                 # average internal vertices per ordered pair
    diameter: int              # max finite shortest-path length
    vertex_diameter: int       # diameter + 1
    all_states_equal: bool = False


def _source_sweep(graph: Graph, x: np.ndarray | None, s: int,
                  want_p: bool, want_b: bool):
    """Brandes-style pass from one source.

    Returns (delta_p, delta_b, internal_sum, max_dist); the deltas are
    raw dependency vectors (still to be normalized), with the source
    entry zeroed.
    """
    n = graph.n
    levels, dist, sigma = bfs_level_counts(graph, s)
    delta_p = np.zeros(n) if want_p else None
    delta_b = np.zeros(n) if want_b else None
    for depth in range(len(levels) - 1, 0, -1):
        layer = levels[depth]
        srcs, nbrs = graph.expand_frontier(layer, backward=True)
        if nbrs.size == 0:
            continue
        pred = dist[nbrs] == depth - 1
        if not pred.any():
            continue
        v = nbrs[pred]
        w = srcs[pred]
        ratio = sigma[v] / sigma[w]
        if want_p:
            weight = np.maximum(x[s] - x[w], 0.0)
            delta_p += np.bincount(v, weights=ratio * (weight + delta_p[w]), minlength=n)
        if want_b:
            delta_b += np.bincount(v, weights=ratio * (1.0 + delta_b[w]), minlength=n)
    if want_p:
        delta_p[s] = 0.0
    if want_b:
        delta_b[s] = 0.0
    reached = dist > 0
    internal_sum = float((dist[reached] - 1).sum())
    max_dist = int(dist.max())
    return delta_p, delta_b, internal_sum, max_dist


def _sweep_block(args):
    graph, x, sources, want_p, want_b = args
    n = graph.n
    acc_p = np.zeros(n) if want_p else None
    acc_b = np.zeros(n) if want_b else None
    internal = 0.0
    max_d = 0
    for s in sources:
        dp, db, isum, md = _source_sweep(graph, x, s, want_p, want_b)
        if want_p:
            acc_p += dp
        if want_b:
            acc_b += db
        internal += isum
        max_d = max(max_d, md)
    return acc_p, acc_b, internal, max_d


_BLOCK = 256    # fixed block size keeps the reduction tree, and hence the
                # float result, independent of the worker count


def _run_all_sources(graph: Graph, x, want_p: bool, want_b: bool, threads: int):
    n = graph.n
    parts = [list(range(i, min(i + _BLOCK, n))) for i in range(0, n, _BLOCK)]
    jobs = [(graph, x, part, want_p, want_b) for part in parts]
    if threads <= 1 or len(parts) < 2:
        blocks = [_sweep_block(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            # map preserves block order, so the reduction below is deterministic
            blocks = list(pool.map(_sweep_block, jobs))
    acc_p = np.zeros(n) if want_p else None
    acc_b = np.zeros(n) if want_b else None
    internal = 0.0
    max_d = 0
    for bp, bb, isum, md in blocks:
        if want_p:
            acc_p += bp
        if want_b:
            acc_b += bb
        internal += isum
        max_d = max(max_d, md)
    return acc_p, acc_b, internal, max_d


def exact_all(graph: Graph, model: PercolationModel, threads: int = 1) -> ExactResult:
    """Exact percolation centrality, betweenness, rho, and diameter."""
    if model.n != graph.n:
        raise ValueError("model and graph disagree on vertex count")
    threads = max(1, int(threads or 1))
    acc_p, acc_b, internal, max_d = _run_all_sources(
        graph, model.x, want_p=True, want_b=True, threads=threads)
    pairs = graph.n * (graph.n - 1)
    safe = np.where(model.minus_s > 0.0, model.minus_s, 1.0)
    p = np.where(model.minus_s > 0.0, acc_p / (pairs * safe), 0.0)
    b = acc_b / pairs
    return ExactResult(
        p=p, b=b, rho=internal / pairs,
        diameter=max_d, vertex_diameter=max_d + 1,
        all_states_equal=model.all_equal,
    )


def exact_percolation(graph: Graph, model: PercolationModel, threads: int = 1) -> np.ndarray:
    if model.n != graph.n:
        raise ValueError("model and graph disagree on vertex count")
    acc_p, _, _, _ = _run_all_sources(graph, model.x, True, False, max(1, threads))
    pairs = graph.n * (graph.n - 1)
    safe = np.where(model.minus_s > 0.0, model.minus_s, 1.0)
    return np.where(model.minus_s > 0.0, acc_p / (pairs * safe), 0.0)


def exact_betweenness(graph: Graph, threads: int = 1) -> np.ndarray:
    _, acc_b, _, _ = _run_all_sources(graph, None, False, True, max(1, threads))
    return acc_b / (graph.n * (graph.n - 1))


def exact_rho_and_diameter(graph: Graph, threads: int = 1) -> tuple[float, int]:
    """rho (disconnected pairs contribute 0) and the max finite distance."""
    _, _, internal, max_d = _run_all_sources(graph, None, False, False, max(1, threads))
    return internal / (graph.n * (graph.n - 1)), max_d


def _all_shortest_paths(graph: Graph, dist: np.ndarray, preds: list[list[int]],
                        z: int, cap: int) -> list[list[int]]:
    """DFS over the predecessor DAG; every path from the source to z."""
    paths: list[list[int]] = []
    stack: list[int] = [z]

    def walk(v: int):
        if dist[v] == 0:
            paths.append(list(reversed(stack)))
            if len(paths) > cap:
                raise PathExplosionError(f"more than {cap} shortest paths for one pair")
            return
        for u in preds[v]:
            stack.append(u)
            walk(u)
            stack.pop()

    walk(z)
    return paths


def brute_force_percolation(graph: Graph, model: PercolationModel,
                            path_cap: int = 200_000) -> np.ndarray:
    """Independent oracle: enumerate every shortest path explicitly.

    Exponential in the worst case; intended for small graphs. Raises
    :class:`PathExplosionError` past ``path_cap`` paths per pair.
    """
    n = graph.n
    if model.n != n:
        raise ValueError("model and graph disagree on vertex count")
    acc = np.zeros(n)
    for s in range(n):
        _, dist, _ = bfs_level_counts(graph, s)
        preds: list[list[int]] = [[] for _ in range(n)]
        for v in range(n):
            if dist[v] <= 0:
                continue
            preds[v] = [int(u) for u in graph.in_neighbors(v) if dist[u] == dist[v] - 1]
        for z in range(n):
            if z == s or dist[z] <= 0:
                continue
            weight = model.pair_weight(s, z)
            if weight == 0.0:
                continue
            paths = _all_shortest_paths(graph, dist, preds, z, path_cap)
            share = 1.0 / len(paths)
            for path in paths:
                for v in path[1:-1]:
                    if model.minus_s[v] > 0.0:
                        acc[v] += share * weight / model.minus_s[v]
    return acc / (n * (n - 1))
