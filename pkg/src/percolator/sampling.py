"""Random percolated shortest-path samples.

The workhorse is a balanced bidirectional BFS: forward from s, backward
from z (in-arcs on directed graphs), always expanding the frontier with
the smaller degree sum. When the searches touch, the arcs joining them
are kept as candidate edges, from which any number of shortest paths can
be drawn uniformly without materializing the whole path set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, bfs_level_counts
from .percolation import PercolationModel

DEFAULT_BAG_CAP = 1 << 16


@dataclass
class MeetResult:
    """Outcome of one balanced bidirectional BFS between s and z."""

    graph: Graph
    s: int
    z: int
    connected: bool
    dist: int                      # d(s, z); -1 when disconnected
    dist_s: np.ndarray             # distances from s (-1 unreached)
    dist_z: np.ndarray             # distances to z
    sigma_s: np.ndarray            # shortest-path counts from s
    sigma_z: np.ndarray            # shortest-path counts to z
    cand_s: np.ndarray             # candidate arcs, s-side endpoints
    cand_z: np.ndarray             # candidate arcs, z-side endpoints
    sigma_sz: float = 0.0          # total shortest s-z path count
    cand_weights: np.ndarray = field(default_factory=lambda: np.empty(0))


@dataclass
class PathBag:
    s: int
    z: int
    paths: list[list[int]]
    requested: int                 # ceil(alpha * sigma_sz) before capping

    @property
    def capped(self) -> bool:
        return self.requested > len(self.paths)


def _expand_side(graph: Graph, frontier: np.ndarray, depth: int,
                 dist_own: np.ndarray, sigma_own: np.ndarray,
                 dist_other: np.ndarray, backward: bool):
    """One full level of one side; returns (next_frontier, cand_own, cand_other).

    Per-arc rules: endpoint seen by the other side -> candidate arc;
    unseen -> next frontier; seen by this side at depth+1 -> extra path
    count (a vertex can be reached again at its own frontier depth).
    """
    srcs, nbrs = graph.expand_frontier(frontier, backward=backward)
    empty = np.empty(0, dtype=np.int64)
    if nbrs.size == 0:
        return empty, empty, empty
    met = dist_other[nbrs] >= 0
    cand_own = srcs[met]
    cand_other = nbrs[met]
    if met.any():
        srcs, nbrs = srcs[~met], nbrs[~met]
    if nbrs.size:
        new = np.unique(nbrs[dist_own[nbrs] < 0])
        dist_own[new] = depth + 1
        into_next = dist_own[nbrs] == depth + 1
        if into_next.any():
            sigma_own += np.bincount(nbrs[into_next],
                                     weights=sigma_own[srcs[into_next]],
                                     minlength=graph.n)
    else:
        new = empty
    return new, cand_own, cand_other


def balanced_bidirectional_bfs(graph: Graph, s: int, z: int) -> MeetResult:
    """Meet-in-the-middle BFS yielding the candidate arcs and sigma_sz."""
    if s == z:
        raise ValueError("endpoints must be distinct")
    n = graph.n
    dist_s = np.full(n, -1, dtype=np.int64)
    dist_z = np.full(n, -1, dtype=np.int64)
    sigma_s = np.zeros(n)
    sigma_z = np.zeros(n)
    dist_s[s] = 0
    sigma_s[s] = 1.0
    dist_z[z] = 0
    sigma_z[z] = 1.0
    frontier_s = np.array([s], dtype=np.int64)
    frontier_z = np.array([z], dtype=np.int64)
    depth_s = depth_z = 0
    out_deg = graph.out_degrees
    in_deg = graph.in_degrees

    while frontier_s.size and frontier_z.size:
        if out_deg[frontier_s].sum() <= in_deg[frontier_z].sum():
            frontier_s, cand_s, cand_z = _expand_side(
                graph, frontier_s, depth_s, dist_s, sigma_s, dist_z, backward=False)
            depth_s += 1
        else:
            frontier_z, cand_z, cand_s = _expand_side(
                graph, frontier_z, depth_z, dist_z, sigma_z, dist_s, backward=True)
            depth_z += 1
        if cand_s.size:
            totals = dist_s[cand_s] + 1 + dist_z[cand_z]
            d = int(totals.min())
            keep = totals == d
            cand_s, cand_z = cand_s[keep], cand_z[keep]
            weights = sigma_s[cand_s] * sigma_z[cand_z]
            sigma_sz = float(weights.sum())
            if not math.isfinite(sigma_sz):
                raise OverflowError("shortest-path count overflowed float64")
            return MeetResult(graph=graph, s=s, z=z, connected=True, dist=d,
                              dist_s=dist_s, dist_z=dist_z,
                              sigma_s=sigma_s, sigma_z=sigma_z,
                              cand_s=cand_s, cand_z=cand_z,
                              sigma_sz=sigma_sz, cand_weights=weights)

    empty = np.empty(0, dtype=np.int64)
    return MeetResult(graph=graph, s=s, z=z, connected=False, dist=-1,
                      dist_s=dist_s, dist_z=dist_z,
                      sigma_s=sigma_s, sigma_z=sigma_z,
                      cand_s=empty, cand_z=empty)


def _walk_down(graph: Graph, v: int, dist: np.ndarray, sigma: np.ndarray,
               rng, toward_z: bool) -> list[int]:
    """Random descent to depth 0, weighting each step by its path count."""
    path = [v]
    while dist[v] > 0:
        target_depth = dist[v] - 1
        pick = rng.random() * sigma[v]
        nbrs = graph.out_neighbors(v) if toward_z else graph.in_neighbors(v)
        chosen = v
        for u in nbrs:
            u = int(u)
            if dist[u] != target_depth:
                continue
            pick -= sigma[u]
            chosen = u
            if pick <= 0.0:
                break
        path.append(chosen)
        v = chosen
    return path


def sample_paths(meet: MeetResult, alpha: float, rng,
                 cap: int = DEFAULT_BAG_CAP, count: int | None = None) -> PathBag:
    """Draw ceil(alpha * sigma_sz) shortest paths uniformly from the pair.

    Each draw picks a candidate arc with probability proportional to
    sigma_s[u] * sigma_z[w], then completes both halves with random
    weighted walks, which makes every draw uniform over the pair's path
    set. The bag size is capped at ``cap``; ``count`` overrides the
    alpha-based size (used by the single-path estimator).
    """
    if not meet.connected:
        raise ValueError("cannot sample paths for a disconnected pair")
    if count is not None:
        requested = int(count)
    else:
        if alpha <= 0.0:
            raise ValueError("alpha must be positive")
        want = alpha * meet.sigma_sz
        # huge path counts saturate instead of overflowing the ceil
        requested = int(math.ceil(want)) if want < 2.0 ** 62 else 2 ** 62
    requested = max(requested, 1)
    k = min(requested, cap)
    graph = meet.graph
    cum = np.cumsum(meet.cand_weights)
    total = cum[-1]
    last = len(cum) - 1
    paths = []
    for _ in range(k):
        j = min(int(np.searchsorted(cum, rng.random() * total, side="right")), last)
        u = int(meet.cand_s[j])
        w = int(meet.cand_z[j])
        head = _walk_down(graph, u, meet.dist_s, meet.sigma_s, rng, toward_z=False)
        head.reverse()
        tail = _walk_down(graph, w, meet.dist_z, meet.sigma_z, rng, toward_z=True)
        paths.append(head + tail)
    return PathBag(s=meet.s, z=meet.z, paths=paths, requested=requested)


def bag_estimate(bag: PathBag, model: PercolationModel) -> dict[int, float]:
    """Per-vertex contribution of one bag: (hits/|bag|) * kappa.

    Empty bags (disconnected pairs) contribute nothing but still count
    as one sample on the caller's side. Only vertices with a nonzero
    contribution appear in the result.
    """
    if not bag.paths:
        return {}
    weight = model.pair_weight(bag.s, bag.z)
    if weight == 0.0:
        return {}
    counts: dict[int, int] = {}
    for path in bag.paths:
        for v in path[1:-1]:
            counts[v] = counts.get(v, 0) + 1
    inv = 1.0 / len(bag.paths)
    out = {}
    for v, c in counts.items():
        denom = model.minus_s[v]
        if denom > 0.0:
            out[v] = c * inv * weight / denom
    return out


def sample_pair(n: int, rng) -> tuple[int, int]:
    """Uniform ordered pair of distinct vertices."""
    s = int(rng.integers(n))
    z = int(rng.integers(n - 1))
    if z >= s:
        z += 1
    return s, z


def prk_sample(graph: Graph, model: PercolationModel, rng) -> dict[int, float]:
    """One single-path sample: uniform pair, then one uniform shortest path.

    Contributes kappa(s, z, v) to every internal vertex of the drawn path;
    zero for disconnected or non-percolated pairs.
    """
    s, z = sample_pair(graph.n, rng)
    meet = balanced_bidirectional_bfs(graph, s, z)
    if not meet.connected or model.pair_weight(s, z) == 0.0:
        return {}
    bag = sample_paths(meet, alpha=1.0, rng=rng, count=1)
    path = bag.paths[0]
    return {v: model.kappa(s, z, v) for v in path[1:-1]}


def pab_sample(graph: Graph, model: PercolationModel, s: int, z: int) -> dict[int, float]:
    """Pair-conditional sample: full dependency split over the s-z DAG.

    Runs a BFS from s truncated at z's level, then walks the DAG backward
    from z, so each internal v contributes sigma_sz(v)/sigma_sz * kappa.
    """
    if s == z:
        raise ValueError("endpoints must be distinct")
    _, dist, sigma = bfs_level_counts(graph, s, until=z)
    if dist[z] < 0:
        return {}
    weight = model.pair_weight(s, z)
    if weight == 0.0:
        return {}
    sigma_sz = sigma[z]
    # path counts from v to z, restricted to vertices on shortest s-z paths
    omega: dict[int, float] = {z: 1.0}
    level: list[int] = [z]
    out: dict[int, float] = {}
    for depth in range(int(dist[z]), 1, -1):
        nxt: dict[int, float] = {}
        for w in level:
            share = omega[w]
            for u in graph.in_neighbors(w):
                u = int(u)
                if dist[u] == depth - 1:
                    nxt[u] = nxt.get(u, 0.0) + share
        for v, om in nxt.items():
            denom = model.minus_s[v]
            if denom > 0.0:
                out[v] = sigma[v] * om / sigma_sz * weight / denom
        omega = nxt
        level = list(nxt)
    return out
