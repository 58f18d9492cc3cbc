"""Compressed adjacency graphs loaded from whitespace edge lists.

Vertices are renumbered to dense integers [0, n) in first-appearance order;
the original ids are kept so reports can be emitted in the input's id space.
Graphs are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np


class EdgeListParseError(ValueError):
    """Raised when an edge-list line cannot be parsed; message names the line."""


@dataclass(frozen=True)
class Graph:
    """Unweighted graph in compressed sparse row form.

    ``fwd_offsets``/``fwd_targets`` hold the out-adjacency. For directed
    graphs ``bwd_offsets``/``bwd_targets`` mirror it arc-for-arc; for
    undirected graphs they are the same arrays (every edge is stored in
    both orientations, so offsets[n] == 2*m).
    """

    n: int
    m: int
    directed: bool
    fwd_offsets: np.ndarray
    fwd_targets: np.ndarray
    bwd_offsets: np.ndarray
    bwd_targets: np.ndarray
    orig_ids: np.ndarray
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    _dense_of: dict = field(default_factory=dict, repr=False)

    def out_neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self.fwd_targets[self.fwd_offsets[v]:self.fwd_offsets[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self.bwd_targets[self.bwd_offsets[v]:self.bwd_offsets[v + 1]]

    def degree_forward(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.fwd_offsets[v + 1] - self.fwd_offsets[v])

    @property
    def out_degrees(self) -> np.ndarray:
        return np.diff(self.fwd_offsets)

    @property
    def in_degrees(self) -> np.ndarray:
        return np.diff(self.bwd_offsets)

    def dense_id(self, original_id: int) -> int:
        return self._dense_of[original_id]

    def reversed(self) -> "Graph":
        """Graph with every arc flipped (identity for undirected graphs)."""
        if not self.directed:
            return self
        return Graph(
            n=self.n, m=self.m, directed=True,
            fwd_offsets=self.bwd_offsets, fwd_targets=self.bwd_targets,
            bwd_offsets=self.fwd_offsets, bwd_targets=self.fwd_targets,
            orig_ids=self.orig_ids,
            self_loops_dropped=self.self_loops_dropped,
            duplicates_dropped=self.duplicates_dropped,
            _dense_of=self._dense_of,
        )

    def expand_frontier(self, frontier: np.ndarray, backward: bool = False):
        """All arcs leaving ``frontier``: (repeated sources, targets).

        Vectorized gather over the CSR arrays; ``backward=True`` follows
        in-arcs instead of out-arcs.
        """
        offsets = self.bwd_offsets if backward else self.fwd_offsets
        targets = self.bwd_targets if backward else self.fwd_targets
        starts = offsets[frontier]
        counts = offsets[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        srcs = np.repeat(frontier, counts)
        cum = np.cumsum(counts)
        shift = np.repeat(starts - np.concatenate(([0], cum[:-1])), counts)
        nbrs = targets[np.arange(total, dtype=np.int64) + shift]
        return srcs, nbrs

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")


def _iter_lines(source):
    """Lines of a path, blob, or stream; bytes are decoded as ascii."""
    if isinstance(source, bytes):
        return io.StringIO(source.decode("ascii")).readlines()
    if isinstance(source, str):
        if "\n" in source:
            return io.StringIO(source).readlines()
        with open(source, "rb") as fh:
            return [line.decode("ascii") for line in fh]
    lines = source.readlines()
    if lines and isinstance(lines[0], bytes):
        return [line.decode("ascii") for line in lines]
    return lines


def _build_csr(n: int, src: np.ndarray, dst: np.ndarray):
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(offsets, src + 1, 1)
    np.cumsum(offsets, out=offsets)
    return offsets, dst.astype(np.int64, copy=False)


def load_edge_list(source, directed: bool = False) -> Graph:
    """Parse a SNAP-style edge list into a :class:`Graph`.

    ``source`` may be a path, a text or binary stream, or a str/bytes blob.
    Lines starting with '#' or '%' are comments. Each remaining line must
    hold exactly two integer tokens. Self-loops and duplicate edges are
    dropped (duplicates orientation-insensitively for undirected graphs);
    counters of both are kept on the returned graph.
    """
    lines = _iter_lines(source)
    dense_of: dict[int, int] = {}
    orig_ids: list[int] = []
    edges: list[tuple[int, int]] = []
    loops = 0

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#%":
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise EdgeListParseError(
                f"line {lineno}: expected two integer tokens, got {len(tokens)}")
        try:
            u_orig, v_orig = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(
                f"line {lineno}: non-integer token in {stripped!r}") from None
        u = dense_of.setdefault(u_orig, len(dense_of))
        if u == len(orig_ids):
            orig_ids.append(u_orig)
        v = dense_of.setdefault(v_orig, len(dense_of))
        if v == len(orig_ids):
            orig_ids.append(v_orig)
        if u == v:
            loops += 1
            continue
        edges.append((u, v))

    if not dense_of or not edges:
        raise EdgeListParseError("empty graph: no edges found")

    n = len(orig_ids)
    raw = len(edges)
    if directed:
        uniq = sorted(set(edges))
        src = np.fromiter((e[0] for e in uniq), dtype=np.int64, count=len(uniq))
        dst = np.fromiter((e[1] for e in uniq), dtype=np.int64, count=len(uniq))
        m = len(uniq)
        fwd_off, fwd_tgt = _build_csr(n, src, dst)
        bwd_off, bwd_tgt = _build_csr(n, dst, src)
    else:
        uniq = sorted({(u, v) if u < v else (v, u) for (u, v) in edges})
        m = len(uniq)
        src = np.fromiter((e[i] for e in uniq for i in (0, 1)), dtype=np.int64, count=2 * m)
        both_src = src[0::2]
        both_dst = src[1::2]
        all_src = np.concatenate([both_src, both_dst])
        all_dst = np.concatenate([both_dst, both_src])
        fwd_off, fwd_tgt = _build_csr(n, all_src, all_dst)
        bwd_off, bwd_tgt = fwd_off, fwd_tgt

    return Graph(
        n=n, m=m, directed=directed,
        fwd_offsets=fwd_off, fwd_targets=fwd_tgt,
        bwd_offsets=bwd_off, bwd_targets=bwd_tgt,
        orig_ids=np.asarray(orig_ids, dtype=np.int64),
        self_loops_dropped=loops,
        duplicates_dropped=raw - m,
        _dense_of=dense_of,
    )


def write_edge_list(graph: Graph, target) -> None:
    """Serialize the graph as one 'u v' line per edge, in original ids.

    Undirected edges are emitted once; directed arcs all. Reloading the
    output reproduces an isomorphic graph.
    """
    own = isinstance(target, str)
    fh = open(target, "w") if own else target
    try:
        ids = graph.orig_ids
        for u in range(graph.n):
            for v in graph.out_neighbors(u):
                v = int(v)
                if graph.directed or u < v:
                    fh.write(f"{ids[u]} {ids[v]}\n")
    finally:
        if own:
            fh.close()


def bfs_level_counts(graph: Graph, source: int, until: int | None = None):
    """Level-synchronous BFS with shortest-path counting.

    Returns (levels, dist, sigma): ``levels`` is the list of frontiers,
    ``dist`` is -1 for unreached vertices, ``sigma[v]`` counts shortest
    source->v paths (float64; counts can exceed integer range).
    With ``until`` set, stops as soon as the level containing it is
    complete, leaving deeper vertices unexplored.
    """
    n = graph.n
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    dist[source] = 0
    sigma[source] = 1.0
    frontier = np.array([source], dtype=np.int64)
    levels = [frontier]
    depth = 0
    while frontier.size:
        srcs, nbrs = graph.expand_frontier(frontier)
        if nbrs.size == 0:
            break
        fresh = nbrs[dist[nbrs] < 0]
        new = np.unique(fresh)
        dist[new] = depth + 1
        into_next = dist[nbrs] == depth + 1
        if into_next.any():
            sigma += np.bincount(nbrs[into_next],
                                 weights=sigma[srcs[into_next]], minlength=n)
        frontier = new
        depth += 1
        if frontier.size:
            levels.append(frontier)
        if until is not None and dist[until] >= 0:
            break
    return levels, dist, sigma
