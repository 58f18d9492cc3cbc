"""Small graph generators for the tests; everything is seeded."""

import io

import numpy as np

from percolator import Graph, load_edge_list


def build(edges, directed=False) -> Graph:
    text = "".join(f"{u} {v}\n" for u, v in edges)
    return load_edge_list(io.StringIO(text), directed=directed)


def path_edges(k):
    return [(i, i + 1) for i in range(k - 1)]


def cycle_edges(k):
    return [(i, (i + 1) % k) for i in range(k)]


def star_edges(leaves):
    return [(0, i) for i in range(1, leaves + 1)]


def complete_edges(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def layered_edges(widths):
    """Stacked complete bipartite layers; layer sizes given by widths."""
    edges = []
    offset = 0
    for a, b in zip(widths, widths[1:]):
        for i in range(a):
            for j in range(b):
                edges.append((offset + i, offset + a + j))
        offset += a
    return edges


def erdos_renyi_edges(n, p, seed, directed=False):
    rng = np.random.default_rng(seed)
    edges = []
    if directed:
        mask = rng.random((n, n)) < p
        np.fill_diagonal(mask, False)
        us, vs = np.nonzero(mask)
    else:
        us, vs = np.triu_indices(n, k=1)
        keep = rng.random(us.size) < p
        us, vs = us[keep], vs[keep]
    edges = list(zip(us.tolist(), vs.tolist()))
    if not edges:
        edges = [(0, 1)]
    return edges


def newman_watts_edges(n, k, add_prob, seed):
    """Ring lattice with k/2 neighbors per side plus random chords.

    Chords are added, never removed, so the graph stays connected.
    """
    rng = np.random.default_rng(seed)
    edges = set()
    half = max(1, k // 2)
    for i in range(n):
        for d in range(1, half + 1):
            j = (i + d) % n
            edges.add((min(i, j), max(i, j)))
    extra = int(add_prob * n * half)
    while extra > 0:
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e not in edges:
            edges.add(e)
            extra -= 1
    return sorted(edges)
