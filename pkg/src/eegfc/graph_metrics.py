"""Node-level centrality metrics on unweighted, undirected graphs.

Every function accepts a :class:`~eegfc.connectivity.BinaryGraph` or a bare
square 0/1 adjacency array and returns a :class:`NodeMetricVector`.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

METRICS = ("degree", "betweenness", "eigenvector", "closeness", "clustering")


class EigenvectorError(ArithmeticError):
    """Eigenvector centrality is undefined or the iteration did not converge."""


@dataclass(frozen=True)
class NodeMetricVector:
    metric: str
    values: np.ndarray

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")


def _adjacency(g):
    adj = getattr(g, "adjacency", g)
    adj = np.asarray(adj)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {adj.shape}")
    return (adj != 0).astype(np.int64)


def _neighbors(adj):
    return [np.flatnonzero(row).tolist() for row in adj]


def degree_centrality(g):
    adj = _adjacency(g)
    n = adj.shape[0]
    if n < 2:
        return NodeMetricVector("degree", np.zeros(n))
    return NodeMetricVector("degree", adj.sum(axis=1) / (n - 1))


def betweenness_centrality(g):
    """Normalized shortest-path betweenness (Brandes accumulation).

    Each unordered pair of distinct endpoints contributes the fraction of
    its shortest paths passing through ``v``; totals are scaled by
    ``2 / ((N-1)(N-2))`` so values lie in [0, 1].
    """
    adj = _adjacency(g)
    n = adj.shape[0]
    bc = np.zeros(n)
    if n < 3:
        return NodeMetricVector("betweenness", bc)
    nbrs = _neighbors(adj)

    for s in range(n):
        stack = []
        preds = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in nbrs[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]

    # every unordered pair was visited from both endpoints
    bc *= 1.0 / ((n - 1) * (n - 2))
    return NodeMetricVector("betweenness", bc)


def eigenvector_centrality(g, max_iter=1000, tol=1e-10):
    """Leading eigenvector of the adjacency matrix, unit Euclidean norm.

    Power iteration on ``A + I`` rather than ``A``: the eigenvectors are the
    same, but the shift keeps bipartite graphs (paths, stars) from
    oscillating between two vectors. Starts from the normalized all-ones
    vector and stops once the L1 change is at most ``n * tol``.

    Raises
    ------
    EigenvectorError
        If the graph has no edges or ``max_iter`` is exhausted.
    """
    adj = _adjacency(g).astype(np.float64)
    n = adj.shape[0]
    if n == 0 or not adj.any():
        raise EigenvectorError("eigenvector centrality is undefined for a graph without edges")
    x = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(max_iter):
        prev = x
        x = prev + adj @ prev
        x /= np.linalg.norm(x)
        if np.abs(x - prev).sum() <= n * tol:
            return NodeMetricVector("eigenvector", x)
    raise EigenvectorError(f"power iteration did not converge in {max_iter} iterations")


def _bfs_distances(nbrs, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def closeness_centrality(g):
    """``(n-1) / sum of distances`` over the ``n`` nodes reachable from ``v``.

    ``n`` counts ``v`` itself. No rescaling by component size is applied, so
    a node in an isolated pair scores 1.0. Isolated nodes score 0.
    """
    adj = _adjacency(g)
    n = adj.shape[0]
    nbrs = _neighbors(adj)
    out = np.zeros(n)
    for v in range(n):
        dist = _bfs_distances(nbrs, v)
        total = sum(dist.values())
        if total > 0:
            out[v] = (len(dist) - 1) / total
    return NodeMetricVector("closeness", out)


def clustering_coefficient(g):
    """Fraction of neighbor pairs that are themselves adjacent.

    ``2 T(v) / (deg(v) (deg(v) - 1))`` with ``T(v)`` the number of triangles
    through ``v``; nodes of degree below 2 score 0.
    """
    adj = _adjacency(g)
    deg = adj.sum(axis=1)
    # diag(A^3) counts each triangle through v twice (both orientations)
    closed_walks = np.einsum("ij,jk,ki->i", adj, adj, adj)
    possible = deg * (deg - 1)
    out = np.zeros(adj.shape[0])
    mask = possible > 0
    out[mask] = closed_walks[mask] / possible[mask]
    return NodeMetricVector("clustering", out)


METRIC_FUNCTIONS = {
    "degree": degree_centrality,
    "betweenness": betweenness_centrality,
    "eigenvector": eigenvector_centrality,
    "closeness": closeness_centrality,
    "clustering": clustering_coefficient,
}
