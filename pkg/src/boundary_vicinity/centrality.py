"""Shortest-path betweenness (two independent routes) and top-k rank overlap."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph

BRUTEFORCE_NODE_LIMIT = 200


@dataclass(frozen=True)
class OverlapCurve:
    """Top-k agreement between two score vectors for each requested k."""

    ks: tuple[int, ...]
    proportions: tuple[float, ...]


def _bfs_counts(g: Graph, source: int) -> tuple[list[int], list[int], list[int], list[list[int]]]:
    """BFS from source: visit order, distances, geodesic counts, predecessors."""
    dist = [-1] * g.num_nodes
    sigma = [0] * g.num_nodes
    preds: list[list[int]] = [[] for _ in range(g.num_nodes)]
    dist[source] = 0
    sigma[source] = 1
    order: list[int] = []
    queue = deque([source])
    while queue:
        u = queue.popleft()
        order.append(u)
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
            if dist[w] == dist[u] + 1:
                sigma[w] += sigma[u]
                preds[w].append(u)
    return order, dist, sigma, preds


def betweenness_brandes(g: Graph) -> np.ndarray:
    """Exact betweenness via per-source dependency accumulation.

    For each node v the score is the sum over unordered node pairs (i, j),
    i != v != j, of the fraction of i-j geodesics passing through v.
    Unreachable pairs contribute nothing.
    """
    scores = np.zeros(g.num_nodes)
    for s in range(g.num_nodes):
        order, _, sigma, preds = _bfs_counts(g, s)
        delta = [0.0] * g.num_nodes
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                scores[w] += delta[w]
    # per-source accumulation counts each unordered pair twice
    return scores / 2.0


def betweenness_bruteforce(g: Graph) -> np.ndarray:
    """Independent betweenness oracle by explicit path-count convolution.

    Builds the full all-pairs distance and geodesic-count matrices with one BFS
    per node, then for every unordered pair (s, t) credits each interior
    vertex v on a geodesic with sigma(s,v) * sigma(v,t) / sigma(s,t).
    Guarded to small graphs; quadratic memory and cubic time.
    """
    n = g.num_nodes
    if n > BRUTEFORCE_NODE_LIMIT:
        raise ValueError(f"brute-force betweenness limited to {BRUTEFORCE_NODE_LIMIT} nodes")
    dist = np.full((n, n), -1, dtype=np.int64)
    sigma = np.zeros((n, n), dtype=np.int64)
    for s in range(n):
        _, d, counts, _ = _bfs_counts(g, s)
        dist[s] = d
        sigma[s] = counts
    scores = np.zeros(n)
    for s in range(n):
        for t in range(s + 1, n):
            if dist[s, t] < 0:
                continue
            on_geodesic = (dist[s] >= 0) & (dist[s] + dist[t] == dist[s, t])
            on_geodesic[s] = on_geodesic[t] = False
            through = sigma[s] * sigma[t]
            scores[on_geodesic] += through[on_geodesic] / sigma[s, t]
    return scores


def top_k_nodes(scores: Sequence[float], k: int) -> list[int]:
    """Top k node ids by descending score, ties broken by ascending id."""
    values = np.asarray(scores, dtype=float)
    if not (0 < k <= len(values)):
        raise ValueError(f"k must be in [1, {len(values)}], got {k}")
    order = np.lexsort((np.arange(len(values)), -values))
    return [int(v) for v in order[:k]]


def rank_overlap(a: Sequence[float], b: Sequence[float], ks: Sequence[int]) -> OverlapCurve:
    """Proportion of shared members between the two top-k sets, per k.

    Symmetric in (a, b) and invariant under strictly monotone transforms of
    either vector, since only the induced rankings matter.
    """
    if len(a) != len(b):
        raise ValueError(f"score vectors differ in length: {len(a)} vs {len(b)}")
    proportions = []
    for k in ks:
        top_a = set(top_k_nodes(a, k))
        top_b = set(top_k_nodes(b, k))
        proportions.append(len(top_a & top_b) / k)
    return OverlapCurve(ks=tuple(int(k) for k in ks), proportions=tuple(proportions))
