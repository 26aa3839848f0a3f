"""Seeded synthetic networks: ER, preferential attachment, planted stitching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, build_graph, connected_components

STITCH_RETRY_LIMIT = 100


@dataclass(frozen=True)
class PlantedNetwork:
    """A stitched multi-community graph with known ground truth.

    ``planted_labels`` gives each node the index of the part it came from;
    ``planted_boundary`` lists the sampled cross-linkers together with the
    partners they were wired to.
    """

    graph: Graph
    planted_labels: tuple[int, ...]
    planted_boundary: tuple[int, ...]


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """ER random graph: each unordered pair is an edge with probability p."""
    if n < 1:
        raise ValueError("need at least one node")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    edges = []
    if n > 1:
        draws = rng.random(n * (n - 1) // 2)
        idx = 0
        for u in range(n):
            for v in range(u + 1, n):
                if draws[idx] < p:
                    edges.append((u, v))
                idx += 1
    return build_graph(n, edges)


def preferential_attachment(n: int, m: int, seed: int = 0) -> Graph:
    """Degree-proportional growth from a seed clique of m + 1 nodes.

    Each arriving node attaches m edges to distinct existing nodes, chosen
    with probability proportional to current degree. Yields a tree for
    m = 1 and C(m+1, 2) + (n - m - 1) * m edges in general.
    """
    if m < 1:
        raise ValueError("attachment count must be at least 1")
    if n <= m:
        raise ValueError(f"need more than {m} nodes to attach {m} edges each")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]
    # one entry per endpoint, so uniform picks are degree-proportional
    repeated: list[int] = [v for e in edges for v in e]
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in sorted(targets):
            edges.append((t, new))
            repeated.append(t)
        repeated.extend([new] * m)
    return build_graph(n, edges)


def connect_communities(
    parts: list[Graph], k: int, seed: int = 0
) -> PlantedNetwork:
    """Stitch disjoint connected parts into one graph via k random cross edges.

    Node ids of each part are offset into one id space. k distinct nodes
    are sampled across the union; each gets a single edge to a uniformly
    chosen node of a uniformly chosen different part. The construction is
    retried until the stitched graph is one connected component, erroring
    out after a bounded number of attempts.
    """
    if len(parts) < 2:
        raise ValueError("need at least two parts to stitch")
    for i, part in enumerate(parts):
        if part.num_nodes == 0:
            raise ValueError(f"part {i} is empty")
        if len(connected_components(part).components) != 1:
            raise ValueError(f"part {i} is not connected")
    if k < len(parts) - 1:
        raise ValueError(
            f"{k} cross edges cannot connect {len(parts)} parts"
        )
    offsets = []
    total = 0
    for part in parts:
        offsets.append(total)
        total += part.num_nodes
    if k > total:
        raise ValueError(f"cannot select {k} distinct nodes from {total}")
    labels = []
    base_edges = []
    for i, part in enumerate(parts):
        labels.extend([i] * part.num_nodes)
        base_edges.extend((u + offsets[i], v + offsets[i]) for u, v in part.edges)

    rng = np.random.default_rng(seed)
    for _ in range(STITCH_RETRY_LIMIT):
        edge_set = set(base_edges)
        selected = [int(v) for v in rng.choice(total, size=k, replace=False)]
        boundary = set(selected)
        ok = True
        for s in selected:
            others = [i for i in range(len(parts)) if i != labels[s]]
            partner = -1
            for _attempt in range(STITCH_RETRY_LIMIT):
                p = others[int(rng.integers(len(others)))]
                t = offsets[p] + int(rng.integers(parts[p].num_nodes))
                e = (s, t) if s < t else (t, s)
                if e not in edge_set:
                    edge_set.add(e)
                    partner = t
                    break
            if partner < 0:
                ok = False
                break
            boundary.add(partner)
        if not ok:
            continue
        g = build_graph(total, sorted(edge_set))
        if len(connected_components(g).components) == 1:
            return PlantedNetwork(
                graph=g,
                planted_labels=tuple(labels),
                planted_boundary=tuple(sorted(boundary)),
            )
    raise ValueError(f"failed to build a connected stitching in {STITCH_RETRY_LIMIT} tries")
