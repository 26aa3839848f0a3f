"""Boundary extraction: edges whose endpoints carry different community labels."""

from __future__ import annotations

from dataclasses import dataclass, field

from .community import CommunityLabeling
from .graph import Graph


@dataclass(frozen=True)
class BoundarySet:
    """Cross-community edges and their endpoints.

    ``boundary_edges`` keeps edge-list order; ``boundary_nodes`` is sorted
    ascending so downstream accumulation order is reproducible.
    ``home_community`` maps each boundary node to its own community label,
    which is the community a walker launched from that node is confined to.
    """

    boundary_edges: tuple[tuple[int, int], ...]
    boundary_nodes: tuple[int, ...]
    home_community: dict[int, int] = field(default_factory=dict)


def boundary_edges(g: Graph, labeling: CommunityLabeling) -> BoundarySet:
    """Collect every edge whose two endpoints have different labels.

    Relabeling communities by any permutation leaves the result unchanged;
    only label equality matters.
    """
    if len(labeling.labels) != g.num_nodes:
        raise ValueError(
            f"labeling covers {len(labeling.labels)} nodes, graph has {g.num_nodes}"
        )
    labels = labeling.labels
    crossing = tuple((u, v) for u, v in g.edges if labels[u] != labels[v])
    nodes = sorted({v for e in crossing for v in e})
    return BoundarySet(
        boundary_edges=crossing,
        boundary_nodes=tuple(nodes),
        home_community={v: labels[v] for v in nodes},
    )
