"""Descriptive network statistics: degrees, isolation, clustering."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corrnet import MarketGraph


@dataclass(frozen=True)
class GraphSummary:
    """Scalar per-network summary row.

    mean/std degree use the population convention (divisor N); the clustering
    coefficient is the average local clustering with degree < 2 nodes
    contributing 0.
    """

    node_count: int
    edge_count: int
    isolated_fraction: float
    max_degree: int
    mean_degree: float
    std_degree: float
    clustering_coeff: float


def degree_sequence(graph: MarketGraph) -> list[int]:
    """Node degrees in asset order; the sum equals twice the edge count."""
    degrees = [0] * graph.k
    for i, j in graph.edges:
        degrees[i] += 1
        degrees[j] += 1
    return degrees


def local_clustering(graph: MarketGraph) -> list[float]:
    """Watts-Strogatz local clustering per node; degree < 2 contributes 0."""
    nbrs = graph.neighbor_sets()
    coeffs: list[float] = []
    for v in range(graph.k):
        neighborhood = nbrs[v]
        d = len(neighborhood)
        if d < 2:
            coeffs.append(0.0)
            continue
        links = 0
        for u in neighborhood:
            links += len(nbrs[u] & neighborhood)
        # each neighbor-neighbor link counted twice above
        coeffs.append(links / (d * (d - 1)))
    return coeffs


def summarize(graph: MarketGraph) -> GraphSummary:
    degrees = degree_sequence(graph)
    k = graph.k
    if k == 0:
        return GraphSummary(0, 0, 0.0, 0, 0.0, 0.0, 0.0)
    # accumulate over sorted values so relabeling nodes cannot perturb the
    # floating-point sums (summaries are exactly permutation invariant)
    ordered = sorted(degrees)
    mean_deg = sum(ordered) / k
    var_deg = sum((d - mean_deg) ** 2 for d in ordered) / k
    coeffs = sorted(local_clustering(graph))
    return GraphSummary(
        node_count=k,
        edge_count=graph.edge_count,
        isolated_fraction=sum(1 for d in degrees if d == 0) / k,
        max_degree=max(degrees),
        mean_degree=mean_deg,
        std_degree=math.sqrt(var_deg),
        clustering_coeff=sum(coeffs) / k,
    )


def degree_rank_rows(graph: MarketGraph) -> list[tuple[int, int]]:
    """(rank, degree) rows, degrees sorted descending, rank starting at 1."""
    degrees = sorted(degree_sequence(graph), reverse=True)
    return [(rank, d) for rank, d in enumerate(degrees, start=1)]


def degree_count_rows(graph: MarketGraph) -> list[tuple[int, int]]:
    """(degree, count) rows for the degree distribution, ascending degree."""
    counts: dict[int, int] = {}
    for d in degree_sequence(graph):
        counts[d] = counts.get(d, 0) + 1
    return sorted(counts.items())
