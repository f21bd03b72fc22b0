"""Correlation-thresholded market graphs and their MST reduction.

Pipeline per period: covariance (population divisor T) -> Pearson correlation
-> nearest-rank percentile threshold tau -> winner-take-all graph -> minimum
spanning forest under the Mantegna distance d = sqrt(2 (1 - rho)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateAssetError, InsufficientDataError
from .ingest import ReturnsMatrix


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric k x k Pearson matrix with unit diagonal over named assets."""

    assets: tuple[str, ...]
    rho: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.assets)

    def upper_triangle(self) -> np.ndarray:
        """The k(k-1)/2 strictly-upper-triangle correlations, row-major."""
        i, j = np.triu_indices(self.k, k=1)
        return self.rho[i, j]


@dataclass(frozen=True)
class MarketGraph:
    """Undirected graph over assets; edges keyed (i, j) with i < j.

    Edge weights are the correlations that created the edges, so every
    weight is >= the threshold used to build the graph.
    """

    assets: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not 0 <= i < j < len(self.assets):
                raise ConfigError(f"edge ({i}, {j}) invalid for {len(self.assets)} nodes")

    @property
    def k(self) -> int:
        return len(self.assets)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbor_sets(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in self.assets]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def adjacency_matrix(self) -> np.ndarray:
        """Binary k x k adjacency with zero diagonal (no self-loops)."""
        adj = np.zeros((self.k, self.k), dtype=float)
        for i, j in self.edges:
            adj[i, j] = 1.0
            adj[j, i] = 1.0
        return adj

    def components(self) -> list[list[int]]:
        """Connected components as sorted node-index lists, smallest node first."""
        dsu = _DisjointSet(self.k)
        for i, j in self.edges:
            dsu.union(i, j)
        groups: dict[int, list[int]] = {}
        for v in range(self.k):
            groups.setdefault(dsu.find(v), []).append(v)
        return sorted(groups.values(), key=lambda g: g[0])


def covariance_matrix(panel: ReturnsMatrix) -> np.ndarray:
    """Population covariance (divisor T) of the panel columns.

    The upper triangle is computed once and mirrored, so the result is
    exactly symmetric.
    """
    X = panel.values
    T = X.shape[0]
    if T < 2:
        raise InsufficientDataError(f"covariance needs at least 2 rows, got {T}")
    centered = X - X.mean(axis=0)
    raw = centered.T @ centered / T
    return np.triu(raw) + np.triu(raw, k=1).T


def correlation_matrix(panel: ReturnsMatrix) -> CorrelationMatrix:
    """Pearson correlations rho[u][v] = cov(u,v) / (std(u) std(v)).

    Raises DegenerateAssetError naming any constant (zero-variance) column.
    """
    X = panel.values
    constant = [
        panel.assets[j]
        for j in range(panel.n_assets)
        if np.all(X[:, j] == X[0, j])
    ]
    if constant:
        raise DegenerateAssetError(f"zero-variance asset columns: {constant}")
    cov = covariance_matrix(panel)
    std = np.sqrt(np.diag(cov))
    zero = [panel.assets[j] for j in range(panel.n_assets) if std[j] == 0.0]
    if zero:
        raise DegenerateAssetError(f"zero-variance asset columns: {zero}")
    rho = cov / np.outer(std, std)
    rho = np.triu(rho) + np.triu(rho, k=1).T
    np.clip(rho, -1.0, 1.0, out=rho)
    np.fill_diagonal(rho, 1.0)
    if not np.isfinite(rho).all():
        raise DegenerateAssetError("non-finite correlation entries")
    return CorrelationMatrix(assets=panel.assets, rho=rho)


def percentile_threshold(corr: CorrelationMatrix, percentile: float) -> float:
    """Nearest-rank percentile of the strictly-upper-triangle correlations.

    tau = ascending-sorted value at 1-based index ceil(p/100 * M) with
    M = k(k-1)/2.  No interpolation, so ties are handled deterministically.
    """
    if not 0.0 < percentile < 100.0:
        raise ConfigError(f"percentile must lie in (0, 100), got {percentile}")
    if corr.k < 2:
        raise ConfigError("percentile threshold needs at least 2 assets")
    tri = np.sort(corr.upper_triangle())
    M = tri.size
    # p*M/100 in this operation order keeps exact integer ranks exact; the
    # snap guards float dust when the true rank lands on an integer.
    rank = percentile * M / 100.0
    nearest = round(rank)
    idx = int(nearest) if abs(rank - nearest) < 1e-9 else math.ceil(rank)
    idx = min(max(idx, 1), M)
    return float(tri[idx - 1])


def build_thresholded_graph(corr: CorrelationMatrix, tau: float) -> MarketGraph:
    """Winner-take-all graph: edge (u, v) iff corr(u, v) >= tau, u != v."""
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    k = corr.k
    for i in range(k):
        for j in range(i + 1, k):
            w = corr.rho[i, j]
            if w >= tau:
                edges.append((i, j))
                weights.append(float(w))
    return MarketGraph(assets=corr.assets, edges=tuple(edges), weights=tuple(weights))


def mantegna_distance(rho: float) -> float:
    """Map a correlation in [-1, 1] to the metric distance sqrt(2 (1 - rho))."""
    return math.sqrt(max(2.0 * (1.0 - rho), 0.0))


class _DisjointSet:
    """Union-find with union by rank and path compression."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def mst_reduce(graph: MarketGraph) -> MarketGraph:
    """Minimum spanning forest under the Mantegna distance.

    Kruskal per connected component; each component with n_c nodes keeps
    exactly n_c - 1 edges, choosing the highest-correlation links.  Ties are
    broken by (min node index, max node index) so results are identical
    across runs and platforms.  Edge weights remain correlations.
    """
    order = sorted(
        range(graph.edge_count),
        key=lambda e: (mantegna_distance(graph.weights[e]), graph.edges[e]),
    )
    dsu = _DisjointSet(graph.k)
    kept: list[tuple[int, int]] = []
    kept_w: list[float] = []
    for e in order:
        i, j = graph.edges[e]
        if dsu.union(i, j):
            kept.append((i, j))
            kept_w.append(graph.weights[e])
    pairs = sorted(zip(kept, kept_w))
    return MarketGraph(
        assets=graph.assets,
        edges=tuple(p for p, _ in pairs),
        weights=tuple(w for _, w in pairs),
    )


def to_dot(graph: MarketGraph) -> str:
    """DOT export: undirected graph, asset-label node IDs, 6-decimal weights."""
    lines = ["graph {"]
    for name in graph.assets:
        lines.append(f'  "{name}";')
    for (i, j), w in zip(graph.edges, graph.weights):
        lines.append(f'  "{graph.assets[i]}" -- "{graph.assets[j]}" [weight={w:.6f}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
