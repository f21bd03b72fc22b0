"""Entropy-based anomaly scoring over reconstruction errors.

Reconstruction errors are normalized into a probability vector; each node's
anomaly score is its summand of the nonextensive entropy
S_q = (1 - sum p_i^q) / (q - 1), and nodes scoring above mean + c*std are
flagged.  Sweeping q trades sensitivity between rare states (q < 1) and
common states (q > 1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DistributionError, EntropyDomainError

logger = logging.getLogger(__name__)

# below this distance from q = 1 the closed form is numerically singular and
# the Shannon (natural log) limit is used instead
Q_LIMIT_TOL = 1e-9


@dataclass(frozen=True)
class ScoreDistribution:
    """Probability vector over nodes: p_i >= 0, sum p_i = 1 (within 1e-12)."""

    node_ids: tuple[str, ...]
    p: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "p", p)
        if p.ndim != 1 or p.size != len(self.node_ids):
            raise DistributionError(
                f"probability vector length {p.size} != {len(self.node_ids)} node ids"
            )
        if not np.isfinite(p).all() or (p < 0).any():
            raise DistributionError("probabilities must be finite and nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-12:
            raise DistributionError(f"probabilities sum to {total!r}, not 1")

    @property
    def n_states(self) -> int:
        return self.p.size


@dataclass(frozen=True)
class AnomalySet:
    """Nodes whose score strictly exceeds the threshold, sorted by descending score."""

    q: float
    threshold: float
    anomalies: tuple[str, ...]
    scores: np.ndarray = field(repr=False)


def score_distribution(
    re: np.ndarray, node_ids: tuple[str, ...] | None = None
) -> ScoreDistribution:
    """Normalize nonnegative reconstruction errors: p_i = re_i / sum(re)."""
    re = np.asarray(re, dtype=float)
    if re.ndim != 1:
        raise DistributionError(f"reconstruction errors must be a vector, got shape {re.shape}")
    if not np.isfinite(re).all() or (re < 0).any():
        raise DistributionError("reconstruction errors must be finite and nonnegative")
    total = float(re.sum())
    if total <= 0.0:
        raise DistributionError("all reconstruction errors are zero; scores are undefined")
    if node_ids is None:
        node_ids = tuple(f"n{i}" for i in range(re.size))
    return ScoreDistribution(node_ids=tuple(node_ids), p=re / total)


def shannon_entropy(dist: ScoreDistribution) -> float:
    """Shannon entropy in bits, sum p_i log2(1/p_i); zero terms contribute 0."""
    p = dist.p[dist.p > 0.0]
    return float(-(p * np.log2(p)).sum())


def _shannon_nat(p: np.ndarray) -> float:
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def tsallis_entropy(dist: ScoreDistribution, q: float) -> float:
    """S_q = (1 - sum p_i^q) / (q - 1); natural-log Shannon entropy as q -> 1."""
    p = dist.p
    if abs(q - 1.0) <= Q_LIMIT_TOL:
        return _shannon_nat(p)
    if q <= 0.0 and (p == 0.0).any():
        raise EntropyDomainError(f"zero probability with q = {q} <= 0")
    return float((1.0 - (p**q).sum()) / (q - 1.0))


def node_scores(dist: ScoreDistribution, q: float) -> np.ndarray:
    """Per-node summand (p_i - p_i^q)/(q - 1); the scores sum to S_q.

    At the q -> 1 limit the summand is -p_i ln(p_i).
    """
    p = dist.p
    if abs(q - 1.0) <= Q_LIMIT_TOL:
        scores = np.zeros_like(p)
        nz = p > 0.0
        scores[nz] = -p[nz] * np.log(p[nz])
        return scores
    if q <= 0.0 and (p == 0.0).any():
        raise EntropyDomainError(f"zero probability with q = {q} <= 0")
    return (p - p**q) / (q - 1.0)


def detect(
    scores: np.ndarray,
    node_ids: tuple[str, ...],
    c: float = 2.0,
    q: float = math.nan,
) -> AnomalySet:
    """Flag nodes with score strictly above mean + c * std (population std)."""
    scores = np.asarray(scores, dtype=float)
    if not np.isfinite(scores).all():
        raise DistributionError("scores must be finite")
    if scores.size != len(node_ids):
        raise DistributionError(f"{scores.size} scores for {len(node_ids)} node ids")
    threshold = float(scores.mean() + c * scores.std())
    flagged = [i for i in range(scores.size) if scores[i] > threshold]
    flagged.sort(key=lambda i: (-scores[i], i))
    return AnomalySet(
        q=q,
        threshold=threshold,
        anomalies=tuple(node_ids[i] for i in flagged),
        scores=scores,
    )


def default_q_grid(step: float = 0.1) -> tuple[float, ...]:
    """The q grid -0.5 .. 0.5 at the given step (0.1 default, 0.05 available)."""
    n = round(1.0 / step)
    return tuple(round(-0.5 + i * step, 12) for i in range(n + 1))


def sweep_q(
    re: np.ndarray,
    node_ids: tuple[str, ...] | None = None,
    q_grid: tuple[float, ...] | None = None,
    c: float = 2.0,
) -> list[tuple[float, AnomalySet]]:
    """One detection pass per q over the shared normalized distribution.

    Grid values with q <= 0 are skipped (with a warning) when any p_i is 0,
    where p_i^q is undefined.
    """
    dist = score_distribution(re, node_ids)
    if q_grid is None:
        q_grid = default_q_grid()
    has_zero = bool((dist.p == 0.0).any())
    results: list[tuple[float, AnomalySet]] = []
    for q in q_grid:
        if q <= 0.0 and has_zero:
            logger.warning("skipping q=%g: distribution has zero-probability states", q)
            continue
        scores = node_scores(dist, q)
        results.append((q, detect(scores, dist.node_ids, c=c, q=q)))
    return results
