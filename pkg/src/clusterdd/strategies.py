"""Clustering-based order sources: Cluster-by-Cluster, Pick-and-Sort, Pick-and-Sort-VO."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .clustering import ClusterPolicy, Clustering, cluster_count, exactness_threshold, kmeans
from .dd import DiagramStats, Layer
from .errors import ContractViolation
from .graph import WeightedGraph
from .ordering import MinOrder, min_next

STRATEGIES = ("baseline", "cbc", "pas", "pas-vo")
POLICIES = ("fixed", "adaptive")


@dataclass(frozen=True)
class StrategyConfig:
    strategy: str = "baseline"
    policy: str = "fixed"
    W: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ContractViolation(f"unknown strategy {self.strategy!r}")
        if self.policy not in POLICIES:
            raise ContractViolation(f"unknown policy {self.policy!r}")
        if self.W < 2:
            raise ContractViolation("W must be at least 2")

    @property
    def cluster_policy(self) -> ClusterPolicy:
        return ClusterPolicy(self.policy, self.W)

    @property
    def label(self) -> str:
        return self.strategy if self.strategy == "baseline" else f"{self.strategy}/{self.policy}"


@dataclass(frozen=True)
class PickedVariable:
    vertex: int
    score: int
    weight: int


class CbCOrder:
    """Exhaust clusters one at a time, lightest total weight first."""

    def __init__(self, clustering: Clustering):
        self.clustering = clustering
        ranked = sorted(range(len(clustering)), key=lambda c: (clustering.total_weights[c], c))
        self.cluster_order = ranked
        self._queue = deque(clustering.clusters[c] for c in ranked)

    def next_variable(self, layer: Layer, unfixed: int, stats: DiagramStats) -> int:
        while self._queue and not self._queue[0]:
            self._queue.popleft()
        if not self._queue:
            raise ContractViolation("cluster-by-cluster order exhausted")
        v = min_next(layer, self._queue[0], stats).vertex
        self._queue[0] &= ~(1 << v)
        return v


class PaSOrder:
    """One MIN pick per nonempty cluster per round, emitted as a sorted batch.

    ``by_score=False`` sorts a batch by weight (heaviest first); ``True`` sorts
    by the MIN count recorded at pick time.  All picks of a round are scored
    against the layer current when the round starts.
    """

    def __init__(self, g: WeightedGraph, clustering: Clustering, by_score: bool):
        self.g = g
        self.clustering = clustering
        self.by_score = by_score
        self._remaining = list(clustering.clusters)
        self._batch: deque[PickedVariable] = deque()
        self.batches: list[list[PickedVariable]] = []

    def _pick_round(self, layer: Layer, stats: DiagramStats) -> None:
        picks = []
        for c, rem in enumerate(self._remaining):
            if not rem:
                continue
            score = min_next(layer, rem, stats)
            self._remaining[c] = rem & ~(1 << score.vertex)
            picks.append(PickedVariable(score.vertex, score.count, self.g.weights[score.vertex]))
        if self.by_score:
            picks.sort(key=lambda p: (p.score, p.vertex))
        else:
            picks.sort(key=lambda p: (-p.weight, p.vertex))
        self.batches.append(picks)
        self._batch.extend(picks)

    def next_variable(self, layer: Layer, unfixed: int, stats: DiagramStats) -> int:
        if not self._batch:
            self._pick_round(layer, stats)
        if not self._batch:
            raise ContractViolation("pick-and-sort order exhausted")
        return self._batch.popleft().vertex


def cbc_order(g: WeightedGraph, s: int, cfg: StrategyConfig) -> CbCOrder:
    clustering = kmeans(g, s, cluster_count(cfg.cluster_policy, s.bit_count()), cfg.seed)
    return CbCOrder(clustering)


def pas_order(g: WeightedGraph, s: int, cfg: StrategyConfig, by_score: bool = False) -> PaSOrder:
    clustering = kmeans(g, s, cluster_count(cfg.cluster_policy, s.bit_count()), cfg.seed)
    return PaSOrder(g, clustering, by_score)


def make_order_source(cfg: StrategyConfig, g: WeightedGraph, s: int):
    """Order source for a relaxed compilation of the subproblem ``s``.

    Small subproblems (at most ``exactness_threshold(W)`` vertices) and the
    baseline strategy use plain MIN over all unfixed vertices.
    """
    size = s.bit_count()
    if cfg.strategy == "baseline" or size <= exactness_threshold(cfg.W):
        return MinOrder()
    if cfg.strategy == "cbc":
        return cbc_order(g, s, cfg)
    return pas_order(g, s, cfg, by_score=cfg.strategy == "pas-vo")
