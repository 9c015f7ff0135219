"""k-means clustering of vertices on [induced degree, weight] and cluster-count policies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .graph import WeightedGraph, iter_bits
from .rng import XorShift64Star

MAX_ITER = 100


@dataclass(frozen=True)
class ClusterPolicy:
    kind: str  # "fixed" | "adaptive"
    W: int

    def __post_init__(self):
        if self.kind not in ("fixed", "adaptive"):
            raise ContractViolation(f"unknown cluster policy {self.kind!r}")


@dataclass(frozen=True)
class Clustering:
    """``clusters[c]`` is the vertex bitmask of cluster ``c``.

    Cluster ids are canonical: clusters are numbered by their smallest vertex.
    """

    clusters: tuple[int, ...]
    total_weights: tuple[int, ...]

    @property
    def assignment(self) -> dict[int, int]:
        return {v: c for c, mask in enumerate(self.clusters) for v in iter_bits(mask)}

    def __len__(self) -> int:
        return len(self.clusters)


def exactness_threshold(W: int) -> int:
    """Subproblem size below which width-W compilation never has to reduce a layer."""
    if W < 2:
        raise ContractViolation("W must be at least 2")
    return 2 * math.ceil(math.log2(W))


def cluster_count(policy: ClusterPolicy, n_sub: int) -> int:
    if n_sub < 1:
        raise ContractViolation("subproblem must contain a vertex")
    if policy.kind == "fixed":
        n_c = 2
    else:
        r = n_sub // exactness_threshold(policy.W)
        n_c = max(r // 2, 1)
    return min(n_c, n_sub)


def features(g: WeightedGraph, s: int) -> tuple[list[int], np.ndarray]:
    """Min-max normalised [induced degree, weight] rows for the vertices of ``s``."""
    verts = list(iter_bits(s))
    raw = np.array(
        [[(g.adj[v] & s).bit_count(), g.weights[v]] for v in verts], dtype=np.float64
    ).reshape(len(verts), 2)
    lo, hi = raw.min(axis=0, initial=np.inf), raw.max(axis=0, initial=-np.inf)
    span = hi - lo
    out = np.zeros_like(raw)
    ok = span > 0
    out[:, ok] = (raw[:, ok] - lo[ok]) / span[ok]
    return verts, out


def _sq_dist(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kmeanspp(x: np.ndarray, k: int, rng: XorShift64Star) -> list[int]:
    n = len(x)
    picks = [rng.randbelow(n)]
    d2 = ((x - x[picks[0]]) ** 2).sum(axis=1)
    while len(picks) < k:
        total = float(d2.sum())
        if total <= 0.0:
            # every remaining point duplicates a center
            taken = set(picks)
            nxt = next(i for i in range(n) if i not in taken)
        else:
            target = rng.random() * total
            cum = np.cumsum(d2)
            nxt = int(np.searchsorted(cum, target, side="right"))
            nxt = min(nxt, n - 1)
            while d2[nxt] <= 0.0:  # guard float edge at the top of cum
                nxt -= 1
        picks.append(nxt)
        d2 = np.minimum(d2, ((x - x[nxt]) ** 2).sum(axis=1))
    return picks


def _repair(labels: np.ndarray, dist: np.ndarray, k: int) -> None:
    """Move the farthest point of a non-singleton cluster into each empty cluster."""
    for c in range(k):
        if (labels == c).any():
            continue
        sizes = np.bincount(labels, minlength=k)
        own = dist[np.arange(len(labels)), labels]
        movable = sizes[labels] > 1
        cand = np.flatnonzero(movable)
        # farthest from its centroid, smallest index on ties
        j = cand[np.argmax(own[cand])]
        labels[j] = c


def lloyd(x: np.ndarray, k: int, rng: XorShift64Star) -> np.ndarray:
    centers = x[_kmeanspp(x, k, rng)].copy()
    labels = None
    for _ in range(MAX_ITER):
        dist = _sq_dist(x, centers)
        new = np.argmin(dist, axis=1)
        _repair(new, dist, k)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            centers[c] = x[labels == c].mean(axis=0)
    return labels


def kmeans(g: WeightedGraph, s: int, n_c: int, seed: int) -> Clustering:
    size = s.bit_count()
    if not 1 <= n_c <= size:
        raise ContractViolation(f"cannot split {size} vertices into {n_c} clusters")
    verts, x = features(g, s)
    if n_c == 1:
        labels = np.zeros(size, dtype=np.intp)
    else:
        labels = lloyd(x, n_c, XorShift64Star(seed))
    masks = [0] * n_c
    for v, c in zip(verts, labels):
        masks[c] |= 1 << v
    masks.sort(key=lambda m: (m & -m))
    return Clustering(
        clusters=tuple(masks),
        total_weights=tuple(g.weight_of(m) for m in masks),
    )
