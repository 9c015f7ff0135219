"""Variable ordering: the MIN dynamic heuristic and a static weight order."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dd import DiagramStats, Layer
from .errors import ContractViolation
from .graph import WeightedGraph, iter_bits


@dataclass(frozen=True)
class MinScore:
    vertex: int
    count: int


def _bit_matrix(layer: Layer) -> np.ndarray:
    """Rows are states, columns are vertices (uint8 0/1).  Cached per layer."""
    if layer._bits is None:
        states = layer.values.keys()
        nbytes = max((max(s.bit_length() for s in states) + 7) // 8, 1)
        buf = b"".join(s.to_bytes(nbytes, "little") for s in states)
        raw = np.frombuffer(buf, dtype=np.uint8).reshape(len(layer), nbytes)
        layer._bits = np.unpackbits(raw, axis=1, bitorder="little")
    return layer._bits


def appearance_counts(layer: Layer, vertices: list[int]) -> np.ndarray:
    """Number of layer states containing each vertex of ``vertices``."""
    bits = _bit_matrix(layer)
    idx = np.asarray(vertices, dtype=np.intp)
    inside = idx < bits.shape[1]
    counts = np.zeros(len(idx), dtype=np.int64)
    if inside.any():
        counts[inside] = bits[:, idx[inside]].sum(axis=0, dtype=np.int64)
    return counts


def min_next(layer: Layer, candidates: int, stats: DiagramStats | None = None) -> MinScore:
    """Candidate appearing in the fewest layer states; ties go to the smallest index.

    Every candidate is scored once, and ``stats.candidate_evaluations`` grows
    by the number of candidates.
    """
    if not candidates:
        raise ContractViolation("min_next needs at least one candidate")
    cand = list(iter_bits(candidates))
    if stats is not None:
        stats.candidate_evaluations += len(cand)
    if len(cand) == 1:
        v = cand[0]
        return MinScore(v, int(appearance_counts(layer, cand)[0]))
    counts = appearance_counts(layer, cand)
    # cand is ascending, so argmin's first-hit rule is the index tie-break
    i = int(np.argmin(counts))
    return MinScore(cand[i], int(counts[i]))


def static_weight_order(g: WeightedGraph, s: int) -> list[int]:
    return sorted(iter_bits(s), key=lambda v: (-g.weights[v], v))


class MinOrder:
    """Baseline: MIN over every unfixed vertex."""

    def next_variable(self, layer: Layer, unfixed: int, stats: DiagramStats) -> int:
        return min_next(layer, unfixed, stats).vertex


class StaticOrder:
    """Replays a precomputed sequence; spends no candidate evaluations."""

    def __init__(self, sequence):
        self._seq = list(sequence)
        self._pos = 0

    def next_variable(self, layer: Layer, unfixed: int, stats: DiagramStats) -> int:
        if self._pos >= len(self._seq):
            raise ContractViolation("static order exhausted")
        v = self._seq[self._pos]
        self._pos += 1
        return v
