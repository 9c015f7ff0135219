"""Weighted graphs stored as neighbor bitsets.

A vertex set (and a DD state) is a plain Python ``int`` whose bit ``i`` is set
when vertex ``i`` belongs to the set.  Vertices are 0-based in memory and
1-based in instance files.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .errors import ContractViolation, GraphParseError
from .rng import XorShift64Star


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    adj: tuple[int, ...]
    weights: tuple[int, ...]
    closed: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.adj) != self.n or len(self.weights) != self.n:
            raise ContractViolation("adj and weights must have one entry per vertex")
        full = self.full_mask
        for u, nbrs in enumerate(self.adj):
            if nbrs & ~full:
                raise ContractViolation(f"vertex {u} has a neighbor outside the graph")
            if nbrs >> u & 1:
                raise ContractViolation(f"self-loop at vertex {u}")
            for v in iter_bits(nbrs):
                if not self.adj[v] >> u & 1:
                    raise ContractViolation(f"asymmetric edge {u}-{v}")
        for u, w in enumerate(self.weights):
            if w < 1:
                raise ContractViolation(f"vertex {u} has non-positive weight {w}")
        object.__setattr__(
            self, "closed", tuple(nbrs | (1 << u) for u, nbrs in enumerate(self.adj))
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], weights) -> WeightedGraph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ContractViolation(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(int(w) for w in weights))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def weight_of(self, mask: int) -> int:
        return sum(self.weights[v] for v in iter_bits(mask))

    def is_independent(self, mask: int) -> bool:
        return all(not (self.adj[v] & mask) for v in iter_bits(mask))


def generate_instance(n: int, density: float, seed: int) -> WeightedGraph:
    """Erdos-Renyi G(n, density) with weights ``(i mod 100) + 1``.

    Pairs (i, j), i < j, are visited in lexicographic order and each consumes
    exactly one uniform draw from :class:`XorShift64Star`, so the edge set is a
    pure function of ``(n, density, seed)``.
    """
    if n < 1:
        raise ContractViolation("n must be at least 1")
    if not 0.0 <= density <= 1.0:
        raise ContractViolation("density must lie in [0, 1]")
    rng = XorShift64Star(seed)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return WeightedGraph(n, tuple(adj), tuple((i % 100) + 1 for i in range(n)))


def induced_degree(g: WeightedGraph, s: int, v: int) -> int:
    if not s >> v & 1:
        raise ContractViolation(f"vertex {v} is not in the state")
    return (g.adj[v] & s).bit_count()


def parse_graph(text: str | TextIO) -> WeightedGraph:
    """Parse the line-oriented instance format (see ``serialize_graph``)."""
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()
    n = m = None
    weights: list[int | None] = []
    edges: list[tuple[int, int]] = []
    header_line = 0

    def vertex(tok: str, lineno: int) -> int:
        try:
            idx = int(tok)
        except ValueError:
            raise GraphParseError(f"bad vertex index {tok!r}", lineno) from None
        if not 1 <= idx <= n:
            raise GraphParseError(f"vertex index out of range: {idx}", lineno)
        return idx - 1

    for lineno, raw in enumerate(lines, start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        kind = parts[0]
        if kind == "p":
            if n is not None:
                raise GraphParseError("duplicate header", lineno)
            if len(parts) != 3:
                raise GraphParseError("malformed header, expected 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError("malformed header, expected 'p <n> <m>'", lineno) from None
            if n < 0 or m < 0:
                raise GraphParseError("malformed header, negative count", lineno)
            weights = [None] * n
            header_line = lineno
            continue
        if n is None:
            raise GraphParseError("missing header before data", lineno)
        if kind == "v":
            if len(parts) != 3:
                raise GraphParseError("malformed vertex line, expected 'v <index> <weight>'", lineno)
            u = vertex(parts[1], lineno)
            try:
                w = int(parts[2])
            except ValueError:
                raise GraphParseError(f"bad weight {parts[2]!r}", lineno) from None
            if w < 1:
                raise GraphParseError(f"non-positive weight {w}", lineno)
            if weights[u] is not None:
                raise GraphParseError(f"duplicate weight for vertex {u + 1}", lineno)
            weights[u] = w
        elif kind == "e":
            if len(parts) != 3:
                raise GraphParseError("malformed edge line, expected 'e <u> <v>'", lineno)
            u, v = vertex(parts[1], lineno), vertex(parts[2], lineno)
            if u == v:
                raise GraphParseError(f"self-loop at vertex {u + 1}", lineno)
            edges.append((u, v))
        else:
            raise GraphParseError(f"unknown line type {kind!r}", lineno)

    if n is None:
        raise GraphParseError("missing header 'p <n> <m>'")
    missing = [i + 1 for i, w in enumerate(weights) if w is None]
    if missing:
        raise GraphParseError(f"missing weight for vertex {missing[0]}", header_line)
    if len(edges) != m:
        raise GraphParseError(f"header declares {m} edges, found {len(edges)}", header_line)
    return WeightedGraph.from_edges(n, edges, weights)


def serialize_graph(g: WeightedGraph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"c {line}" for line in comment.splitlines())
    edges = g.edges()
    out.append(f"p {g.n} {len(edges)}")
    out.extend(f"v {i + 1} {w}" for i, w in enumerate(g.weights))
    out.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(out) + "\n"
