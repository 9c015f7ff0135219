"""Top-down compilation of exact, relaxed and restricted DDs for MWISP.

A layer maps each state (bitset of still-available vertices) to the longest
known root-to-node path value.  Arcs are not materialised; parent links are
only recorded where a bound per cutset node is requested.

Width enforcement uses SortObj: nodes ordered by value descending, ties by the
state bitset read as an unsigned integer (ascending).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

from .errors import ContractViolation
from .graph import WeightedGraph


class Mode(str, enum.Enum):
    EXACT = "exact"
    RELAXED = "relaxed"
    RESTRICTED = "restricted"


@dataclass(frozen=True)
class Node:
    state: int
    value: int
    # vertices set to 1 along the best path; only meaningful before any merge
    chosen: int = 0


class Layer:
    """Deduplicated DD layer.  ``values`` and ``chosen`` are keyed by state."""

    __slots__ = ("index", "values", "chosen", "_bits")

    def __init__(self, index: int, values: dict[int, int], chosen: dict[int, int] | None = None):
        self.index = index
        self.values = values
        self.chosen = chosen if chosen is not None else dict.fromkeys(values, 0)
        self._bits = None

    @classmethod
    def root(cls, node: Node) -> Layer:
        return cls(0, {node.state: node.value}, {node.state: node.chosen})

    def __len__(self) -> int:
        return len(self.values)

    @property
    def states(self) -> list[int]:
        return list(self.values)

    def nodes(self) -> list[Node]:
        return [Node(s, v, self.chosen[s]) for s, v in self.values.items()]

    def best(self) -> Node:
        s = min(self.values, key=lambda st: (-self.values[st], st))
        return Node(s, self.values[s], self.chosen[s])


@dataclass
class DiagramStats:
    max_width: int = 1
    merges: int = 0
    candidate_evaluations: int = 0
    layers_built: int = 0
    # index 0 is the root layer
    layer_widths: list[int] = field(default_factory=lambda: [1])
    pre_widths: list[int] = field(default_factory=lambda: [1])
    # scores spent by the order source before building each layer
    layer_evaluations: list[int] = field(default_factory=list)


@dataclass
class CompiledDiagram:
    bound: int
    is_exact: bool
    last_exact_layer: list[Node]
    stats: DiagramStats
    order: list[int]
    mode: Mode
    best: Node
    # longest root-terminal path through each node of last_exact_layer
    cutset_bounds: Optional[list[int]] = None


class VariableOrderSource(Protocol):
    def next_variable(self, layer: Layer, unfixed: int, stats: DiagramStats) -> int:
        ...


def transition(g: WeightedGraph, s: int, v: int, d: int) -> int:
    if d == 0:
        return s & ~(1 << v)
    if not s >> v & 1:
        raise ContractViolation(f"decision 1 infeasible: vertex {v} not available")
    return s & ~g.closed[v]


def reward(g: WeightedGraph, v: int, d: int) -> int:
    return g.weights[v] if d else 0


def sortobj_key(values: dict[int, int]):
    return lambda s: (-values[s], s)


def _split(layer: Layer, keep: int) -> tuple[list[int], list[int]]:
    ranked = sorted(layer.values, key=sortobj_key(layer.values))
    return ranked[:keep], ranked[keep:]


def relax_layer(layer: Layer, w: int) -> Layer:
    """Keep the ``w - 1`` best nodes, merge the rest by state union."""
    return _relax(layer, w)[0]


def _relax(layer: Layer, w: int) -> tuple[Layer, set[int], int]:
    if w < 2:
        raise ContractViolation("relaxed width must be at least 2")
    if len(layer) <= w:
        return layer, set(layer.values), -1
    kept, rest = _split(layer, w - 1)
    values = {s: layer.values[s] for s in kept}
    chosen = {s: layer.chosen[s] for s in kept}
    merged = 0
    for s in rest:
        merged |= s
    # rest[0] carries the largest value among the merged nodes
    top = rest[0]
    if merged not in values or layer.values[top] > values[merged]:
        values[merged] = layer.values[top]
        chosen[merged] = layer.chosen[top]
    return Layer(layer.index, values, chosen), set(kept), merged


def restrict_layer(layer: Layer, w: int) -> Layer:
    """Keep the ``w`` best nodes, drop the rest."""
    if w < 1:
        raise ContractViolation("restricted width must be at least 1")
    if len(layer) <= w:
        return layer
    kept, _ = _split(layer, w)
    return Layer(layer.index, {s: layer.values[s] for s in kept}, {s: layer.chosen[s] for s in kept})


def _expand(g: WeightedGraph, prev: Layer, v: int, arcs: list | None) -> Layer:
    bit = 1 << v
    wv = g.weights[v]
    closed = ~g.closed[v]
    values: dict[int, int] = {}
    chosen: dict[int, int] = {}
    get = values.get
    for s, val in prev.values.items():
        c = prev.chosen[s]
        s0 = s & ~bit
        old = get(s0)
        if old is None or val > old:
            values[s0] = val
            chosen[s0] = c
        if arcs is not None:
            arcs.append((s, s0, 0))
        if s & bit:
            s1 = s & closed
            val1 = val + wv
            old = get(s1)
            if old is None or val1 > old:
                values[s1] = val1
                chosen[s1] = c | bit
            if arcs is not None:
                arcs.append((s, s1, wv))
    return Layer(prev.index + 1, values, chosen)


def build_layer(
    g: WeightedGraph,
    prev: Layer,
    v: int,
    w: int | None,
    mode: Mode | str,
    stats: DiagramStats,
) -> Layer:
    layer, _ = _build(g, prev, v, w, Mode(mode), stats, None)
    return layer


def _build(g, prev, v, w, mode, stats, arcs):
    layer = _expand(g, prev, v, arcs)
    pre = len(layer)
    if mode is not Mode.EXACT and w is not None and pre > w:
        if mode is Mode.RELAXED:
            layer, kept, merged = _relax(layer, w)
            if arcs is not None:
                arcs[:] = [(p, c if c in kept else merged, r) for p, c, r in arcs]
        else:
            layer = restrict_layer(layer, w)
        stats.merges += pre - len(layer)
    post = len(layer)
    stats.layers_built += 1
    stats.pre_widths.append(pre)
    stats.layer_widths.append(post)
    stats.max_width = max(stats.max_width, post)
    return layer, pre


def compile_diagram(
    g: WeightedGraph,
    root: Node,
    order_source: VariableOrderSource,
    w: int | None,
    mode: Mode | str,
    *,
    cutset_bounds: bool = False,
    trace: Callable[[str], None] | None = None,
) -> CompiledDiagram:
    """Compile a DD over the vertices of ``root.state``.

    ``w`` is ignored in exact mode.  With ``cutset_bounds`` (relaxed mode) the
    result carries, for every node of the last exact layer, the longest
    root-terminal path passing through it.
    """
    mode = Mode(mode)
    if root.state & ~g.full_mask:
        raise ContractViolation("root state contains vertices outside the graph")
    if mode is Mode.RELAXED and (w is None or w < 2):
        raise ContractViolation("relaxed compilation needs w >= 2")
    if mode is Mode.RESTRICTED and (w is None or w < 1):
        raise ContractViolation("restricted compilation needs w >= 1")
    if mode is Mode.EXACT:
        w = None

    stats = DiagramStats()
    layer = Layer.root(root)
    unfixed = root.state
    order: list[int] = []
    lel: Layer | None = None
    record = cutset_bounds and mode is Mode.RELAXED
    kept_arcs: list[list] = []

    while unfixed:
        before = stats.candidate_evaluations
        v = order_source.next_variable(layer, unfixed, stats)
        if not (isinstance(v, int) and v >= 0 and unfixed >> v & 1):
            raise ContractViolation(f"order source returned {v!r}, not an unfixed vertex")
        stats.layer_evaluations.append(stats.candidate_evaluations - before)
        unfixed &= ~(1 << v)
        order.append(v)
        arcs = [] if record else None
        prev = layer
        layer, pre = _build(g, prev, v, w, mode, stats, arcs)
        if lel is None and w is not None and pre > w:
            lel = prev
        if record and lel is not None:
            kept_arcs.append(arcs)
        if trace is not None:
            trace(
                f"layer={layer.index} var={v + 1} width_pre={pre} "
                f"width_post={len(layer)} merged={pre - len(layer)}"
            )

    exact = lel is None
    if exact:
        lel = layer
    best = layer.best()
    bounds = None
    if record:
        bounds = _cutset_bounds(lel, kept_arcs)
    return CompiledDiagram(
        bound=best.value,
        is_exact=exact,
        last_exact_layer=lel.nodes(),
        stats=stats,
        order=order,
        mode=mode,
        best=best,
        cutset_bounds=bounds,
    )


def _cutset_bounds(lel: Layer, arcs_by_layer: list[list]) -> list[int]:
    # longest path to the terminal, computed bottom-up over recorded arcs
    down: dict[int, int] = {0: 0}
    for arcs in reversed(arcs_by_layer):
        up: dict[int, int] = {}
        for parent, child, r in arcs:
            tail = down.get(child)
            if tail is None:
                continue
            cand = r + tail
            if cand > up.get(parent, -1):
                up[parent] = cand
        down = up
    return [val + down[s] for s, val in lel.values.items()]


def longest_path_bound(d: CompiledDiagram) -> int:
    return d.bound
