"""Best-first DD-based branch-and-bound for MWISP."""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .dd import CompiledDiagram, Mode, Node, compile_diagram
from .graph import WeightedGraph, iter_bits
from .ordering import StaticOrder, static_weight_order
from .strategies import StrategyConfig, make_order_source


@dataclass
class Subproblem:
    state: int
    prefix_value: int
    dual_bound: float
    # vertices fixed to 1 on the way to this subproblem
    chosen: int = 0

    def key(self):
        return (-self.dual_bound, -self.prefix_value, self.state)


@dataclass
class SolveResult:
    optimum: int
    best_set: frozenset[int]
    nodes_processed: int = 0
    candidate_evaluations: int = 0
    relaxed_compilations: int = 0
    restricted_compilations: int = 0
    wall_time: float = 0.0
    # per processed node: (number of vertices, relaxed DD compiled?)
    node_log: list[tuple[int, bool]] = field(default_factory=list, repr=False)


def best_set_extract(restricted: CompiledDiagram) -> frozenset[int]:
    """Vertices on a maximum-value root-terminal path of a merge-free diagram."""
    return frozenset(iter_bits(restricted.best.chosen))


class _Queue:
    """Max-bound priority queue with one entry per state (duplicates are merged)."""

    def __init__(self):
        self._heap: list = []
        self._pending: dict[int, Subproblem] = {}

    def push(self, sub: Subproblem) -> None:
        old = self._pending.get(sub.state)
        if old is not None:
            better = sub if sub.prefix_value > old.prefix_value else old
            sub = Subproblem(
                sub.state,
                better.prefix_value,
                max(sub.dual_bound, old.dual_bound),
                better.chosen,
            )
        self._pending[sub.state] = sub
        heapq.heappush(self._heap, (sub.key(), sub.state))

    def pop(self) -> Optional[Subproblem]:
        while self._heap:
            key, state = heapq.heappop(self._heap)
            sub = self._pending.get(state)
            if sub is not None and sub.key() == key:
                del self._pending[state]
                return sub
        return None

    def max_bound(self) -> float:
        return max((s.dual_bound for s in self._pending.values()), default=-math.inf)

    def __len__(self) -> int:
        return len(self._pending)


def solve(
    g: WeightedGraph,
    cfg: StrategyConfig,
    *,
    local_bounds: bool = True,
    observer: Callable[[int, float], None] | None = None,
    trace: Callable[[str], None] | None = None,
) -> SolveResult:
    """Solve MWISP on ``g`` to optimality.

    ``local_bounds=False`` gives every cutset child the whole relaxed bound
    instead of the bound through its own cutset node.  ``observer`` is called
    before each node with ``(incumbent, upper)`` where ``upper`` is the largest
    open dual bound.
    """
    start = time.perf_counter()
    W = cfg.W
    result = SolveResult(optimum=0, best_set=frozenset())
    incumbent, best_mask = 0, 0
    queue = _Queue()
    queue.push(Subproblem(g.full_mask, 0, math.inf))

    while True:
        if observer is not None:
            observer(incumbent, max(incumbent, queue.max_bound()))
        sub = queue.pop()
        if sub is None:
            break
        if sub.dual_bound <= incumbent:
            continue
        result.nodes_processed += 1
        root = Node(sub.state, 0)

        order = StaticOrder(static_weight_order(g, sub.state))
        restricted = compile_diagram(g, root, order, W, Mode.RESTRICTED, trace=trace)
        result.restricted_compilations += 1
        if sub.prefix_value + restricted.bound > incumbent:
            incumbent = sub.prefix_value + restricted.bound
            best_mask = sub.chosen | restricted.best.chosen
        if restricted.is_exact:
            result.node_log.append((sub.state.bit_count(), False))
            continue

        source = make_order_source(cfg, g, sub.state)
        relaxed = compile_diagram(
            g, root, source, W, Mode.RELAXED, cutset_bounds=local_bounds, trace=trace
        )
        result.relaxed_compilations += 1
        result.candidate_evaluations += relaxed.stats.candidate_evaluations
        result.node_log.append((sub.state.bit_count(), True))
        if relaxed.is_exact:
            # no merge happened, so the best path is a feasible solution
            if sub.prefix_value + relaxed.bound > incumbent:
                incumbent = sub.prefix_value + relaxed.bound
                best_mask = sub.chosen | relaxed.best.chosen
            continue
        if sub.prefix_value + relaxed.bound <= incumbent:
            continue

        for i, u in enumerate(relaxed.last_exact_layer):
            through = relaxed.cutset_bounds[i] if local_bounds else relaxed.bound
            bound = sub.prefix_value + through
            if bound <= incumbent:
                continue
            queue.push(Subproblem(u.state, sub.prefix_value + u.value, bound, sub.chosen | u.chosen))

    result.optimum = incumbent
    result.best_set = frozenset(iter_bits(best_mask))
    result.wall_time = time.perf_counter() - start
    return result
