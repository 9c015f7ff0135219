"""Decision-diagram branch-and-bound for maximum weighted independent set
with clustering-based variable ordering."""
from .bnb import SolveResult, solve
from .dd import CompiledDiagram, Mode, Node, compile_diagram
from .graph import WeightedGraph, generate_instance, parse_graph, serialize_graph
from .strategies import StrategyConfig, make_order_source

__all__ = [
    "CompiledDiagram", "Mode", "Node", "SolveResult", "StrategyConfig", "WeightedGraph",
    "compile_diagram", "generate_instance", "make_order_source", "parse_graph",
    "serialize_graph", "solve",
]
