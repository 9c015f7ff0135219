import math
import random

import pytest

from clusterdd.bench import brute_force
from clusterdd.clustering import exactness_threshold
from clusterdd.dd import (
    DiagramStats, Layer, Mode, Node, build_layer, compile_diagram, relax_layer, restrict_layer,
    reward, transition,
)
from clusterdd.errors import ContractViolation
from clusterdd.graph import WeightedGraph, generate_instance, iter_bits
from clusterdd.ordering import MinOrder, StaticOrder

from conftest import complete, edgeless, enumerate_optimum, path3

A, B, C, D = 0b0001, 0b0010, 0b0100, 0b1000


def subgraph_optimum(g, state):
    best = 0
    verts = list(iter_bits(state))
    for r in range(1 << len(verts)):
        mask = sum(1 << v for i, v in enumerate(verts) if r >> i & 1)
        if g.is_independent(mask):
            best = max(best, g.weight_of(mask))
    return best


def compile_with_order(g, order, mode, w=None, **kw):
    return compile_diagram(g, Node(g.full_mask, 0), StaticOrder(order), w, mode, **kw)


# transition / reward ------------------------------------------------------

def test_transition_examples():
    p3 = path3()
    assert transition(p3, 0b111, 1, 0) == 0b101
    assert transition(p3, 0b111, 1, 1) == 0
    e3 = edgeless([1, 2, 3])
    assert transition(e3, 0b111, 0, 1) == 0b110


def test_transition_select_unavailable_vertex_is_contract_violation():
    with pytest.raises(ContractViolation):
        transition(path3(), 0b101, 1, 1)


def test_reward_examples():
    g = WeightedGraph.from_edges(2, [], [7, 3])
    assert reward(g, 0, 0) == 0
    assert reward(g, 0, 1) == 7
    assert reward(generate_instance(5, 0.5, 0), 0, 1) == 1


# build / relax / restrict -------------------------------------------------

def test_build_layer_path_middle_vertex():
    p3 = path3()
    layer = build_layer(p3, Layer.root(Node(0b111, 0)), 1, None, "exact", DiagramStats())
    assert layer.values == {0b101: 0, 0: 5}


def test_build_layer_dedup_keeps_max():
    g = edgeless([4, 9])
    layer = build_layer(g, Layer.root(Node(0b11, 0)), 0, None, "exact", DiagramStats())
    assert layer.values == {0b10: 4}
    assert len(layer) == 1


def test_build_layer_under_width_untouched():
    g = edgeless([1, 1, 1])
    stats = DiagramStats()
    layer = build_layer(g, Layer.root(Node(0b111, 0)), 0, 5, "relaxed", stats)
    assert stats.merges == 0 and len(layer) == 1


def test_relax_layer_sortobj():
    layer = Layer(3, {A: 10, B: 8, C: 5, D: 3})
    out = relax_layer(layer, 3)
    assert out.values == {A: 10, B: 8, C | D: 5}


def test_relax_layer_tie_goes_to_smaller_state():
    layer = Layer(1, {A: 10, C: 3, B: 3})
    assert relax_layer(layer, 2).values == {A: 10, B | C: 3}
    # with A dropped to the tie value, the smallest state survives
    layer = Layer(1, {C: 3, A: 3, B: 3})
    assert relax_layer(layer, 2).values == {A: 3, B | C: 3}


def test_relax_layer_union_idempotent_and_collision():
    assert relax_layer(Layer(1, {A: 9, A | B: 4, B: 2}), 2).values == {A: 9, A | B: 4}
    # union equal to a kept state collapses into it, keeping the larger value
    out = relax_layer(Layer(1, {A | B: 9, A: 5, B: 4}), 2)
    assert out.values == {A | B: 9}


def test_restrict_layer():
    assert restrict_layer(Layer(1, {A: 10, B: 8, C: 5, D: 3}), 2).values == {A: 10, B: 8}
    assert restrict_layer(Layer(1, {D: 1, B: 1, C: 1, A: 1}), 2).values == {A: 1, B: 1}
    same = Layer(1, {A: 1, B: 2})
    assert restrict_layer(same, 2) is same


# compile ------------------------------------------------------------------

@pytest.mark.parametrize("mode,w", [("exact", None), ("relaxed", 2), ("restricted", 1)])
def test_compile_edgeless_takes_everything(mode, w):
    g = edgeless([1, 2, 3])
    for order in ([0, 1, 2], [2, 0, 1]):
        assert compile_with_order(g, order, mode, w).bound == 6


def test_compile_small_examples():
    assert compile_with_order(path3(), [0, 1, 2], "exact").bound == 5
    assert compile_with_order(complete(3, [3, 7, 5]), [2, 1, 0], "exact").bound == 7


def test_compile_rejects_bad_order_sources():
    g = path3()
    with pytest.raises(ContractViolation):
        compile_with_order(g, [0, 0, 1], "exact")
    with pytest.raises(ContractViolation):
        compile_with_order(g, [0, 1], "exact")
    with pytest.raises(ContractViolation):
        compile_with_order(g, [0, 1, 2], "relaxed", 1)


def test_compile_subproblem_root_only_touches_its_vertices():
    g = generate_instance(10, 0.4, 3)
    state = 0b1011010110
    d = compile_diagram(g, Node(state, 0), MinOrder(), None, "exact")
    assert sorted(d.order) == list(iter_bits(state))
    assert d.bound == subgraph_optimum(g, state)


def random_instances(count, seed=0, n_lo=4, n_hi=14):
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(n_lo, n_hi)
        yield rng, generate_instance(n, rng.choice([0.1, 0.2, 0.3, 0.5, 0.7, 0.9]), 1000 + i)


def test_exact_bound_matches_oracles():
    for rng, g in random_instances(60):
        order = list(range(g.n))
        rng.shuffle(order)
        d = compile_with_order(g, order, "exact")
        assert d.is_exact
        opt = enumerate_optimum(g)
        assert d.bound == opt == brute_force(g)
        assert g.is_independent(d.best.chosen) and g.weight_of(d.best.chosen) == opt


def test_sandwich_and_restricted_feasibility():
    for rng, g in random_instances(80, seed=1):
        opt = brute_force(g)
        for w in (1, 2, 3, 5):
            order = list(range(g.n))
            rng.shuffle(order)
            res = compile_with_order(g, order, "restricted", w)
            assert res.bound <= opt
            assert g.is_independent(res.best.chosen) and g.weight_of(res.best.chosen) == res.bound
            if w >= 2:
                rel = compile_with_order(g, order, "relaxed", w)
                assert rel.bound >= opt
                rel_min = compile_diagram(g, Node(g.full_mask, 0), MinOrder(), w, "relaxed")
                assert rel_min.bound >= opt


def test_layers_never_hold_duplicate_states():
    # Layer is keyed by state, so this checks the per-layer count bookkeeping
    for rng, g in random_instances(20, seed=2):
        d = compile_with_order(g, list(range(g.n)), "relaxed", 3)
        assert all(w <= 3 for w in d.stats.layer_widths)
        assert d.stats.layers_built == g.n


def test_width_lemmas_on_exact_diagrams():
    for rng, g in random_instances(50, seed=3, n_lo=1, n_hi=16):
        order = list(range(g.n))
        rng.shuffle(order)
        st = compile_with_order(g, order, "exact").stats
        assert st.max_width <= 2 ** (g.n // 2)
        for z in range(g.n + 1):
            assert st.layer_widths[g.n - z] <= 2 ** z


@pytest.mark.parametrize("W", [4, 16, 100])
def test_small_subproblems_compile_without_reduction(W):
    thr = exactness_threshold(W)
    for rng, g in random_instances(40, seed=W, n_lo=1, n_hi=thr):
        order = list(range(g.n))
        rng.shuffle(order)
        for mode in ("relaxed", "restricted"):
            d = compile_with_order(g, order, mode, W)
            assert d.is_exact and d.stats.merges == 0


def matching_graph(k):
    """k disjoint edges (i, i + k); heavy endpoints come first in weight order."""
    return WeightedGraph.from_edges(2 * k, [(i, i + k) for i in range(k)], [i + 1 for i in range(2 * k)])


def test_threshold_needs_power_of_two_width():
    # n = 2*ceil(log2 W) can still reach 2^(n/2) > W when W is not a power of two
    g = matching_graph(7)
    order = list(range(7, 14)) + list(range(7))
    assert g.n == exactness_threshold(100)
    assert compile_with_order(g, order, "exact").stats.max_width == 128
    assert not compile_with_order(g, order, "restricted", 100).is_exact
    assert compile_with_order(g, order, "restricted", 128).is_exact
    # strictly below the threshold the bound 2^(n//2) < W holds
    sub = compile_diagram(g, Node(g.full_mask & ~1, 0), StaticOrder([v for v in order if v != 0]), 100, "restricted")
    assert sub.is_exact and sub.stats.max_width <= 64


def test_last_exact_layer_and_cutset_bounds():
    for rng, g in random_instances(40, seed=5, n_lo=8, n_hi=14):
        d = compile_diagram(g, Node(g.full_mask, 0), MinOrder(), 3, "relaxed", cutset_bounds=True)
        if d.is_exact:
            assert d.last_exact_layer == [Node(0, d.bound, d.best.chosen)]
            assert d.cutset_bounds == [d.bound]
            continue
        first = next(k for k, w in enumerate(d.stats.pre_widths) if w > 3)
        assert len(d.last_exact_layer) == d.stats.layer_widths[first - 1]
        assert max(d.cutset_bounds) == d.bound
        for u, through in zip(d.last_exact_layer, d.cutset_bounds):
            # exact prefix: chosen set is feasible and realises the node value
            assert g.is_independent(u.chosen) and g.weight_of(u.chosen) == u.value
            assert not (u.chosen & u.state)
            assert through >= u.value + subgraph_optimum(g, u.state)


def test_trace_lines():
    lines = []
    compile_with_order(path3(), [1, 0, 2], "relaxed", 2, trace=lines.append)
    assert lines[0] == "layer=1 var=2 width_pre=2 width_post=2 merged=0"
    assert len(lines) == 3
