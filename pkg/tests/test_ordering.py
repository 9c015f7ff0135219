import random

import pytest
from hypothesis import given, settings, strategies as st

from clusterdd.dd import DiagramStats, Layer, Node, compile_diagram
from clusterdd.errors import ContractViolation
from clusterdd.graph import WeightedGraph, generate_instance, iter_bits
from clusterdd.ordering import MinOrder, appearance_counts, min_next, static_weight_order


def brute_counts(states, v):
    return sum(1 for s in states if s >> v & 1)


def test_min_next_examples():
    layer = Layer(1, {0b111: 0, 0b110: 3})
    stats = DiagramStats()
    score = min_next(layer, 0b111, stats)
    assert (score.vertex, score.count) == (0, 1)
    assert stats.candidate_evaluations == 3

    absent = min_next(Layer(1, {0b0001: 0}), 0b1110)
    assert (absent.vertex, absent.count) == (1, 0)

    single = min_next(layer, 0b100)
    assert (single.vertex, single.count) == (2, 2)


def test_min_next_empty_candidates():
    with pytest.raises(ContractViolation):
        min_next(Layer(0, {1: 0}), 0)


@given(
    st.lists(st.integers(0, 2**70 - 1), min_size=1, max_size=30, unique=True),
    st.integers(1, 2**70 - 1),
    st.randoms(use_true_random=False),
)
@settings(max_examples=150, deadline=None)
def test_min_next_matches_brute_force_and_is_order_free(states, cand, rnd):
    expected = min(iter_bits(cand), key=lambda v: (brute_counts(states, v), v))
    got = min_next(Layer(0, dict.fromkeys(states, 0)), cand)
    assert got.vertex == expected
    assert got.count == brute_counts(states, expected)
    shuffled = states[:]
    rnd.shuffle(shuffled)
    assert min_next(Layer(0, dict.fromkeys(shuffled, 0)), cand).vertex == expected


def test_appearance_counts_beyond_state_width():
    layer = Layer(0, {0b1: 0, 0b11: 0})
    assert list(appearance_counts(layer, [0, 1, 40])) == [2, 1, 0]


def test_static_weight_order():
    g = WeightedGraph.from_edges(3, [], [2, 5, 2])
    assert static_weight_order(g, 0b111) == [1, 0, 2]
    flat = WeightedGraph.from_edges(4, [], [3, 3, 3, 3])
    assert static_weight_order(flat, 0b1101) == [0, 2, 3]
    assert static_weight_order(g, 0b100) == [2]


def test_baseline_counter_is_sum_of_unfixed_sizes():
    rng = random.Random(4)
    for i in range(20):
        n = rng.randint(1, 25)
        g = generate_instance(n, rng.random(), i)
        d = compile_diagram(g, Node(g.full_mask, 0), MinOrder(), 4, "relaxed")
        assert d.stats.layer_evaluations == list(range(n, 0, -1))
        assert d.stats.candidate_evaluations == n * (n + 1) // 2
