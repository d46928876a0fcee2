import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_cactus
from wcap.cactus import CactusGraph, enumerate_min_cuts
from wcap.errors import InvalidParams, TooLarge
from wcap.formats import format_links
from wcap.generators import (
    CostDistribution,
    enumerate_min_cuts_brute_force,
    expand_cactus_to_graph,
    generate_cactus,
    generate_link_costs,
    generate_raw_costs,
    generate_special,
    rng_for,
    verify_cactus_representation,
)


def test_one_cycle_uses_every_vertex():
    c = generate_cactus(8, 1, seed=3)
    assert [len(cyc) for cyc in c.cycles] == [8] and not c.tree_edges


def test_three_cycles_on_ten_vertices():
    c = generate_cactus(10, 3, seed=42)
    assert c.n == 10 and len(c.cycles) == 3 and not c.tree_edges


@pytest.mark.parametrize("n, cycles", [(4, 3), (5, 0), (6, 3)])
def test_infeasible_generator_params(n, cycles):
    with pytest.raises(InvalidParams):
        generate_cactus(n, cycles, seed=1)


def test_bad_seed():
    with pytest.raises(InvalidParams):
        rng_for(-1, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.integers(0, 60), st.integers(0, 2**64 - 1))
def test_generated_cactus_shape(cycles, extra, seed):
    n = 2 * cycles + 1 + extra
    c = generate_cactus(n, cycles, seed)
    assert c.n == n and len(c.cycles) == cycles
    assert sum(len(cyc) for cyc in c.cycles) == n + cycles - 1


def test_generator_is_deterministic():
    assert generate_cactus(30, 7, 99) == generate_cactus(30, 7, 99)
    assert generate_cactus(30, 7, 99) != generate_cactus(30, 7, 100)


def test_special_shapes():
    ring8 = generate_special("cycle", 8)
    assert ring8.cycles == ((1, 2, 3, 4, 5, 6, 7, 8),)
    assert len(generate_special("star", 50).tree_edges) == 49
    with pytest.raises(InvalidParams):
        generate_special("cycle", 2)
    with pytest.raises(InvalidParams):
        generate_special("wheel", 5)


def test_link_costs_complete_and_deterministic():
    c = generate_cactus(4, 1, seed=0)
    lg = generate_link_costs(c, CostDistribution.named("u9"), seed=5)
    assert len(lg) == 6
    again = generate_link_costs(c, CostDistribution.named("u9"), seed=5)
    assert lg == again
    raw = generate_raw_costs(c, CostDistribution.named("u9"), 5)
    assert format_links(raw) == format_links(generate_raw_costs(c, CostDistribution.named("u9"), 5))


def test_scaled_two_value_costs():
    c = generate_special("cycle", 12)
    costs = {l.cost for l in generate_link_costs(c, CostDistribution.named("u2"), seed=1)}
    assert costs == {Fraction(1, 2), Fraction(1)}


def test_scaling_divides_by_largest():
    c = generate_special("cycle", 10)
    dist = CostDistribution.named("u99")
    raw = generate_raw_costs(c, CostDistribution(1, 99, scale_to_unit=False), 4)
    scaled = generate_raw_costs(c, dist, 4)
    top = max(x for _, _, x in raw)
    assert [x / top for _, _, x in raw] == [x for _, _, x in scaled]
    assert all(0 < x <= 1 for _, _, x in scaled)


def test_unknown_distribution():
    with pytest.raises(InvalidParams):
        CostDistribution.named("u7")


def test_brute_force_min_cuts():
    weight, cuts = enumerate_min_cuts_brute_force(3, [(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    assert weight == 2 and len(cuts) == 3
    weight, cuts = enumerate_min_cuts_brute_force(3, [(1, 2, 1), (2, 3, 1)])
    assert weight == 1 and cuts == {frozenset({2, 3}), frozenset({3})}
    with pytest.raises(TooLarge):
        enumerate_min_cuts_brute_force(17, [(1, 2, 1)])


def test_fig1_graph_min_cuts(fig1_graph):
    n, edges = fig1_graph
    weight, cuts = enumerate_min_cuts_brute_force(n, edges)
    assert weight == 2 and len(cuts) == 4


def test_fig1_representation(fig1, fig1_graph):
    n, edges = fig1_graph
    assert verify_cactus_representation(n, edges, fig1, fig1.pi)


def test_identity_expansion_is_the_cactus():
    c = generate_special("cycle", 6)
    n, edges, pi = expand_cactus_to_graph(c, seed=0, gadget_probability=0.0)
    assert n == 6 and pi == {v: v for v in range(1, 7)}
    assert verify_cactus_representation(n, edges, c, pi)


def test_spurious_tree_edge_detected():
    c = CactusGraph.from_edges(3, [(1, 2), (2, 3)])
    n, edges = 3, [(1, 2, 2), (2, 3, 2), (1, 3, 2)]
    assert not verify_cactus_representation(n, edges, c, {1: 1, 2: 2, 3: 3})


def test_expansion_requires_k2():
    c = CactusGraph.from_edges(2, [(1, 2)], k=4)
    with pytest.raises(InvalidParams):
        expand_cactus_to_graph(c, seed=0)


def test_expanded_eight_vertex_cacti():
    checked = 0
    for seed in range(30):
        c = random_cactus(random.Random(seed), 8)
        if c.n != 8:
            continue
        n, edges, pi = expand_cactus_to_graph(c, seed, gadget_probability=1.0, max_gadgets=2)
        assert n == c.n + 6
        assert verify_cactus_representation(n, edges, c, pi)
        checked += 1
    assert checked >= 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 10))
def test_expansion_round_trip(seed, size):
    c = random_cactus(random.Random(seed), size)
    budget = (16 - c.n) // 3
    n, edges, pi = expand_cactus_to_graph(c, seed, max_gadgets=budget)
    assert n <= 16
    assert verify_cactus_representation(n, edges, c, pi)
    assert len(enumerate_min_cuts(c)) == len(enumerate_min_cuts_brute_force(n, edges)[1])


def test_expansion_of_generated_cacti():
    for n in range(3, 11):
        for cycles in range(1, (n - 1) // 2 + 1):
            for seed in range(3):
                c = generate_cactus(n, cycles, seed)
                budget = (16 - n) // 3
                g_n, edges, pi = expand_cactus_to_graph(c, seed, max_gadgets=budget)
                assert verify_cactus_representation(g_n, edges, c, pi)
