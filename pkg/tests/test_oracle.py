import statistics

import pytest

from plantedclique.generate import GenParams, generate_instance, sample_gnp
from plantedclique.graph import Graph, VertexSet, complement, is_clique
from plantedclique.oracle import (
    OracleUnavailable,
    count_all_cliques,
    ground_truth_max_clique,
    max_clique_exact,
    max_is_exact,
)

from conftest import random_graph


def brute_force_max_clique_size(g: Graph) -> int:
    best = 0
    for mask in range(1, 1 << g.n):
        if mask.bit_count() > best and is_clique(g, VertexSet(g.n, mask)):
            best = mask.bit_count()
    return best


def test_complete_graph():
    assert max_clique_exact(Graph.complete(6)) == VertexSet.full(6)


def test_edgeless_graph_returns_first_vertex():
    assert max_clique_exact(Graph.empty(4)) == VertexSet.from_iterable(4, [0])


def test_c5_lexicographic_tie_break():
    assert max_clique_exact(Graph.cycle(5)) == VertexSet.from_iterable(5, [0, 1])


def test_agrees_with_subset_enumeration():
    for s in range(500):
        g = random_graph(4 + s % 11, 0.45, seed=s)
        assert len(max_clique_exact(g)) == brute_force_max_clique_size(g)


def test_max_is_cases():
    assert max_is_exact(Graph.empty(5)) == VertexSet.full(5)
    assert len(max_is_exact(Graph.complete(5))) == 1
    assert len(max_is_exact(Graph.cycle(5))) == 2


def test_node_budget_is_first_class():
    g = random_graph(40, 0.5, seed=1)
    with pytest.raises(OracleUnavailable):
        max_clique_exact(g, node_budget=5)


def test_count_all_cliques_small():
    assert count_all_cliques(Graph.empty(5)) == 5
    assert count_all_cliques(Graph.complete(3)) == 7
    assert count_all_cliques(Graph.complete(5)) == 2**5 - 1
    with pytest.raises(OracleUnavailable):
        count_all_cliques(Graph.empty(31))


def test_triangle_count_expectation():
    # mean number of size-3 cliques across samples vs the binomial formula
    def triangles(g: Graph) -> int:
        count = 0
        for u, v in g.edges():
            count += (g.adj[u] & g.adj[v] & ~((1 << (v + 1)) - 1)).bit_count()
        return count

    mean = statistics.mean(triangles(sample_gnp(20, 0.3, seed=s)) for s in range(500))
    expected = 1140 * 0.3**3  # C(20,3) * p^3
    assert abs(mean - expected) <= 0.1 * expected


def test_ground_truth_contains_planted_set():
    for s in range(5):
        inst = generate_instance(GenParams(150, 0.5, 60, seed=200 + s), "random")
        truth = ground_truth_max_clique(inst)
        assert is_clique(inst.planted_graph, truth)
        assert len(truth) >= 60
        assert inst.planted.issubset(truth)


def test_ground_truth_exceeds_k_under_anchored_planting():
    inst = generate_instance(
        GenParams(150, 0.5, 60, seed=300), "common_neighborhood", t_size=1
    )
    truth = ground_truth_max_clique(inst)
    assert len(truth) > 60


def test_ground_truth_needs_planted_set():
    inst = generate_instance(GenParams(30, 0.5, 0, seed=1), "random")
    with pytest.raises(OracleUnavailable):
        ground_truth_max_clique(inst)
