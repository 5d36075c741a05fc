import math
import statistics

import pytest

from plantedclique.generate import (
    GenParams,
    GenerationError,
    ParameterError,
    generate_instance,
    plant_common_neighborhood,
    plant_independent_set,
    plant_low_degree,
    plant_random,
    sample_gnp,
)
from plantedclique.graph import (
    Graph,
    VertexSet,
    complement,
    degree_in,
    is_clique,
    is_independent_set,
)


def test_gnp_determinism():
    assert sample_gnp(60, 0.4, seed=5) == sample_gnp(60, 0.4, seed=5)
    assert sample_gnp(60, 0.4, seed=5) != sample_gnp(60, 0.4, seed=6)


def test_gnp_zero_vertices():
    assert sample_gnp(0, 0.5, seed=1) == Graph.empty(0)


def test_gnp_rejects_bad_p():
    for p in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ParameterError):
            sample_gnp(10, p, seed=1)


def test_gnp_mean_edge_count():
    n, p, pairs = 200, 0.5, 200 * 199 // 2
    mean = statistics.mean(
        sample_gnp(n, p, seed=s).edge_count() for s in range(1000)
    )
    assert 0.48 * pairs <= mean <= 0.52 * pairs


def test_gnp_sparse_path_matches_statistics():
    # p below the Bernoulli/geometric switch; check count and determinism
    n, p = 400, 0.005
    pairs = n * (n - 1) // 2
    counts = [sample_gnp(n, p, seed=s).edge_count() for s in range(200)]
    mean = statistics.mean(counts)
    sd = math.sqrt(pairs * p * (1 - p))
    assert abs(mean - p * pairs) < 4 * sd / math.sqrt(200) * 3
    assert sample_gnp(n, p, seed=3) == sample_gnp(n, p, seed=3)


def test_plant_random_degenerate_sizes():
    g = sample_gnp(20, 0.5, seed=2)
    assert plant_random(g, 0, seed=2, p=0.5).planted_graph == g
    assert plant_random(g, 20, seed=2, p=0.5).planted_graph == Graph.complete(20)


def test_plant_random_always_cliques():
    for s in range(100):
        inst = plant_random(sample_gnp(30, 0.4, seed=s), 8, seed=s, p=0.4)
        assert is_clique(inst.planted_graph, inst.planted)
        assert len(inst.planted) == 8


def test_planting_touches_only_inside_pairs():
    inst = generate_instance(GenParams(50, 0.5, 20, seed=11), "random")
    kbits = inst.planted.bits
    for i in range(50):
        diff = inst.base.adj[i] ^ inst.planted_graph.adj[i]
        if diff:
            assert kbits >> i & 1 and diff & ~kbits == 0


def test_plant_common_neighborhood_t0_matches_random():
    g = sample_gnp(40, 0.5, seed=3)
    a = plant_common_neighborhood(g, 10, t_size=0, seed=3, p=0.5)
    b = plant_random(g, 10, seed=3, p=0.5)
    assert a.planted == b.planted and a.planted_graph == b.planted_graph
    assert a.adversary.strategy == "common_neighborhood"


def test_plant_common_neighborhood_inside_anchor_neighborhood():
    inst = generate_instance(
        GenParams(120, 0.5, 40, seed=4), "common_neighborhood", t_size=1
    )
    anchors = inst.adversary.params["anchors"]
    assert len(anchors) == 1
    for v in inst.planted:
        for a in anchors:
            assert inst.planted_graph.has_edge(v, a)
    # an anchor extends the planted clique: max clique is at least k + 1
    anchor_set = VertexSet.from_iterable(120, anchors)
    assert is_clique(inst.planted_graph, inst.planted | anchor_set)


def test_plant_common_neighborhood_reports_infeasible():
    g = sample_gnp(40, 0.5, seed=6)
    with pytest.raises(GenerationError, match="largest found"):
        plant_common_neighborhood(g, 30, t_size=3, seed=6, p=0.5)


def test_plant_low_degree_degenerate():
    g = sample_gnp(25, 0.5, seed=7)
    assert plant_low_degree(g, 25, seed=7, p=0.5).planted == VertexSet.full(25)
    inst1 = plant_low_degree(g, 1, seed=7, p=0.5)
    assert inst1.planted_graph == g and len(inst1.planted) == 1


def test_plant_low_degree_beats_random_internal_edges():
    wins = 0
    for s in range(20):
        g = sample_gnp(300, 0.5, seed=1000 + s)
        low = plant_low_degree(g, 120, seed=1000 + s, p=0.5)
        rnd = plant_random(g, 120, seed=1000 + s, p=0.5)

        def internal(inst):
            return sum(
                degree_in(g, v, inst.planted) for v in inst.planted
            ) // 2

        wins += int(internal(low) <= internal(rnd))
    assert wins >= 18


def test_plant_independent_set_basics():
    g = sample_gnp(30, 0.5, seed=8)
    inst0 = plant_independent_set(g, 0, "random", seed=8, p=0.5)
    assert inst0.planted_graph == g
    for s in range(20):
        inst = plant_independent_set(sample_gnp(30, 0.5, seed=s), 10, "random", seed=s, p=0.5)
        assert is_independent_set(inst.planted_graph, inst.planted)


@pytest.mark.parametrize("strategy", ["random", "low_degree_complement"])
def test_independent_set_clique_duality(strategy):
    g = sample_gnp(40, 0.4, seed=9)
    inst = plant_independent_set(g, 12, strategy, seed=9, p=0.4)
    gc = complement(g)
    if strategy == "random":
        mirror = plant_random(gc, 12, seed=9, p=0.6)
    else:
        mirror = plant_low_degree(gc, 12, seed=9, p=0.6)
    assert mirror.planted == inst.planted
    assert complement(inst.planted_graph) == mirror.planted_graph


def test_unknown_strategy_rejected():
    g = sample_gnp(10, 0.5, seed=1)
    with pytest.raises(ParameterError):
        plant_independent_set(g, 3, "nope", seed=1, p=0.5)
    with pytest.raises(ParameterError):
        generate_instance(GenParams(10, 0.5, 3, seed=1), "nope")


def test_generate_instance_deterministic():
    a = generate_instance(GenParams(80, 0.5, 30, seed=13), "low_degree")
    b = generate_instance(GenParams(80, 0.5, 30, seed=13), "low_degree")
    assert a.planted == b.planted and a.planted_graph == b.planted_graph


def test_params_validation():
    with pytest.raises(ParameterError):
        GenParams(10, 0.5, 11, seed=0)
    with pytest.raises(ParameterError):
        GenParams(10, 1.0, 5, seed=0)
