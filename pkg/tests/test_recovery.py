import math

import numpy as np
import pytest

from plantedclique.generate import GenParams, generate_instance, sample_gnp
from plantedclique.graph import Graph, VertexSet, complement, is_clique
from plantedclique.oracle import ground_truth_max_clique, max_clique_exact
from plantedclique.recovery import (
    GUESS_SIZE_CAP,
    DepthExceeded,
    RecoveryFailed,
    RecoveryParams,
    default_branch_cap,
    guess_subset_size,
    min_vertex_cover_branching,
    recover_guessing,
    recover_high_degree,
    recover_theta,
)
from plantedclique.theta import SolverConfig

from conftest import random_graph

FAST = RecoveryParams(theta_cfg=SolverConfig(eps=1e-4))


def exhaustive_min_cover_size(g: Graph) -> int:
    n = g.n
    masks = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in g.edges():
        ok &= (masks & ((1 << u) | (1 << v))) != 0
    sizes = np.array([m.bit_count() for m in range(1 << n)])
    return int(sizes[ok].min())


def test_cover_edgeless():
    assert min_vertex_cover_branching(Graph.empty(6), 6) == VertexSet(6, 0)


def test_cover_single_edge():
    cover = min_vertex_cover_branching(Graph.from_edges(3, [(0, 2)]), 3)
    assert len(cover) == 1


def test_cover_c5():
    assert len(min_vertex_cover_branching(Graph.cycle(5), 5)) == 3


def test_cover_matches_exhaustive():
    for s in range(120):
        g = random_graph(4 + s % 9, 0.45, seed=s)
        got = min_vertex_cover_branching(g, g.n)
        assert len(got) == exhaustive_min_cover_size(g)
        for u, v in g.edges():
            assert u in got or v in got


def test_cover_depth_cap():
    with pytest.raises(DepthExceeded):
        min_vertex_cover_branching(Graph.complete(6), 2)


def test_default_branch_cap_formula():
    assert default_branch_cap(400) == math.ceil(10 * math.log(400)) + 20


def test_recover_theta_on_complete_graph():
    inst = generate_instance(GenParams(30, 0.5, 30, seed=1), "random")
    rep = recover_theta(inst.planted_graph, 30, FAST)
    assert rep.verified and rep.clique == VertexSet.full(30)
    assert rep.cover_size == 0


def test_recover_theta_finds_planted_clique():
    for s in range(3):
        inst = generate_instance(GenParams(100, 0.5, 50, seed=500 + s), "random")
        rep = recover_theta(inst.planted_graph, 50)
        truth = ground_truth_max_clique(inst)
        assert rep.verified
        assert rep.clique == truth
        assert inst.planted.issubset(rep.candidates)
        assert truth.issubset(rep.candidates)


def test_recover_theta_anchored_adversary():
    inst = generate_instance(
        GenParams(100, 0.5, 50, seed=700), "common_neighborhood", t_size=1
    )
    rep = recover_theta(inst.planted_graph, 50)
    truth = ground_truth_max_clique(inst)
    assert rep.verified and len(rep.clique) > 50
    assert rep.clique == truth


def test_recover_theta_unverified_without_planting():
    g = sample_gnp(60, 0.5, seed=9)
    rep = recover_theta(g, 30, FAST)
    assert not rep.verified
    assert is_clique(g, rep.clique)


def test_guess_subset_size_formula():
    s_formula, s_used, beta = guess_subset_size(0.5, 0.9, 1.0)
    assert s_formula == 16
    assert s_used == GUESS_SIZE_CAP
    assert beta == 1.0 - 1.0 / (4 * 7 + 3)
    s_formula, s_used, beta = guess_subset_size(0.5, 0.5, 20.0)
    assert beta == pytest.approx(2 / 3) and s_used == 2


def test_recover_guessing_small_instance():
    params = RecoveryParams(s_guess=1, theta_cfg=SolverConfig(eps=1e-4))
    for s in range(2):
        inst = generate_instance(GenParams(48, 0.5, 16, seed=70 + s), "random")
        rep = recover_guessing(inst.planted_graph, 16, params)
        truth = max_clique_exact(inst.planted_graph)
        assert rep.verified
        assert len(rep.clique) == len(truth)
        assert is_clique(inst.planted_graph, rep.clique)


def test_recover_guessing_at_least_theta_route():
    params = RecoveryParams(s_guess=1, theta_cfg=SolverConfig(eps=1e-4))
    inst = generate_instance(GenParams(60, 0.5, 24, seed=90), "random")
    base = recover_theta(inst.planted_graph, 24, params)
    assert base.verified
    rep = recover_guessing(inst.planted_graph, 24, params)
    assert len(rep.clique) >= len(base.clique)


def test_recover_guessing_not_found():
    g = sample_gnp(30, 0.3, seed=3)
    with pytest.raises(RecoveryFailed):
        recover_guessing(g, 25, RecoveryParams(s_guess=1, theta_cfg=SolverConfig(eps=1e-4)))


@pytest.mark.slow
def test_recover_guessing_reduced_regime_monte_carlo():
    # Scaled-down stand-in for the full guessing experiment; the spec-scale
    # run (n=600, s=6) needs ~C(37,6) sub-solves and is not desk-feasible.
    params = RecoveryParams(s_guess=2, theta_cfg=SolverConfig(eps=1e-4))
    ok = 0
    for s in range(3):
        inst = generate_instance(GenParams(120, 0.5, 18, seed=110 + s), "random")
        rep = recover_guessing(inst.planted_graph, 18, params)
        truth = ground_truth_max_clique(inst)
        ok += int(rep.verified and len(rep.clique) >= len(truth))
    assert ok >= 2


def test_recover_high_degree_complete_graph():
    g = Graph.complete(20)
    rep = recover_high_degree(g, 20)
    assert rep.verified and rep.clique == VertexSet.full(20)


def test_recover_high_degree_planted():
    for s in range(3):
        inst = generate_instance(GenParams(300, 0.5, 150, seed=900 + s), "random")
        rep = recover_high_degree(inst.planted_graph, 150)
        assert rep.verified
        assert inst.planted.issubset(rep.clique)


def test_recover_high_degree_low_degree_adversary():
    inst = generate_instance(GenParams(300, 0.5, 150, seed=950), "low_degree")
    rep = recover_high_degree(inst.planted_graph, 150)
    assert rep.verified


def test_recover_high_degree_warns_below_gate():
    g = sample_gnp(100, 0.5, seed=2)
    with pytest.warns(UserWarning, match="high-degree regime"):
        recover_high_degree(g, 10)


def test_recover_high_degree_independent_set_via_complement():
    inst = generate_instance(GenParams(300, 0.5, 150, seed=970), "is_random")
    rep = recover_high_degree(complement(inst.planted_graph), 150)
    assert rep.verified
    assert inst.planted.issubset(rep.clique)
