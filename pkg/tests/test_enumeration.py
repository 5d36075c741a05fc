import io
import math

import pytest

from plantedclique.enumeration import (
    EnumReport,
    RegimeWarning,
    count_cliques_vs_maximal,
    list_maximal_cliques,
    recover_sparse,
    sparse_budget,
)
from plantedclique.generate import GenParams, generate_instance, sample_gnp
from plantedclique.graph import Graph, VertexSet, is_clique

from conftest import random_graph


def brute_force_maximal_cliques(g: Graph) -> set[int]:
    cliques = set()

    def extend(current: int, cand: int):
        for v in range(g.n):
            if cand >> v & 1:
                extend(current | 1 << v, cand & g.adj[v] & ~((1 << (v + 1)) - 1))
        if current:
            cliques.add(current)

    extend(0, (1 << g.n) - 1)
    maximal = set()
    for c in cliques:
        common = (1 << g.n) - 1
        for v in range(g.n):
            if c >> v & 1:
                common &= g.adj[v]
        if common & ~c == 0:
            maximal.add(c)
    return maximal


def collect_maximal(g: Graph, budget: int = 1 << 20) -> set[int]:
    buf = io.StringIO()
    report = list_maximal_cliques(g, budget, stream=buf)
    assert not report.truncated
    out = set()
    for line in buf.getvalue().splitlines():
        bits = 0
        for tok in line.split():
            bits |= 1 << int(tok)
        out.add(bits)
    assert len(out) == report.maximal_count
    return out


def test_complete_graph_single_maximal():
    report = list_maximal_cliques(Graph.complete(8), 100)
    assert report.maximal_count == 1
    assert report.max_clique == VertexSet.full(8)
    assert not report.truncated


def test_edgeless_graph_counts_vertices():
    report = list_maximal_cliques(Graph.empty(6), 100)
    assert report.maximal_count == 6
    assert len(report.max_clique) == 1


def test_c5_five_maximal_cliques():
    report = list_maximal_cliques(Graph.cycle(5), 100)
    assert report.maximal_count == 5
    assert len(report.max_clique) == 2


def test_budget_truncation():
    report = list_maximal_cliques(Graph.empty(10), budget=3)
    assert report.truncated and report.maximal_count == 3


def test_matches_brute_force():
    for s in range(150):
        g = random_graph(4 + s % 12, 0.4, seed=s)
        assert collect_maximal(g) == brute_force_maximal_cliques(g)


def test_emitted_cliques_are_maximal():
    g = random_graph(60, 0.3, seed=77)
    for bits in collect_maximal(g):
        common = (1 << g.n) - 1
        s = VertexSet(g.n, bits)
        assert is_clique(g, s)
        for v in s:
            common &= g.adj[v]
        assert common & ~bits == 0


def test_sparse_budget_formula():
    assert sparse_budget(3000, 3) == math.ceil(4 * 3000**1.25)


def test_recover_sparse_finds_planted_clique():
    n = 500
    p = n**-0.8
    for strategy in ("random", "low_degree"):
        inst = generate_instance(GenParams(n, p, 12, seed=31), strategy)
        with pytest.warns(RegimeWarning):
            report = recover_sparse(inst.planted_graph, 12, t_param=3)
        assert not report.truncated
        assert inst.planted.issubset(report.max_clique)
        assert len(report.max_clique) >= 12


def test_recover_sparse_no_planting_small_cliques():
    n = 500
    g = sample_gnp(n, n**-0.8, seed=32)
    with pytest.warns(RegimeWarning):
        report = recover_sparse(g, 0, t_param=3)
    assert len(report.max_clique) <= 3


def test_count_inequality_examples():
    base = Graph.empty(5)
    from plantedclique.generate import plant_random

    inst = plant_random(base, 3, seed=1, p=0.5)
    cliques_base, maximal_planted, ok = count_cliques_vs_maximal(base, inst)
    assert cliques_base == 5 and ok

    base = Graph.complete(5)
    inst = plant_random(base, 5, seed=2, p=0.5)
    cliques_base, maximal_planted, ok = count_cliques_vs_maximal(base, inst)
    assert cliques_base == 2**5 - 1 and maximal_planted == 1 and ok


def test_count_inequality_random_instances():
    from plantedclique.generate import plant_low_degree, plant_random

    for s in range(200):
        n = 6 + s % 13
        base = sample_gnp(n, 0.35, seed=4000 + s)
        k = s % (n + 1)
        plant = plant_random if s % 2 else plant_low_degree
        inst = plant(base, k, seed=s, p=0.35)
        _, _, ok = count_cliques_vs_maximal(base, inst)
        assert ok
