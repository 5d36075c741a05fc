from __future__ import annotations

import random

import pytest

from plantedclique.graph import Graph


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Plain Python random graph for tests that should not depend on the
    package's own sampler."""
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


@pytest.fixture
def diamond() -> Graph:
    return Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
