"""Seeded G(n, p) sampling and the catalog of planting strategies.

Every instance keeps its ground truth: the pre-planting base graph, the
planted set, the parameters, and a tag naming the strategy that chose the set.
Planting inserts (clique) or deletes (independent set) edges only inside the
planted set; an audit assertion enforces that on every constructed instance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import (
    Graph,
    GraphError,
    VertexSet,
    common_neighborhood,
    complement,
    from_bool_matrix,
    is_clique,
    is_independent_set,
    to_bool_matrix,
)
from .rng import STREAM_ANCHOR, STREAM_EDGES, STREAM_PLANT, substream


class ParameterError(ValueError):
    """Caller-supplied parameters outside the documented ranges."""


class GenerationError(RuntimeError):
    """A sampling strategy could not realize its postcondition."""


# Below this edge probability, sampling walks pair gaps geometrically
# instead of flipping one coin per pair.
SPARSE_THRESHOLD = 0.01

# Re-draws of the anchor set before giving up on a too-small neighborhood.
ANCHOR_REDRAWS = 32


@dataclass(frozen=True)
class GenParams:
    n: int
    p: float
    k: int
    seed: int

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError("n must be >= 0")
        if not 0.0 < self.p < 1.0:
            raise ParameterError("p must lie strictly between 0 and 1")
        if not 0 <= self.k <= self.n:
            raise ParameterError("k must satisfy 0 <= k <= n")


@dataclass(frozen=True)
class AdversaryTag:
    """Names the strategy that placed the planted set, plus its parameters."""

    strategy: str
    kind: str  # "clique" or "independent_set"
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PlantedInstance:
    base: Graph
    planted_graph: Graph
    planted: VertexSet
    params: GenParams
    adversary: AdversaryTag

    def __post_init__(self):
        audit_instance(self)


def audit_instance(inst: PlantedInstance) -> None:
    """Ground-truth audit: the planting touched only pairs inside the set."""
    kbits = inst.planted.bits
    for i in range(inst.base.n):
        diff = inst.base.adj[i] ^ inst.planted_graph.adj[i]
        if diff and not (kbits >> i & 1 and diff & ~kbits == 0):
            raise GenerationError("planting modified a pair outside the planted set")
    if inst.adversary.kind == "clique":
        if not is_clique(inst.planted_graph, inst.planted):
            raise GenerationError("planted set is not a clique")
    elif inst.adversary.kind == "independent_set":
        if not is_independent_set(inst.planted_graph, inst.planted):
            raise GenerationError("planted set is not independent")
    else:
        raise GenerationError(f"unknown planting kind {inst.adversary.kind!r}")


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every unordered pair is an edge independently with probability p."""
    if not 0.0 < p < 1.0:
        raise ParameterError("p must lie strictly between 0 and 1")
    if n == 0:
        return Graph.empty(0)
    rng = substream(seed, STREAM_EDGES)
    if p >= SPARSE_THRESHOLD:
        g = _sample_dense(n, p, rng)
    else:
        g = _sample_sparse(n, p, rng)
    _flag_density(g, n, p)
    return g


def _sample_dense(n: int, p: float, rng: np.random.Generator) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return from_bool_matrix(upper | upper.T)


def _sample_sparse(n: int, p: float, rng: np.random.Generator) -> Graph:
    # Geometric gaps over the linearized upper triangle: O(m) draws.
    total = n * (n - 1) // 2
    edges = []
    pos = -1
    log1mp = math.log1p(-p)
    while True:
        u = rng.random()
        pos += 1 + int(math.log(max(u, 1e-300)) / log1mp)
        if pos >= total:
            break
        edges.append(_pair_from_linear(n, pos))
    return Graph.from_edges(n, edges)


def _pair_from_linear(n: int, pos: int) -> tuple[int, int]:
    # Row i owns (n - 1 - i) pairs starting at offset i*(2n - i - 1)/2; invert
    # the quadratic, then nudge against float error.
    i = int(((2 * n - 1) - math.sqrt((2 * n - 1) ** 2 - 8 * pos)) / 2)
    while i * (2 * n - i - 1) // 2 > pos:
        i -= 1
    while (i + 1) * (2 * n - i - 2) // 2 <= pos:
        i += 1
    j = i + 1 + (pos - i * (2 * n - i - 1) // 2)
    return i, j


def _flag_density(g: Graph, n: int, p: float) -> None:
    if n < 100:
        return
    pairs = n * (n - 1) // 2
    sd = math.sqrt(pairs * p * (1 - p))
    if abs(g.edge_count() - p * pairs) > 3 * sd:
        warnings.warn(
            f"edge count {g.edge_count()} is more than 3 sd from {p * pairs:.1f}",
            stacklevel=3,
        )


def _overlay_clique(g: Graph, kbits: int) -> Graph:
    rows = list(g.adj)
    for v in _members(kbits):
        rows[v] |= kbits & ~(1 << v)
    return Graph(g.n, rows, _validated=True)


def _remove_internal_edges(g: Graph, kbits: int) -> Graph:
    rows = list(g.adj)
    for v in _members(kbits):
        rows[v] &= ~kbits
    return Graph(g.n, rows, _validated=True)


def _members(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _choose_subset(rng: np.random.Generator, pool: list[int], k: int) -> int:
    picked = rng.choice(len(pool), size=k, replace=False)
    bits = 0
    for idx in picked:
        bits |= 1 << pool[int(idx)]
    return bits


def plant_random(g: Graph, k: int, seed: int, p: float) -> PlantedInstance:
    """Make a uniformly random k-subset into a clique."""
    if k > g.n:
        raise ParameterError("k must not exceed the vertex count")
    rng = substream(seed, STREAM_PLANT)
    kbits = _choose_subset(rng, list(range(g.n)), k) if k else 0
    return PlantedInstance(
        base=g,
        planted_graph=_overlay_clique(g, kbits),
        planted=VertexSet(g.n, kbits),
        params=GenParams(g.n, p, k, seed),
        adversary=AdversaryTag("random", "clique"),
    )


def plant_common_neighborhood(
    g: Graph, k: int, t_size: int, seed: int, p: float
) -> PlantedInstance:
    """Plant inside the common neighborhood of a random anchor set.

    The planted set then extends to a strictly larger clique through the
    anchors, which is the hard case for value-only recovery.  ``t_size = 0``
    degenerates to uniform planting.
    """
    if k > g.n:
        raise ParameterError("k must not exceed the vertex count")
    if t_size < 0:
        raise ParameterError("t_size must be >= 0")
    if t_size == 0:
        inst = plant_random(g, k, seed, p)
        return PlantedInstance(
            base=inst.base,
            planted_graph=inst.planted_graph,
            planted=inst.planted,
            params=inst.params,
            adversary=AdversaryTag("common_neighborhood", "clique", {"t_size": 0, "anchors": []}),
        )
    anchor_rng = substream(seed, STREAM_ANCHOR)
    plant_rng = substream(seed, STREAM_PLANT)
    best = -1
    for _ in range(ANCHOR_REDRAWS):
        tbits = _choose_subset(anchor_rng, list(range(g.n)), t_size)
        pool = common_neighborhood(g, VertexSet(g.n, tbits)).to_sorted_list()
        best = max(best, len(pool))
        if len(pool) >= k:
            kbits = _choose_subset(plant_rng, pool, k) if k else 0
            return PlantedInstance(
                base=g,
                planted_graph=_overlay_clique(g, kbits),
                planted=VertexSet(g.n, kbits),
                params=GenParams(g.n, p, k, seed),
                adversary=AdversaryTag(
                    "common_neighborhood",
                    "clique",
                    {"t_size": t_size, "anchors": sorted(_members(tbits))},
                ),
            )
    raise GenerationError(
        f"no anchor set of size {t_size} had a common neighborhood of >= {k} "
        f"vertices after {ANCHOR_REDRAWS} draws (largest found: {best})"
    )


def _select_min_internal_edges(g: Graph, k: int) -> int:
    """Greedy k-subset: repeatedly add the vertex with fewest edges into it.

    Ties break toward the smallest vertex id, so the selection is a pure
    function of the graph.
    """
    n = g.n
    if k == 0:
        return 0
    dense = to_bool_matrix(g)
    counts = np.zeros(n, dtype=np.int64)
    chosen = np.zeros(n, dtype=bool)
    bits = 0
    for _ in range(k):
        masked = np.where(chosen, np.iinfo(np.int64).max, counts)
        v = int(np.argmin(masked))
        chosen[v] = True
        bits |= 1 << v
        counts += dense[v]
    return bits


def plant_low_degree(g: Graph, k: int, seed: int, p: float) -> PlantedInstance:
    """Plant on the greedy selection that minimizes mutual edges in the base."""
    if k > g.n:
        raise ParameterError("k must not exceed the vertex count")
    kbits = _select_min_internal_edges(g, k)
    return PlantedInstance(
        base=g,
        planted_graph=_overlay_clique(g, kbits),
        planted=VertexSet(g.n, kbits),
        params=GenParams(g.n, p, k, seed),
        adversary=AdversaryTag("low_degree", "clique"),
    )


IS_STRATEGIES = ("random", "low_degree_complement")


def plant_independent_set(
    g: Graph, k: int, strategy: str, seed: int, p: float
) -> PlantedInstance:
    """Delete all internal edges of the selected k-subset.

    ``low_degree_complement`` runs the greedy minimizer on the complement
    graph, so the same seed selects the same set as the corresponding clique
    planting on the complement.
    """
    if k > g.n:
        raise ParameterError("k must not exceed the vertex count")
    if strategy == "random":
        rng = substream(seed, STREAM_PLANT)
        kbits = _choose_subset(rng, list(range(g.n)), k) if k else 0
    elif strategy == "low_degree_complement":
        kbits = _select_min_internal_edges(complement(g), k)
    else:
        raise ParameterError(f"unknown independent-set strategy {strategy!r}")
    return PlantedInstance(
        base=g,
        planted_graph=_remove_internal_edges(g, kbits),
        planted=VertexSet(g.n, kbits),
        params=GenParams(g.n, p, k, seed),
        adversary=AdversaryTag(f"is_{strategy}", "independent_set"),
    )


CLIQUE_STRATEGIES = ("random", "common_neighborhood", "low_degree")


def generate_instance(
    params: GenParams, strategy: str, **strategy_params
) -> PlantedInstance:
    """Sample the base graph and plant in one call, all from ``params.seed``."""
    g = sample_gnp(params.n, params.p, params.seed)
    if strategy == "random":
        return plant_random(g, params.k, params.seed, params.p)
    if strategy == "common_neighborhood":
        t_size = strategy_params.get("t_size", 1)
        return plant_common_neighborhood(g, params.k, t_size, params.seed, params.p)
    if strategy == "low_degree":
        return plant_low_degree(g, params.k, params.seed, params.p)
    if strategy == "is_random":
        return plant_independent_set(g, params.k, "random", params.seed, params.p)
    if strategy == "is_low_degree":
        return plant_independent_set(
            g, params.k, "low_degree_complement", params.seed, params.p
        )
    raise ParameterError(f"unknown strategy {strategy!r}")
