"""Independent ground-truth computations used to verify every recovery path.

Exact maximum clique via branch and bound with a greedy-coloring bound
(practical up to ~64 vertices), exhaustive clique counting, and the
ground-truth-assisted exact maximum clique for planted instances, which uses
the planted set but never the recovery pipeline's own outputs.
"""

from __future__ import annotations

import math

from .generate import PlantedInstance
from .graph import Graph, VertexSet, complement, degree_in, induced_subgraph, is_clique
from .recovery import DepthExceeded, min_vertex_cover_branching


class OracleUnavailable(RuntimeError):
    """The oracle hit its node budget; the instance must be flagged, not guessed."""


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _greedy_coloring_bound(adj: tuple[int, ...], cand: int) -> int:
    """Greedy sequential coloring of the candidate subgraph; bounds its clique."""
    colors = 0
    rest = cand
    while rest:
        colors += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            rest ^= low
            avail &= ~adj[v]
            avail &= ~low
    return colors


def max_clique_exact(g: Graph, node_budget: int = 2_000_000) -> VertexSet:
    """A maximum clique; ties resolve to the lexicographically smallest vertex list.

    Index-ordered DFS with a greedy-coloring upper bound recomputed per node.
    Raises :class:`OracleUnavailable` once ``node_budget`` nodes are expanded.
    """
    n = g.n
    if n == 0:
        return VertexSet(0, 0)
    adj = g.adj
    best_bits = 1  # vertex 0 alone; lexicographically smallest singleton
    best_size = 1
    nodes = 0

    def expand(current: int, size: int, cand: int):
        nonlocal best_bits, best_size, nodes
        nodes += 1
        if nodes > node_budget:
            raise OracleUnavailable(f"node budget {node_budget} exceeded")
        if not cand:
            if size > best_size:
                best_size, best_bits = size, current
            return
        if size + _greedy_coloring_bound(adj, cand) <= best_size:
            return
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            if size + rest.bit_count() <= best_size:
                return
            expand(current | low, size + 1, cand & adj[v] & ~(low - 1) & ~low)
            rest ^= low

    expand(0, 0, (1 << n) - 1)
    return VertexSet(n, best_bits)


def max_is_exact(g: Graph, node_budget: int = 2_000_000) -> VertexSet:
    """Maximum independent set = maximum clique of the complement."""
    return max_clique_exact(complement(g), node_budget)


def count_all_cliques(g: Graph, limit_n: int = 30, node_budget: int = 50_000_000) -> int:
    """Exact count of nonempty vertex subsets inducing cliques (singletons included)."""
    if g.n > limit_n:
        raise OracleUnavailable(f"clique counting limited to n <= {limit_n}")
    adj = g.adj
    count = 0

    def extend(cand: int):
        nonlocal count
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            count += 1
            if count > node_budget:
                raise OracleUnavailable("clique count budget exceeded")
            extend(cand & adj[v] & ~(low - 1) & ~low)
            rest ^= low

    extend((1 << g.n) - 1)
    return count


def extension_bound(n: int, p: float, log_base: str = "e") -> float:
    """How many vertices can join a k-set's neighborhood-extension, w.h.p."""
    log_n = math.log(n) if log_base == "e" else math.log2(n)
    return 48.0 / (1.0 - p) ** 2 * p * log_n


def ground_truth_max_clique(
    inst: PlantedInstance, cover_cap: int | None = None
) -> VertexSet:
    """Exact maximum clique using the planted set as a head start.

    Builds the candidate set (planted set plus every vertex with >= 3k/4
    neighbors in it) and removes an exact minimum vertex cover of its
    complement.  Independent of the theta pipeline.  Raises
    :class:`OracleUnavailable` when the candidate set is implausibly large or
    the cover search exceeds its cap: flagged instances are excluded from
    comparisons, never silently guessed.
    """
    g = inst.planted_graph
    k = len(inst.planted)
    n = g.n
    if k == 0:
        raise OracleUnavailable("no planted set to start from")
    threshold = 0.75 * k
    bits = inst.planted.bits
    for v in range(n):
        if not bits >> v & 1 and degree_in(g, v, inst.planted) >= threshold:
            bits |= 1 << v
    candidates = VertexSet(n, bits)
    bound = k + 10 * extension_bound(n, inst.params.p)
    if len(candidates) > bound:
        raise OracleUnavailable(
            f"candidate set of size {len(candidates)} exceeds {bound:.0f}"
        )
    sub, index_map = induced_subgraph(g, candidates)
    cap = cover_cap if cover_cap is not None else len(candidates)
    try:
        cover = min_vertex_cover_branching(complement(sub), cap)
    except DepthExceeded as exc:
        raise OracleUnavailable(f"cover search exceeded its cap: {exc}") from exc
    clique_bits = 0
    for a in range(sub.n):
        if a not in cover:
            clique_bits |= 1 << index_map[a]
    result = VertexSet(n, clique_bits)
    assert is_clique(g, result)
    return result
