"""Clique recovery pipelines.

Three routes to the maximum clique of a planted graph, none of which sees the
ground truth:

* ``recover_theta``: solve the theta SDP on the complement, keep vertices with
  handle contribution >= 3/4, widen to everything with >= 3k/4 neighbors in
  that core, and finish with an exact minimum vertex cover of the candidate
  set's complement.
* ``recover_guessing``: wrap the theta route in exhaustive guessing of a small
  clique subset, for planted sizes below the theta route's threshold.
* ``recover_high_degree``: degree-based candidate selection for large planted
  sizes, same vertex-cover finish.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

from .graph import (
    Graph,
    VertexSet,
    common_neighborhood,
    complement,
    degree_in,
    induced_subgraph,
    is_clique,
)
from .theta import SolverConfig, ThetaSolution, theta


class DepthExceeded(RuntimeError):
    """Vertex-cover branching needed more removals than the configured cap."""


class RecoveryFailed(RuntimeError):
    """No candidate produced a verified clique of the requested size."""


# Exhaustive guessing beyond this subset size is not affordable; the formula
# value is still computed and reported.
GUESS_SIZE_CAP = 8


@dataclass(frozen=True)
class RecoveryParams:
    """Tuning knobs; thresholds default to the values the analysis fixes."""

    epsilon: float = 1.0
    c_cap: float = 0.9
    s_guess: int | None = None
    branch_depth_cap: int | None = None
    theta_cfg: SolverConfig = field(default_factory=SolverConfig)
    contribution_threshold: float = 0.75
    neighbor_fraction: float = 0.75
    high_degree_const: float = 1.0

    @property
    def zeta(self) -> float:
        return 5.0 / (1.0 - self.c_cap)


@dataclass(frozen=True)
class RecoveryReport:
    clique: VertexSet
    theta_value: float | None
    core: VertexSet
    candidates: VertexSet
    cover_size: int
    branch_nodes: int
    wall_ms: float
    verified: bool


def default_branch_cap(n: int) -> int:
    return math.ceil(10.0 * math.log(max(n, 2))) + 20


def guess_subset_size(p: float, c: float, eps: float) -> tuple[int, int, float]:
    """Subset size for guessing: (formula value, capped value actually used, beta)."""
    zeta = 5.0 / (1.0 - c)
    if eps < zeta:
        lg = math.ceil(math.log(2.0 * zeta / eps) / math.log(1.0 / p))
        s = 2 * lg + 2
        beta = 1.0 - 1.0 / (4 * lg + 3)
    else:
        s = 2
        beta = 2.0 / 3.0
    return s, min(s, GUESS_SIZE_CAP), beta


def min_vertex_cover_branching(g: Graph, depth_cap: int) -> VertexSet:
    cover, _ = _min_vertex_cover(g, depth_cap)
    return cover


def _min_vertex_cover(g: Graph, depth_cap: int) -> tuple[VertexSet, int]:
    """Exact minimum vertex cover by branching on the smallest remaining edge.

    Every edge needs one endpoint removed; both choices are explored, smaller
    endpoint first, so ties resolve deterministically.  Raises
    :class:`DepthExceeded` if every cover needs more than ``depth_cap``
    vertices.
    """
    n = g.n
    adj = g.adj
    full = (1 << n) - 1
    best: list[int | None] = [None]
    best_size = [depth_cap + 1]
    nodes = [0]

    def first_edge(active: int) -> tuple[int, int] | None:
        rest = active
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            nbrs = adj[v] & active & ~(low | (low - 1))
            if nbrs:
                u = (nbrs & -nbrs).bit_length() - 1
                return v, u
            rest ^= low
        return None

    def branch(active: int, removed: int, removed_count: int):
        nodes[0] += 1
        if removed_count >= best_size[0]:
            return
        edge = first_edge(active)
        if edge is None:
            best[0] = removed
            best_size[0] = removed_count
            return
        v, u = edge
        branch(active & ~(1 << v), removed | 1 << v, removed_count + 1)
        branch(active & ~(1 << u), removed | 1 << u, removed_count + 1)

    branch(full, 0, 0)
    if best[0] is None:
        raise DepthExceeded(f"no vertex cover of size <= {depth_cap}")
    return VertexSet(n, best[0]), nodes[0]


def _finish_with_cover(
    g: Graph, candidates: VertexSet, depth_cap: int
) -> tuple[VertexSet, int, int]:
    """Remove an exact minimum vertex cover of the candidates' complement."""
    sub, index_map = induced_subgraph(g, candidates)
    cover, nodes = _min_vertex_cover(complement(sub), depth_cap)
    bits = 0
    for a in range(sub.n):
        if a not in cover:
            bits |= 1 << index_map[a]
    return VertexSet(g.n, bits), len(cover), nodes


def _core_and_candidates(
    g: Graph, k: int, sol: ThetaSolution, params: RecoveryParams
) -> tuple[VertexSet, VertexSet]:
    core_bits = 0
    for i, c in enumerate(sol.contributions):
        if c >= params.contribution_threshold:
            core_bits |= 1 << i
    core = VertexSet(g.n, core_bits)
    cand_bits = core_bits
    threshold = params.neighbor_fraction * k
    for v in range(g.n):
        if not cand_bits >> v & 1 and (g.adj[v] & core_bits).bit_count() >= threshold:
            cand_bits |= 1 << v
    return core, VertexSet(g.n, cand_bits)


def recover_theta(g: Graph, k: int, params: RecoveryParams | None = None) -> RecoveryReport:
    """Theta-route recovery; sees only the graph and the target size k."""
    params = params or RecoveryParams()
    start = time.perf_counter()
    sol = theta(complement(g), params.theta_cfg)
    core, candidates = _core_and_candidates(g, k, sol, params)
    cap = params.branch_depth_cap or default_branch_cap(g.n)
    clique, cover_size, nodes = _finish_with_cover(g, candidates, cap)
    assert is_clique(g, clique)
    return RecoveryReport(
        clique=clique,
        theta_value=sol.value,
        core=core,
        candidates=candidates,
        cover_size=cover_size,
        branch_nodes=nodes,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        verified=len(clique) >= k,
    )


def _cliques_of_size(g: Graph, size: int, min_neighborhood: int):
    """Lexicographic stream of (s-clique, common neighborhood bits).

    Subtrees are pruned once the prefix's common neighborhood falls below
    ``min_neighborhood``: the final neighborhood only shrinks, so no viable
    candidate is lost.
    """
    full = (1 << g.n) - 1
    adj = g.adj

    def extend(chosen: tuple[int, ...], commons: int, last: int):
        if len(chosen) == size:
            yield chosen, commons
            return
        rest = (commons if chosen else full) & ~((1 << (last + 1)) - 1)
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            new_commons = (commons if chosen else full) & adj[v]
            if new_commons.bit_count() >= min_neighborhood:
                yield from extend(chosen + (v,), new_commons, v)
            rest ^= low

    yield from extend((), full, -1)


def recover_guessing(g: Graph, k: int, params: RecoveryParams | None = None) -> RecoveryReport:
    """Guess every clique subset of size s, recover inside its common
    neighborhood, and keep the biggest verified union."""
    params = params or RecoveryParams()
    start = time.perf_counter()
    p_est = g.density()
    if params.s_guess is not None:
        s = params.s_guess
    else:
        _, s, _ = guess_subset_size(max(p_est, 1e-9), params.c_cap, params.epsilon)
    s = max(1, min(s, GUESS_SIZE_CAP, k))
    best: RecoveryReport | None = None
    best_set: VertexSet | None = None
    for chosen, commons in _cliques_of_size(g, s, k - s):
        pool = VertexSet(g.n, commons & ~sum(1 << v for v in chosen))
        if len(pool) < k - s:
            continue
        sub, index_map = induced_subgraph(g, pool)
        try:
            rep = recover_theta(sub, k - s, params)
        except DepthExceeded:
            continue
        lifted = 0
        for a in rep.clique:
            lifted |= 1 << index_map[a]
        for v in chosen:
            lifted |= 1 << v
        candidate = VertexSet(g.n, lifted)
        if not is_clique(g, candidate):
            continue
        if best_set is None or len(candidate) > len(best_set):
            best_set = candidate
            best = rep
    if best_set is None or len(best_set) < k:
        raise RecoveryFailed(f"no guessed subset produced a verified {k}-clique")
    return RecoveryReport(
        clique=best_set,
        theta_value=best.theta_value if best else None,
        core=best.core if best else VertexSet(g.n, 0),
        candidates=best.candidates if best else VertexSet(g.n, 0),
        cover_size=best.cover_size if best else 0,
        branch_nodes=best.branch_nodes if best else 0,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        verified=True,
    )


def recover_high_degree(g: Graph, k: int, params: RecoveryParams | None = None) -> RecoveryReport:
    """Large-k route: the planted set dominates the degree sequence."""
    params = params or RecoveryParams()
    start = time.perf_counter()
    n = g.n
    p_est = g.density()
    gate = params.high_degree_const * math.sqrt(max(n * p_est, 1.0) * math.log(max(n, 2)))
    if k < gate:
        warnings.warn(
            f"k={k} is below the high-degree regime gate {gate:.1f}", stacklevel=2
        )
    half = max(1, k // 2)
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    top_bits = 0
    for v in order[:half]:
        top_bits |= 1 << v
    threshold = params.neighbor_fraction * half
    cand_bits = top_bits
    for v in range(n):
        if not cand_bits >> v & 1 and (g.adj[v] & top_bits).bit_count() >= threshold:
            cand_bits |= 1 << v
    candidates = VertexSet(n, cand_bits)
    cap = params.branch_depth_cap or default_branch_cap(n)
    clique, cover_size, nodes = _finish_with_cover(g, candidates, cap)
    assert is_clique(g, clique)
    return RecoveryReport(
        clique=clique,
        theta_value=None,
        core=VertexSet(n, top_bits),
        candidates=candidates,
        cover_size=cover_size,
        branch_nodes=nodes,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        verified=len(clique) >= k,
    )
