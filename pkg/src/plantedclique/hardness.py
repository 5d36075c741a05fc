"""Hardness gadgets: edge-subdivision reduction, pattern planting, copy counts.

The reduction turns any 3-regular graph into a balanced, barely-above-degree-2
gadget whose independence number shifts by an exactly known offset.  Pattern
planting embeds a small graph into one slot per partition class of a random
graph; copy counting and the likelihood ratio quantify how little that
planting disturbs the distribution.  The repetition loop turns any planted-set
solver into an independent-set finder for the pattern graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .generate import ParameterError, sample_gnp
from .graph import (
    Graph,
    VertexSet,
    complement,
    is_independent_set,
)
from .rng import STREAM_COPY, STREAM_EXTRA_IS, STREAM_LOOP, substream

# Exhaustive densest-subgraph check is affordable up to this many vertices;
# larger graphs go through the exact max-flow decision.
BALANCED_BRUTE_LIMIT = 20

COPY_COUNT_MAX_PARTS = 8
COPY_COUNT_MAX_PART_SIZE = 64


@dataclass(frozen=True)
class ReductionOutput:
    gadget: Graph
    t: int
    alpha_avg: Fraction
    is_offset: int     # independent sets map k -> k + is_offset

    def map_is_size(self, k: int) -> int:
        return k + self.is_offset


def reduce_3regular(h: Graph, t: int) -> ReductionOutput:
    """Replace every edge by a path with 2t intermediate vertices.

    For a 3-regular input on v vertices this yields v + 2t*(3v/2) vertices of
    average degree (6t+3)/(3t+1), balanced, and shifts the maximum independent
    set size by exactly t per original edge.
    """
    if t < 1:
        raise ParameterError("t must be >= 1")
    if h.n == 0 or any(h.degree(v) != 3 for v in range(h.n)):
        raise ParameterError("input graph must be 3-regular")
    edges = list(h.edges())
    n_out = h.n + 2 * t * len(edges)
    out_edges = []
    nxt = h.n
    for u, v in edges:
        path = [u] + list(range(nxt, nxt + 2 * t)) + [v]
        nxt += 2 * t
        out_edges.extend(zip(path, path[1:]))
    gadget = Graph.from_edges(n_out, out_edges)
    alpha_avg = Fraction(2 * gadget.edge_count(), gadget.n)
    assert alpha_avg == Fraction(6 * t + 3, 3 * t + 1)
    return ReductionOutput(
        gadget=gadget, t=t, alpha_avg=alpha_avg, is_offset=t * len(edges)
    )


def _max_density_brute(g: Graph) -> Fraction:
    """Max |E(S)|/|S| over nonempty S, by include/exclude DFS with running counts."""
    best = Fraction(0)
    adj = g.adj

    def walk(v: int, chosen_bits: int, size: int, edges: int):
        nonlocal best
        if v == g.n:
            if size:
                best = max(best, Fraction(edges, size))
            return
        walk(v + 1, chosen_bits, size, edges)
        gained = (adj[v] & chosen_bits).bit_count()
        walk(v + 1, chosen_bits | 1 << v, size + 1, edges + gained)

    walk(0, 0, 0, 0)
    return best


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, cap: int, rcap: int = 0) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(rcap)

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for eid in self.head[u]:
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, limit: int) -> int:
                if u == t:
                    return limit
                while it[u] < len(self.head[u]):
                    eid = self.head[u][it[u]]
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] == level[u] + 1:
                        pushed = dfs(v, min(limit, self.cap[eid]))
                        if pushed:
                            self.cap[eid] -= pushed
                            self.cap[eid ^ 1] += pushed
                            return pushed
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 62)
                if not pushed:
                    break
                flow += pushed


def _has_denser_subgraph(g: Graph) -> bool:
    """Exact max-flow decision: does any induced subgraph beat |E|/|V|?

    Min cut of the standard density network equals
    n*(n*m) - 2*max_S (n*e(S) - m*|S|); the whole-graph density is beaten iff
    the min cut drops below n*n*m.  Capacities are integers, so the decision
    is exact.
    """
    n, m = g.n, g.edge_count()
    if n == 0 or m == 0:
        return False
    source, sink = n, n + 1
    net = _Dinic(n + 2)
    for v in range(n):
        net.add(source, v, n * m)
        net.add(v, sink, n * m + 2 * m - n * g.degree(v))
    for u, v in g.edges():
        net.add(u, v, n, n)
    return net.max_flow(source, sink) < n * n * m


def is_balanced(h: Graph) -> bool:
    """True iff no induced subgraph has average degree above the whole graph's."""
    if h.n == 0:
        return True
    whole = Fraction(h.edge_count(), h.n)
    if h.n <= BALANCED_BRUTE_LIMIT:
        return _max_density_brute(h) <= whole
    return not _has_denser_subgraph(h)


@dataclass(frozen=True)
class PlantedHInstance:
    graph: Graph
    pattern: Graph                 # the planted graph H
    part_size: int
    copy_vertices: VertexSet       # one vertex per part, hosting the pattern
    extra_independent: VertexSet   # planted independent set outside the copy
    n: int
    p: float
    k: int
    k_prime: int
    seed: int
    failed_default: bool

    def part_of(self, v: int) -> int:
        return v // self.part_size

    def copy_list(self) -> list[int]:
        return self.copy_vertices.to_sorted_list()


def _plant_pattern_on(g: Graph, pattern: Graph, copy_sorted: list[int]) -> Graph:
    rows = list(g.adj)
    copy_bits = 0
    for v in copy_sorted:
        copy_bits |= 1 << v
    for i, v in enumerate(copy_sorted):
        row = rows[v] & ~copy_bits
        for j in range(pattern.n):
            if pattern.has_edge(i, j):
                row |= 1 << copy_sorted[j]
        rows[v] = row
    return Graph(g.n, rows, _validated=True)


def plant_pattern(n: int, p: float, pattern: Graph, seed: int) -> PlantedHInstance:
    """Random graph with the pattern planted on one random vertex per part.

    Part i is the contiguous block [i*n/m, (i+1)*n/m); vertex i of the pattern
    lands in part i, so identity of the copy is positional, not up to
    isomorphism.
    """
    m = pattern.n
    if m == 0 or n % m != 0:
        raise ParameterError("pattern size must divide n")
    part = n // m
    g = sample_gnp(n, p, seed)
    rng = substream(seed, STREAM_COPY)
    copy_sorted = [i * part + int(rng.integers(part)) for i in range(m)]
    planted = _plant_pattern_on(g, pattern, copy_sorted)
    return PlantedHInstance(
        graph=planted,
        pattern=pattern,
        part_size=part,
        copy_vertices=VertexSet.from_iterable(n, copy_sorted),
        extra_independent=VertexSet(n, 0),
        n=n,
        p=p,
        k=0,
        k_prime=0,
        seed=seed,
        failed_default=False,
    )


def plant_pattern_with_is(
    n: int, p: float, pattern: Graph, k: int, k_prime: int, seed: int
) -> PlantedHInstance:
    """Pattern planting plus an extra independent set of size k - k_prime
    among the copy's common non-neighbors.

    When too few non-neighbors exist, the documented fallback plants a uniform
    independent set of size k instead and flags ``failed_default``.
    """
    m = pattern.n
    if not 0 <= k_prime <= k <= n - m:
        raise ParameterError("need 0 <= k_prime <= k <= n - m")
    base = plant_pattern(n, p, pattern, seed)
    g = base.graph
    copy_bits = base.copy_vertices.bits
    nbr_bits = 0
    for v in base.copy_vertices:
        nbr_bits |= g.adj[v]
    pool = [
        v
        for v in range(n)
        if not (copy_bits >> v & 1) and not (nbr_bits >> v & 1)
    ]
    rng = substream(seed, STREAM_EXTRA_IS)
    want = k - k_prime
    if len(pool) >= want:
        picked = sorted(int(pool[i]) for i in rng.choice(len(pool), want, replace=False)) if want else []
        extra = VertexSet.from_iterable(n, picked)
        rows = list(g.adj)
        for v in picked:
            rows[v] &= ~extra.bits
        graph = Graph(n, rows, _validated=True)
        failed = False
    else:
        picked = sorted(int(v) for v in rng.choice(n, k, replace=False)) if k else []
        extra = VertexSet.from_iterable(n, picked)
        rows = list(g.adj)
        for v in picked:
            rows[v] &= ~extra.bits
        graph = Graph(n, rows, _validated=True)
        failed = True
    return PlantedHInstance(
        graph=graph,
        pattern=pattern,
        part_size=base.part_size,
        copy_vertices=base.copy_vertices,
        extra_independent=extra,
        n=n,
        p=p,
        k=k,
        k_prime=k_prime,
        seed=seed,
        failed_default=failed,
    )


def count_pattern_copies(g: Graph, pattern: Graph, part_size: int) -> int:
    """Exact number of partition-obeying vertex choices inducing the pattern.

    Backtracks part by part, pruning on the first edge/nonedge mismatch with
    already-placed vertices.
    """
    m = pattern.n
    if m == 0:
        raise ParameterError("pattern must be nonempty")
    if m > COPY_COUNT_MAX_PARTS or part_size > COPY_COUNT_MAX_PART_SIZE:
        raise ParameterError(
            f"copy counting limited to {COPY_COUNT_MAX_PARTS} parts of size "
            f"{COPY_COUNT_MAX_PART_SIZE}"
        )
    if g.n != m * part_size:
        raise ParameterError("graph size must equal parts * part_size")
    placed: list[int] = []

    def backtrack(i: int) -> int:
        if i == m:
            return 1
        total = 0
        for v in range(i * part_size, (i + 1) * part_size):
            row = g.adj[v]
            if all(
                bool(row >> placed[j] & 1) == pattern.has_edge(i, j)
                for j in range(i)
            ):
                placed.append(v)
                total += backtrack(i + 1)
                placed.pop()
        return total

    return backtrack(0)


def expected_copy_count(n: int, m: int, p: float, pattern_edges: int) -> float:
    """(n/m)^m * p^e * (1-p)^(C(m,2) - e) for a pattern with e edges."""
    return (
        (n / m) ** m
        * p**pattern_edges
        * (1.0 - p) ** (m * (m - 1) // 2 - pattern_edges)
    )


def likelihood_ratio(g: Graph, pattern: Graph, part_size: int, p: float) -> float:
    """Observed copy count over its expectation: the exact density ratio
    between the pattern-planted distribution and the plain random one."""
    m = pattern.n
    count = count_pattern_copies(g, pattern, part_size)
    return count / expected_copy_count(g.n, m, p, pattern.edge_count())


RecoverFn = Callable[[Graph, int], Optional[VertexSet]]


def repetition_loop(
    pattern: Graph,
    k_prime: int,
    n: int,
    p: float,
    k: int,
    gamma: float,
    recover_fn: RecoverFn,
    seed: int,
    transcript: list | None = None,
) -> VertexSet | None:
    """Leverage a planted-set solver to find a k_prime independent set of the
    pattern: repeat ceil(10 ln(n)/gamma) times, plant, solve, and accept only a
    size-k independent set meeting the copy in >= k_prime vertices.

    A returned set is verified independent in the pattern before returning, so
    a positive answer is always correct.
    """
    if not 0.0 < gamma <= 1.0:
        raise ParameterError("gamma must lie in (0, 1]")
    iterations = math.ceil(10.0 * math.log(max(n, 2)) / gamma)
    loop_rng_seed = substream(seed, STREAM_LOOP)
    for it in range(iterations):
        inst_seed = int(loop_rng_seed.integers(1 << 63))
        inst = plant_pattern_with_is(n, p, pattern, k, k_prime, inst_seed)
        found = recover_fn(inst.graph, k)
        outcome = "no-set"
        if found is not None and len(found) == k and is_independent_set(inst.graph, found):
            hits = [v for v in found if v in inst.copy_vertices]
            if len(hits) >= k_prime:
                pattern_bits = 0
                for v in hits:
                    pattern_bits |= 1 << inst.part_of(v)
                result = VertexSet(pattern.n, pattern_bits)
                # A dented copy (failed-default planting) can fake a hit; only
                # a set that verifies against the pattern itself is an answer.
                if is_independent_set(pattern, result):
                    if transcript is not None:
                        transcript.append(
                            {"iteration": it, "outcome": "success",
                             "independent_set": result.to_sorted_list()}
                        )
                    return result
                outcome = "copy-damaged"
            else:
                outcome = f"only-{len(hits)}-in-copy"
        elif found is not None:
            outcome = "bad-set"
        if transcript is not None:
            transcript.append({"iteration": it, "outcome": outcome})
    return None


def check_unique_structure(inst: PlantedHInstance) -> bool:
    """Do all maximum independent sets meet the planted copy in >= k_prime
    vertices?  Brute force over maximal cliques of the complement (n <= 30)."""
    if inst.graph.n > 30:
        raise ParameterError("structure check limited to n <= 30")
    from .enumeration import list_maximal_cliques

    comp = complement(inst.graph)
    report = list_maximal_cliques(comp, budget=1 << 22)
    if report.truncated:
        raise ParameterError("too many maximal independent sets to enumerate")
    alpha = len(report.max_clique)
    # re-enumerate, collecting all of maximum size
    maxima: list[int] = []
    stream = _CollectMaxima(alpha, maxima)
    list_maximal_cliques(comp, budget=1 << 22, stream=stream)
    for bits in maxima:
        inter = bits & inst.copy_vertices.bits
        if inter.bit_count() < inst.k_prime:
            return False
    return True


class _CollectMaxima:
    """File-like sink that keeps cliques of one target size as bitmasks."""

    def __init__(self, size: int, out: list[int]):
        self.size = size
        self.out = out

    def write(self, line: str) -> None:
        verts = [int(tok) for tok in line.split()]
        if len(verts) == self.size:
            bits = 0
            for v in verts:
                bits |= 1 << v
            self.out.append(bits)


def plan_parameters(
    delta: float, eps: float, alpha: float, n: int, k_const: float = 6.0
) -> dict:
    """Admissible pattern parameters for a target exponent delta.

    Reports the subdivision-parameter constraints, the size bounds the copy
    concentration needs (both the strict and the lenient second-moment
    variants), and whether the requested n satisfies them.
    """
    if not 0 < delta < 1:
        raise ParameterError("delta must lie in (0, 1)")
    if not 2 < alpha < 3:
        raise ParameterError("alpha must lie in (2, 3)")
    p = n ** (delta - 1.0)
    alpha_cap = min(2.0 / (1.0 - delta), 3.0)
    rho_cap = min((1.0 - delta) / 2.0, (2.0 - alpha * (1.0 - delta)) / 4.0)
    m_size_cap = math.sqrt(eps / p) if p > 0 else float("inf")
    m_moment_strict = (eps**2 * n**2 * p**alpha / 2.0) ** 0.25
    m_moment_lenient = (eps**2 * n**2 * p**alpha) ** 0.25
    k_low = k_const * n ** (1.0 - delta) * math.log(max(n, 2))
    k_high = n - 2.0 * n ** (delta + rho_cap)
    feasible_m = math.floor(min(m_size_cap, m_moment_strict))
    return {
        "delta": delta,
        "eps": eps,
        "alpha": alpha,
        "alpha_cap": alpha_cap,
        "n": n,
        "p": p,
        "rho_cap": rho_cap,
        "m_cap_size": m_size_cap,
        "m_cap_moment_strict": m_moment_strict,
        "m_cap_moment_lenient": m_moment_lenient,
        "max_admissible_m": max(feasible_m, 0),
        "k_low": k_low,
        "k_high": k_high,
        "feasible": alpha < alpha_cap and feasible_m >= 1 and k_low <= k_high,
    }
