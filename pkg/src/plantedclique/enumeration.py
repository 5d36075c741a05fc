"""Sparse-regime recovery by listing maximal cliques.

In sparse graphs the planted clique is one of few maximal cliques; listing
them all and keeping the largest recovers it regardless of the adversary.
The listing is Bron-Kerbosch with a greedy max-degree pivot and an explicit
stack, bounded by a caller-supplied budget.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import TextIO

from .generate import ParameterError, PlantedInstance
from .graph import Graph, VertexSet
from .oracle import count_all_cliques


@dataclass(frozen=True)
class EnumReport:
    max_clique: VertexSet
    maximal_count: int
    clique_budget: int
    truncated: bool


class RegimeWarning(UserWarning):
    """The instance looks denser than the algorithm's guarantee assumes."""


def list_maximal_cliques(
    g: Graph, budget: int, stream: TextIO | None = None
) -> EnumReport:
    """Enumerate maximal cliques, stopping (``truncated=True``) at ``budget``.

    ``stream`` receives one sorted whitespace-joined vertex list per clique.
    """
    if budget < 1:
        raise ParameterError("budget must be >= 1")
    n = g.n
    adj = g.adj
    count = 0
    best_bits = 0
    truncated = False
    if n == 0:
        return EnumReport(VertexSet(0, 0), 0, budget, False)

    def pivot_candidates(p_bits: int, x_bits: int) -> int:
        # Pivot = vertex of P|X with most neighbors inside P (ties: smallest id).
        best_v, best_cnt = -1, -1
        probe = p_bits | x_bits
        while probe:
            low = probe & -probe
            v = low.bit_length() - 1
            cnt = (adj[v] & p_bits).bit_count()
            if cnt > best_cnt:
                best_v, best_cnt = v, cnt
            probe ^= low
        return p_bits & ~adj[best_v]

    # Frames: (R, P, X, iteration bits); explicit stack keeps depth unbounded
    # by Python's recursion limit.
    stack = [(0, (1 << n) - 1, 0, None)]
    while stack:
        r_bits, p_bits, x_bits, todo = stack.pop()
        if todo is None:
            if p_bits == 0 and x_bits == 0:
                count += 1
                if r_bits.bit_count() > best_bits.bit_count():
                    best_bits = r_bits
                if stream is not None:
                    stream.write(
                        " ".join(map(str, VertexSet(n, r_bits))) + "\n"
                    )
                if count >= budget:
                    truncated = bool(stack)
                    if truncated:
                        stack.clear()
                continue
            todo = pivot_candidates(p_bits, x_bits)
        if todo == 0:
            continue
        low = todo & -todo
        v = low.bit_length() - 1
        stack.append((r_bits, p_bits & ~low, x_bits | low, todo ^ low))
        stack.append((r_bits | low, p_bits & adj[v], x_bits & adj[v], None))
    return EnumReport(VertexSet(n, best_bits), count, budget, truncated)


def sparse_budget(n: int, t_param: int) -> int:
    return math.ceil(4.0 * n ** (t_param / 4.0 + 0.5))


def recover_sparse(
    g: Graph, k: int, t_param: int, stream: TextIO | None = None
) -> EnumReport:
    """List all maximal cliques under the sparse-regime budget; the largest wins.

    Warns (does not fail) when the empirical density is outside the regime the
    budget is sized for, or when the budget truncated the listing.
    """
    if t_param < 1:
        raise ParameterError("t_param must be >= 1")
    n = g.n
    if n >= 2:
        p_hat = g.density()
        regime = n ** (-2.0 / t_param) / max(math.log(n), 1.0)
        if p_hat > regime:
            warnings.warn(
                f"density {p_hat:.2e} above the sparse regime bound {regime:.2e}",
                RegimeWarning,
                stacklevel=2,
            )
    report = list_maximal_cliques(g, sparse_budget(n, t_param), stream=stream)
    if report.truncated:
        warnings.warn(
            f"budget {report.clique_budget} truncated the listing; "
            "the returned clique may not be maximum",
            RegimeWarning,
            stacklevel=2,
        )
    return report


def count_cliques_vs_maximal(
    base: Graph, inst: PlantedInstance
) -> tuple[int, int, bool]:
    """Deterministic counting bound: maximal cliques after planting never
    exceed the clique count (all nonempty clique subsets) of the base graph."""
    if base.n > 30:
        raise ParameterError("exhaustive clique counting limited to n <= 30")
    cliques_base = count_all_cliques(base)
    maximal_planted = list_maximal_cliques(
        inst.planted_graph, budget=max(cliques_base + 1, 1)
    )
    return cliques_base, maximal_planted.maximal_count, (
        maximal_planted.maximal_count <= cliques_base
    )
