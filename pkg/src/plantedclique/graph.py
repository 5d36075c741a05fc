"""Dense simple graphs as tuples of bitset rows, plus the set algebra used everywhere.

Vertices are 0-based contiguous integers.  Row ``i`` of a graph is a Python int
whose bit ``j`` is set iff ``(i, j)`` is an edge.  Both :class:`Graph` and
:class:`VertexSet` are immutable after construction and safe to share.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


class GraphError(ValueError):
    """Structural violation: asymmetry, self-loop, or out-of-range bits."""


def _mask(n: int) -> int:
    return (1 << n) - 1


def _iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def bits_from_iterable(n: int, vertices: Iterable[int]) -> int:
    bits = 0
    for v in vertices:
        if not 0 <= v < n:
            raise GraphError(f"vertex {v} out of range [0, {n})")
        bits |= 1 << v
    return bits


class VertexSet:
    """Immutable subset of [0, n) backed by one int."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 0:
            raise GraphError("universe size must be >= 0")
        if bits < 0 or bits >> n:
            raise GraphError("bit set outside the universe")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    @classmethod
    def from_iterable(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        return cls(n, bits_from_iterable(n, vertices))

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(n, _mask(n))

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.bits >> v & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return _iter_bits(self.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VertexSet)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"VertexSet({self.n}, {{{', '.join(map(str, self))}}})"

    def _check_universe(self, other: "VertexSet") -> None:
        if self.n != other.n:
            raise GraphError("vertex sets over different universes")

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check_universe(other)
        return VertexSet(self.n, self.bits & other.bits)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check_universe(other)
        return VertexSet(self.n, self.bits | other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check_universe(other)
        return VertexSet(self.n, self.bits & ~other.bits)

    def issubset(self, other: "VertexSet") -> bool:
        self._check_universe(other)
        return self.bits & ~other.bits == 0

    def add(self, v: int) -> "VertexSet":
        return VertexSet(self.n, self.bits | bits_from_iterable(self.n, (v,)))

    def complement_set(self) -> "VertexSet":
        return VertexSet(self.n, _mask(self.n) & ~self.bits)

    def to_sorted_list(self) -> list[int]:
        return list(self)


# Largest n for which constructor validation unpacks a full bool matrix.
_VALIDATE_DENSE_LIMIT = 10_000


class Graph:
    """Undirected simple graph on n vertices with bitset adjacency rows."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: Iterable[int], _validated: bool = False):
        rows = tuple(adj)
        if n < 0:
            raise GraphError("vertex count must be >= 0")
        if len(rows) != n:
            raise GraphError(f"expected {n} adjacency rows, got {len(rows)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", rows)
        if not _validated:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def _validate(self) -> None:
        n = self.n
        for i, row in enumerate(self.adj):
            if row < 0 or row >> n:
                raise GraphError(f"row {i} has bits outside [0, {n})")
            if row >> i & 1:
                raise GraphError(f"self-loop at vertex {i}")
        if n <= _VALIDATE_DENSE_LIMIT:
            dense = to_bool_matrix(self)
            if not np.array_equal(dense, dense.T):
                raise GraphError("adjacency is not symmetric")
        else:
            for i, row in enumerate(self.adj):
                for j in _iter_bits(row):
                    if not self.adj[j] >> i & 1:
                        raise GraphError(f"asymmetric pair ({i}, {j})")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n, _validated=True)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = _mask(n)
        return cls(n, tuple(full ^ (1 << i) for i in range(n)), _validated=True)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop ({u}, {v})")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, _validated=True)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n))) if n >= 3 else cls.empty(n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.adj[v])

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in _iter_bits(self.adj[u] >> (u + 1) << (u + 1)):
                yield u, v

    def density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.edge_count() / pairs if pairs else 0.0

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


def to_bool_matrix(g: Graph) -> np.ndarray:
    """Adjacency as an n-by-n bool array (row i == neighbor mask of i)."""
    n = g.n
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    nbytes = (n + 7) // 8
    packed = np.frombuffer(
        b"".join(row.to_bytes(nbytes, "little") for row in g.adj), dtype=np.uint8
    ).reshape(n, nbytes)
    return np.unpackbits(packed, axis=1, bitorder="little")[:, :n].astype(bool)


def from_bool_matrix(dense: np.ndarray) -> Graph:
    """Inverse of :func:`to_bool_matrix`; the input must already be symmetric."""
    n = dense.shape[0]
    packed = np.packbits(dense.astype(bool), axis=1, bitorder="little")
    rows = tuple(
        int.from_bytes(packed[i].tobytes(), "little") & ~(1 << i) for i in range(n)
    )
    return Graph(n, rows)


def complement(g: Graph) -> Graph:
    """Edge complement: (i, j) is an edge iff it was not one and i != j."""
    full = _mask(g.n)
    return Graph(
        g.n,
        tuple((full & ~row) & ~(1 << i) for i, row in enumerate(g.adj)),
        _validated=True,
    )


def induced_subgraph(g: Graph, s: VertexSet) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph on ``s`` with vertices re-indexed; returns (graph, index_map).

    ``index_map[a]`` is the original id of the new vertex ``a``.
    """
    if s.n != g.n:
        raise GraphError("vertex set universe does not match the graph")
    members = s.to_sorted_list()
    k = len(members)
    if k >= 64 and g.n >= 256:
        dense = to_bool_matrix(g)
        sub = dense[np.ix_(members, members)]
        return from_bool_matrix(sub), tuple(members)
    pos = {v: a for a, v in enumerate(members)}
    rows = [0] * k
    for a, v in enumerate(members):
        for w in _iter_bits(g.adj[v] & s.bits):
            rows[a] |= 1 << pos[w]
    return Graph(k, rows, _validated=True), tuple(members)


def common_neighborhood(g: Graph, s: VertexSet) -> VertexSet:
    """Vertices outside ``s`` adjacent to every member of ``s``.

    Empty ``s`` is rejected: the universe of "neighbors of nothing" is undefined.
    """
    if s.n != g.n:
        raise GraphError("vertex set universe does not match the graph")
    if s.bits == 0:
        raise GraphError("common neighborhood of an empty set is undefined")
    acc = _mask(g.n)
    for v in s:
        acc &= g.adj[v]
    return VertexSet(g.n, acc & ~s.bits)


def degree_in(g: Graph, v: int, s: VertexSet) -> int:
    """Number of neighbors of ``v`` inside ``s`` (popcount of an AND)."""
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    return (g.adj[v] & s.bits).bit_count()


def is_clique(g: Graph, s: VertexSet) -> bool:
    """True iff every pair inside ``s`` is adjacent; sets of size <= 1 qualify."""
    bits = s.bits
    for v in _iter_bits(bits):
        if bits & ~g.adj[v] & ~(1 << v):
            return False
    return True


def is_independent_set(g: Graph, s: VertexSet) -> bool:
    """True iff no pair inside ``s`` is adjacent."""
    bits = s.bits
    for v in _iter_bits(bits):
        if g.adj[v] & bits:
            return False
    return True
