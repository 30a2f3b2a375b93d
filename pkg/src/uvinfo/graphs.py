"""Undirected graphs, strong products, and exact maximum independent sets."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InputError, SearchBudgetExceeded
from .uv import value_key, value_label

DEFAULT_SEARCH_CAP = 400
DEFAULT_VERTEX_CAP = 10_000


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable) -> "Graph":
        vs = tuple(vertices)
        if len(set(vs)) != len(vs):
            raise InputError("duplicate vertices")
        known = set(vs)
        es = set()
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at {u!r}")
            if u not in known or v not in known:
                raise InputError(f"edge ({u!r}, {v!r}) references an unknown vertex")
            es.add(frozenset((u, v)))
        return cls(vs, frozenset(es))

    @cached_property
    def neighbors(self) -> dict:
        nb = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            nb[u].add(v)
            nb[v].add(u)
        return nb

    def adjacent(self, u, v) -> bool:
        return v in self.neighbors[u]

    def is_independent(self, S: Iterable) -> bool:
        S = list(S)
        return all(not self.adjacent(u, v) for i, u in enumerate(S) for v in S[i + 1:])

    def to_adjacency_text(self) -> str:
        """One line per vertex, ``label: neighbour neighbour ...``, in lexicographic order."""
        lines = []
        for v in sorted(self.vertices, key=value_key):
            nbrs = " ".join(value_label(u) for u in sorted(self.neighbors[v], key=value_key))
            lines.append(f"{value_label(v)}: {nbrs}".rstrip())
        return "\n".join(lines) + "\n"


def edgeless(vertices: Iterable) -> Graph:
    return Graph(tuple(vertices), frozenset())


def complete(vertices: Iterable) -> Graph:
    vs = tuple(vertices)
    return Graph.from_edges(vs, [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:]])


def cycle(n: int) -> Graph:
    return Graph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)])


def _closed(G: Graph, v) -> set:
    return G.neighbors[v] | {v}


def _product(G: Graph, H: Graph, combine, vertex_cap: int) -> Graph:
    if len(G.vertices) * len(H.vertices) > vertex_cap:
        raise SearchBudgetExceeded(
            f"strong product would have {len(G.vertices) * len(H.vertices)} vertices (cap {vertex_cap})"
        )
    verts = [combine(u, v) for u in G.vertices for v in H.vertices]
    edges = set()
    for u in G.vertices:
        for v in H.vertices:
            a = combine(u, v)
            for u2 in _closed(G, u):
                for v2 in _closed(H, v):
                    b = combine(u2, v2)
                    if a != b:
                        edges.add(frozenset((a, b)))
    return Graph(tuple(verts), frozenset(edges))


def strong_product(G: Graph, H: Graph, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Vertices are pairs; distinct pairs are adjacent iff each coordinate is equal or adjacent."""
    return _product(G, H, lambda u, v: (u, v), vertex_cap)


def strong_power(G: Graph, tau: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """``tau``-fold strong product with vertices flattened to ``tau``-tuples."""
    if tau < 1:
        raise InputError("block length must be >= 1")
    P = Graph(tuple((v,) for v in G.vertices), frozenset(frozenset(((u,), (v,))) for u, v in map(tuple, G.edges)))
    for _ in range(tau - 1):
        P = _product(P, G, lambda u, v: u + (v,), vertex_cap)
    return P


# ------------------------------------------------------- independent sets


def _clique_cover_size(P: int, adj: list) -> int:
    """Greedy clique cover of the vertex bitmask ``P``; an independent set meets each clique once."""
    count = 0
    while P:
        low = P & -P
        v = low.bit_length() - 1
        cand = P & adj[v]
        P ^= low
        while cand:
            lw = cand & -cand
            u = lw.bit_length() - 1
            P ^= lw
            cand &= adj[u]
        count += 1
    return count


def max_independent_set(
    G: Graph,
    time_budget: float | None = None,
    cap: int = DEFAULT_SEARCH_CAP,
) -> tuple:
    """Exact maximum independent set by branch and bound.

    Vertices are visited in lexicographic order, include-branch first, and the
    incumbent is only replaced by a strictly larger set, so the returned
    witness is the lexicographically first maximum set. Returns
    ``(size, witness)`` with the witness as a sorted tuple of vertices.
    """
    n = len(G.vertices)
    if n > cap:
        raise SearchBudgetExceeded(f"graph has {n} vertices, above the exact-search cap {cap}")
    order = sorted(G.vertices, key=value_key)
    index = {v: i for i, v in enumerate(order)}
    adj = [0] * n
    for e in G.edges:
        u, v = (index[x] for x in e)
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    deadline = None if time_budget is None else time.monotonic() + time_budget
    best = [0, 0]
    nodes = [0]

    def expand(P: int, cur: int, size: int) -> None:
        nodes[0] += 1
        if deadline is not None and nodes[0] % 1024 == 0 and time.monotonic() > deadline:
            raise _Timeout
        if not P:
            if size > best[0]:
                best[0], best[1] = size, cur
            return
        if size + _clique_cover_size(P, adj) <= best[0]:
            return
        low = P & -P
        v = low.bit_length() - 1
        expand(P & ~adj[v] & ~low, cur | low, size + 1)
        if P & adj[v]:
            # excluding v only helps if some neighbour of v could take its place
            expand(P & ~low, cur, size)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 2 * n + 100))
    try:
        expand((1 << n) - 1, 0, 0)
    except _Timeout:
        witness = tuple(order[i] for i in range(n) if best[1] >> i & 1)
        raise SearchBudgetExceeded(
            f"independent-set search exceeded {time_budget}s; best size so far {best[0]}",
            best_size=best[0],
            best_witness=witness,
        ) from None
    finally:
        sys.setrecursionlimit(limit)
    witness = tuple(order[i] for i in range(n) if best[1] >> i & 1)
    return best[0], witness


class _Timeout(Exception):
    pass
