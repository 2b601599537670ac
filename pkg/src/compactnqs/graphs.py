"""Undirected simple graphs and the exact combinatorial searches used by the
network constructions: maximum independent sets, minimum vertex covers, leaf
pruning and the high-univalency cover.

Vertices are 0-based internally; JSON serialisation uses 1-based labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import CapabilityError

EXACT_SEARCH_LIMIT = 40


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``n`` labelled vertices.

    ``edges`` is a frozenset of (s, t) pairs with s < t.  The adjacency
    matrix and per-vertex neighbour bitmasks are derived once at
    construction; instances are immutable and safe to share.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("vertex count must be positive")
        norm = set()
        for e in self.edges:
            s, t = e
            if s == t:
                raise ValueError(f"self-loop at vertex {s}")
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            norm.add((min(s, t), max(s, t)))
        object.__setattr__(self, "edges", frozenset(norm))
        adj = np.zeros((self.n, self.n), dtype=np.uint8)
        masks = [0] * self.n
        for s, t in norm:
            adj[s, t] = adj[t, s] = 1
            masks[s] |= 1 << t
            masks[t] |= 1 << s
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "_masks", tuple(masks))

    @staticmethod
    def from_edges(n: int, edges: Iterable) -> "Graph":
        return Graph(n, frozenset(tuple(e) for e in edges))

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return int(self.adjacency[v].sum())

    def has_edge(self, s: int, t: int) -> bool:
        return bool(self.adjacency[s, t])

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [[s + 1, t + 1] for s, t in self.sorted_edges()]}

    @staticmethod
    def from_json_dict(d: dict) -> "Graph":
        edges = [(s - 1, t - 1) for s, t in d["edges"]]
        return Graph.from_edges(int(d["n"]), edges)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json(text: str) -> "Graph":
        return Graph.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class OrderedVertexCover:
    """An ordered list of vertices covering every edge of some graph.

    ``optimal`` is False when the cover came from the greedy fallback and is
    not guaranteed to be minimum.
    """

    vertices: tuple
    optimal: bool = True

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("cover vertices must be distinct")
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def validate_cover(g: Graph, vertices: Iterable[int]) -> None:
    """Raise if some edge of ``g`` has neither endpoint in ``vertices``."""
    from .errors import CoverError

    vset = set(vertices)
    for v in vset:
        if not 0 <= v < g.n:
            raise CoverError(f"cover vertex {v} out of range")
    for s, t in g.sorted_edges():
        if s not in vset and t not in vset:
            raise CoverError(f"edge ({s}, {t}) is not covered")


def neighborhood(g: Graph, v: int) -> frozenset:
    """All vertices adjacent to ``v``."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")
    return frozenset(int(u) for u in np.flatnonzero(g.adjacency[v]))


def leaves(g: Graph) -> frozenset:
    """All vertices of degree exactly one."""
    deg = g.adjacency.sum(axis=1)
    return frozenset(int(v) for v in np.flatnonzero(deg == 1))


def prune_leaves(g: Graph, iterate: bool = False) -> Graph:
    """Remove current leaf vertices and their incident edges (labels kept).

    A single pass by default; ``iterate=True`` repeats until no leaves
    remain.
    """
    current = g
    while True:
        leaf_set = leaves(current)
        if not leaf_set:
            return current
        kept = [(s, t) for s, t in current.edges if s not in leaf_set and t not in leaf_set]
        current = Graph.from_edges(current.n, kept)
        if not iterate:
            return current


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask_vertices(mask: int):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _max_is_size(masks, allowed: int) -> int:
    """Branch and bound for the maximum independent-set size.

    Branches on the highest-degree vertex of the remaining subgraph: either
    it joins the set (drop its closed neighbourhood) or it is excluded.
    """
    best = 0

    def search(cand: int, size: int):
        nonlocal best
        if size + _popcount(cand) <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        pivot, pivot_deg = -1, -1
        m = cand
        v = 0
        while m:
            if m & 1:
                d = _popcount(masks[v] & cand)
                if d > pivot_deg:
                    pivot, pivot_deg = v, d
            m >>= 1
            v += 1
        if pivot_deg == 0:
            best = max(best, size + _popcount(cand))
            return
        search(cand & ~(masks[pivot] | (1 << pivot)), size + 1)
        search(cand & ~(1 << pivot), size)

    search(allowed, 0)
    return best


def _lex_smallest_is(masks, allowed: int, target: int):
    """First (hence lexicographically smallest) independent set of the target
    size, scanning vertices in ascending order with the include branch first.
    """
    n = len(masks)

    def search(v: int, cand: int, chosen: list):
        if len(chosen) == target:
            return list(chosen)
        if len(chosen) + _popcount(cand) < target:
            return None
        while v < n and not (cand >> v) & 1:
            v += 1
        if v >= n:
            return None
        chosen.append(v)
        found = search(v + 1, cand & ~(masks[v] | (1 << v)), chosen)
        if found is not None:
            return found
        chosen.pop()
        return search(v + 1, cand & ~(1 << v), chosen)

    result = search(0, allowed, [])
    assert result is not None
    return result


def max_independent_set(g: Graph, limit: int = EXACT_SEARCH_LIMIT,
                        restrict_to=None) -> frozenset:
    """Maximum independent set, deterministic: among all maximum sets the
    lexicographically smallest vertex tuple is returned.

    ``restrict_to`` optionally confines the search to a vertex subset.
    Raises CapabilityError above ``limit`` vertices; use
    :func:`greedy_vertex_cover` there instead.
    """
    if g.n > limit:
        raise CapabilityError(
            f"exact independent-set search limited to {limit} vertices "
            f"(got {g.n}); use greedy_vertex_cover for larger graphs")
    allowed = (1 << g.n) - 1
    if restrict_to is not None:
        allowed = 0
        for v in restrict_to:
            allowed |= 1 << v
    size = _max_is_size(g._masks, allowed)
    if size == 0:
        return frozenset()
    return frozenset(_lex_smallest_is(g._masks, allowed, size))


def min_vertex_cover(g: Graph, limit: int = EXACT_SEARCH_LIMIT) -> OrderedVertexCover:
    """Minimum vertex cover as the complement of a maximum independent set,
    ordered ascending.  |independent set| + |cover| = n.
    """
    independent = max_independent_set(g, limit=limit)
    cover = tuple(v for v in range(g.n) if v not in independent)
    return OrderedVertexCover(cover)


def greedy_vertex_cover(g: Graph) -> OrderedVertexCover:
    """Greedy cover: repeatedly take the highest-degree vertex. Not optimal."""
    masks = list(g._masks)
    cover = []
    while any(masks):
        v = max(range(g.n), key=lambda u: _popcount(masks[u]))
        if _popcount(masks[v]) == 0:
            break
        cover.append(v)
        for u in _mask_vertices(masks[v]):
            masks[u] &= ~(1 << v)
        masks[v] = 0
    return OrderedVertexCover(tuple(cover), optimal=False)


def max_univalency_cover(g: Graph, limit: int = EXACT_SEARCH_LIMIT):
    """Ordered cover maximising the univalent sites of the resulting network.

    Returns ``(cover, univalent)`` where the cover is the independent set of
    the leaf-pruned graph followed by a minimum cover of what remains, and
    ``univalent`` = leaves plus that independent prefix.  Vertices isolated
    in the pruned graph are not candidates for the prefix, so leaves and
    star centres never enter it.
    """
    leaf_set = leaves(g)
    pruned = prune_leaves(g)
    candidates = [v for v in range(g.n) if pruned.degree(v) > 0]
    prefix = sorted(max_independent_set(pruned, limit=limit, restrict_to=candidates))

    remaining = [(s, t) for s, t in g.edges if s not in prefix and t not in prefix]
    residual = Graph.from_edges(g.n, remaining)
    rest = sorted(min_vertex_cover(residual, limit=limit).vertices)

    cover = OrderedVertexCover(tuple(prefix) + tuple(rest))
    validate_cover(g, cover.vertices)
    return cover, leaf_set | frozenset(prefix)


def random_connected_graph(n: int, rng: np.random.Generator,
                           extra_edge_prob: float = 0.3) -> Graph:
    """Random connected graph: a random spanning tree plus extra edges."""
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        j = int(rng.integers(0, i))
        s, t = int(order[i]), int(order[j])
        edges.add((min(s, t), max(s, t)))
    for s in range(n):
        for t in range(s + 1, n):
            if rng.random() < extra_edge_prob:
                edges.add((s, t))
    return Graph.from_edges(n, edges)
