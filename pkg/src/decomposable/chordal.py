"""Chordality: recognition, elimination orderings, cliques, clique trees, separators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import CapExceededError, NotChordalError
from .graph import (
    ENUMERATION_CAP,
    UndirectedGraph,
    VertexSet,
    all_subsets,
    full_mask,
    is_complete_mask,
    iter_bits,
    reach,
    separated_mask,
)

WITNESS_CAP = 10
SEPARATOR_CAP = 10


def mcs_order(g: UndirectedGraph) -> list[int]:
    """Maximum-cardinality search visit order, ties broken by lowest identifier."""
    n = g.n
    weight = [0] * n
    unvisited = full_mask(n)
    order = []
    for _ in range(n):
        best = -1
        best_w = -1
        for v in iter_bits(unvisited):
            if weight[v] > best_w:
                best, best_w = v, weight[v]
        order.append(best)
        unvisited &= ~(1 << best)
        for u in iter_bits(g.adj[best] & unvisited):
            weight[u] += 1
    return order


def is_peo(g: UndirectedGraph, order) -> bool:
    """True iff ``order`` is a perfect elimination ordering of ``g``."""
    if sorted(order) != list(range(g.n)):
        return False
    later = full_mask(g.n)
    for v in order:
        later &= ~(1 << v)
        if not is_complete_mask(g.adj, g.adj[v] & later):
            return False
    return True


def find_peo(g: UndirectedGraph) -> Optional[list[int]]:
    """Perfect elimination ordering of ``g``, or ``None`` if ``g`` is not chordal.

    The ordering is the reverse of the maximum-cardinality search order, which
    is a PEO exactly when the graph is chordal.
    """
    order = mcs_order(g)[::-1]
    return order if is_peo(g, order) else None


def is_chordal(g: UndirectedGraph) -> bool:
    """True iff every cycle of length four or more in ``g`` has a chord."""
    return find_peo(g) is not None


def chordless_cycle_witness(g: UndirectedGraph) -> Optional[list[int]]:
    """A chordless cycle of length >= 4, or ``None``.

    Exhaustive search over induced paths, independent of the elimination
    machinery; intended as a test oracle for :func:`is_chordal`.  The returned
    cycle starts at its smallest vertex.
    """
    if g.n > WITNESS_CAP:
        raise CapExceededError("chordless_cycle_witness", g.n, WITNESS_CAP)
    adj = g.adj

    def extend(path, inner):
        # path = [s, p1, ..., pk]; inner = mask of p1..p_{k-1}
        s, last = path[0], path[-1]
        cands = adj[last] & ~inner & ~((2 << s) - 1)
        for w in iter_bits(cands):
            if w in path or adj[w] & inner:
                continue
            if adj[w] >> s & 1:
                if len(path) >= 3:
                    return path + [w]
                continue
            found = extend(path + [w], inner | (1 << last if len(path) > 1 else 0))
            if found:
                return found
        return None

    for s in range(g.n):
        for p1 in iter_bits(adj[s] & ~((2 << s) - 1)):
            found = extend([s, p1], 0)
            if found:
                return found
    return None


def maximal_cliques(g: UndirectedGraph) -> list[VertexSet]:
    """Maximal cliques of a chordal graph, sorted by their member lists."""
    peo = find_peo(g)
    if peo is None:
        raise NotChordalError("maximal_cliques needs a chordal graph")
    later = full_mask(g.n)
    cands = []
    for v in peo:
        later &= ~(1 << v)
        cands.append((1 << v) | (g.adj[v] & later))
    cliques = {c for c in cands if not any(c != d and c & ~d == 0 for d in cands)}
    return sorted((VertexSet(c) for c in cliques), key=lambda c: c.to_list())


@dataclass(frozen=True)
class CliqueTree:
    """Maximal cliques joined into a tree with intersection separators."""

    cliques: tuple[VertexSet, ...]
    tree_edges: tuple[tuple[int, int], ...]
    separators: tuple[VertexSet, ...]

    def has_running_intersection(self) -> bool:
        k = len(self.cliques)
        nbrs = [[] for _ in range(k)]
        for i, j in self.tree_edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        for v in iter_bits(_union(self.cliques)):
            holders = {i for i, c in enumerate(self.cliques) if c >> v & 1}
            start = min(holders)
            seen = {start}
            stack = [start]
            while stack:
                i = stack.pop()
                for j in nbrs[i]:
                    if j in holders and j not in seen:
                        seen.add(j)
                        stack.append(j)
            if seen != holders:
                return False
        return True

    def is_tree(self) -> bool:
        k = len(self.cliques)
        if len(self.tree_edges) != max(k - 1, 0):
            return False
        parent = list(range(k))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in self.tree_edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True

    def to_dict(self) -> dict:
        return {
            "cliques": [c.to_list() for c in self.cliques],
            "edges": [
                {"a": i, "b": j, "separator": s.to_list()}
                for (i, j), s in zip(self.tree_edges, self.separators)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CliqueTree":
        cliques = tuple(VertexSet.from_iterable(c) for c in data["cliques"])
        edges = tuple((int(e["a"]), int(e["b"])) for e in data["edges"])
        seps = tuple(VertexSet.from_iterable(e["separator"]) for e in data["edges"])
        return cls(cliques, edges, seps)


def _union(sets):
    out = 0
    for s in sets:
        out |= s
    return out


def clique_tree(g: UndirectedGraph) -> CliqueTree:
    """Clique tree of a chordal graph.

    Maximum-weight spanning tree over the clique intersection graph (weights
    are intersection sizes; zero-weight links join separate components).
    Kruskal with ties broken by lexicographic clique-index pair.

    Raises
    ------
    NotChordalError
        If ``g`` is not chordal.
    """
    cliques = maximal_cliques(g)
    k = len(cliques)
    cand = sorted(
        ((-(cliques[i] & cliques[j]).bit_count(), i, j) for i in range(k) for j in range(i + 1, k))
    )
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edges = []
    for _, i, j in cand:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j))
    return CliqueTree(
        tuple(cliques),
        tuple(edges),
        tuple(VertexSet(cliques[i] & cliques[j]) for i, j in edges),
    )


def minimal_separators(g: UndirectedGraph, a: int, b: int) -> set[VertexSet]:
    """All minimal ``a``/``b`` vertex separators, by subset enumeration.

    Adjacent vertices have no separator (empty result); vertices in different
    components have the single minimal separator ``{}``.
    """
    if g.n > SEPARATOR_CAP:
        raise CapExceededError("minimal_separators", g.n, SEPARATOR_CAP)
    if a == b or not (0 <= a < g.n and 0 <= b < g.n):
        raise ValueError(f"need two distinct vertices in 0..{g.n - 1}, got {a}, {b}")
    if g.has_edge(a, b):
        return set()
    xa, xb = 1 << a, 1 << b
    rest = full_mask(g.n) & ~xa & ~xb
    seps = [s for s in all_subsets(rest) if separated_mask(g.adj, xa, xb, s)]
    sepset = set(seps)
    out = set()
    for s in seps:
        if not any(t != s and t in sepset for t in all_subsets(s)):
            out.add(VertexSet(s))
    return out


def _extension_keeps_chordal(adj: list[int], k: int, nb: int) -> bool:
    """Would attaching a new vertex with neighbourhood ``nb`` keep a chordal graph chordal?

    A chordless cycle through the new vertex exists iff some component of the
    old graph minus ``nb`` touches two non-adjacent members of ``nb``.
    """
    left = full_mask(k) & ~nb
    while left:
        low = left & -left
        comp = reach(adj, low, nb)
        left &= ~comp
        touch = 0
        for v in iter_bits(comp):
            touch |= adj[v]
        if not is_complete_mask(adj, touch & nb):
            return False
    return True


@lru_cache(maxsize=None)
def chordal_edge_masks(n: int) -> tuple[int, ...]:
    """Edge masks of all labeled chordal graphs on ``n`` vertices, ascending.

    Built by vertex extension: removing the highest vertex from a chordal graph
    leaves a chordal graph, so every chordal graph on ``n`` vertices extends
    one on ``n - 1``.
    """
    if n > ENUMERATION_CAP:
        raise CapExceededError("chordal_edge_masks", n, ENUMERATION_CAP)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return (0,)
    out = []
    k = n - 1
    base = k * (k - 1) // 2
    for mask in chordal_edge_masks(k):
        adj = list(UndirectedGraph.from_edge_mask(k, mask).adj)
        for nb in all_subsets(full_mask(k)):
            if _extension_keeps_chordal(adj, k, nb):
                out.append(mask | nb << base)
    out.sort()
    return tuple(out)


def enumerate_chordal_graphs(n: int):
    """Yield every labeled chordal graph on ``n`` vertices by ascending edge mask."""
    for mask in chordal_edge_masks(n):
        yield UndirectedGraph.from_edge_mask(n, mask)
