"""Fill-in heuristic that turns a graph chordal."""

from __future__ import annotations

from ..graph import UndirectedGraph, full_mask, is_complete_mask, iter_bits


def chordalize(g: UndirectedGraph) -> tuple[UndirectedGraph, list[tuple[int, int]]]:
    """Triangulate ``g`` by greedy elimination; return the chordal graph and its fill edges.

    At each step a simplicial vertex (lowest id) is eliminated if one exists,
    otherwise the vertex of minimum remaining degree (lowest id on ties); its
    remaining neighbours are joined into a clique.  Simplicial-first makes the
    fill empty on chordal input.
    """
    adj = list(g.adj)
    alive = full_mask(g.n)
    fill = set()
    while alive:
        pick = -1
        best = None
        for v in iter_bits(alive):
            nb = adj[v] & alive
            if is_complete_mask(adj, nb):
                pick = v
                break
            d = nb.bit_count()
            if best is None or d < best:
                best, pick = d, v
        nb = adj[pick] & alive
        for u in iter_bits(nb):
            missing = nb & ~adj[u] & ~(1 << u)
            for w in iter_bits(missing):
                adj[u] |= 1 << w
                adj[w] |= 1 << u
                fill.add((min(u, w), max(u, w)))
        alive &= ~(1 << pick)
    fill_edges = sorted(fill)
    return g.with_edges(fill_edges), fill_edges
