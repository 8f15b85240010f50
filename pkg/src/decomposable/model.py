"""Dependency models: the ``I(X, Y | Z)`` oracle and its realizations.

A dependency model answers conditional-independence queries over pairwise
disjoint vertex sets.  Realizations here are undirected separation
(:class:`GraphModel`), DAG d-separation (:class:`DagModel`) and explicit truth
tables (:class:`ExplicitModel`).  All models are immutable and safe to query
from several threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable

from .chordal import find_peo
from .errors import CapExceededError, NotChordalError
from .graph import (
    UndirectedGraph,
    VertexSet,
    _check_triple,
    full_mask,
    iter_bits,
    separated_mask,
)

EXPLICIT_CAP = 7
CLASSIFY_CAP = 6


class DependencyModel:
    """Base class for ``I(X, Y | Z)`` oracles over vertices ``0..n-1``.

    Subclasses implement :meth:`query_mask`, which receives raw, already
    validated bitmasks.  :meth:`query` is the checked public entry point.
    """

    n: int

    def query_mask(self, x: int, y: int, z: int) -> bool:
        raise NotImplementedError

    def query(self, x, y, z) -> bool:
        """Is ``x`` independent of ``y`` given ``z``?

        Each argument is a vertex iterable or a bitmask.  Independence of an
        empty set is always true.
        """
        x, y, z = _check_triple(self.n, x, y, z)
        if not x or not y:
            return True
        return bool(self.query_mask(x, y, z))


@dataclass(frozen=True)
class GraphModel(DependencyModel):
    """Independence read off an undirected graph by separation."""

    graph: UndirectedGraph

    @property
    def n(self) -> int:
        return self.graph.n

    def query_mask(self, x, y, z):
        return separated_mask(self.graph.adj, x, y, z)


def graph_model(g: UndirectedGraph) -> GraphModel:
    return GraphModel(g)


class FunctionModel(DependencyModel):
    """Model backed by an arbitrary callable on masks; handy for constructed examples."""

    def __init__(self, n: int, fn: Callable[[int, int, int], bool]):
        self.n = n
        self._fn = fn

    def query_mask(self, x, y, z):
        return bool(self._fn(x, y, z))


def all_true_model(n: int) -> FunctionModel:
    return FunctionModel(n, lambda x, y, z: True)


# -- DAGs ---------------------------------------------------------------


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph given by per-vertex parent masks."""

    n: int
    parents: tuple[int, ...]

    def __post_init__(self):
        if len(self.parents) != self.n:
            raise ValueError("parents length must equal n")
        for v, pa in enumerate(self.parents):
            if pa >> self.n:
                raise ValueError(f"vertex {v} has a parent >= n")
        if self.topological_order() is None:
            raise ValueError("graph has a directed cycle")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Dag":
        parents = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad arc {u}->{v} for n={n}")
            parents[v] |= 1 << u
        return cls(n, tuple(parents))

    @classmethod
    def from_graph_by_order(cls, g: UndirectedGraph) -> "Dag":
        """Orient every edge of ``g`` from the lower to the higher identifier."""
        return cls(g.n, tuple(nb & ((1 << v) - 1) for v, nb in enumerate(g.adj)))

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return sorted((u, v) for v in range(self.n) for u in iter_bits(self.parents[v]))

    @property
    def children(self) -> tuple[int, ...]:
        ch = [0] * self.n
        for v, pa in enumerate(self.parents):
            for u in iter_bits(pa):
                ch[u] |= 1 << v
        return tuple(ch)

    def topological_order(self) -> list[int] | None:
        order = []
        done = 0
        remaining = full_mask(self.n)
        while remaining:
            ready = [v for v in iter_bits(remaining) if self.parents[v] & ~done == 0]
            if not ready:
                return None
            v = ready[0]
            order.append(v)
            done |= 1 << v
            remaining &= ~(1 << v)
        return order

    def ancestral_closure(self, s: int) -> int:
        """Smallest ancestral set containing ``s`` (``s`` plus all its ancestors)."""
        out = frontier = s
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= self.parents[v]
            frontier = nxt & ~out
            out |= frontier
        return out

    def moral_graph(self, keep: int | None = None) -> UndirectedGraph:
        """Moral graph of the sub-DAG induced on ``keep`` (default: all vertices)."""
        if keep is None:
            keep = full_mask(self.n)
        return UndirectedGraph(self.n, self._moral_adj(keep))

    def _moral_adj(self, keep: int) -> tuple[int, ...]:
        adj = [0] * self.n
        for v in iter_bits(keep):
            pa = self.parents[v] & keep
            for u in iter_bits(pa):
                adj[u] |= 1 << v
                adj[v] |= 1 << u
                adj[u] |= pa & ~(1 << u)
        return tuple(adj)

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, arcs={self.arcs})"


def d_separated(d: Dag, x, y, z) -> bool:
    """True iff every chain between ``x`` and ``y`` is blocked by ``z``.

    A chain is blocked at an interior vertex that is either a non-collider in
    ``z``, or a collider that neither is in ``z`` nor has a descendant in
    ``z``.  Implemented as reachability over (vertex, direction) states.
    """
    x, y, z = _check_triple(d.n, x, y, z)
    return _d_separated_mask(d, d.children, x, y, z)


def _d_separated_mask(d: Dag, children, x, y, z) -> bool:
    if not x or not y:
        return True
    # colliders open iff they are in z or have a descendant in z
    opens = d.ancestral_closure(z)
    parents = d.parents
    # state bit 2v: arrived "up" (from a child); bit 2v+1: arrived "down" (from a parent)
    up = x
    down = 0
    seen_up = 0
    seen_down = 0
    while up or down:
        up &= ~seen_up
        down &= ~seen_down
        seen_up |= up
        seen_down |= down
        if (up | down) & ~z & y:
            return False
        new_up = 0
        new_down = 0
        for v in iter_bits(up & ~z):
            new_up |= parents[v]
            new_down |= children[v]
        for v in iter_bits(down):
            if not z >> v & 1:
                new_down |= children[v]
            if opens >> v & 1:
                new_up |= parents[v]
        up, down = new_up, new_down
    return True


def d_separated_moral(d: Dag, x, y, z) -> bool:
    """d-separation via separation in the moral graph of the smallest ancestral
    set containing ``x | y | z``."""
    x, y, z = _check_triple(d.n, x, y, z)
    if not x or not y:
        return True
    keep = d.ancestral_closure(x | y | z)
    return separated_mask(d._moral_adj(keep), x, y, z)


@dataclass(frozen=True)
class DagModel(DependencyModel):
    """Independence read off a DAG by d-separation."""

    dag: Dag

    @property
    def n(self) -> int:
        return self.dag.n

    def query_mask(self, x, y, z):
        return _d_separated_mask(self.dag, self._children, x, y, z)

    @property
    def _children(self):
        return _children_of(self.dag)


@lru_cache(maxsize=4096)
def _children_of(d: Dag):
    return d.children


def orient_by_peo(g: UndirectedGraph) -> Dag:
    """Orient a chordal graph into a DAG whose parent sets are complete.

    Each vertex's parents are its neighbours that come *after* it in the
    perfect elimination ordering (equivalently, that maximum-cardinality search
    visited first), so no DAG vertex has unmarried parents.

    Raises
    ------
    NotChordalError
        If ``g`` is not chordal.
    """
    peo = find_peo(g)
    if peo is None:
        raise NotChordalError("orient_by_peo needs a chordal graph")
    later = full_mask(g.n)
    parents = [0] * g.n
    for v in peo:
        later &= ~(1 << v)
        parents[v] = g.adj[v] & later
    return Dag(g.n, tuple(parents))


# -- explicit tables ---------------------------------------------------------


@lru_cache(maxsize=None)
def disjoint_triples(n: int) -> tuple[tuple[int, int, int], ...]:
    """Every ordered triple of pairwise-disjoint masks over ``n`` vertices.

    One entry per assignment of each vertex to x, y, z or none: ``4**n`` total.
    """
    out = []
    for labels in product(range(4), repeat=n):
        x = y = z = 0
        for v, lab in enumerate(labels):
            if lab == 1:
                x |= 1 << v
            elif lab == 2:
                y |= 1 << v
            elif lab == 3:
                z |= 1 << v
        out.append((x, y, z))
    return tuple(out)


class ExplicitModel(DependencyModel):
    """Dependency model stored as a complete truth table.

    The table covers every ordered disjoint triple (``4**n`` entries), so a
    hand-authored table may be asymmetric or otherwise violate the axioms.
    Triples with an empty first or second argument must be ``True``.
    """

    def __init__(self, n: int, table: dict[tuple[int, int, int], bool]):
        if n > EXPLICIT_CAP:
            raise CapExceededError("ExplicitModel", n, EXPLICIT_CAP)
        self.n = n
        cells = bytearray(b"\x02") * (1 << (3 * n))
        for x, y, z in disjoint_triples(n):
            try:
                val = table[(x, y, z)]
            except KeyError:
                raise ValueError(
                    f"table misses triple x={VertexSet(x)}, y={VertexSet(y)}, z={VertexSet(z)}"
                ) from None
            if (not x or not y) and not val:
                raise ValueError("independence with an empty argument must be True")
            cells[x | y << n | z << 2 * n] = 1 if val else 0
        if len(table) != 4**n:
            raise ValueError("table has entries that are not disjoint triples over 0..n-1")
        self._cells = bytes(cells)

    def query_mask(self, x, y, z):
        return self._cells[x | y << self.n | z << 2 * self.n] == 1

    def lookup(self) -> Callable[[int, int, int], bool]:
        """Fast unchecked lookup closure, used by the axiom sweeps."""
        cells = self._cells
        n = self.n
        n2 = 2 * n
        return lambda x, y, z: cells[x | y << n | z << n2] == 1

    def __len__(self) -> int:
        return 4**self.n

    def items(self):
        for t in disjoint_triples(self.n):
            yield t, self.query_mask(*t)

    def __eq__(self, other):
        return isinstance(other, ExplicitModel) and self.n == other.n and self._cells == other._cells

    def __hash__(self):
        return hash((self.n, self._cells))

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int, int], bool]) -> "ExplicitModel":
        """Tabulate ``fn(x, y, z)`` on masks; empty arguments are forced to True."""
        return cls(n, {(x, y, z): True if not x or not y else bool(fn(x, y, z)) for x, y, z in disjoint_triples(n)})

    @classmethod
    def from_independencies(cls, n: int, statements, symmetric: bool = True) -> "ExplicitModel":
        """Model where exactly the listed statements (plus empty-argument ones) hold.

        ``statements`` is an iterable of ``(x, y, z)`` vertex sets.  With
        ``symmetric`` each statement also asserts its mirror ``(y, x, z)``.
        """
        true = set()
        for x, y, z in statements:
            x, y, z = _check_triple(n, x, y, z)
            true.add((x, y, z))
            if symmetric:
                true.add((y, x, z))
        return cls.from_function(n, lambda x, y, z: (x, y, z) in true)

    def to_dict(self) -> dict:
        """JSON-ready form: one record per canonical triple.

        The canonical orientation puts the set with the lexicographically
        smaller member list first.  A mirrored triple is written as an extra
        record only when its value disagrees with the canonical one.
        """
        records = []
        for x, y, z in disjoint_triples(self.n):
            if not x or not y:
                continue
            val = self.query_mask(x, y, z)
            if _canonical_first(x, y):
                records.append(_record(x, y, z, val))
            elif val != self.query_mask(y, x, z):
                records.append(_record(x, y, z, val))
        records.sort(key=lambda r: (r["x"], r["y"], r["z"]))
        return {"n": self.n, "records": records}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ExplicitModel":
        n = int(data["n"])
        if n > EXPLICIT_CAP:
            raise CapExceededError("ExplicitModel", n, EXPLICIT_CAP)
        canon = {}
        override = {}
        for rec in data["records"]:
            x, y, z = _check_triple(n, rec["x"], rec["y"], rec["z"])
            if not x or not y:
                continue
            val = bool(rec["independent"])
            if _canonical_first(x, y):
                canon[(x, y, z)] = val
            else:
                override[(x, y, z)] = val
        table = {}
        for x, y, z in disjoint_triples(n):
            if not x or not y:
                table[(x, y, z)] = True
                continue
            key = (x, y, z) if _canonical_first(x, y) else (y, x, z)
            if key not in canon:
                raise ValueError(
                    f"model file misses triple x={VertexSet(key[0])}, y={VertexSet(key[1])}, z={VertexSet(z)}"
                )
            table[(x, y, z)] = override.get((x, y, z), canon[key])
        return cls(n, table)

    @classmethod
    def from_json(cls, text: str) -> "ExplicitModel":
        return cls.from_dict(json.loads(text))


def _canonical_first(x: int, y: int) -> bool:
    return list(iter_bits(x)) < list(iter_bits(y))


def _record(x, y, z, val):
    return {
        "x": list(iter_bits(x)),
        "y": list(iter_bits(y)),
        "z": list(iter_bits(z)),
        "independent": bool(val),
    }


def explicit_from_model(m: DependencyModel) -> ExplicitModel:
    """Materialize ``m`` by querying every disjoint triple (``n <= 7``)."""
    if isinstance(m, ExplicitModel):
        return m
    if m.n > EXPLICIT_CAP:
        raise CapExceededError("explicit_from_model", m.n, EXPLICIT_CAP)
    return ExplicitModel.from_function(m.n, m.query_mask)


def model_graph(m: DependencyModel) -> UndirectedGraph:
    """The graph with ``a-b`` iff ``a`` and ``b`` are dependent given all the rest."""
    full = full_mask(m.n)
    edges = []
    for a in range(m.n):
        for b in range(a + 1, m.n):
            if not m.query_mask(1 << a, 1 << b, full & ~(1 << a) & ~(1 << b)):
                edges.append((a, b))
    return UndirectedGraph.from_edges(m.n, edges)


@dataclass(frozen=True)
class MapClass:
    i_map: bool
    d_map: bool

    @property
    def perfect(self) -> bool:
        return self.i_map and self.d_map


def classify_map(g: UndirectedGraph, m: DependencyModel) -> MapClass:
    """Is ``g`` an I-map, D-map and/or perfect map of ``m``?

    Exhaustive over disjoint triples, so ``n`` is capped at 6.
    """
    if g.n != m.n:
        raise ValueError(f"graph has n={g.n} but model has n={m.n}")
    if g.n > CLASSIFY_CAP:
        raise CapExceededError("classify_map", g.n, CLASSIFY_CAP)
    i_map = d_map = True
    for x, y, z in disjoint_triples(g.n):
        if not x or not y:
            continue
        sep = separated_mask(g.adj, x, y, z)
        ind = m.query_mask(x, y, z)
        if sep and not ind:
            i_map = False
        if ind and not sep:
            d_map = False
        if not i_map and not d_map:
            break
    return MapClass(i_map, d_map)


def as_lookup(m: DependencyModel) -> Callable[[int, int, int], bool]:
    """Unchecked mask-level query function for ``m``, memoized when not tabulated."""
    if isinstance(m, ExplicitModel):
        return m.lookup()
    cache: dict[tuple[int, int, int], bool] = {}
    query = m.query_mask

    def q(x, y, z):
        key = (x, y, z)
        try:
            return cache[key]
        except KeyError:
            val = cache[key] = True if not x or not y else bool(query(x, y, z))
            return val

    return q

