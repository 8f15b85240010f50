"""Labeled undirected graphs over bitmask vertex sets.

Vertices are the integers ``0..n-1``.  A vertex set is a Python ``int`` used as
a bitmask (bit ``i`` set means vertex ``i`` is a member); :class:`VertexSet` is
a thin ``int`` subclass that adds set-flavoured helpers and a readable repr, so
plain masks and ``VertexSet`` objects can be mixed freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from .errors import CapExceededError, GraphFormatError

MAX_VERTICES = 64
ENUMERATION_CAP = 7


class VertexSet(int):
    """Immutable set of vertex identifiers encoded as a bitmask.

    Iteration is in ascending identifier order.  ``|``, ``&`` and ``^`` keep
    the type; use :meth:`difference` for set difference (``-`` is still
    integer subtraction).

    >>> VertexSet.of(2, 0)
    VertexSet({0, 2})
    >>> list(VertexSet.of(3, 1) | VertexSet.of(0))
    [0, 1, 3]
    """

    __slots__ = ()

    @classmethod
    def of(cls, *vertices: int) -> "VertexSet":
        return cls.from_iterable(vertices)

    @classmethod
    def from_iterable(cls, vertices: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in vertices:
            v = int(v)
            if not 0 <= v < MAX_VERTICES:
                raise ValueError(f"vertex identifier {v} out of range 0..{MAX_VERTICES - 1}")
            mask |= 1 << v
        return cls(mask)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self)

    def __len__(self) -> int:
        return int.bit_count(self)

    def __contains__(self, v) -> bool:
        return v >= 0 and bool(self >> v & 1)

    def __or__(self, other):
        return VertexSet(int(self) | int(other))

    __ror__ = __or__

    def __and__(self, other):
        return VertexSet(int(self) & int(other))

    __rand__ = __and__

    def __xor__(self, other):
        return VertexSet(int(self) ^ int(other))

    __rxor__ = __xor__

    def difference(self, other) -> "VertexSet":
        return VertexSet(int(self) & ~int(other))

    def issubset(self, other) -> bool:
        return int(self) & ~int(other) == 0

    def isdisjoint(self, other) -> bool:
        return int(self) & int(other) == 0

    def to_list(self) -> list[int]:
        return list(iter_bits(self))

    def __repr__(self) -> str:
        if not self:
            return "VertexSet()"
        return "VertexSet({" + ", ".join(map(str, iter_bits(self))) + "})"

    __str__ = __repr__


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def as_mask(s, n: int | None = None) -> int:
    """Coerce ``s`` to a bitmask.

    ``s`` may be an ``int``/``VertexSet`` (taken as a mask) or any iterable of
    vertex identifiers.  With ``n`` given, members must be below ``n``.
    """
    if isinstance(s, int):
        mask = int(s)
        if mask < 0:
            raise ValueError("negative vertex mask")
    else:
        mask = int(VertexSet.from_iterable(s))
    if n is not None and mask >> n:
        raise ValueError(f"vertex set {VertexSet(mask)} has identifiers >= n={n}")
    return mask


def full_mask(n: int) -> int:
    return (1 << n) - 1


def edge_index(u: int, v: int) -> int:
    """Bit position of edge ``u-v`` in an edge mask (colexicographic pair order).

    Colex order means graphs on the first ``k`` vertices keep the same edge
    mask when more vertices are appended.
    """
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def edge_pairs(n: int) -> list[tuple[int, int]]:
    """All vertex pairs ``(u, v)``, ``u < v``, indexed by :func:`edge_index`."""
    return [(u, v) for v in range(n) for u in range(v)]


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the neighbour mask of ``v``.  Instances are immutable;
    build them with :meth:`from_edges` or :meth:`from_edge_mask`.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length must equal n")
        for v, nb in enumerate(self.adj):
            if nb >> self.n:
                raise ValueError(f"vertex {v} has a neighbour >= n")
            if nb >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in iter_bits(nb):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> "UndirectedGraph":
        """Build without validation; callers guarantee a symmetric, loop-free ``adj``."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UndirectedGraph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> "UndirectedGraph":
        adj = [0] * n
        for i, (u, v) in enumerate(edge_pairs(n)):
            if mask >> i & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "UndirectedGraph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "UndirectedGraph":
        full = full_mask(n)
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def path(cls, n: int) -> "UndirectedGraph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> "UndirectedGraph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @property
    def vertices(self) -> VertexSet:
        return VertexSet(full_mask(self.n))

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    @property
    def edge_mask(self) -> int:
        mask = 0
        for u, v in self.edges:
            mask |= 1 << edge_index(u, v)
        return mask

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "UndirectedGraph":
        return UndirectedGraph.from_edges(self.n, list(self.edges) + list(extra))

    def induced(self, keep) -> "UndirectedGraph":
        """Subgraph on ``keep`` with vertices kept in place (others isolated)."""
        keep = as_mask(keep, self.n)
        return UndirectedGraph(
            self.n, tuple(nb & keep if keep >> v & 1 else 0 for v, nb in enumerate(self.adj))
        )

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, edges={self.edges})"


def reach(adj: tuple[int, ...], source: int, blocked: int) -> int:
    """Mask of vertices reachable from ``source`` without entering ``blocked``.

    Breadth-first over bitmasks; ``source`` itself is included.
    """
    seen = frontier = source
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= adj[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & ~seen & ~blocked
        seen |= frontier
    return seen


def separated_mask(adj: tuple[int, ...], x: int, y: int, z: int) -> bool:
    """Unchecked separation test on raw masks (hot path for sweeps)."""
    if not x or not y:
        return True
    return not reach(adj, x, z) & y


def _check_triple(n, x, y, z):
    x, y, z = as_mask(x, n), as_mask(y, n), as_mask(z, n)
    if x & y or x & z or y & z:
        raise ValueError(
            f"sets must be pairwise disjoint: x={VertexSet(x)}, y={VertexSet(y)}, z={VertexSet(z)}"
        )
    return x, y, z


def separated(g: UndirectedGraph, x, y, z) -> bool:
    """True iff ``z`` intercepts every chain between ``x`` and ``y`` in ``g``.

    Empty ``x`` or ``y`` is separated by anything.

    Raises
    ------
    ValueError
        If the sets overlap or mention vertices outside ``0..n-1``.
    """
    x, y, z = _check_triple(g.n, x, y, z)
    return separated_mask(g.adj, x, y, z)


def is_complete(g: UndirectedGraph, w) -> bool:
    """True iff every two distinct members of ``w`` are adjacent."""
    w = as_mask(w, g.n)
    return is_complete_mask(g.adj, w)


def is_complete_mask(adj: tuple[int, ...], w: int) -> bool:
    rest = w
    while rest:
        low = rest & -rest
        rest ^= low
        if rest & ~adj[low.bit_length() - 1]:
            return False
    return True


def enumerate_graphs(n: int) -> Iterator[UndirectedGraph]:
    """Yield every labeled graph on ``n`` vertices, by ascending edge mask.

    The bit order is that of :func:`edge_index`.  ``n`` is capped at 7
    (2**21 graphs).
    """
    if n > ENUMERATION_CAP:
        raise CapExceededError("enumerate_graphs", n, ENUMERATION_CAP)
    if n < 1:
        raise ValueError(f"enumerate_graphs needs n >= 1, got {n}")
    return enumerate_graph_range(n, 0, graph_count(n))


def enumerate_graph_range(n: int, start: int, stop: int) -> Iterator[UndirectedGraph]:
    """Graphs with edge masks in ``[start, stop)``; lets workers split a sweep."""
    pairs = edge_pairs(n)
    bits = [(1 << u, 1 << v, u, v) for u, v in pairs]
    for mask in range(start, stop):
        adj = [0] * n
        m = mask
        i = 0
        while m:
            if m & 1:
                bu, bv, u, v = bits[i]
                adj[u] |= bv
                adj[v] |= bu
            m >>= 1
            i += 1
        yield UndirectedGraph._trusted(n, tuple(adj))


def graph_count(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


# -- text formats ---------------------------------------------------------


def parse_graph(text: str) -> UndirectedGraph:
    """Parse the ``"n m"`` header + ``m`` lines of ``"u v"`` edge format.

    Edges must satisfy ``u < v`` and appear at most once.  Blank lines after
    the edge list are ignored; anything else is an error.
    """
    lines = text.splitlines()

    def tokens(lineno):
        line = lines[lineno - 1]
        out = []
        col = 0
        for part in line.split():
            col = line.index(part, col)
            out.append((part, col + 1))
            col += len(part)
        return out

    def as_int(tok, lineno, what):
        s, col = tok
        try:
            return int(s)
        except ValueError:
            raise GraphFormatError(f"expected integer {what}, got {s!r}", lineno, col) from None

    if not lines or not lines[0].strip():
        raise GraphFormatError("missing header 'n m'", 1, 1)
    head = tokens(1)
    if len(head) != 2:
        col = head[2][1] if len(head) > 2 else len(lines[0]) + 1
        raise GraphFormatError("header must be exactly 'n m'", 1, col)
    n = as_int(head[0], 1, "vertex count")
    m = as_int(head[1], 1, "edge count")
    if not 0 <= n <= MAX_VERTICES:
        raise GraphFormatError(f"vertex count must be in 0..{MAX_VERTICES}", 1, head[0][1])
    if m < 0 or m > n * (n - 1) // 2:
        raise GraphFormatError(f"edge count {m} impossible for n={n}", 1, head[1][1])

    edges = []
    seen = set()
    for lineno in range(2, m + 2):
        if lineno > len(lines):
            raise GraphFormatError(f"expected {m} edge lines, found {lineno - 2}", lineno, 1)
        toks = tokens(lineno)
        if len(toks) != 2:
            col = toks[2][1] if len(toks) > 2 else len(lines[lineno - 1]) + 1
            raise GraphFormatError("edge line must be exactly 'u v'", lineno, col)
        u = as_int(toks[0], lineno, "vertex")
        v = as_int(toks[1], lineno, "vertex")
        for val, tok in ((u, toks[0]), (v, toks[1])):
            if not 0 <= val < n:
                raise GraphFormatError(f"vertex {val} out of range 0..{n - 1}", lineno, tok[1])
        if u >= v:
            raise GraphFormatError("edge endpoints must satisfy u < v", lineno, toks[0][1])
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge {u} {v}", lineno, toks[0][1])
        seen.add((u, v))
        edges.append((u, v))
    for lineno in range(m + 2, len(lines) + 1):
        toks = tokens(lineno)
        if toks:
            raise GraphFormatError("unexpected content after edge list", lineno, toks[0][1])
    return UndirectedGraph.from_edges(n, edges)


def format_graph(g: UndirectedGraph) -> str:
    edges = g.edges
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def load_graph(path) -> UndirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def save_graph(g: UndirectedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))


def to_dot(g: UndirectedGraph, name: str = "G") -> str:
    out = [f"graph {name} {{"]
    out.extend(f'  {v} [label="{v}"];' for v in range(g.n))
    out.extend(f"  {u} -- {v};" for u, v in g.edges)
    out.append("}")
    return "\n".join(out) + "\n"


def all_subsets(mask: int) -> Iterator[int]:
    """Every submask of ``mask``, in ascending numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def subsets_of_size(mask: int, k: int) -> tuple[int, ...]:
    """Submasks of ``mask`` with exactly ``k`` members, lexicographic by members."""
    if mask >> 16:
        return tuple(_combo_masks(mask, k))
    return _subsets_of_size_cached(mask, k)


@lru_cache(maxsize=1 << 16)
def _subsets_of_size_cached(mask: int, k: int) -> tuple[int, ...]:
    return tuple(_combo_masks(mask, k))


def _combo_masks(mask, k):
    for combo in combinations(iter_bits(mask), k):
        sub = 0
        for v in combo:
            sub |= 1 << v
        yield sub
