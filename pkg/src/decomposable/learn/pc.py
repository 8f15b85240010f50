"""Constraint-based skeleton learning for chordal graphs.

A PC-style sweep: start from the complete graph and, for conditioning sizes
0, 1, 2, ..., try to delete each remaining edge ``a-b`` by finding a set ``W``
of current neighbours of ``a`` (then of ``b``) with ``I(a, b | W)``.  Two
chordal-specific rules sit on top:

* candidate pruning: only sets ``W`` that are complete in the current graph
  are tried, since a chordal independence model always has a complete
  separator for a non-adjacent pair;
* edge fixing: if ``I(a, b | Z+g+d)`` holds while ``I(a, b | Z+g)`` and
  ``I(a, b | Z+d)`` were both rejected earlier, then ``g-d`` must be an edge
  of the true chordal graph, so it is fixed and never tested again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..chordal import is_chordal
from ..errors import InconsistentOracleError
from ..graph import UndirectedGraph, full_mask, is_complete_mask, iter_bits, reach, subsets_of_size
from ..model import DependencyModel, GraphModel
from .citest import DataCi
from .data import Dataset
from .triangulate import chordalize

CiSource = Callable[[int, int, int], bool]


@dataclass(frozen=True)
class LearnConfig:
    """Learner switches.

    ``max_cond_size`` of ``None`` means no limit (``n - 2``).  ``alpha`` only
    matters when the CI source is built from a :class:`Dataset`.  ``recheck``
    asks every fresh question twice and raises on disagreement.
    """

    max_cond_size: Optional[int] = None
    alpha: float = 0.05
    chordalize: bool = False
    c8_pruning: bool = True
    c6_rule: bool = True
    recheck: bool = True


BASELINE = LearnConfig(c8_pruning=False, c6_rule=False)


@dataclass
class LearnResult:
    skeleton: UndirectedGraph
    sepsets: dict[tuple[int, int], tuple[int, ...]]
    fixed_edges: list[tuple[int, int]]
    chordalized: bool = False
    fill_edges: list[tuple[int, int]] = field(default_factory=list)
    tests_per_level: dict[int, int] = field(default_factory=dict)
    c6_conflicts: int = 0
    names: Optional[tuple[str, ...]] = None

    @property
    def ci_tests(self) -> int:
        return sum(self.tests_per_level.values())

    @property
    def graph(self) -> UndirectedGraph:
        """Skeleton plus any fill edges."""
        return self.skeleton.with_edges(self.fill_edges) if self.fill_edges else self.skeleton

    def to_dict(self) -> dict:
        return {
            "n": self.skeleton.n,
            "names": list(self.names) if self.names else None,
            "skeleton": [list(e) for e in self.skeleton.edges],
            "sepsets": [{"pair": list(p), "sepset": list(s)} for p, s in sorted(self.sepsets.items())],
            "fixed_edges": [list(e) for e in self.fixed_edges],
            "chordalized": self.chordalized,
            "fill_edges": [list(e) for e in self.fill_edges],
            "ci_tests": {"total": self.ci_tests, "per_level": {str(k): v for k, v in sorted(self.tests_per_level.items())}},
            "c6_conflicts": self.c6_conflicts,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def oracle_ci(m: DependencyModel) -> CiSource:
    """CI source that asks a dependency model directly (no sampling error)."""
    if isinstance(m, GraphModel):
        adj = m.graph.adj
        reached: dict[tuple[int, int], int] = {}

        # b is separated from a by z iff b lies outside a's component once z is deleted;
        # that component does not depend on b, so it is memoized per (a, z)
        def separated(a, b, z):
            key = (a, z)
            comp = reached.get(key)
            if comp is None:
                comp = reached[key] = reach(adj, 1 << a, z)
            return not comp >> b & 1

        return separated
    query = m.query_mask
    return lambda a, b, z: bool(query(1 << a, 1 << b, z))


def _resolve(ci, n, config) -> tuple[CiSource, Optional[tuple[str, ...]]]:
    if isinstance(ci, Dataset):
        if ci.n_vars != n:
            raise ValueError(f"dataset has {ci.n_vars} variables, expected {n}")
        return DataCi(ci, config.alpha), ci.names
    if isinstance(ci, DataCi):
        return ci, ci.data.names
    if isinstance(ci, DependencyModel):
        if ci.n != n:
            raise ValueError(f"model has n={ci.n}, expected {n}")
        return oracle_ci(ci), None
    if callable(ci):
        return ci, None
    raise TypeError(f"unsupported CI source {type(ci).__name__}")


def learn_skeleton(ci, n: int, config: LearnConfig | None = None) -> LearnResult:
    """Learn an undirected skeleton over ``n`` variables from CI answers.

    ``ci`` is a :class:`Dataset` (tested with G2 at ``config.alpha``), a
    :class:`DependencyModel` used as an oracle, or any callable
    ``ci(a, b, z_mask) -> bool``.  Conditioning sets grow from size 0; edges
    are visited in lexicographic order, subsets of ``a``'s neighbours before
    those of ``b``.

    Raises
    ------
    InconsistentOracleError
        With ``config.recheck``, if the source answers a repeated query differently.
    """
    config = config or LearnConfig()
    source, names = _resolve(ci, n, config)
    full = full_mask(n)
    adj = [full & ~(1 << v) for v in range(n)]
    fixed: set[tuple[int, int]] = set()
    sepsets: dict[tuple[int, int], tuple[int, ...]] = {}
    cache: dict[tuple[int, int, int], bool] = {}
    tests: dict[int, int] = {}
    conflicts = 0
    max_l = n - 2 if config.max_cond_size is None else min(config.max_cond_size, n - 2)
    recheck = config.recheck

    c8 = config.c8_pruning
    for level in range(max_l + 1):
        testable = False
        issued = 0
        for a in range(n):
            for b in iter_bits(adj[a] >> (a + 1) << (a + 1)):
                if not adj[a] >> b & 1 or (a, b) in fixed:
                    continue
                side_a = adj[a] & ~(1 << b)
                side_b = adj[b] & ~(1 << a)
                found = None
                for side, skip in ((side_a, 0), (side_b, side_a)):
                    if side.bit_count() < level:
                        continue
                    testable = True
                    for w in subsets_of_size(side, level):
                        # sets inside a's neighbourhood were already tried from a's side
                        if skip and w & ~skip == 0:
                            continue
                        if c8 and not is_complete_mask(adj, w):
                            continue
                        key = (a, b, w)
                        ans = cache.get(key)
                        if ans is None:
                            ans = bool(source(a, b, w))
                            issued += 1
                            if recheck and bool(source(a, b, w)) != ans:
                                raise InconsistentOracleError(
                                    f"CI source gave two answers for I({a}, {b} | {list(iter_bits(w))})"
                                )
                            cache[key] = ans
                        if ans:
                            found = w
                            break
                    if found is not None:
                        break
                if found is None:
                    continue
                adj[a] &= ~(1 << b)
                adj[b] &= ~(1 << a)
                sepsets[(a, b)] = tuple(iter_bits(found))
                if config.c6_rule and found.bit_count() >= 2:
                    for g, d in _pairs(found):
                        z = found & ~(1 << g) & ~(1 << d)
                        if cache.get((a, b, z | 1 << g)) is False and cache.get((a, b, z | 1 << d)) is False:
                            if adj[g] >> d & 1:
                                fixed.add((g, d))
                            else:
                                conflicts += 1
        if issued:
            tests[level] = issued
        if not testable:
            break

    skeleton = UndirectedGraph._trusted(n, tuple(adj))
    result = LearnResult(
        skeleton=skeleton,
        sepsets=sepsets,
        fixed_edges=sorted(fixed),
        tests_per_level=tests,
        c6_conflicts=conflicts,
        names=names,
    )
    if config.chordalize and not is_chordal(skeleton):
        _, fill = chordalize(skeleton)
        result.chordalized = True
        result.fill_edges = fill
    return result


def _pairs(mask: int):
    members = list(iter_bits(mask))
    for i, g in enumerate(members):
        for d in members[i + 1 :]:
            yield g, d
