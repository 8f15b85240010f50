"""Exhaustive desk-scale verification over all labeled graphs on ``n`` vertices.

Each ``verify_*`` function enumerates every labeled graph (optionally split
across worker processes by edge-mask range), checks one claimed equivalence
per graph and returns a :class:`VerificationSummary`.  Aggregation is sorted
by edge mask, so results do not depend on the worker count.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Optional

from . import axioms
from .chordal import find_peo, is_chordal
from .errors import CapExceededError
from .graph import UndirectedGraph, enumerate_graph_range, graph_count, separated_mask
from .model import _d_separated_mask, d_separated_moral, disjoint_triples, graph_model, model_graph, orient_by_peo

THEOREM1_CAP = 5
SINGLE_AXIOM_CAP = 6
EQUIVALENCE_CAP = 5
C7_CAP = 6
PERFECT_MAP_CAP = 5


@dataclass
class Discrepancy:
    edge_mask: int
    edges: list[tuple[int, int]]
    detail: str

    def to_dict(self) -> dict:
        return {"edge_mask": self.edge_mask, "edges": [list(e) for e in self.edges], "detail": self.detail}


@dataclass
class VerificationSummary:
    """Outcome of one exhaustive sweep.  ``ok`` iff no discrepancies."""

    claim: str
    n: int
    graphs_checked: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    witnesses: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "n": self.n,
            "graphs_checked": self.graphs_checked,
            "ok": self.ok,
            "discrepancies": [d.to_dict() for d in self.discrepancies],
            "counts": dict(sorted(self.counts.items())),
            "witnesses": {k: [list(e) for e in v] for k, v in sorted(self.witnesses.items())},
            "seconds": round(self.seconds, 3),
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_table(self) -> str:
        rows = [("claim", self.claim), ("n", self.n), ("graphs checked", self.graphs_checked)]
        rows += [(k, v) for k, v in sorted(self.counts.items())]
        rows.append(("discrepancies", len(self.discrepancies)))
        rows.append(("seconds", f"{self.seconds:.2f}"))
        for name, edges in sorted(self.witnesses.items()):
            rows.append((f"witness {name}", " ".join(f"{u}-{v}" for u, v in edges) or "(no edges)"))
        for d in self.discrepancies[:20]:
            rows.append(("mismatch", f"mask={d.edge_mask} {d.detail}"))
        width = max(len(str(k)) for k, _ in rows)
        return "\n".join(f"{str(k).ljust(width)}  {v}" for k, v in rows) + "\n"


# -- sweep driver -------------------------------------------------------------


def _run_chunk(check: Callable, n: int, start: int, stop: int):
    found = []
    counts: dict[str, int] = {}
    checked = 0
    for g in enumerate_graph_range(n, start, stop):
        checked += 1
        detail, tags = check(g)
        for t in tags:
            counts[t] = counts.get(t, 0) + 1
        if detail is not None:
            found.append(Discrepancy(g.edge_mask, g.edges, detail))
    return checked, found, counts


def _sweep(claim: str, n: int, check: Callable, workers: int = 1) -> VerificationSummary:
    t0 = time.perf_counter()
    total = graph_count(n)
    if workers <= 1 or total < 64:
        parts = [_run_chunk(check, n, 0, total)]
    else:
        from concurrent.futures import ProcessPoolExecutor

        step = -(-total // (workers * 4))
        bounds = [(s, min(s + step, total)) for s in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial(_run_chunk_args, check, n), bounds))
    summary = VerificationSummary(claim, n)
    for checked, found, counts in parts:
        summary.graphs_checked += checked
        summary.discrepancies.extend(found)
        for k, v in counts.items():
            summary.counts[k] = summary.counts.get(k, 0) + v
    summary.discrepancies.sort(key=lambda d: d.edge_mask)
    summary.seconds = time.perf_counter() - t0
    return summary


def _run_chunk_args(check, n, bounds):
    return _run_chunk(check, n, *bounds)


def _cap(what, n, cap):
    if n > cap:
        raise CapExceededError(what, n, cap)
    if n < 1:
        raise ValueError(f"{what}: n must be >= 1")


# -- per-graph checks (module level so they pickle) -----------------------------


def _check_theorem1(g):
    m = graph_model(g)
    report = axioms.check_all(m, ["C1", "C2", "C3", "C4", "C5"])
    problems = [f"{name} fails" for name in report.failing()]
    if model_graph(m) != g:
        problems.append("model_graph does not reconstruct the graph")
    return ("; ".join(problems) or None), ()


def _check_single_axiom(name, g):
    chordal = is_chordal(g)
    verdict = axioms.holds(graph_model(g), name)
    tags = ("chordal",) if chordal else ()
    if chordal != verdict:
        return f"is_chordal={chordal} but {name} holds={verdict}", tags
    return None, tags


def _check_equivalences(g):
    m = graph_model(g)
    prepared = axioms._prepare(m)
    verdicts = {name: axioms.holds(m, name, _prepared=prepared) for name in ("C6", "C8", "C9", "C9'")}
    chordal = is_chordal(g)
    tags = ("chordal",) if chordal else ()
    if len(set(verdicts.values())) != 1:
        return "verdicts differ: " + ", ".join(f"{k}={v}" for k, v in verdicts.items()), tags
    return None, tags


def _check_perfect_map(g):
    if find_peo(g) is None:
        return None, ()
    dag = orient_by_peo(g)
    children = dag.children
    problems = []
    for x, y, z in disjoint_triples(g.n):
        if not x or not y:
            continue
        sep = separated_mask(g.adj, x, y, z)
        dsep = _d_separated_mask(dag, children, x, y, z)
        if sep != dsep:
            problems.append(f"separation={sep} but d-separation={dsep} at x={x} y={y} z={z}")
            break
    for x, y, z in disjoint_triples(g.n):
        if not x or not y:
            continue
        if _d_separated_mask(dag, children, x, y, z) != d_separated_moral(dag, x, y, z):
            problems.append(f"d_separated and d_separated_moral disagree at x={x} y={y} z={z}")
            break
    return ("; ".join(problems) or None), ("chordal",)


# -- public operations -----------------------------------------------------------


def verify_theorem1(n: int, workers: int = 1) -> VerificationSummary:
    """Every graph's separation model satisfies C1-C5 and is reconstructed by
    :func:`~decomposable.model.model_graph` (``n <= 5``)."""
    _cap("verify_theorem1", n, THEOREM1_CAP)
    return _sweep("graph models satisfy C1-C5 and G_M reconstructs the graph", n, _check_theorem1, workers)


def verify_theorem2(n: int, workers: int = 1) -> VerificationSummary:
    """``is_chordal(g)`` iff C6 holds for the separation model of ``g`` (``n <= 6``)."""
    _cap("verify_theorem2", n, SINGLE_AXIOM_CAP)
    return _sweep("chordal <=> C6", n, partial(_check_single_axiom, "C6"), workers)


def verify_theorem3(n: int, workers: int = 1) -> VerificationSummary:
    """``is_chordal(g)`` iff C8 holds for the separation model of ``g`` (``n <= 6``)."""
    _cap("verify_theorem3", n, SINGLE_AXIOM_CAP)
    return _sweep("chordal <=> C8", n, partial(_check_single_axiom, "C8"), workers)


def verify_equivalences(n: int, workers: int = 1) -> VerificationSummary:
    """C6, C8, C9 and C9' give identical verdicts on every graph model (``n <= 5``)."""
    _cap("verify_equivalences", n, EQUIVALENCE_CAP)
    return _sweep("C6 == C8 == C9 == C9'", n, _check_equivalences, workers)


def verify_perfect_maps(n: int, workers: int = 1) -> VerificationSummary:
    """For each chordal graph, the PEO-oriented DAG d-separates exactly what the
    graph separates, and both d-separation routines agree (``n <= 5``)."""
    _cap("verify_perfect_maps", n, PERFECT_MAP_CAP)
    return _sweep("PEO-oriented DAG is a perfect map of the chordal graph", n, _check_perfect_map, workers)


def find_c7_witness(n: int) -> Optional[UndirectedGraph]:
    """First non-chordal graph (by edge mask) whose separation model satisfies C7.

    Such a graph shows C1-C5 plus C7 do not pin down chordality.  Returns
    ``None`` when no ``n``-vertex graph qualifies.
    """
    _cap("find_c7_witness", n, C7_CAP)
    for g in enumerate_graph_range(n, 0, graph_count(n)):
        if not is_chordal(g) and axioms.holds(graph_model(g), "C7"):
            return g
    return None


def c7_witness_summary(max_n: int = C7_CAP) -> VerificationSummary:
    """Search ``n = 1..max_n`` for the smallest C7 witness and record it."""
    _cap("find_c7_witness", max_n, C7_CAP)
    t0 = time.perf_counter()
    summary = VerificationSummary("non-chordal graph model satisfying C7", max_n)
    for n in range(1, max_n + 1):
        w = find_c7_witness(n)
        if w is None:
            summary.graphs_checked += graph_count(n)
            continue
        # masks are scanned in ascending order, so the witness mask counts the graphs before it
        summary.graphs_checked += w.edge_mask + 1
        summary.n = n
        summary.witnesses["c7"] = w.edges
        break
    else:
        summary.discrepancies.append(Discrepancy(0, [], f"no C7 witness up to n={max_n}"))
    summary.seconds = time.perf_counter() - t0
    return summary



# -- oracle learning harness ------------------------------------------------------

LEARN_CAP = 7


def _learn_chunk(n: int, masks) -> tuple[int, list[Discrepancy], dict[str, int]]:
    from .learn.pc import LearnConfig, learn_skeleton

    pruned_cfg = LearnConfig(recheck=False)
    plain_cfg = LearnConfig(c8_pruning=False, c6_rule=False, recheck=False)
    found = []
    counts = {"chordal": 0, "tests_le_baseline": 0, "tests_pruned": 0, "tests_baseline": 0, "fixed_edges": 0}
    for mask in masks:
        g = UndirectedGraph.from_edge_mask(n, mask)
        m = graph_model(g)
        res = learn_skeleton(m, n, pruned_cfg)
        base = learn_skeleton(m, n, plain_cfg)
        counts["chordal"] += 1
        counts["tests_pruned"] += res.ci_tests
        counts["tests_baseline"] += base.ci_tests
        counts["fixed_edges"] += len(res.fixed_edges)
        if res.ci_tests <= base.ci_tests:
            counts["tests_le_baseline"] += 1
        problems = []
        if res.skeleton != g:
            problems.append("pruned learner missed the skeleton")
        if base.skeleton != g:
            problems.append("baseline learner missed the skeleton")
        if any(not g.has_edge(u, v) for u, v in res.fixed_edges):
            problems.append(f"fixed a non-edge: {res.fixed_edges}")
        if res.fill_edges:
            problems.append("fill edges on a chordal oracle")
        missing = [p for p in _non_edges(g) if p not in res.sepsets]
        if missing:
            problems.append(f"removed pairs without sepset: {missing}")
        if problems:
            found.append(Discrepancy(mask, g.edges, "; ".join(problems)))
    return len(masks), found, counts


def _non_edges(g):
    return [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]


def verify_oracle_learning(n: int, workers: int = 1) -> VerificationSummary:
    """Run the learner with a separation oracle on every chordal graph on ``n``
    vertices, next to an unpruned PC baseline.

    A discrepancy is any wrong skeleton, a fixed edge outside the true graph, a
    missing sepset, or fill on chordal input.  ``counts["tests_le_baseline"]``
    tallies graphs where pruning used no more CI tests than the baseline.
    """
    from .chordal import chordal_edge_masks

    _cap("verify_oracle_learning", n, LEARN_CAP)
    t0 = time.perf_counter()
    masks = chordal_edge_masks(n)
    if workers <= 1 or len(masks) < 256:
        parts = [_learn_chunk(n, masks)]
    else:
        from concurrent.futures import ProcessPoolExecutor

        step = -(-len(masks) // (workers * 4))
        chunks = [masks[i : i + step] for i in range(0, len(masks), step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial(_learn_chunk, n), chunks))
    summary = VerificationSummary("oracle learner recovers every chordal skeleton", n)
    for checked, found, counts in parts:
        summary.graphs_checked += checked
        summary.discrepancies.extend(found)
        for k, v in counts.items():
            summary.counts[k] = summary.counts.get(k, 0) + v
    summary.discrepancies.sort(key=lambda d: d.edge_mask)
    summary.seconds = time.perf_counter() - t0
    return summary
