"""Synthetic categorical data from a chordal graph.

The graph is oriented along a perfect elimination ordering, every conditional
table is drawn from a symmetric Dirichlet, and rows come from ancestral
sampling.  The resulting distribution factorizes over the DAG, which has the
same independencies as the chordal graph.
"""

from __future__ import annotations

from math import prod

import numpy as np

from ..graph import UndirectedGraph, iter_bits
from ..model import Dag, orient_by_peo
from .data import Dataset

DIRICHLET_CONCENTRATION = 1.0


def random_cpts(dag: Dag, arities, rng: np.random.Generator, concentration=DIRICHLET_CONCENTRATION):
    """One ``(parent configurations, arity)`` probability table per vertex."""
    cpts = []
    for v in range(dag.n):
        n_cfg = prod(arities[p] for p in iter_bits(dag.parents[v]))
        cpts.append(rng.dirichlet(np.full(arities[v], concentration), size=n_cfg))
    return cpts


def ancestral_sample(dag: Dag, arities, cpts, n_rows: int, rng: np.random.Generator) -> np.ndarray:
    rows = np.zeros((n_rows, dag.n), dtype=np.int64)
    for v in dag.topological_order():
        cfg = np.zeros(n_rows, dtype=np.int64)
        for p in iter_bits(dag.parents[v]):
            cfg = cfg * arities[p] + rows[:, p]
        cdf = np.cumsum(cpts[v], axis=1)[cfg]
        u = rng.random(n_rows)
        rows[:, v] = np.minimum((u[:, None] >= cdf).sum(axis=1), arities[v] - 1)
    return rows


def sample_dataset(
    g: UndirectedGraph,
    arities=2,
    n_rows: int = 1000,
    seed: int | None = 0,
    names=None,
    concentration: float = DIRICHLET_CONCENTRATION,
) -> Dataset:
    """Draw ``n_rows`` records from a random distribution Markov to chordal ``g``.

    ``arities`` is a single int or one int (>= 2) per vertex.  The same seed
    always yields the same dataset.

    Raises
    ------
    NotChordalError
        If ``g`` is not chordal.
    """
    if n_rows < 1:
        raise ValueError("n_rows must be >= 1")
    if isinstance(arities, int):
        arities = (arities,) * g.n
    arities = tuple(int(a) for a in arities)
    if len(arities) != g.n:
        raise ValueError(f"need {g.n} arities, got {len(arities)}")
    if any(a < 2 for a in arities):
        raise ValueError("arities must be >= 2")
    dag = orient_by_peo(g)
    rng = np.random.default_rng(seed)
    cpts = random_cpts(dag, arities, rng, concentration)
    rows = ancestral_sample(dag, arities, cpts, n_rows, rng)
    if names is None:
        names = tuple(f"x{v}" for v in range(g.n))
    return Dataset(tuple(names), arities, rows)
