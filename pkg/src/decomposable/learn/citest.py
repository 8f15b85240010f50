"""G-squared conditional-independence test for categorical data."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np
from scipy.stats import chi2

from ..graph import iter_bits
from .data import Dataset

# above this many table cells, strata are indexed with np.unique instead of bincount
_DENSE_LIMIT = 1 << 22


@dataclass(frozen=True)
class CiDecision:
    statistic: float
    dof: int
    p_value: float
    independent: bool
    degenerate: bool = False


def g2_test(data: Dataset, x: int, y: int, z=(), alpha: float = 0.05) -> CiDecision:
    """Likelihood-ratio test of ``x`` independent of ``y`` given the columns ``z``.

    G2 = 2 * sum(obs * ln(obs / expected)) over the x-by-y tables of every
    observed configuration of ``z``; empty cells add nothing.  Each stratum
    contributes ``(r_x' - 1) * (r_y' - 1)`` degrees of freedom where ``r'``
    counts the levels seen in that stratum, so unobserved strata and levels
    reduce the total.  With no degrees of freedom left (e.g. a constant
    column) the decision is "independent" and flagged degenerate.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    z = tuple(iter_bits(z)) if isinstance(z, int) else tuple(z)
    if x == y or x in z or y in z:
        raise ValueError("x, y and z must be disjoint")
    if data.n_rows == 0:
        raise ValueError("cannot test on an empty dataset")
    rows = data.rows
    rx, ry = data.arities[x], data.arities[y]

    if z:
        zcode = np.zeros(data.n_rows, dtype=np.int64)
        for col in z:
            zcode = zcode * data.arities[col] + rows[:, col]
        nz = prod(data.arities[c] for c in z)
        if nz * rx * ry > _DENSE_LIMIT:
            _, zcode = np.unique(zcode, return_inverse=True)
            nz = int(zcode.max()) + 1
    else:
        zcode = 0
        nz = 1
    idx = (zcode * rx + rows[:, x]) * ry + rows[:, y]
    counts = np.bincount(idx, minlength=nz * rx * ry).reshape(nz, rx, ry).astype(np.float64)

    nxz = counts.sum(axis=2)
    nyz = counts.sum(axis=1)
    nzt = nxz.sum(axis=1)
    seen = nzt > 0
    counts, nxz, nyz, nzt = counts[seen], nxz[seen], nyz[seen], nzt[seen]

    expected = nxz[:, :, None] * nyz[:, None, :] / nzt[:, None, None]
    pos = counts > 0
    stat = float(2.0 * np.sum(counts[pos] * np.log(counts[pos] / expected[pos])))
    stat = max(stat, 0.0)
    dof = int(np.sum(np.maximum((nxz > 0).sum(axis=1) - 1, 0) * np.maximum((nyz > 0).sum(axis=1) - 1, 0)))
    if dof <= 0:
        return CiDecision(stat, 0, 1.0, True, degenerate=True)
    p = float(chi2.sf(stat, dof))
    return CiDecision(stat, dof, p, p > alpha)


class DataCi:
    """CI source answering ``I(a, b | z)`` with :func:`g2_test` at level ``alpha``.

    Stateless, so one instance may be shared by
    concurrent learner runs on the same dataset.
    """

    def __init__(self, data: Dataset, alpha: float = 0.05):
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self.data = data
        self.alpha = alpha
        self.n = data.n_vars

    def __call__(self, a: int, b: int, z: int) -> bool:
        return g2_test(self.data, a, b, tuple(iter_bits(z)), self.alpha).independent
