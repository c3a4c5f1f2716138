"""Pure-python (numpy) fallback for the non-dominated sorting kernel.

Produces bit-identical ranks to the compiled kernel: both use exact
floating-point comparisons and the same front-peeling rule.
"""

import numpy as np


def nds_ranks(f):
    """Front index per row of the objective matrix ``f`` (N x m), minimization.

    Rank 0 is the non-dominated set; rank r+1 is the non-dominated set once
    ranks <= r are removed.
    """
    f = np.ascontiguousarray(f, dtype=np.float64)
    n = f.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int32)
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    n_dom = dom.sum(axis=0).astype(np.int64)
    ranks = np.full(n, -1, dtype=np.int32)
    rank = 0
    current = np.flatnonzero(n_dom == 0)
    while current.size:
        ranks[current] = rank
        n_dom[current] = -1  # retire; counts below only shrink for unranked rows
        n_dom -= dom[current].sum(axis=0)
        current = np.flatnonzero(n_dom == 0)
        rank += 1
    return ranks
