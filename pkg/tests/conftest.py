"""Shared enumeration helpers for the brute-force oracles."""

import itertools

import numpy as np

from fblnet.dists import BlocklengthDistribution


def outcomes(dist: BlocklengthDistribution):
    """All (cost-or-None, probability) outcomes of a small distribution."""
    out = [
        (m, float(dist.pmf[m]))
        for m in range(1, dist.grid_max + 1)
        if dist.pmf[m] > 0.0
    ]
    if dist.tail_mass > 0.0:
        out.append((None, dist.tail_mass))
    return out


def enumerate_joint(dists):
    """Iterate the product space: (tuple of costs-or-None, joint probability)."""
    for combo in itertools.product(*(outcomes(d) for d in dists)):
        prob = 1.0
        for _, p in combo:
            prob *= p
        yield tuple(m for m, _ in combo), prob


def pmf_from_map(fn, dists, grid_max):
    """Expected pmf/tail of fn(costs) by exhaustive enumeration.

    fn maps a tuple of costs (None = tail) to a cost or None; tail outcomes
    are absorbing and handled by fn itself.
    """
    pmf = np.zeros(grid_max + 1)
    tail = 0.0
    for costs, prob in enumerate_joint(dists):
        m = fn(costs)
        if m is None or m > grid_max:
            tail += prob
        else:
            pmf[m] += prob
    return pmf, tail


def min_with_tail(values):
    """min over costs where None (tail) is larger than everything."""
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


def sum_with_tail(values):
    """sum over costs where any tail makes the whole path a tail."""
    if any(v is None for v in values):
        return None
    return sum(values)
