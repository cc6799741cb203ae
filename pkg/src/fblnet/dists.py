"""Discrete distributions of the random per-hop symbol cost.

A cost distribution lives on the integer symbol grid 1..grid_max (the frame
budget); whatever cannot fit the budget at all sits in an explicit tail mass.
Tail arithmetic is absorbing: combining a tail outcome with anything yields a
tail outcome, matching the scheduling-error semantics.

Numerical discipline: every operation assembles probabilities from sums and
products of nonnegative terms (never 1 - cdf style cancellation), so tail
quantities stay accurate at relative ~1e-13 even when they are 1e-30.  This is
what lets the analytic PER curves reach the deep-reliability region.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .fbl import ibl_snr_for_blocklength_grid, snr_for_blocklength_grid

# Direct convolution is O(G^2) but keeps every coefficient a positive dot
# product; switch to FFT only for grids where that becomes prohibitive and
# deep-tail accuracy is already beyond float64 anyway.
FFT_GRID_THRESHOLD = 16384

MASS_TOL = 1e-9


class GridMismatch(ValueError):
    """Operands live on different symbol grids."""


@dataclass(frozen=True, eq=False)
class BlocklengthDistribution:
    """PMF over integer symbol costs 1..grid_max plus an unschedulable tail.

    pmf is indexed directly by cost: pmf[m] for m in 0..grid_max, pmf[0] == 0.
    Immutable after construction; all algebra returns new values.
    """

    pmf: np.ndarray
    tail_mass: float
    _sf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pmf = np.array(self.pmf, dtype=float)
        pmf.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "tail_mass", float(self.tail_mass))
        if pmf.ndim != 1 or len(pmf) < 2:
            raise ValueError("pmf must be a 1-D array indexed 0..grid_max")
        if pmf[0] != 0.0:
            raise ValueError("costs start at 1 symbol; pmf[0] must be zero")
        if np.any(pmf < 0.0) or self.tail_mass < 0.0:
            raise ValueError("negative probability mass")
        drift = pmf.sum() + self.tail_mass - 1.0
        if abs(drift) > MASS_TOL:
            raise ValueError(f"probability mass off by {drift:.3e} (> {MASS_TOL:g})")
        # survival[m] = P(cost > m); built from the tail upward so small
        # values keep full relative precision.
        sf = np.empty(len(pmf))
        sf[-1] = self.tail_mass
        sf[:-1] = np.cumsum(pmf[:0:-1])[::-1] + self.tail_mass
        sf.setflags(write=False)
        object.__setattr__(self, "_sf", sf)

    @property
    def grid_max(self) -> int:
        return len(self.pmf) - 1

    @property
    def cdf(self) -> np.ndarray:
        """Running sums of the pmf; cdf[grid_max] == 1 - tail_mass (to rounding)."""
        return np.cumsum(self.pmf)

    @property
    def sf(self) -> np.ndarray:
        """Survival P(cost > m) for m = 0..grid_max; sf[grid_max] == tail_mass."""
        return self._sf

    @property
    def on_grid_mass(self) -> float:
        return float(self.pmf.sum())

    def write_csv(self, fp) -> None:
        """Debug dump: one (m, pmf, cdf) row per grid point plus a tail footer."""
        fp.write("m,pmf,cdf\n")
        cdf = self.cdf
        for m in range(1, self.grid_max + 1):
            fp.write(f"{m},{float(self.pmf[m])!r},{float(cdf[m])!r}\n")
        fp.write(f"tail_mass,{self.tail_mass!r},\n")

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _require_same_grid(*dists: BlocklengthDistribution) -> int:
    g = dists[0].grid_max
    for d in dists[1:]:
        if d.grid_max != g:
            raise GridMismatch(f"grid_max {d.grid_max} != {g}")
    return g


def point_mass(m: int, grid_max: int) -> BlocklengthDistribution:
    """Deterministic cost of m symbols (m > grid_max puts all mass in the tail)."""
    pmf = np.zeros(grid_max + 1)
    if 1 <= m <= grid_max:
        pmf[m] = 1.0
        return BlocklengthDistribution(pmf, 0.0)
    return BlocklengthDistribution(pmf, 1.0)


def from_pmf_dict(masses: dict[int, float], grid_max: int) -> BlocklengthDistribution:
    """Hand-built distribution for tests and oracles.

    Mass on keys outside 1..grid_max, plus any mass the dict does not assign,
    lands in the unschedulable tail.
    """
    pmf = np.zeros(grid_max + 1)
    for m, p in masses.items():
        if 1 <= m <= grid_max:
            pmf[m] += p
    return BlocklengthDistribution(pmf, 1.0 - pmf.sum())


def _from_required_snr(required_snr, gamma_bar, grid_max) -> BlocklengthDistribution:
    """Distribution of the integer (ceil) cost given the SNR needed per cost m.

    required_snr[m-1] is the SNR making blocklength m exactly sufficient; it is
    nonincreasing in m and +inf where m is unreachable.  With the fading gain
    z ~ Exp(1), F(m) = P(gamma >= required) = exp(-required/gamma_bar); pmf and
    tail are assembled in positive expm1 form to keep tiny masses exact.
    """
    x = np.asarray(required_snr, dtype=float) / gamma_bar
    pmf = np.zeros(grid_max + 1)
    x_prev = np.concatenate(([np.inf], x[:-1]))
    with np.errstate(invalid="ignore", over="ignore"):
        # F(m) - F(m-1) = exp(-x_m) * (1 - exp(-(x_{m-1} - x_m)))
        vals = -np.exp(-x) * np.expm1(-(x_prev - x))
    first = np.isfinite(x) & ~np.isfinite(x_prev)
    vals[first] = np.exp(-x[first])
    vals[~np.isfinite(x)] = 0.0
    pmf[1:] = vals
    tail = float(-np.expm1(-x[-1])) if np.isfinite(x[-1]) else 1.0
    return BlocklengthDistribution(pmf, tail)


def single_hop_dist_fbl(
    gamma_bar: float, payload_bits: float, eps_star: float, grid_max: int
) -> BlocklengthDistribution:
    """Cost distribution of one Rayleigh-faded hop meeting eps_star per use."""
    if gamma_bar <= 0:
        raise ValueError("average SNR must be positive")
    if grid_max < 1:
        raise ValueError("grid_max must be >= 1")
    ms = np.arange(1, grid_max + 1, dtype=float)
    required = snr_for_blocklength_grid(ms, payload_bits, eps_star)
    return _from_required_snr(required, gamma_bar, grid_max)


def single_hop_dist_ibl(
    gamma_bar: float, payload_bits: float, grid_max: int
) -> BlocklengthDistribution:
    """Cost distribution of one hop coding at capacity (scheduling errors only)."""
    if gamma_bar <= 0:
        raise ValueError("average SNR must be positive")
    if grid_max < 1:
        raise ValueError("grid_max must be >= 1")
    ms = np.arange(1, grid_max + 1, dtype=float)
    required = ibl_snr_for_blocklength_grid(ms, payload_bits)
    return _from_required_snr(required, gamma_bar, grid_max)


def convolve(
    a: BlocklengthDistribution, b: BlocklengthDistribution
) -> BlocklengthDistribution:
    """Distribution of the sum of two independent costs.

    Mass landing beyond the grid, and every combination involving either
    operand's tail, accrues to the result tail.
    """
    g = _require_same_grid(a, b)
    if g + 1 > FFT_GRID_THRESHOLD:
        full = fftconvolve(a.pmf, b.pmf)
        np.clip(full, 0.0, None, out=full)
        full[:2] = 0.0  # structurally zero; FFT rounding dust otherwise
    else:
        full = np.convolve(a.pmf, b.pmf)
    kept = full[: g + 1].copy()
    overflow = float(full[g + 1 :].sum())
    tail = (
        overflow
        + a.tail_mass * b.on_grid_mass
        + b.tail_mass * a.on_grid_mass
        + a.tail_mass * b.tail_mass
    )
    return BlocklengthDistribution(kept, tail)


def min_of(
    a: BlocklengthDistribution, b: BlocklengthDistribution
) -> BlocklengthDistribution:
    """Distribution of the minimum of two independent costs.

    P(min = m) = P(a = m) P(b > m) + P(b = m) P(a >= m); equivalent to
    differencing 1 - (1-F_a)(1-F_b) but free of cancellation.
    """
    g = _require_same_grid(a, b)
    pmf = np.zeros(g + 1)
    pmf[1:] = a.pmf[1:] * b.sf[1:] + b.pmf[1:] * a.sf[:-1]
    return BlocklengthDistribution(pmf, a.tail_mass * b.tail_mass)


def best_of_iid(d: BlocklengthDistribution, n: int) -> BlocklengthDistribution:
    """Minimum of n independent copies of d (minimum order statistic).

    P(min = m) = S(m-1)^n - S(m)^n, expanded through the factorization
    (x^n - y^n) = (x - y) * sum x^j y^(n-1-j) so every term stays positive.
    """
    if n < 1:
        raise ValueError("need at least one candidate")
    if n == 1:
        return d
    s = d.sf
    s_prev = np.concatenate(([1.0], s[:-1]))
    acc = np.zeros(len(s))
    for j in range(n):
        acc += s_prev**j * s ** (n - 1 - j)
    return BlocklengthDistribution(d.pmf * acc, d.tail_mass**n)


def min_of_independent(
    dists: list[BlocklengthDistribution],
) -> BlocklengthDistribution:
    """Minimum of independent, possibly non-identical costs.

    Telescopes prod S_j(m-1) - prod S_j(m) into a sum of positive products,
    one term per operand contributing its own pmf at m.
    """
    if not dists:
        raise ValueError("empty candidate list")
    if len(dists) == 1:
        return dists[0]
    _require_same_grid(*dists)
    at_m = [d.sf for d in dists]
    before_m = [np.concatenate(([1.0], s[:-1])) for s in at_m]
    pmf = np.zeros(len(dists[0].pmf))
    tail = 1.0
    for k, d in enumerate(dists):
        term = d.pmf.copy()
        for j in range(len(dists)):
            if j < k:
                term *= at_m[j]
            elif j > k:
                term *= before_m[j]
        pmf += term
        tail *= d.tail_mass
    return BlocklengthDistribution(pmf, tail)
