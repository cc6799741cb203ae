"""Scalar channel mathematics for the finite-blocklength (FBL) and
infinite-blocklength (IBL) coding regimes.

Provides capacity, dispersion, the Gaussian Q-function pair, the normal
approximation of the block error probability, and the forward/inverse maps
between SNR and the minimal blocklength that hits a target decoding error.

All functions accept scalars or numpy arrays and are pure/stateless.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize, special

LOG2E = np.log2(np.e)

# Bracket for inverting the SNR -> blocklength map (log-gamma bisection).
# Blocklengths below the value of the map at SNR_MAX are reported infeasible:
# no representable SNR reaches them.
SNR_MIN = 1e-12
SNR_MAX = 1e12

_SQRT2 = np.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


class InfeasibleBlocklength(ValueError):
    """Requested blocklength lies at/below the infimum reachable as SNR grows."""


def shannon_capacity(gamma):
    """Capacity log2(1 + gamma) of a complex channel, in bits per channel use."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise ValueError("SNR must be nonnegative")
    return np.log2(1.0 + gamma)


def channel_dispersion(gamma):
    """Dispersion (1 - (1+gamma)^-2) * log2(e)^2 of a complex channel."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise ValueError("SNR must be nonnegative")
    return (1.0 - (1.0 + gamma) ** -2) * LOG2E**2


def q_func(w):
    """Gaussian Q-function, the standard normal tail probability."""
    return 0.5 * special.erfc(np.asarray(w, dtype=float) / _SQRT2)


def q_inv(eps):
    """Inverse Q-function on (0, 1).

    scipy's rational-approximation quantile refined by one Newton step on the
    complementary error function; round-trips through q_func to ~1e-14
    relative, which the deep PER targets (down to 1e-10) rely on.
    """
    eps = np.asarray(eps, dtype=float)
    if np.any((eps <= 0.0) | (eps >= 1.0)):
        raise ValueError("q_inv argument must lie in (0, 1)")
    w = -special.ndtri(eps)
    pdf = _INV_SQRT_2PI * np.exp(-0.5 * w * w)
    w = np.where(pdf > 0.0, w + (q_func(w) - eps) / np.where(pdf > 0, pdf, 1.0), w)
    return w if w.ndim else float(w)


def fbl_error_prob(gamma, payload_bits, blocklength):
    """Decoding error probability of a single hop under the normal approximation.

    Q( (C(gamma) - D/M) / sqrt(V(gamma)/M) ) for payload D bits sent over M
    symbols at linear SNR gamma.  The approximation is tight for blocklengths
    of roughly a hundred symbols and up; no lower bound on M is enforced.
    """
    gamma = np.asarray(gamma, dtype=float)
    blocklength = np.asarray(blocklength, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("SNR must be positive")
    if np.any(np.asarray(payload_bits) <= 0):
        raise ValueError("payload must be positive")
    if np.any(blocklength < 1):
        raise ValueError("blocklength must be >= 1 symbol")
    c = np.log2(1.0 + gamma)
    v = (1.0 - (1.0 + gamma) ** -2) * LOG2E**2
    arg = (c - payload_bits / blocklength) / np.sqrt(v / blocklength)
    out = q_func(arg)
    return out if out.ndim else float(out)


def _min_blocklength_raw(gamma, payload_bits, u):
    """Minimal blocklength given u = Q^-1(eps_star); no validation."""
    c = np.log2(1.0 + gamma)
    v = u * LOG2E * np.sqrt(1.0 - (1.0 + gamma) ** -2) / c
    d_over_c = payload_bits / c
    return d_over_c + 0.5 * v * v + v * np.sqrt(d_over_c + 0.25 * v * v)


def minimal_blocklength(gamma, payload_bits, eps_star):
    """Smallest (real-valued) blocklength meeting a target decoding error.

    Closed-form root of the quadratic in sqrt(M) that the normal
    approximation induces; satisfies
    fbl_error_prob(gamma, D, M*) == eps_star and M* > D / C(gamma).
    """
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("SNR must be positive")
    if np.any(np.asarray(payload_bits) <= 0):
        raise ValueError("payload must be positive")
    if not 0.0 < eps_star < 0.5:
        raise ValueError("target decoding error must lie in (0, 0.5)")
    out = _min_blocklength_raw(gamma, payload_bits, q_inv(eps_star))
    return out if out.ndim else float(out)


def ibl_min_blocklength(gamma, payload_bits):
    """Symbol cost D / C(gamma) of a hop when coding at capacity (IBL)."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("SNR must be positive")
    if np.any(np.asarray(payload_bits) <= 0):
        raise ValueError("payload must be positive")
    out = payload_bits / np.log2(1.0 + gamma)
    return out if out.ndim else float(out)


def snr_for_blocklength(blocklength, payload_bits, eps_star):
    """Invert the SNR -> minimal-blocklength map (scalar).

    The map has no closed-form inverse (the dispersion term depends on SNR),
    but it is strictly decreasing, so a bracketed Brent solve on log-SNR over
    [SNR_MIN, SNR_MAX] is guaranteed to converge.
    """
    if blocklength <= 0:
        raise ValueError("blocklength must be positive")
    if not 0.0 < eps_star < 0.5:
        raise ValueError("target decoding error must lie in (0, 0.5)")
    u = q_inv(eps_star)
    if payload_bits <= 0:
        raise ValueError("payload must be positive")
    if _min_blocklength_raw(SNR_MAX, payload_bits, u) >= blocklength:
        raise InfeasibleBlocklength(
            f"no SNR below {SNR_MAX:g} achieves blocklength {blocklength:g}"
        )

    def f(log_gamma):
        return _min_blocklength_raw(np.exp(log_gamma), payload_bits, u) - blocklength

    log_root = optimize.brentq(
        f, np.log(SNR_MIN), np.log(SNR_MAX), xtol=1e-14, rtol=8.9e-16
    )
    return float(np.exp(log_root))


def snr_for_blocklength_grid(blocklengths, payload_bits, eps_star, iters=90):
    """Vectorized inverse of the minimal-blocklength map.

    Bisection on log-SNR, run simultaneously for a whole array of target
    blocklengths (the per-symbol grid of a cost distribution).  Entries at or
    below the map's value at SNR_MAX come back as +inf rather than raising;
    distribution builders assign them zero probability mass.
    """
    ms = np.asarray(blocklengths, dtype=float)
    if not 0.0 < eps_star < 0.5:
        raise ValueError("target decoding error must lie in (0, 0.5)")
    u = q_inv(eps_star)
    if payload_bits <= 0:
        raise ValueError("payload must be positive")
    feasible = _min_blocklength_raw(SNR_MAX, payload_bits, u) < ms
    lo = np.full(ms.shape, np.log(SNR_MIN))
    hi = np.full(ms.shape, np.log(SNR_MAX))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        too_long = _min_blocklength_raw(np.exp(mid), payload_bits, u) > ms
        lo = np.where(too_long, mid, lo)
        hi = np.where(too_long, hi, mid)
    out = np.exp(0.5 * (lo + hi))
    return np.where(feasible, out, np.inf)


def ibl_snr_for_blocklength_grid(blocklengths, payload_bits):
    """SNR required per blocklength under IBL: 2^(D/m) - 1, elementwise.

    Overflowing entries (tiny m, huge D) come back +inf, meaning infeasible.
    """
    ms = np.asarray(blocklengths, dtype=float)
    if payload_bits <= 0:
        raise ValueError("payload must be positive")
    with np.errstate(over="ignore"):
        return np.exp2(payload_bits / ms) - 1.0
