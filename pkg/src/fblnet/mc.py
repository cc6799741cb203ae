"""Seeded frame-level Monte Carlo validation of the analytic PER pipeline.

Each frame draws one exponential fading gain per relevant link, converts every
link to its (integer, rounded-up) minimal blocklength, applies the variant's
path selection, schedules packets in order against the frame budget, and under
FBL lets scheduled packets fail independently at the target decoding error
(exact two-hop probability for relayed packets).

Reproducibility: frames are partitioned into fixed-size batches and batch b is
generated by a counter-based Philox stream keyed by (seed, b), so the estimate
is bit-identical no matter how many workers the batches are spread over.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import Regime, SystemConfig, Variant, effective_budget, payload_bits
from .fbl import minimal_blocklength, shannon_capacity

BATCH_FRAMES = 1 << 17

WORKERS_ENV = "FBLNET_WORKERS"


@dataclass(frozen=True)
class PathCosts:
    """Cost breakdown of one packet in one frame (symbols, after ceil)."""

    m_direct: int
    m_r1: int | None
    m_r2: int | None
    m_relay: int | None
    m_min: int
    chose_relay: bool


@dataclass(frozen=True, eq=False)
class McEstimate:
    """Monte Carlo PER estimate with its provenance and confidence interval."""

    frames: int
    seed: int
    per_hat: float
    ci_halfwidth: float
    per_packet_hat: np.ndarray
    sched_freq: np.ndarray

    def __post_init__(self):
        for name in ("per_packet_hat", "sched_freq"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    if raw.strip():
        return max(1, int(raw))
    return min(4, os.cpu_count() or 1)


def _link_cost(z, gamma_bar, payload, eps_star, regime):
    """Integer symbol cost of links with fading gains z (vectorized)."""
    gamma = z * gamma_bar
    if regime is Regime.FBL:
        return np.ceil(minimal_blocklength(gamma, payload, eps_star))
    return np.ceil(payload / shannon_capacity(gamma))


def _simulate_batch(config: SystemConfig, regime: Regime, rng, n_frames: int):
    """Simulate n_frames frames; returns per-frame boolean outcome arrays.

    Draw order is fixed (direct gains, then relay gains, then decode uniforms)
    so a stream position fully determines the outcome.
    """
    n = config.terminals
    budget = effective_budget(config)
    payload = payload_bits(config)
    gbar = config.gamma_bar
    if config.snr is not None and not config.snr.homogeneous:
        raise NotImplementedError("the simulator covers homogeneous topologies")
    eps_star = config.require_eps_star() if regime is Regime.FBL else None

    z_direct = rng.exponential(size=(n_frames, n))
    m_direct = _link_cost(z_direct, gbar, payload, eps_star, regime)

    hops = None
    if config.variant is Variant.DIRECT:
        m_min = m_direct
        relayed = np.zeros((n_frames, n), dtype=bool)
        m_relay = None
    else:
        if config.variant is Variant.BEST_RELAY_MAX:
            candidates = n - 1
            if candidates < 1:
                raise ValueError("max-relay mode needs at least two terminals")
        else:
            candidates = config.j
            if config.variant is Variant.BEST_RELAY and candidates > n - 2:
                raise ValueError(
                    f"best-relay with {candidates} candidates needs at least "
                    f"{candidates + 2} terminals"
                )
        z_hops = rng.exponential(size=(n_frames, n, candidates, 2))
        hops = _link_cost(z_hops, gbar, payload, eps_star, regime)
        if config.variant is Variant.BEST_ANTENNA:
            # cheapest antenna independently per hop, then hops add
            m_relay = hops.min(axis=2).sum(axis=2)
        else:
            # whole two-hop path per candidate, cheapest candidate wins
            m_relay = hops.sum(axis=3).min(axis=2)
        m_min = np.minimum(m_direct, m_relay)
        relayed = m_relay < m_direct

    scheduled = np.cumsum(m_min, axis=1) <= budget
    if regime is Regime.FBL:
        u = rng.random(size=(n_frames, n))
        p_fail = np.where(relayed, 1.0 - (1.0 - eps_star) ** 2, eps_star)
        decoded = scheduled & (u >= p_fail)
    else:
        decoded = scheduled.copy()
    return scheduled, decoded, m_direct, m_relay, m_min, relayed, hops


def simulate_frame(config: SystemConfig, regime: Regime, rng):
    """One frame: per-packet (scheduled, decoded) flags plus cost breakdowns."""
    scheduled, decoded, m_direct, m_relay, m_min, relayed, hops = _simulate_batch(
        config, regime, rng, 1
    )
    costs = []
    for i in range(config.terminals):
        if m_relay is None:
            costs.append(
                PathCosts(int(m_direct[0, i]), None, None, None, int(m_min[0, i]), False)
            )
        else:
            if config.variant is Variant.BEST_ANTENNA:
                r1, r2 = hops[0, i].min(axis=0)
            else:
                best = int(np.argmin(hops[0, i].sum(axis=1)))
                r1, r2 = hops[0, i, best]
            costs.append(
                PathCosts(
                    int(m_direct[0, i]),
                    int(r1),
                    int(r2),
                    int(m_relay[0, i]),
                    int(m_min[0, i]),
                    bool(relayed[0, i]),
                )
            )
    return scheduled[0], decoded[0], costs


def _batch_counts(config, regime, seed, batch_index, n_frames):
    rng = np.random.Generator(np.random.Philox(key=(int(seed) << 64) + batch_index))
    scheduled, decoded, *_ = _simulate_batch(config, regime, rng, n_frames)
    failed = ~decoded
    k = failed.sum(axis=1).astype(np.int64)
    return (
        scheduled.sum(axis=0).astype(np.int64),
        failed.sum(axis=0).astype(np.int64),
        int(k.sum()),
        int((k * k).sum()),
    )


def estimate_per(
    config: SystemConfig, regime: Regime, frames: int, seed: int
) -> McEstimate:
    """Average simulate_frame outcomes over `frames` frames.

    The 95% interval uses the normal approximation with the empirical
    frame-level variance of the per-frame error fraction (packets within a
    frame share the budget, so they are not independent Bernoullis).
    Worker count comes from the FBLNET_WORKERS environment variable and does
    not affect the result.
    """
    if frames < 1:
        raise ValueError("need at least one frame")
    n = config.terminals
    batches = [
        (b, min(BATCH_FRAMES, frames - b * BATCH_FRAMES))
        for b in range((frames + BATCH_FRAMES - 1) // BATCH_FRAMES)
    ]
    sched = np.zeros(n, dtype=np.int64)
    fails = np.zeros(n, dtype=np.int64)
    sum_k = 0
    sum_k2 = 0
    workers = _workers()
    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda item: _batch_counts(config, regime, seed, item[0], item[1]),
                    batches,
                )
            )
    else:
        results = [_batch_counts(config, regime, seed, b, m) for b, m in batches]
    for s, f, k, k2 in results:
        sched += s
        fails += f
        sum_k += k
        sum_k2 += k2

    per_hat = sum_k / (n * frames)
    mean_sq = sum_k2 / (n * n * frames)
    var = max(mean_sq - per_hat * per_hat, 0.0)
    ci = 1.96 * float(np.sqrt(var / frames))
    return McEstimate(
        frames=frames,
        seed=seed,
        per_hat=float(per_hat),
        ci_halfwidth=ci,
        per_packet_hat=fails / frames,
        sched_freq=sched / frames,
    )


def estimate_row(config: SystemConfig, regime: Regime, est: McEstimate) -> dict:
    """CSV row matching the analytic schema plus the simulation columns."""
    eps = config.eps_star if regime is Regime.FBL else None
    return {
        "status": "ok",
        "regime": regime.value,
        "variant": config.variant.value,
        "j": config.j,
        "terminals": config.terminals,
        "frame_symbols": config.frame_symbols,
        "payload_bits": payload_bits(config),
        "gamma_bar_db": config.snr_db if config.snr is None else "",
        "eps_star": eps if eps is not None else "",
        "p": ";".join(repr(float(v)) for v in est.sched_freq),
        "per_packet": ";".join(repr(float(v)) for v in est.per_packet_hat),
        "per_avg": est.per_hat,
        "frames": est.frames,
        "seed": est.seed,
        "ci_halfwidth": est.ci_halfwidth,
    }
