"""Scheduling probabilities and packet error rates.

Packets are served in fixed order 1..N; packet i is scheduled iff the costs
of packets 1..i fit the frame budget together.  Under FBL a scheduled packet
can still fail decoding at the per-hop target; under IBL scheduling is the
only error source.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Regime, SystemConfig, effective_budget, payload_bits
from .dists import BlocklengthDistribution, convolve
from .paths import build_packet_dists, chosen_cost_dist, relay_choice_probs


@dataclass(frozen=True)
class PerResult:
    """Per-packet scheduling probabilities, link errors and the resulting PER."""

    regime: Regime
    p: np.ndarray            # p[i] = P(packets 1..i+1 all scheduled)
    eps_ave: np.ndarray      # expected decoding error of a scheduled packet
    per_packet: np.ndarray
    per_avg: float
    unscheduled: np.ndarray = field(repr=False, default=None)  # 1 - p, full precision

    def __post_init__(self):
        if self.unscheduled is None:
            object.__setattr__(self, "unscheduled", 1.0 - np.asarray(self.p))
        for name in ("p", "eps_ave", "per_packet", "unscheduled"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def schedule_probs(
    chosen_dists: list[BlocklengthDistribution], frame_budget: int
) -> np.ndarray:
    """P(first i packets fit the budget), for i = 1..N.

    The i-fold prefix convolutions are built incrementally, so homogeneous
    scenarios pay for each power of the shared distribution once.
    """
    p, _ = _schedule_split(chosen_dists, frame_budget)
    return p


def _schedule_split(chosen_dists, frame_budget):
    """(p_i, 1-p_i) with the miss side taken from tail masses, not 1 - cdf."""
    if not chosen_dists:
        raise ValueError("no packets")
    for d in chosen_dists:
        if d.grid_max != frame_budget:
            raise ValueError(
                f"distribution grid {d.grid_max} does not match budget {frame_budget}"
            )
    p = np.empty(len(chosen_dists))
    miss = np.empty(len(chosen_dists))
    acc = chosen_dists[0]
    for i, d in enumerate(chosen_dists):
        if i > 0:
            acc = convolve(acc, d)
        miss[i] = acc.tail_mass
        p[i] = acc.on_grid_mass
    return p, miss


def expected_link_error(
    direct: BlocklengthDistribution,
    relay: BlocklengthDistribution | None,
    eps_star: float,
    exact_two_hop: bool = False,
) -> float:
    """Expected decoding error of a scheduled packet.

    Mixes the single-hop target and the two-hop penalty with the path-choice
    probabilities, renormalized over the event that the packet is schedulable
    at all.  The two-hop penalty defaults to 2*eps_star; exact_two_hop uses
    1-(1-eps_star)^2 instead.
    """
    if not 0.0 < eps_star < 0.5:
        raise ValueError("target decoding error must lie in (0, 0.5)")
    if relay is None:
        return eps_star
    p_direct, p_relay = relay_choice_probs(direct, relay)
    total = p_direct + p_relay
    if total <= 0.0:
        return eps_star  # nothing schedulable; value is irrelevant (p_i = 0)
    two_hop = 1.0 - (1.0 - eps_star) ** 2 if exact_two_hop else 2.0 * eps_star
    return (p_direct * eps_star + p_relay * two_hop) / total


def per_fbl(
    packet_dists: list[tuple[BlocklengthDistribution, BlocklengthDistribution | None]],
    frame_budget: int,
    eps_star: float,
    exact_two_hop: bool = False,
) -> PerResult:
    """PER of every packet under FBL: 1 - p_i + p_i * eps_ave_i."""
    chosen, eps_ave = _resolve_chosen(packet_dists, eps_star, exact_two_hop)
    p, miss = _schedule_split(chosen, frame_budget)
    per_packet = miss + p * eps_ave
    return PerResult(
        regime=Regime.FBL,
        p=p,
        eps_ave=eps_ave,
        per_packet=per_packet,
        per_avg=float(per_packet.mean()),
        unscheduled=miss,
    )


def per_ibl(
    packet_dists: list[tuple[BlocklengthDistribution, BlocklengthDistribution | None]],
    frame_budget: int,
) -> PerResult:
    """PER under IBL: scheduling misses only."""
    cache: dict[tuple[int, int], BlocklengthDistribution] = {}
    chosen = []
    for direct, relay in packet_dists:
        key = (id(direct), id(relay))
        if key not in cache:
            cache[key] = direct if relay is None else chosen_cost_dist(direct, relay)
        chosen.append(cache[key])
    p, miss = _schedule_split(chosen, frame_budget)
    return PerResult(
        regime=Regime.IBL,
        p=p,
        eps_ave=np.zeros(len(p)),
        per_packet=miss,
        per_avg=float(miss.mean()),
        unscheduled=miss,
    )


def _resolve_chosen(packet_dists, eps_star, exact_two_hop):
    chosen = []
    eps_ave = np.empty(len(packet_dists))
    cache: dict[tuple[int, int], tuple] = {}
    for i, (direct, relay) in enumerate(packet_dists):
        key = (id(direct), id(relay))
        if key not in cache:
            if relay is None:
                cache[key] = (direct, eps_star)
            else:
                cache[key] = (
                    chosen_cost_dist(direct, relay),
                    expected_link_error(direct, relay, eps_star, exact_two_hop),
                )
        chosen.append(cache[key][0])
        eps_ave[i] = cache[key][1]
    return chosen, eps_ave


def evaluate(config: SystemConfig, regime: Regime, exact_two_hop: bool = False) -> PerResult:
    """Resolve a scenario and compute its analytic PER in one step."""
    pairs = build_packet_dists(config, regime)
    budget = effective_budget(config)
    if regime is Regime.FBL:
        return per_fbl(pairs, budget, config.require_eps_star(), exact_two_hop)
    return per_ibl(pairs, budget)


def result_row(config: SystemConfig, regime: Regime, result: PerResult) -> dict:
    """Flatten a result into the CSV row schema shared with the simulator."""
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
        "p": ";".join(repr(float(v)) for v in result.p),
        "per_packet": ";".join(repr(float(v)) for v in result.per_packet),
        "per_avg": result.per_avg,
    }
