"""Built-in invariant suite behind the `validate` CLI subcommand.

Fast self-checks of the mathematical plumbing: inversion identities, mass
conservation, stochastic-dominance orderings and small enumeration oracles.
Each check returns (name, passed, detail); the CLI prints one line per check.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import fbl
from .config import Regime, SystemConfig, Variant
from .dists import (
    best_of_iid,
    convolve,
    from_pmf_dict,
    min_of,
    single_hop_dist_fbl,
    single_hop_dist_ibl,
)
from .paths import best_antenna_dist, relay_choice_probs, two_hop_relay_dist
from .per import evaluate, schedule_probs


def _check_q_roundtrip():
    eps = np.concatenate(
        [np.logspace(-15, -0.31, 40), 1.0 - np.logspace(-15, -0.5, 40)]
    )
    back = fbl.q_func(fbl.q_inv(eps))
    worst = float(np.max(np.abs(back - eps) / eps))
    return worst <= 1e-12, f"max rel err {worst:.2e}"

def _check_inversion_identities():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        gamma = 10.0 ** rng.uniform(-1.5, 3.0)
        payload = 10.0 ** rng.uniform(1.0, 4.0)
        eps = 10.0 ** rng.uniform(-11.0, np.log10(0.4))
        m = fbl.minimal_blocklength(gamma, payload, eps)
        worst = max(worst, abs(fbl.fbl_error_prob(gamma, payload, m) - eps) / eps)
        back = fbl.snr_for_blocklength(m, payload, eps)
        worst = max(worst, abs(back - gamma) / gamma)
    return worst <= 1e-9, f"max rel err {worst:.2e}"

def _check_fbl_penalty():
    rng = np.random.default_rng(7)
    gammas = 10.0 ** rng.uniform(-1, 3, 50)
    fblm = fbl.minimal_blocklength(gammas, 168.0, 1e-5)
    iblm = fbl.ibl_min_blocklength(gammas, 168.0)
    return bool(np.all(fblm > iblm)), "minimal FBL blocklength exceeds D/C"

def _check_mass_conservation():
    d = single_hop_dist_fbl(10**1.5, 168.0, 1e-7, 4750)
    drift = abs(d.on_grid_mass + d.tail_mass - 1.0)
    return drift <= 1e-9, f"drift {drift:.2e}"

def _check_cdf_orderings():
    fbl_d = single_hop_dist_fbl(10**1.5, 168.0, 1e-7, 2000)
    ibl_d = single_hop_dist_ibl(10**1.5, 168.0, 2000)
    lo = single_hop_dist_fbl(10**1.0, 168.0, 1e-7, 2000)
    ok = bool(np.all(fbl_d.cdf <= ibl_d.cdf + 1e-15)) and bool(
        np.all(fbl_d.cdf >= lo.cdf - 1e-15)
    )
    return ok, "FBL below IBL; higher SNR dominates"

def _check_best_of_dominance():
    d = single_hop_dist_fbl(10**1.5, 168.0, 1e-4, 500)
    prev = d
    for j in (2, 3):
        cur = best_of_iid(d, j)
        if not np.all(cur.cdf >= prev.cdf - 1e-15):
            return False, f"J={j} does not dominate J={j - 1}"
        prev = cur
    return True, "best-of-J improves with J"

def _check_convolve_algebra():
    a = from_pmf_dict({1: 0.5, 2: 0.5}, 8)
    b = from_pmf_dict({1: 0.25, 3: 0.75}, 8)
    c = from_pmf_dict({2: 1.0}, 8)
    ab = convolve(a, b)
    ba = convolve(b, a)
    abc1 = convolve(ab, c)
    abc2 = convolve(a, convolve(b, c))
    ok = np.allclose(ab.pmf, ba.pmf, atol=1e-15) and np.allclose(
        abc1.pmf, abc2.pmf, atol=1e-12
    )
    return bool(ok), "commutative and associative"

def _check_min_oracle():
    a = from_pmf_dict({1: 0.3, 3: 0.4, 6: 0.3}, 6)
    b = from_pmf_dict({2: 0.6, 5: 0.1}, 6)  # 0.3 tail
    got = min_of(a, b)
    expect = np.zeros(7)
    for (ma, pa), (mb, pb) in itertools.product(
        [(1, 0.3), (3, 0.4), (6, 0.3)], [(2, 0.6), (5, 0.1), (None, 0.3)]
    ):
        vals = [v for v in (ma, mb) if v is not None]
        m = min(vals) if len(vals) == 2 else vals[0]
        expect[m] += pa * pb
    worst = float(np.max(np.abs(got.pmf - expect)))
    worst = max(worst, abs(got.tail_mass - 0.0))
    return worst <= 1e-12, f"max abs err {worst:.2e}"

def _check_schedule_probs():
    d = from_pmf_dict({2: 0.7, 4: 0.2}, 7)  # 0.1 tail
    p = schedule_probs([d, d, d], 7)
    if not np.all(np.diff(p) <= 1e-15):
        return False, "p_i not nonincreasing"
    outcomes = [(2, 0.7), (4, 0.2), (None, 0.1)]
    expect = np.zeros(3)
    for combo in itertools.product(outcomes, repeat=3):
        prob = np.prod([c[1] for c in combo])
        total = 0
        for i, (m, _) in enumerate(combo):
            if m is None:
                break
            total += m
            if total > 7:
                break
            expect[i] += prob
    worst = float(np.max(np.abs(p - expect)))
    return worst <= 1e-12, f"max abs err {worst:.2e}"

def _check_choice_probs():
    a = from_pmf_dict({1: 0.3, 3: 0.4, 6: 0.2}, 6)
    b = from_pmf_dict({2: 0.6, 5: 0.1, 6: 0.2}, 6)
    pd, pr = relay_choice_probs(a, b)
    total = pd + pr + a.tail_mass * b.tail_mass
    return abs(total - 1.0) <= 1e-12, f"sum with joint tail {total!r}"

def _check_antenna_vs_relay():
    hop = single_hop_dist_fbl(10**1.5, 168.0, 1e-5, 1500)
    antenna = best_antenna_dist(hop, hop, 2)
    relay = best_of_iid(two_hop_relay_dist(hop, hop), 2)
    ok = bool(np.all(antenna.cdf >= relay.cdf - 1e-15))
    return ok, "per-hop selection dominates per-path selection"

def _check_regime_ordering():
    results = []
    for variant, j in ((Variant.DIRECT, 1), (Variant.BEST_ANTENNA, 2)):
        cfg = SystemConfig(variant=variant, j=j, eps_star=1e-5)
        f = evaluate(cfg, Regime.FBL)
        i = evaluate(cfg, Regime.IBL)
        results.append(np.all(f.per_packet >= i.per_packet - 1e-15))
    return bool(np.all(results)), "PER_FBL >= PER_IBL per packet"


CHECKS = (
    ("q_func/q_inv round trip", _check_q_roundtrip),
    ("blocklength inversion identities", _check_inversion_identities),
    ("FBL penalty strictly positive", _check_fbl_penalty),
    ("single-hop mass conservation", _check_mass_conservation),
    ("CDF orderings (regime, SNR)", _check_cdf_orderings),
    ("best-of-J stochastic dominance", _check_best_of_dominance),
    ("convolution algebra", _check_convolve_algebra),
    ("min-of enumeration oracle", _check_min_oracle),
    ("schedule probabilities", _check_schedule_probs),
    ("path-choice probabilities", _check_choice_probs),
    ("antenna beats relay (same marginals)", _check_antenna_vs_relay),
    ("regime ordering", _check_regime_ordering),
)


def run_invariants():
    """Run every check; returns a list of (name, passed, detail)."""
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, passed, detail))
    return results
