import numpy as np
import pytest

from fblnet.config import Regime, SystemConfig, Variant
from fblnet.mc import BATCH_FRAMES, estimate_per, estimate_row, simulate_frame
from fblnet.per import evaluate
from fblnet.report import CSV_COLUMNS


def rng_for(seed=7):
    return np.random.Generator(np.random.Philox(key=seed))


class TestSimulateFrame:
    def test_deterministic_given_stream(self):
        cfg = SystemConfig(variant=Variant.BEST_RELAY, j=2, eps_star=1e-2)
        s1, d1, c1 = simulate_frame(cfg, Regime.FBL, rng_for(42))
        s2, d2, c2 = simulate_frame(cfg, Regime.FBL, rng_for(42))
        np.testing.assert_array_equal(s1, s2)
        np.testing.assert_array_equal(d1, d2)
        assert c1 == c2

    def test_path_cost_invariants(self):
        cfg = SystemConfig(variant=Variant.BEST_ANTENNA, j=2, eps_star=1e-2)
        rng = rng_for(3)
        for _ in range(50):
            _, _, costs = simulate_frame(cfg, Regime.FBL, rng)
            for pc in costs:
                assert pc.m_relay == pc.m_r1 + pc.m_r2
                assert pc.m_min == min(pc.m_direct, pc.m_relay)
                assert pc.chose_relay == (pc.m_relay < pc.m_direct)

    def test_direct_variant_has_no_relay_costs(self):
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=1e-2)
        _, _, costs = simulate_frame(cfg, Regime.FBL, rng_for(1))
        assert all(pc.m_relay is None and not pc.chose_relay for pc in costs)
        assert all(pc.m_min == pc.m_direct for pc in costs)

    def test_tight_budget_schedules_nothing(self):
        # one symbol of budget never fits a 128-bit packet
        cfg = SystemConfig(
            bandwidth_hz=51e3, terminals=1, alpha_symbols=50.0, variant=Variant.DIRECT
        )
        scheduled, decoded, _ = simulate_frame(cfg, Regime.IBL, rng_for(5))
        assert not scheduled.any() and not decoded.any()

    def test_ibl_scheduled_always_decodes(self):
        cfg = SystemConfig(variant=Variant.BEST_RELAY, j=1, snr_db=30.0)
        rng = rng_for(11)
        for _ in range(20):
            scheduled, decoded, _ = simulate_frame(cfg, Regime.IBL, rng)
            np.testing.assert_array_equal(scheduled, decoded)

    def test_generous_budget_all_decoded(self):
        cfg = SystemConfig(variant=Variant.DIRECT, snr_db=40.0, base_payload_bits=16.0)
        scheduled, decoded, _ = simulate_frame(cfg, Regime.IBL, rng_for(9))
        assert scheduled.all() and decoded.all()

    def test_scheduling_is_prefix_monotone(self):
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=1e-2, snr_db=0.0)
        rng = rng_for(13)
        for _ in range(100):
            scheduled, _, _ = simulate_frame(cfg, Regime.FBL, rng)
            # once a packet misses the budget, every later one does too
            assert np.all(np.diff(scheduled.astype(int)) <= 0)


class TestEstimatePer:
    def test_reproducible(self):
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=1e-2)
        a = estimate_per(cfg, Regime.FBL, 20000, seed=4)
        b = estimate_per(cfg, Regime.FBL, 20000, seed=4)
        assert a.per_hat == b.per_hat
        np.testing.assert_array_equal(a.per_packet_hat, b.per_packet_hat)
        np.testing.assert_array_equal(a.sched_freq, b.sched_freq)

    def test_worker_count_does_not_change_result(self, monkeypatch):
        cfg = SystemConfig(variant=Variant.BEST_ANTENNA, j=2, eps_star=1e-2)
        frames = BATCH_FRAMES + 1234  # force several batches
        monkeypatch.setenv("FBLNET_WORKERS", "1")
        a = estimate_per(cfg, Regime.FBL, frames, seed=21)
        monkeypatch.setenv("FBLNET_WORKERS", "3")
        b = estimate_per(cfg, Regime.FBL, frames, seed=21)
        assert a.per_hat == b.per_hat
        assert a.ci_halfwidth == b.ci_halfwidth
        np.testing.assert_array_equal(a.per_packet_hat, b.per_packet_hat)
        np.testing.assert_array_equal(a.sched_freq, b.sched_freq)

    def test_single_degenerate_frame(self):
        cfg = SystemConfig(
            bandwidth_hz=51e3, terminals=1, alpha_symbols=50.0, variant=Variant.DIRECT
        )
        est = estimate_per(cfg, Regime.IBL, 1, seed=1)
        assert est.per_hat == 1.0
        assert est.ci_halfwidth == 0.0

    def test_frames_required(self):
        with pytest.raises(ValueError):
            estimate_per(SystemConfig(), Regime.IBL, 0, seed=1)

    def test_sched_freq_matches_analytic(self):
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=1e-2)
        frames = 400_000
        est = estimate_per(cfg, Regime.FBL, frames, seed=8)
        ana = evaluate(cfg, Regime.FBL)
        se = np.sqrt(ana.p * (1 - ana.p) / frames)
        assert np.all(np.abs(est.sched_freq - ana.p) <= 4 * se + 1e-9)

    def test_direct_failure_rate_hits_target(self):
        # scheduled direct packets fail at exactly eps_star
        eps = 0.3
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=eps, snr_db=30.0)
        frames = 100_000
        est = estimate_per(cfg, Regime.FBL, frames, seed=17)
        n = frames * cfg.terminals
        se = np.sqrt(eps * (1 - eps) / n)
        assert est.per_hat == pytest.approx(eps, abs=5 * se + 1e-4)

    def test_csv_row_schema(self):
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=1e-2)
        est = estimate_per(cfg, Regime.FBL, 1000, seed=2)
        row = estimate_row(cfg, Regime.FBL, est)
        assert set(row) <= set(CSV_COLUMNS)
        assert row["frames"] == 1000 and row["seed"] == 2
