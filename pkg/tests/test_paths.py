import numpy as np
import pytest

from conftest import enumerate_joint, min_with_tail, pmf_from_map, sum_with_tail
from fblnet.config import Regime, SystemConfig, TopologySnr, Variant
from fblnet.dists import best_of_iid, convolve, from_pmf_dict, single_hop_dist_fbl
from fblnet.paths import (
    best_antenna_dist,
    best_relay_dist,
    build_packet_dists,
    chosen_cost_dist,
    relay_choice_probs,
    two_hop_relay_dist,
)

GAMMA_15DB = 10**1.5


class TestTwoHop:
    def test_point_masses_add(self):
        a = from_pmf_dict({100: 1.0}, 400)
        b = from_pmf_dict({150: 1.0}, 400)
        got = two_hop_relay_dist(a, b)
        assert got.pmf[250] == 1.0

    def test_hop_order_irrelevant(self):
        a = from_pmf_dict({1: 0.4, 3: 0.6}, 8)
        b = from_pmf_dict({2: 0.5, 5: 0.3}, 8)
        np.testing.assert_array_equal(
            two_hop_relay_dist(a, b).pmf, two_hop_relay_dist(b, a).pmf
        )

    def test_enumeration_oracle(self):
        a = from_pmf_dict({1: 0.4, 3: 0.5}, 6)
        b = from_pmf_dict({2: 0.5, 4: 0.4}, 6)
        got = two_hop_relay_dist(a, b)
        expect_pmf, expect_tail = pmf_from_map(sum_with_tail, [a, b], 6)
        np.testing.assert_allclose(got.pmf, expect_pmf, atol=1e-12)
        assert got.tail_mass == pytest.approx(expect_tail, abs=1e-12)


class TestBestRelay:
    def test_single_candidate(self):
        d = from_pmf_dict({2: 0.5, 3: 0.5}, 5)
        assert best_relay_dist([d]) is d

    def test_identical_candidates_reduce_to_iid(self):
        cand = from_pmf_dict({2: 0.3, 4: 0.4, 7: 0.2}, 8)
        got = best_relay_dist([cand, cand, cand])
        expect = best_of_iid(cand, 3)
        np.testing.assert_allclose(got.pmf, expect.pmf, atol=1e-14)
        assert got.tail_mass == pytest.approx(expect.tail_mass, rel=1e-12)

    def test_heterogeneous_enumeration_oracle(self):
        a = from_pmf_dict({2: 0.4, 5: 0.4}, 7)
        b = from_pmf_dict({3: 0.7, 6: 0.2}, 7)
        got = best_relay_dist([a, b])
        expect_pmf, expect_tail = pmf_from_map(min_with_tail, [a, b], 7)
        np.testing.assert_allclose(got.pmf, expect_pmf, atol=1e-12)
        assert got.tail_mass == pytest.approx(expect_tail, abs=1e-12)

    def test_extra_candidate_dominates(self):
        a = from_pmf_dict({2: 0.4, 5: 0.4}, 7)
        b = from_pmf_dict({3: 0.7, 6: 0.2}, 7)
        c = from_pmf_dict({4: 0.9}, 7)
        two = best_relay_dist([a, b])
        three = best_relay_dist([a, b, c])
        assert np.all(three.cdf >= two.cdf - 1e-15)

    def test_empty_candidates_rejected(self):
        with pytest.raises(ValueError):
            best_relay_dist([])


class TestBestAntenna:
    def test_single_antenna_is_plain_two_hop(self):
        up = from_pmf_dict({1: 0.5, 2: 0.4}, 6)
        down = from_pmf_dict({2: 0.8, 3: 0.1}, 6)
        got = best_antenna_dist(up, down, 1)
        expect = two_hop_relay_dist(up, down)
        np.testing.assert_array_equal(got.pmf, expect.pmf)

    def test_more_antennas_dominate(self):
        hop = single_hop_dist_fbl(GAMMA_15DB, 168.0, 1e-5, 600)
        one = best_antenna_dist(hop, hop, 1)
        four = best_antenna_dist(hop, hop, 4)
        assert np.all(four.cdf >= one.cdf - 1e-15)

    def test_enumeration_oracle_two_antennas(self):
        up = from_pmf_dict({1: 0.5, 3: 0.3}, 6)
        down = from_pmf_dict({2: 0.6, 4: 0.3}, 6)
        got = best_antenna_dist(up, down, 2)

        def antenna_path(costs):
            u = min_with_tail(costs[0:2])
            d = min_with_tail(costs[2:4])
            return sum_with_tail([u, d])

        expect_pmf, expect_tail = pmf_from_map(antenna_path, [up, up, down, down], 6)
        np.testing.assert_allclose(got.pmf, expect_pmf, atol=1e-12)
        assert got.tail_mass == pytest.approx(expect_tail, abs=1e-12)

    def test_needs_one_antenna(self):
        hop = from_pmf_dict({1: 1.0}, 2)
        with pytest.raises(ValueError):
            best_antenna_dist(hop, hop, 0)


class TestChosenCost:
    def test_all_tail_relay_keeps_direct(self):
        direct = from_pmf_dict({2: 0.6, 4: 0.3}, 5)
        got = chosen_cost_dist(direct, from_pmf_dict({}, 5))
        np.testing.assert_allclose(got.pmf, direct.pmf, atol=1e-15)

    def test_all_tail_direct_keeps_relay(self):
        relay = from_pmf_dict({3: 0.9, 5: 0.1}, 5)
        got = chosen_cost_dist(from_pmf_dict({}, 5), relay)
        np.testing.assert_allclose(got.pmf, relay.pmf, atol=1e-15)

    def test_enumeration_oracle(self):
        direct = from_pmf_dict({2: 0.5, 6: 0.3}, 6)
        relay = from_pmf_dict({3: 0.4, 5: 0.4}, 6)
        got = chosen_cost_dist(direct, relay)
        expect_pmf, expect_tail = pmf_from_map(min_with_tail, [direct, relay], 6)
        np.testing.assert_allclose(got.pmf, expect_pmf, atol=1e-12)
        assert got.tail_mass == pytest.approx(expect_tail, abs=1e-12)


class TestRelayChoiceProbs:
    def test_all_tail_relay_goes_direct(self):
        direct = from_pmf_dict({2: 0.6, 4: 0.3}, 5)
        p_direct, p_relay = relay_choice_probs(direct, from_pmf_dict({}, 5))
        assert p_direct == pytest.approx(0.9)
        assert p_relay == 0.0

    def test_symmetric_marginals_split_evenly(self):
        # identical fine-grained marginals: the tie mass goes to direct,
        # everything else splits evenly
        d = single_hop_dist_fbl(GAMMA_15DB, 168.0, 1e-5, 2000)
        p_direct, p_relay = relay_choice_probs(d, d)
        ties = float(np.sum(d.pmf**2))
        assert p_direct == pytest.approx(p_relay + ties, rel=1e-9)
        assert p_direct + p_relay == pytest.approx(1.0 - d.tail_mass**2, rel=1e-12)

    def test_enumeration_oracle(self):
        direct = from_pmf_dict({2: 0.5, 4: 0.2, 6: 0.1}, 6)
        relay = from_pmf_dict({2: 0.3, 5: 0.5}, 6)
        p_direct, p_relay = relay_choice_probs(direct, relay)
        exp_d = exp_r = exp_none = 0.0
        for (md, mr), prob in enumerate_joint([direct, relay]):
            if md is None and mr is None:
                exp_none += prob
            elif mr is None or (md is not None and md <= mr):
                exp_d += prob
            else:
                exp_r += prob
        assert p_direct == pytest.approx(exp_d, abs=1e-12)
        assert p_relay == pytest.approx(exp_r, abs=1e-12)
        assert p_direct + p_relay + exp_none == pytest.approx(1.0, abs=1e-12)

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            relay_choice_probs(from_pmf_dict({1: 1.0}, 2), from_pmf_dict({1: 1.0}, 3))


class TestAntennaVsRelayDominance:
    def test_per_hop_selection_beats_per_path(self):
        # same marginals, equal diversity order: choosing each hop's antenna
        # independently can only beat locking hop pairs to one relay
        hop = single_hop_dist_fbl(GAMMA_15DB, 168.0, 1e-7, 2000)
        for j in (2, 3):
            antenna = best_antenna_dist(hop, hop, j)
            relay = best_of_iid(two_hop_relay_dist(hop, hop), j)
            assert np.all(antenna.cdf >= relay.cdf - 1e-15)
            assert antenna.tail_mass <= relay.tail_mass


class TestBuildPacketDists:
    def test_homogeneous_reuses_objects(self):
        cfg = SystemConfig(variant=Variant.BEST_ANTENNA, j=2, eps_star=1e-4)
        pairs = build_packet_dists(cfg, Regime.FBL)
        assert len(pairs) == cfg.terminals
        assert all(p[0] is pairs[0][0] and p[1] is pairs[0][1] for p in pairs)

    def test_direct_has_no_relay(self):
        cfg = SystemConfig(variant=Variant.DIRECT, eps_star=1e-4)
        pairs = build_packet_dists(cfg, Regime.FBL)
        assert all(r is None for _, r in pairs)

    def test_best_relay_eligibility(self):
        cfg = SystemConfig(variant=Variant.BEST_RELAY, j=4, terminals=5, eps_star=1e-4)
        with pytest.raises(ValueError, match="terminals"):
            build_packet_dists(cfg, Regime.FBL)

    def test_max_relay_candidate_count(self):
        # N-1 candidates: the N-2 overhearing terminals plus the AP path
        base = SystemConfig(variant=Variant.BEST_RELAY_MAX, terminals=4, eps_star=1e-4)
        pairs = build_packet_dists(base, Regime.FBL)
        direct, relay = pairs[0]
        cand = two_hop_relay_dist(direct, direct)
        expect = best_of_iid(cand, 3)
        np.testing.assert_allclose(relay.pmf, expect.pmf, rtol=1e-12, atol=1e-300)

    def test_heterogeneous_matrix(self):
        n = 3
        ap = np.array([10.0, 20.0, 30.0])
        tt = np.array([[1.0, 5.0, 8.0], [5.0, 1.0, 6.0], [8.0, 6.0, 1.0]])
        cfg = SystemConfig(
            variant=Variant.BEST_ANTENNA,
            j=2,
            terminals=n,
            eps_star=1e-4,
            snr=TopologySnr(ap, tt),
        )
        pairs = build_packet_dists(cfg, Regime.FBL)
        assert len(pairs) == n
        # packet 1 goes terminal 1 -> terminal 2; its direct hop uses snr 5.0
        from fblnet.config import effective_budget, payload_bits

        expect = single_hop_dist_fbl(
            5.0, payload_bits(cfg), 1e-4, effective_budget(cfg)
        )
        np.testing.assert_allclose(pairs[0][0].pmf, expect.pmf, atol=1e-15)

    def test_heterogeneous_best_relay_uses_other_terminals(self):
        n = 4
        gbar = np.full((n, n), 7.0)
        ap = np.full(n, 9.0)
        cfg = SystemConfig(
            variant=Variant.BEST_RELAY,
            j=2,
            terminals=n,
            eps_star=1e-3,
            snr=TopologySnr(ap, gbar),
        )
        pairs = build_packet_dists(cfg, Regime.FBL)
        from fblnet.config import effective_budget, payload_bits

        hop = single_hop_dist_fbl(7.0, payload_bits(cfg), 1e-3, effective_budget(cfg))
        expect = best_of_iid(two_hop_relay_dist(hop, hop), 2)
        np.testing.assert_allclose(pairs[0][1].pmf, expect.pmf, rtol=1e-12, atol=1e-300)
