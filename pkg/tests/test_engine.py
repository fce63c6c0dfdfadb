import dataclasses

import numpy as np
import pytest

from irsbandit.config import (
    ChannelParams,
    DistributionCase,
    PolicyConfig,
    PolicyKind,
    SimulationConfig,
    TopologyConfig,
)
from irsbandit.engine import (
    BernoulliEnvironment,
    ChannelEnvironment,
    PeriodOutcome,
    mean_satisfaction,
    run_monte_carlo,
    run_period,
    run_replication,
)
from irsbandit.policy import AgentState
from irsbandit.topology import build_network

CB = PolicyKind.CONTEXTUAL_BANDIT


def small_cfg(**overrides):
    defaults = dict(periods=20, replications=3, base_seed=100)
    defaults.update(overrides)
    return SimulationConfig(**defaults)


def make_period_outcome(flags):
    n = len(flags)
    satisfied = np.array(flags, dtype=bool)
    return PeriodOutcome(
        chosen_irs=np.zeros(n, dtype=np.int64),
        rate=satisfied.astype(float) * 2.0,
        satisfied=satisfied,
        secrecy=np.zeros(n),
    )


class TestMeanSatisfaction:
    def test_half(self):
        assert mean_satisfaction(make_period_outcome([1, 1, 0, 0])) == 0.5

    def test_all(self):
        assert mean_satisfaction(make_period_outcome([1, 1, 1])) == 1.0

    def test_none(self):
        assert mean_satisfaction(make_period_outcome([0, 0, 0])) == 0.0

    def test_zero_ues_rejected(self):
        with pytest.raises(ValueError):
            mean_satisfaction(make_period_outcome([]))


class TestRunPeriod:
    def run_one(self, rate_threshold, seed=7):
        cfg = small_cfg(rate_threshold=rate_threshold)
        rng = np.random.default_rng(seed)
        topo = build_network(cfg.topology, rng)
        env = ChannelEnvironment(topo, cfg.channel, rate_threshold)
        agents = [
            AgentState(candidate_irs=tuple(env.candidate_arms(u)))
            for u in range(env.n_agents)
        ]
        return run_period(env, agents, cfg, rng), agents

    def test_tiny_threshold_satisfies_everyone(self):
        out, _ = self.run_one(rate_threshold=1e-12)
        assert mean_satisfaction(out) == 1.0

    def test_huge_threshold_satisfies_nobody(self):
        out, agents = self.run_one(rate_threshold=1e6)
        assert mean_satisfaction(out) == 0.0
        assert all(a.rewards.sum() == 0 for a in agents)

    def test_fixed_seed_identical_outcome(self):
        a, _ = self.run_one(rate_threshold=1.0, seed=11)
        b, _ = self.run_one(rate_threshold=1.0, seed=11)
        assert np.array_equal(a.chosen_irs, b.chosen_irs)
        assert np.array_equal(a.rate, b.rate)
        assert np.array_equal(a.satisfied, b.satisfied)
        assert np.array_equal(a.secrecy, b.secrecy)

    def test_satisfaction_matches_threshold_definition(self):
        out, _ = self.run_one(rate_threshold=1.0)
        assert np.array_equal(out.satisfied, out.rate >= 1.0)

    def test_secrecy_within_bounds(self):
        out, _ = self.run_one(rate_threshold=1.0)
        assert (out.secrecy >= 0).all()
        assert (out.secrecy <= out.rate).all()


class TestRunReplication:
    def test_series_shape_and_support(self):
        cfg = small_cfg(periods=100, replications=1)
        res = run_replication(cfg, seed=42)
        assert res.satisfaction.shape == (100,)
        # fractions of 20 UEs: every value is a multiple of 1/20
        scaled = res.satisfaction * 20
        assert np.allclose(scaled, np.round(scaled))
        assert (res.satisfaction >= 0).all() and (res.satisfaction <= 1).all()

    def test_same_seed_identical_series(self):
        cfg = small_cfg()
        a = run_replication(cfg, seed=5)
        b = run_replication(cfg, seed=5)
        assert np.array_equal(a.satisfaction, b.satisfaction)
        assert np.array_equal(a.chosen, b.chosen)

    def test_conservation_total_reward_equals_satisfied_periods(self):
        cfg = small_cfg(periods=50, replications=1)
        res = run_replication(cfg, seed=9)
        for u, agent in enumerate(res.agents):
            assert agent.rewards.sum() == res.satisfied[:, u].sum()

    def test_two_armed_deterministic_chain_absorbs(self):
        # arm probabilities {1.0, 0.0}: once the agent lands on arm 0 it is
        # satisfied forever, so the single-agent series is a monotone step
        # that ends at 1.0 (brute-force enumeration of the chain)
        cfg = small_cfg(
            periods=60,
            replications=1,
            policy=PolicyConfig(kind=CB, omega=0.1, phi=1),
        )
        for seed in range(20):
            env = BernoulliEnvironment([1.0, 0.0], n_agents=1)
            res = run_replication(cfg, seed=seed, environment=env)
            s = res.satisfaction
            assert (np.diff(s) >= 0).all()
            assert s[-1] == 1.0
            assert res.fading_blocks == 0  # abstract env draws no blocks

    def test_threshold_monotone_on_realized_rates(self):
        cfg = small_cfg(periods=30, replications=1)
        res = run_replication(cfg, seed=21)
        counts = [
            np.count_nonzero(res.rates >= thr, axis=1)
            for thr in (0.25, 0.5, 1.0, 2.0, 4.0)
        ]
        for lower, higher in zip(counts, counts[1:]):
            assert (higher <= lower).all()

    def test_threshold_monotone_closed_loop_first_period(self):
        # identical draws up to the first decision, so period 1 dominates
        low = run_replication(small_cfg(rate_threshold=0.5), seed=33)
        high = run_replication(small_cfg(rate_threshold=2.0), seed=33)
        assert not (high.satisfied[0] & ~low.satisfied[0]).any()


class TestRunMonteCarlo:
    def test_single_replication_zero_halfwidth(self):
        cfg = small_cfg(replications=1)
        trace = run_monte_carlo(cfg)
        single = run_replication(cfg, cfg.base_seed)
        assert np.array_equal(trace.mean_satisfaction, single.satisfaction)
        assert (trace.ci95_halfwidth == 0).all()

    def test_trace_invariants(self):
        trace = run_monte_carlo(small_cfg(periods=25, replications=4))
        assert trace.mean_satisfaction.shape == (25,)
        assert (trace.mean_satisfaction >= 0).all()
        assert (trace.mean_satisfaction <= 1).all()
        assert (trace.ci95_halfwidth >= 0).all()
        assert trace.periods == 25 and trace.replications == 4

    def test_budget_accounting(self):
        trace = run_monte_carlo(small_cfg(periods=20, replications=3))
        assert trace.fading_blocks == 60

    def test_deterministic_rerun(self):
        a = run_monte_carlo(small_cfg())
        b = run_monte_carlo(small_cfg())
        assert np.array_equal(a.mean_satisfaction, b.mean_satisfaction)
        assert np.array_equal(a.ci95_halfwidth, b.ci95_halfwidth)
        assert np.array_equal(a.mean_secrecy_rate, b.mean_secrecy_rate)

    def test_seed_permutation_leaves_aggregate(self):
        cfg = small_cfg(replications=5)
        trace = run_monte_carlo(cfg)
        series = [
            run_replication(cfg, cfg.base_seed + i).satisfaction
            for i in (3, 0, 4, 1, 2)
        ]
        assert np.allclose(np.mean(series, axis=0), trace.mean_satisfaction, atol=1e-12)

    def test_pooling_linearity(self):
        base = small_cfg(replications=6)
        first = dataclasses.replace(base, replications=2)
        second = dataclasses.replace(base, replications=4, base_seed=base.base_seed + 2)
        pooled = (
            2 * run_monte_carlo(first).mean_satisfaction
            + 4 * run_monte_carlo(second).mean_satisfaction
        ) / 6
        assert np.allclose(pooled, run_monte_carlo(base).mean_satisfaction, atol=1e-12)

    def test_metadata_carried(self):
        cfg = small_cfg(
            topology=TopologyConfig(distribution_case=DistributionCase.CLUSTERED),
            policy=PolicyConfig(kind=PolicyKind.GREEDY, omega=0.25, phi=4),
        )
        trace = run_monte_carlo(cfg)
        assert trace.policy is PolicyKind.GREEDY
        assert trace.case is DistributionCase.CLUSTERED
        assert trace.omega == 0.25 and trace.phi == 4
        assert trace.base_seed == cfg.base_seed


class TestConfigValidation:
    def test_budget_enforcement(self):
        with pytest.raises(ValueError, match="channel_budget"):
            SimulationConfig(periods=101, replications=100)

    def test_budget_enforcement_can_be_disabled(self):
        cfg = SimulationConfig(
            periods=101, replications=100, enforce_channel_budget=False
        )
        assert cfg.periods == 101

    def test_invalid_omega(self):
        with pytest.raises(ValueError, match="omega"):
            PolicyConfig(omega=1.5)

    def test_invalid_phi(self):
        with pytest.raises(ValueError, match="phi"):
            PolicyConfig(phi=0)

    def test_invalid_channel(self):
        with pytest.raises(ValueError):
            ChannelParams(pathloss_exponent=1.5)
        with pytest.raises(ValueError):
            ChannelParams(irs_gain_db=-1.0)
