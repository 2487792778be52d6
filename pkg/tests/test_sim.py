import math

import numpy as np
import pytest

from glauberlab.core import SpinConfig, dominates, magnetization
from glauberlab.oracle import (
    build_generator,
    config_to_index,
    distribution_at,
    empirical_distribution,
    tv_distance,
)
from glauberlab.rates import make_chafee_infante, make_constant, make_dmfl
from glauberlab.sim import (
    coalescence_quantile,
    couple,
    default_t_max,
    geometric_times,
    simulate,
    stream_seed,
)

CONST = make_constant(1.0)


class TestSimulate:
    def test_zero_time_is_identity(self):
        init = SpinConfig.from_string("+-+--+-+")
        assert simulate(CONST, init, 0.0, seed=0).final == init

    def test_deterministic(self):
        init = SpinConfig.all_plus(32)
        a = simulate(make_dmfl(0.3), init, 1.0, seed=42, sample_times=[0.5, 1.0])
        b = simulate(make_dmfl(0.3), init, 1.0, seed=42, sample_times=[0.5, 1.0])
        assert a.final == b.final
        assert np.array_equal(a.magnetization, b.magnetization)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            simulate(CONST, SpinConfig.all_plus(8), -1.0, seed=0)

    def test_wide_rule_rejected(self):
        from glauberlab.rates import LocalRule

        rule = LocalRule(2, np.full(32, 1.0))  # width 5 window
        with pytest.raises(ValueError):
            simulate(rule, SpinConfig.all_plus(4), 1.0, seed=0)
        simulate(rule, SpinConfig.all_plus(5), 0.1, seed=0)

    def test_constant_rule_site_marginal(self):
        # with rate-1 flips everywhere each site is an independent two-state
        # chain: P(spin=+1 at t | start +1) = (1 + exp(-2t))/2, and exchanges
        # only permute i.i.d. coordinates
        n, t, reps = 64, 0.5, 4000
        plus = 0
        for r in range(reps):
            final = simulate(CONST, SpinConfig.all_plus(n), t, seed=stream_seed(100, r)).final
            plus += int(np.sum(final.spins > 0))
        p_hat = plus / (n * reps)
        p = 0.5 * (1 + math.exp(-2 * t))
        se = math.sqrt(p * (1 - p) / (n * reps))
        assert abs(p_hat - p) <= 3 * se

    def test_constant_rule_magnetization_variance(self):
        # independent +-1 coordinates with bias exp(-2t): Var S = (1-exp(-4t))/n
        n, t, reps = 64, 1.0, 3000
        s = np.array([
            magnetization(simulate(CONST, SpinConfig.all_plus(n), t, seed=stream_seed(7, r)).final)
            for r in range(reps)
        ])
        var = s.var(ddof=1)
        target = (1 - math.exp(-4 * t)) / n
        se = np.std((s - s.mean()) ** 2, ddof=1) / math.sqrt(reps)
        assert abs(var - target) <= 3 * se

    def test_sample_grid_starts_at_initial_magnetization(self):
        init = SpinConfig.from_string("++--++--")
        res = simulate(CONST, init, 0.5, seed=3, sample_times=[0.0, 0.5])
        assert res.magnetization[0] == pytest.approx(magnetization(init))


class TestCouple:
    def test_equal_start_coalesces_immediately(self):
        cfg = SpinConfig.from_string("+-+-+-")
        res = couple(CONST, cfg, cfg, 5.0, seed=0)
        assert res.tau == 0.0 and not res.timed_out

    def test_requires_attractive_rule(self):
        with pytest.raises(ValueError):
            couple(make_chafee_infante(1, 3, 2), SpinConfig.all_plus(6), SpinConfig.all_minus(6), 1.0, seed=0)

    def test_requires_dominating_pair(self):
        with pytest.raises(ValueError):
            couple(CONST, SpinConfig.all_minus(6), SpinConfig.all_plus(6), 1.0, seed=0)

    def test_timeout_reported(self):
        res = couple(make_dmfl(0.25), SpinConfig.all_plus(64), SpinConfig.all_minus(64), 0.01, seed=1)
        assert res.timed_out and res.tau is None

    def test_deterministic(self):
        args = (make_dmfl(0.3), SpinConfig.all_plus(16), SpinConfig.all_minus(16), 30.0)
        a = couple(*args, seed=9)
        b = couple(*args, seed=9)
        assert a.tau == b.tau and a.upper_final == b.upper_final

    def test_final_pair_ordered(self):
        res = couple(
            make_dmfl(0.3),
            SpinConfig.all_plus(32),
            SpinConfig.all_minus(32),
            0.5,
            seed=4,
            run_to_end=True,
        )
        assert dominates(res.upper_final, res.lower_final)
        assert res.violations == 0

    def test_constant_rule_mean_tau_n4(self):
        # each discordant site resolves at rate 2 independently, so tau is the
        # max of 4 Exp(2) draws with mean H_4/2 = 25/24
        reps = 4000
        taus = np.array([
            couple(CONST, SpinConfig.all_plus(4), SpinConfig.all_minus(4), 50.0,
                   seed=stream_seed(11, r)).tau
            for r in range(reps)
        ])
        se = taus.std(ddof=1) / math.sqrt(reps)
        assert abs(taus.mean() - 25 / 24) <= 3 * se

    def test_xi_trace_mean_nonincreasing(self):
        times = np.array([0.2, 0.6, 1.2])
        reps = 800
        xi = np.array([
            couple(CONST, SpinConfig.all_plus(16), SpinConfig.all_minus(16), 2.0,
                   seed=stream_seed(13, r), sample_times=times, run_to_end=True).xi
            for r in range(reps)
        ])
        means = xi.mean(axis=0)
        ses = xi.std(axis=0, ddof=1) / math.sqrt(reps)
        for i in range(len(times) - 1):
            assert means[i + 1] <= means[i] + 3 * math.hypot(ses[i], ses[i + 1])

    def test_upper_marginal_matches_single_chain_law(self):
        # couple with equal starts leaves the upper chain distributed as simulate
        rule = make_dmfl(0.3)
        n, t, reps = 6, 0.3, 4000
        gen = build_generator(rule, n)
        target = distribution_at(gen, config_to_index(SpinConfig.all_plus(n)), t)
        idx = []
        for r in range(reps):
            res = couple(rule, SpinConfig.all_plus(n), SpinConfig.all_plus(n), t,
                         seed=stream_seed(17, r), run_to_end=True)
            idx.append(config_to_index(res.upper_final))
        emp = empirical_distribution(idx, gen.dim)
        assert tv_distance(emp, target) <= 3 * math.sqrt(gen.dim / reps)


class TestCoalescenceQuantile:
    def test_replica_floor(self):
        with pytest.raises(ValueError):
            coalescence_quantile(CONST, 8, 0.25, 10, seed=0)

    def test_delta_range(self):
        with pytest.raises(ValueError):
            coalescence_quantile(CONST, 8, 1.5, 50, seed=0)

    def test_quantile_monotone_in_delta(self):
        hi = coalescence_quantile(CONST, 16, 0.01, 200, seed=5)
        lo = coalescence_quantile(CONST, 16, 0.99, 200, seed=5)
        assert lo.quantile <= hi.quantile

    def test_constant_rule_matches_analytic_law(self):
        # tau is the max of n Exp(2): the (1-delta)-quantile solves
        # (1 - exp(-2t))^n = 1 - delta
        n, delta, reps = 64, 0.25, 500
        res = coalescence_quantile(CONST, n, delta, reps, seed=21)
        analytic = -0.5 * math.log(1 - (1 - delta) ** (1 / n))
        assert res.quantile_ci[0] <= analytic <= res.quantile_ci[1]
        assert res.timeouts == 0 and res.violations == 0

    def test_warns_without_convex_potential(self):
        with pytest.warns(UserWarning):
            coalescence_quantile(make_dmfl(0.6), 8, 0.25, 20, seed=1, t_max=5.0)


class TestHelpers:
    def test_stream_seed_deterministic_and_distinct(self):
        assert stream_seed(1, 2, 3) == stream_seed(1, 2, 3)
        assert stream_seed(1, 2) != stream_seed(1, 3)

    def test_default_t_max_uses_kappa(self):
        assert default_t_max(make_dmfl(0.25), 64) == pytest.approx(8.0 * math.log(64))
        assert default_t_max(make_dmfl(0.6), 64) == pytest.approx(50.0 * math.log(64))

    def test_geometric_times_shape(self):
        ts = geometric_times(10.0, points=16)
        assert len(ts) == 16 and ts[-1] == pytest.approx(10.0)
        assert np.all(np.diff(ts) > 0)
