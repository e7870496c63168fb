import math

import numpy as np
import pytest
from scipy.special import erf
from scipy.stats import chi2

from squint import (
    BinningScheme,
    ConfigError,
    CountRecord,
    ReplicaSet,
    empirical_stats,
    mean_signal,
    noise_ratio,
    outcome_probs,
    run_counts,
    run_replicas,
    sample_quadrature,
)
from squint.sampler import replica_rng


class TestCountRecord:
    def test_validates_sum(self):
        with pytest.raises(ConfigError):
            CountRecord(1, 2, 3, 7, 0.0)
        with pytest.raises(ConfigError):
            CountRecord(-1, 2, 3, 4, 0.0)
        rec = CountRecord(1, 2, 3, 6, 0.1)
        assert rec.frequencies()["+"] == pytest.approx(0.5)

    def test_accepts_expected_counts(self, mixed_params, narrow_scheme):
        probs = outcome_probs(mixed_params, narrow_scheme, 0.1)
        CountRecord(
            1000 * probs.p_minus, 1000 * probs.p_zero, 1000 * probs.p_plus, 1000, 0.1
        )


class TestSampleQuadrature:
    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 2])
    def test_moments(self, mixed_params, theta, rng):
        draws = sample_quadrature(mixed_params, theta, rng, 10**6)
        mean = float(mean_signal(mixed_params, theta))
        var = float(noise_ratio(mixed_params, theta)) / 4.0
        se_mean = math.sqrt(var / draws.size)
        assert draws.mean() == pytest.approx(mean, abs=4 * se_mean)
        assert draws.var() == pytest.approx(var, rel=0.01)

    def test_kolmogorov_smirnov_against_model_cdf(self, mixed_params, rng):
        theta = 0.2
        n = 10**5
        draws = np.sort(sample_quadrature(mixed_params, theta, rng, n))
        mean = float(mean_signal(mixed_params, theta))
        sigma = math.sqrt(float(noise_ratio(mixed_params, theta)) / 4.0)
        cdf = 0.5 * (1.0 + erf((draws - mean) / (sigma * math.sqrt(2.0))))
        empirical_hi = np.arange(1, n + 1) / n
        empirical_lo = np.arange(0, n) / n
        ks = max(np.max(empirical_hi - cdf), np.max(cdf - empirical_lo))
        assert ks < 1.63 / math.sqrt(n)  # 1% critical value


class TestRunCounts:
    def test_counts_sum_and_expectation(self, fringe_params, narrow_scheme, rng):
        n = 1000
        rec = run_counts(fringe_params, narrow_scheme, 0.0, n, rng)
        assert rec.n_minus + rec.n_zero + rec.n_plus == rec.n_total == n
        p0 = erf(math.sqrt(2.0) * narrow_scheme.a * math.exp(fringe_params.r))
        sigma = math.sqrt(n * p0 * (1.0 - p0))
        assert abs(rec.n_zero - n * p0) < 4.0 * sigma

    def test_huge_bin_catches_everything(self, fringe_params, rng):
        rec = run_counts(fringe_params, BinningScheme(100.0), 1.2, 500, rng)
        assert rec.n_zero == 500

    def test_boundary_ties_go_to_center(self, fringe_params):
        class StubRng:
            def normal(self, mean, sigma, size=None):
                return np.array([-0.2, -0.2, 0.0, 0.2, 0.31])

        rec = run_counts(fringe_params, BinningScheme(0.2), 0.0, 5, StubRng())
        assert (rec.n_minus, rec.n_zero, rec.n_plus) == (0, 4, 1)

    def test_seed_replay_is_identical(self, fringe_params, narrow_scheme):
        a = run_counts(fringe_params, narrow_scheme, 0.1, 2000, np.random.default_rng(42))
        b = run_counts(fringe_params, narrow_scheme, 0.1, 2000, np.random.default_rng(42))
        assert a == b

    def test_rejects_empty_run(self, fringe_params, narrow_scheme, rng):
        with pytest.raises(ConfigError):
            run_counts(fringe_params, narrow_scheme, 0.1, 0, rng)


class TestRunReplicas:
    def test_determinism(self, mixed_params, narrow_scheme):
        a = run_replicas(mixed_params, narrow_scheme, 0.1, 500, 20, master_seed=7)
        b = run_replicas(mixed_params, narrow_scheme, 0.1, 500, 20, master_seed=7)
        assert a.records == b.records

    def test_single_replica_matches_run_counts(self, mixed_params, narrow_scheme):
        replicas = run_replicas(mixed_params, narrow_scheme, 0.1, 400, 1, master_seed=11)
        direct = run_counts(mixed_params, narrow_scheme, 0.1, 400, replica_rng(11, 0, 1))
        assert replicas.records[0] == direct

    def test_distinct_seeds_decorrelate(self, mixed_params, narrow_scheme):
        a = run_replicas(mixed_params, narrow_scheme, 0.1, 1000, 30, master_seed=1)
        b = run_replicas(mixed_params, narrow_scheme, 0.1, 1000, 30, master_seed=2)
        assert a.records != b.records

    def test_replicas_are_individually_reproducible(self, mixed_params, narrow_scheme):
        replicas = run_replicas(mixed_params, narrow_scheme, 0.2, 300, 5, master_seed=99)
        rebuilt = run_counts(mixed_params, narrow_scheme, 0.2, 300, replica_rng(99, 3, 5))
        assert replicas.records[3] == rebuilt

    def test_shared_metadata_enforced(self):
        rec = CountRecord(1, 2, 3, 6, 0.0)
        other = CountRecord(1, 2, 3, 6, 0.5)
        with pytest.raises(ConfigError):
            ReplicaSet((rec, other), 0, 0.0, 6)


class TestEmpiricalStats:
    def test_identical_replicas_have_zero_spread(self):
        rec = CountRecord(10, 80, 10, 100, 0.0)
        stats = empirical_stats(ReplicaSet((rec, rec, rec), 0, 0.0, 100))
        for k in ("-", "0", "+"):
            assert stats.std_freq[k] == pytest.approx(0.0, abs=1e-15)
        assert stats.mean_freq["0"] == pytest.approx(0.8)

    def test_single_replica_has_no_spread_estimate(self):
        rec = CountRecord(10, 80, 10, 100, 0.0)
        stats = empirical_stats(ReplicaSet((rec,), 0, 0.0, 100))
        assert stats.std_freq is None

    def test_mean_frequencies_track_probabilities(self, mixed_params, narrow_scheme):
        theta = 0.1
        replicas = run_replicas(mixed_params, narrow_scheme, theta, 1000, 100, master_seed=5)
        stats = empirical_stats(replicas)
        probs = outcome_probs(mixed_params, narrow_scheme, theta).as_dict()
        for k in ("-", "0", "+"):
            se = stats.std_freq[k] / math.sqrt(len(replicas))
            assert abs(stats.mean_freq[k] - probs[k]) < 3.0 * se

    def test_spread_matches_multinomial_prediction(self, mixed_params, narrow_scheme):
        theta = 0.05
        n = 1000
        replicas = run_replicas(mixed_params, narrow_scheme, theta, n, 100, master_seed=17)
        stats = empirical_stats(replicas)
        p0 = outcome_probs(mixed_params, narrow_scheme, theta).p_zero
        predicted = math.sqrt(p0 * (1.0 - p0) / n)
        assert stats.std_freq["0"] == pytest.approx(predicted, rel=0.25)

    def test_pooled_chi_square_at_one_percent(self, mixed_params, narrow_scheme):
        # 10^5 pooled shots against the model probabilities, 2 dof
        theta = 0.15
        replicas = run_replicas(mixed_params, narrow_scheme, theta, 1000, 100, master_seed=23)
        pooled = np.array([
            sum(rec.n_minus for rec in replicas.records),
            sum(rec.n_zero for rec in replicas.records),
            sum(rec.n_plus for rec in replicas.records),
        ], dtype=float)
        total = pooled.sum()
        probs = outcome_probs(mixed_params, narrow_scheme, theta)
        expected = total * np.array([probs.p_minus, probs.p_zero, probs.p_plus])
        statistic = float(np.sum((pooled - expected) ** 2 / expected))
        assert statistic < chi2.ppf(0.99, df=2)
