import numpy as np
import pytest

from infomarkets import (BatchOutcomeReport, Belief, CapacityError, FpmResult,
                         InformationModel, ReportVector, ScoringRule,
                         batch_from_json, fpm_expected_reward, fpm_run,
                         fpm_run_sampled_permutation, result_to_json,
                         truthful_report)

QUAD = ScoringRule("quadratic")


def random_binary_batch(rng, n):
    reports = tuple(ReportVector((float(rng.uniform(0.05, 0.95)),))
                    for _ in range(n))
    return BatchOutcomeReport(reports, int(rng.integers(2)))


class TestFpmRun:
    def test_all_half_reports_pay_nothing(self):
        prior = Belief(np.array([0.7, 0.3]))
        batch = BatchOutcomeReport((ReportVector.no_signal(2),) * 3, 1)
        result = fpm_run(prior, batch, QUAD)
        np.testing.assert_allclose(result.rewards, 0.0, atol=0)
        np.testing.assert_allclose(result.aggregated.probs, prior.probs, atol=0)

    def test_perfect_substitutes_earn_nothing(self):
        # both agents reveal the outcome; leave-one-out beliefs already know it
        m = InformationModel.binary_noisy(0.5, 0.0)
        rep = truthful_report(m, 1)
        batch = BatchOutcomeReport((rep, rep), 1)
        result = fpm_run(m.prior_belief(), batch, QUAD)
        np.testing.assert_allclose(result.rewards, 0.0, atol=1e-9)

    def test_lone_informative_agent_earns_full_gain(self):
        m = InformationModel.binary_noisy(0.5, 0.0)
        batch = BatchOutcomeReport((truthful_report(m, 1),
                                    ReportVector.no_signal(2)), 1)
        result = fpm_run(m.prior_belief(), batch, QUAD)
        # S(point mass, y*) - S(prior, y*) = 1 - 0.5
        assert result.rewards[0] == pytest.approx(0.5, abs=1e-9)
        assert result.rewards[1] == pytest.approx(0.0, abs=1e-9)

    def test_aggregated_equals_posterior_under_truthful_play(self):
        m = InformationModel.binary_noisy(0.02, 0.2)
        batch = BatchOutcomeReport((truthful_report(m, 1), truthful_report(m, 0),
                                    truthful_report(m, 1)), 0)
        result = fpm_run(m.prior_belief(), batch, QUAD)
        from infomarkets import posterior
        np.testing.assert_allclose(result.aggregated.probs,
                                   posterior(m, [1, 0, 1]).probs, atol=1e-12)

    def test_outcome_out_of_range(self):
        with pytest.raises(ValueError):
            fpm_run(Belief(np.array([0.5, 0.5])),
                    BatchOutcomeReport((ReportVector.no_signal(2),), 2), QUAD)

    def test_rewards_can_be_negative(self):
        # an agent pushing the belief the wrong way pays
        prior = Belief(np.array([0.5, 0.5]))
        batch = BatchOutcomeReport((ReportVector((0.1,)),), 1)
        result = fpm_run(prior, batch, QUAD)
        assert result.rewards[0] < 0

    def test_matches_sampled_permutation_construction(self):
        rng = np.random.default_rng(20)
        prior = Belief(np.array([0.6, 0.4]))
        for _ in range(200):
            batch = random_binary_batch(rng, int(rng.integers(2, 6)))
            direct = fpm_run(prior, batch, QUAD)
            sampled = fpm_run_sampled_permutation(prior, batch, QUAD, rng)
            np.testing.assert_allclose(direct.rewards, sampled.rewards, atol=1e-12)
            np.testing.assert_allclose(direct.aggregated.probs,
                                       sampled.aggregated.probs, atol=1e-12)


class TestExpectedReward:
    def test_symmetric_play_is_fair(self):
        m = InformationModel.binary_noisy(0.3, 0.15)
        rewards = fpm_expected_reward(m, QUAD, [0.6, 0.6, 0.6])
        assert rewards.max() - rewards.min() <= 1e-10

    def test_fairness_across_random_models(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            alpha, beta = rng.uniform(0.1, 0.9), rng.uniform(0.02, 0.45)
            q = float(rng.uniform(0.1, 0.95))
            m = InformationModel.binary_noisy(alpha, beta)
            rewards = fpm_expected_reward(m, QUAD, [q, q])
            assert rewards.max() - rewards.min() <= 1e-10

    def test_certain_and_absent_agents(self):
        m = InformationModel.binary_noisy(0.5, 0.0)
        rewards = fpm_expected_reward(m, QUAD, [1.0, 0.0])
        np.testing.assert_allclose(rewards, [0.5, 0.0], atol=1e-9)

    def test_no_effort_no_reward(self):
        m = InformationModel.binary_noisy(0.3, 0.1)
        np.testing.assert_allclose(fpm_expected_reward(m, QUAD, [0.0, 0.0]),
                                   0.0, atol=0)

    def test_truthful_reporting_is_strictly_optimal(self):
        """Shifting one agent's report entry strictly lowers his expected reward."""
        rng = np.random.default_rng(22)
        for _ in range(50):
            alpha = float(rng.uniform(0.1, 0.9))
            beta = float(rng.uniform(0.05, 0.45))
            q = float(rng.uniform(0.2, 0.95))
            eps = float(rng.choice([-0.05, 0.05]))
            m = InformationModel.binary_noisy(alpha, beta)
            truthful = fpm_expected_reward(m, QUAD, [q, q])[0]

            def perturbed(signal):
                base = (ReportVector.no_signal(2) if signal is None
                        else truthful_report(m, signal))
                b = min(max(base.entries[0] + eps, 1e-9), 1 - 1e-9)
                return ReportVector((b,))

            deviated = fpm_expected_reward(m, QUAD, [q, q],
                                           report_override={0: perturbed})[0]
            assert deviated < truthful - 1e-9

    def test_probability_domain(self):
        m = InformationModel.binary_noisy(0.3, 0.1)
        with pytest.raises(ValueError):
            fpm_expected_reward(m, QUAD, [0.5, 1.2])

    def test_capacity_guard(self):
        m = InformationModel.binary_noisy(0.3, 0.1)
        with pytest.raises(CapacityError):
            fpm_expected_reward(m, QUAD, [0.5] * 20)


class TestSerialization:
    def test_batch_round_trip(self):
        record = {"reports": [[0.8], [0.5]], "outcome": 1}
        batch = batch_from_json(record, 2)
        assert isinstance(batch.reports[0], ReportVector)
        result = fpm_run(Belief(np.array([0.98, 0.02])), batch, QUAD)
        out = result_to_json(result)
        assert set(out) == {"aggregated", "rewards"}
        assert len(out["rewards"]) == 2

    def test_column_reports_parse_for_wide_markets(self):
        record = {"reports": [[0.2, 0.3, 0.5]], "outcome": 0}
        batch = batch_from_json(record, 3)
        assert isinstance(batch.reports[0], np.ndarray)

    def test_bad_report_length(self):
        with pytest.raises(ValueError):
            batch_from_json({"reports": [[0.1, 0.2, 0.3]], "outcome": 0}, 2)

    def test_result_requires_finite_rewards(self):
        with pytest.raises(ValueError):
            FpmResult(Belief(np.array([0.5, 0.5])), np.array([np.inf, 0.0]))
