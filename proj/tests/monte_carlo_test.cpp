#include "nnlms/errors.hpp"
#include "nnlms/monte_carlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace nnlms {
namespace {

ExperimentConfig small_config(AlgorithmKind kind = AlgorithmKind::NNLMS) {
    ExperimentConfig c;
    c.system = SystemModel{{0.6, -0.2, 0.3, 0.1}, 0.01};
    c.process = Ar1Process{0.5, 0.75, 0};
    c.algorithm.kind = kind;
    c.algorithm.step_size = 0.02;
    c.algorithm.gamma = kind == AlgorithmKind::ExponentialNNLMS ? 0.5 : 1.0;
    c.initial_weights.assign(4, 0.1);
    c.iterations = 2000;
    c.runs = 12;
    c.base_seed = 31337;
    return c;
}

ExperimentConfig reference_config() {
    ExperimentConfig c;
    c.system = reference_system();
    c.process = reference_input();
    c.algorithm.kind = AlgorithmKind::NNLMS;
    c.algorithm.step_size = 0.01;
    c.initial_weights.assign(15, 0.1);
    c.iterations = 30000;
    c.runs = 100;
    c.base_seed = 20120917;
    return c;
}

void expect_identical(const EnsembleResult& a, const EnsembleResult& b) {
    ASSERT_EQ(a.emse_trajectory.size(), b.emse_trajectory.size());
    for (std::size_t i = 0; i < a.emse_trajectory.size(); ++i) {
        ASSERT_EQ(a.emse_trajectory[i], b.emse_trajectory[i]) << "iteration " << i;
    }
    EXPECT_EQ(a.steady_state_emse, b.steady_state_emse);
    EXPECT_EQ(a.steady_state_stderr, b.steady_state_stderr);
    EXPECT_EQ(a.final_mean_weights, b.final_mean_weights);
    EXPECT_EQ(a.diverged_runs, b.diverged_runs);
}

TEST(RunSeeds, DistinctPerRunAndTag) {
    const auto a = run_seeds(1, 1);
    const auto b = run_seeds(1, 2);
    EXPECT_NE(a.input, a.noise);
    EXPECT_NE(a.input, b.input);
    EXPECT_NE(a.noise, b.noise);
    EXPECT_EQ(run_seeds(1, 1).input, a.input);
    EXPECT_EQ(run_seeds(5, 1).input ^ run_seeds(4, 1).input, 5u ^ 4u);
}

TEST(SteadyWindow, CeilOfFraction) {
    auto c = small_config();
    c.iterations = 30000;
    EXPECT_EQ(steady_window_length(c), 6000u);
    c.iterations = 101;
    EXPECT_EQ(steady_window_length(c), 21u);
}

TEST(Validate, RejectsBadConfigs) {
    auto c = small_config();
    c.iterations = 99;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = small_config();
    c.runs = 0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = small_config();
    c.initial_weights.pop_back();
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = small_config();
    c.steady_window_fraction = 0.0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c.steady_window_fraction = 0.6;
    EXPECT_THROW(validate(c), std::invalid_argument);
    EXPECT_THROW(run_ensemble(c), std::invalid_argument);
}

TEST(RunEnsemble, FrozenFilterMatchesQuadraticForm) {
    auto c = small_config();
    c.algorithm.step_size = 0.0;
    c.iterations = 5000;
    c.runs = 40;
    const auto r = run_ensemble(c);

    const auto corr = build_correlation(c.process, 4);
    std::vector<double> v(4);
    for (std::size_t i = 0; i < 4; ++i) {
        v[i] = c.system.true_weights[i] - c.initial_weights[i];
    }
    const double expected = emse_bias_term(v, corr);
    EXPECT_LE(std::abs(r.steady_state_emse - expected), 3.0 * r.steady_state_stderr)
        << "sim " << r.steady_state_emse << " expected " << expected << " se "
        << r.steady_state_stderr;
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(r.final_mean_weights[i], c.initial_weights[i], 1e-15);
    }
}

TEST(RunEnsemble, PerfectStartWithoutNoiseStaysAtZero) {
    for (auto kind : {AlgorithmKind::NNLMS, AlgorithmKind::NormalizedNNLMS,
                      AlgorithmKind::ExponentialNNLMS, AlgorithmKind::SignSignNNLMS,
                      AlgorithmKind::PlainLMS}) {
        auto c = small_config(kind);
        c.system = SystemModel{{0.6, 0.2, 0.3, 0.1}, 0.0};
        c.initial_weights = c.system.true_weights;
        c.runs = 3;
        const auto r = run_ensemble(c);
        for (double e : r.emse_trajectory) {
            ASSERT_LE(e, 1e-28) << to_string(kind);
        }
        EXPECT_LE(r.steady_state_emse, 1e-28);
    }
}

TEST(RunEnsemble, TrajectoryShapeAndInvariants) {
    const auto c = small_config();
    const auto r = run_ensemble(c);
    EXPECT_EQ(r.emse_trajectory.size(), c.iterations);
    EXPECT_EQ(r.runs, c.runs);
    EXPECT_EQ(r.window_length, 400u);
    EXPECT_EQ(r.final_mean_weights.size(), 4u);
    for (double e : r.emse_trajectory) {
        ASSERT_GE(e, 0.0);
    }
    EXPECT_GT(r.steady_state_stderr, 0.0);
    EXPECT_TRUE(std::isfinite(r.steady_state_stderr));
}

TEST(RunEnsemble, BitwiseReproducible) {
    for (auto kind : {AlgorithmKind::NNLMS, AlgorithmKind::SignSignNNLMS}) {
        const auto c = small_config(kind);
        expect_identical(run_ensemble(c), run_ensemble(c));
    }
}

TEST(RunEnsemble, ThreadCountDoesNotChangeResult) {
    const auto c = small_config(AlgorithmKind::NormalizedNNLMS);
    const auto one = run_ensemble(c, 1);
    expect_identical(one, run_ensemble(c, 4));
    expect_identical(one, run_ensemble(c, 0));
}

TEST(RunEnsemble, DifferentSeedsDiffer) {
    auto c = small_config();
    const auto a = run_ensemble(c);
    c.base_seed += 1;
    EXPECT_NE(a.steady_state_emse, run_ensemble(c).steady_state_emse);
}

TEST(RunEnsemble, SingleRunHasInfiniteStderr) {
    auto c = small_config();
    c.runs = 1;
    const auto r = run_ensemble(c);
    EXPECT_TRUE(std::isinf(r.steady_state_stderr));
}

TEST(RunEnsemble, AllRunsDivergedIsAnError) {
    auto c = small_config(AlgorithmKind::PlainLMS);
    c.algorithm.step_size = 5.0;
    c.runs = 3;
    EXPECT_THROW(run_ensemble(c), EnsembleFailure);
}

TEST(Compare, ExactMatchPasses) {
    EnsembleResult r;
    r.steady_state_emse = 0.004;
    r.steady_state_stderr = 1e-5;
    SteadyStatePrediction p;
    p.emse_total = 0.004;
    const auto c = compare(r, p, 1.0);
    EXPECT_EQ(c.difference, 0.0);
    EXPECT_EQ(c.difference_db, 0.0);
    EXPECT_EQ(c.stderr_distance, 0.0);
    EXPECT_TRUE(c.passed());
    EXPECT_FALSE(c.flagged);
}

TEST(Compare, DoubleIsThreeDecibels) {
    EnsembleResult r;
    r.steady_state_emse = 0.008;
    r.steady_state_stderr = 1e-4;
    r.diverged_runs = 2;
    SteadyStatePrediction p;
    p.emse_total = 0.004;
    const auto c = compare(r, p, 1.0);
    EXPECT_NEAR(c.difference_db, 3.0103, 1e-4);
    EXPECT_NEAR(c.difference, 0.004, 1e-18);
    EXPECT_NEAR(c.stderr_distance, 40.0, 1e-9);
    EXPECT_FALSE(c.passed());
    EXPECT_TRUE(c.flagged);
    EXPECT_EQ(c.diverged_runs, 2u);

    r.steady_state_emse = 0.002;
    EXPECT_NEAR(compare(r, p, 1.0).difference_db, -3.0103, 1e-4);
    EXPECT_TRUE(compare(r, p, 3.1).passed());
}

TEST(Compare, DecibelHelper) {
    EXPECT_DOUBLE_EQ(to_db(1.0), 0.0);
    EXPECT_DOUBLE_EQ(to_db(0.01), -20.0);
}

// Known to fail on the reference configuration: the 30k-iteration window
// still carries transient from the slowest taps. See README.
TEST(Consistency, DoublingIterationsMovesEstimateLessThanThreeStderr) {
    auto c = reference_config();
    const auto base = run_ensemble(c, 0);
    c.iterations *= 2;
    const auto doubled = run_ensemble(c, 0);
    const double se = std::hypot(base.steady_state_stderr, doubled.steady_state_stderr);
    EXPECT_LT(std::abs(doubled.steady_state_emse - base.steady_state_emse),
              3.0 * base.steady_state_stderr)
        << "30k " << base.steady_state_emse << " (se " << base.steady_state_stderr << "), 60k "
        << doubled.steady_state_emse << " (se " << doubled.steady_state_stderr
        << "), combined se " << se;
}

TEST(Consistency, DoublingIterationsFromSixtyThousand) {
    auto c = reference_config();
    c.iterations = 60000;
    const auto base = run_ensemble(c, 0);
    c.iterations *= 2;
    const auto doubled = run_ensemble(c, 0);
    EXPECT_LT(std::abs(doubled.steady_state_emse - base.steady_state_emse),
              3.0 * base.steady_state_stderr);
}

} // namespace
} // namespace nnlms
