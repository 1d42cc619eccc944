#include "nnlms/errors.hpp"
#include "nnlms/filters.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace nnlms {
namespace {

constexpr std::array kNonNegativeKinds{AlgorithmKind::NNLMS, AlgorithmKind::NormalizedNNLMS,
                                       AlgorithmKind::ExponentialNNLMS,
                                       AlgorithmKind::SignSignNNLMS};

AlgorithmConfig config_for(AlgorithmKind kind, double step = 0.05) {
    AlgorithmConfig a;
    a.kind = kind;
    a.step_size = step;
    a.gamma = kind == AlgorithmKind::ExponentialNNLMS ? 0.5 : 1.0;
    return a;
}

SamplePair sample(std::vector<double> x, double y) {
    return SamplePair{std::move(x), y, 0.0};
}

TEST(PredictError, PerfectModelGivesZero) {
    const std::vector<double> target{0.3, -0.2, 0.1};
    const auto s = sample({1.0, 2.0, -1.0}, 0.3 * 1.0 - 0.2 * 2.0 + 0.1 * -1.0);
    const auto f = make_filter(config_for(AlgorithmKind::NNLMS), target);
    EXPECT_DOUBLE_EQ(predict_error(f, s), 0.0);
}

TEST(PredictError, ZeroFilterReturnsDesired) {
    const auto f = make_filter(config_for(AlgorithmKind::NNLMS), {0.0, 0.0});
    EXPECT_EQ(predict_error(f, sample({3.0, -4.0}, 1.25)), 1.25);
}

TEST(PredictError, HandArithmetic) {
    const auto f = make_filter(config_for(AlgorithmKind::NNLMS), {0.1, 0.1});
    EXPECT_NEAR(predict_error(f, sample({1.0, -2.0}, 0.5)), 0.6, 1e-15);
}

TEST(PredictError, DimensionMismatch) {
    const auto f = make_filter(config_for(AlgorithmKind::NNLMS), {0.1, 0.1});
    EXPECT_THROW(predict_error(f, sample({1.0}, 0.5)), std::invalid_argument);
    EXPECT_THROW(update(f, sample({1.0, 2.0, 3.0}, 0.5)), std::invalid_argument);
}

TEST(Update, NnlmsHandArithmetic) {
    // e = 0.8 - 0.1 * 2 = 0.6; w' = 0.1 + 0.5 * 0.1 * 0.6 * 2
    auto f = make_filter(config_for(AlgorithmKind::NNLMS, 0.5), {0.1});
    f = update(std::move(f), sample({2.0}, 0.8));
    EXPECT_NEAR(f.weights[0], 0.16, 1e-15);
    EXPECT_EQ(f.iteration, 1u);
}

TEST(Update, ExponentialWithUnitGammaMatchesNnlms) {
    auto a = config_for(AlgorithmKind::ExponentialNNLMS, 0.5);
    a.gamma = 1.0;
    auto f = update(make_filter(a, {0.1}), sample({2.0}, 0.8));
    EXPECT_NEAR(f.weights[0], 0.16, 1e-15);
}

TEST(Update, ExponentialUsesSignedPower) {
    // w = 0.25, gamma = 0.5 -> scale 0.5; e = 1 - 0.25 = 0.75
    auto a = config_for(AlgorithmKind::ExponentialNNLMS, 0.1);
    auto f = update(make_filter(a, {0.25}), sample({1.0}, 1.0));
    EXPECT_NEAR(f.weights[0], 0.25 + 0.1 * 0.5 * 0.75, 1e-15);
    // negative weights keep the sign: w = -0.25 -> scale -0.5; e = 1 + 0.25
    f = update(make_filter(a, {-0.25}), sample({1.0}, 1.0));
    EXPECT_NEAR(f.weights[0], -0.25 - 0.1 * 0.5 * 1.25, 1e-15);
}

TEST(Update, SignSignHandArithmetic) {
    // w'x = 0.1 - 0.2 = -0.1, desired -0.4 -> e = -0.3; sgn(x e) = [-1, +1]
    auto f = make_filter(config_for(AlgorithmKind::SignSignNNLMS, 0.05), {0.1, 0.2});
    f = update(std::move(f), sample({1.0, -1.0}, -0.4));
    EXPECT_NEAR(f.weights[0], 0.095, 1e-15);
    EXPECT_NEAR(f.weights[1], 0.21, 1e-15);
}

TEST(Update, NormalizedHandArithmetic) {
    // x'x = 5, e = 1 - (0.2 + 0.4) = 0.4; w_i += 0.5 / 5 * w_i * 0.4 * x_i
    auto a = config_for(AlgorithmKind::NormalizedNNLMS, 0.5);
    auto f = update(make_filter(a, {0.2, 0.2}), sample({1.0, 2.0}, 1.0));
    EXPECT_NEAR(f.weights[0], 0.2 + 0.1 * 0.2 * 0.4 * 1.0, 1e-15);
    EXPECT_NEAR(f.weights[1], 0.2 + 0.1 * 0.2 * 0.4 * 2.0, 1e-15);

    a.epsilon = 5.0; // denominator 10
    f = update(make_filter(a, {0.2, 0.2}), sample({1.0, 2.0}, 1.0));
    EXPECT_NEAR(f.weights[0], 0.2 + 0.05 * 0.2 * 0.4 * 1.0, 1e-15);
}

TEST(Update, NormalizedRejectsZeroEnergy) {
    auto f = make_filter(config_for(AlgorithmKind::NormalizedNNLMS), {0.2, 0.2});
    EXPECT_THROW(update(f, sample({0.0, 0.0}, 1.0)), std::invalid_argument);
}

TEST(Update, PlainLmsHandArithmetic) {
    // e = 1 - 0 = 1; w_i += 0.1 * 1 * x_i
    auto f = update(make_filter(config_for(AlgorithmKind::PlainLMS, 0.1), {0.0, 0.0}),
                    sample({1.0, -3.0}, 1.0));
    EXPECT_NEAR(f.weights[0], 0.1, 1e-15);
    EXPECT_NEAR(f.weights[1], -0.3, 1e-15);
}

TEST(Update, ZeroVectorIsFixedPoint) {
    for (auto kind : kNonNegativeKinds) {
        SCOPED_TRACE(to_string(kind));
        auto f = make_filter(config_for(kind), std::vector<double>(3, 0.0));
        f = update(std::move(f), sample({1.0, -2.0, 0.5}, 3.0));
        EXPECT_EQ(f.weights, std::vector<double>(3, 0.0));
    }
}

TEST(Update, SignOfZeroIsZero) {
    EXPECT_EQ(sign(0.0), 0.0);
    EXPECT_EQ(sign(-0.0), 0.0);
    EXPECT_EQ(sign(3.0), 1.0);
    EXPECT_EQ(sign(-1e-300), -1.0);
    // e = 0 -> no sign-sign movement
    auto f = make_filter(config_for(AlgorithmKind::SignSignNNLMS), {0.5});
    f = update(std::move(f), sample({2.0}, 1.0));
    EXPECT_EQ(f.weights[0], 0.5);
}

TEST(Update, DivergenceCarriesIteration) {
    auto f = make_filter(config_for(AlgorithmKind::PlainLMS, 1.0), {0.0});
    f.iteration = 41;
    const double huge = std::numeric_limits<double>::max();
    try {
        (void)update(f, sample({huge}, huge));
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.iteration(), 41u);
    }
}

TEST(AlgorithmConfig, Validation) {
    AlgorithmConfig a;
    a.step_size = -0.1;
    EXPECT_THROW(validate(a), std::invalid_argument);
    a.step_size = 0.0; // frozen filter is allowed
    EXPECT_NO_THROW(validate(a));
    a.epsilon = -1.0;
    EXPECT_THROW(validate(a), std::invalid_argument);
    a.epsilon = 0.0;
    for (double g : {0.0, -0.5, 1.5}) {
        a.gamma = g;
        EXPECT_THROW(validate(a), std::invalid_argument);
    }
    EXPECT_THROW(make_filter(AlgorithmConfig{}, {}), std::invalid_argument);
    EXPECT_THROW(make_filter(AlgorithmConfig{}, {NAN}), std::invalid_argument);
}

TEST(AlgorithmKind, NamesRoundTrip) {
    for (auto kind : {AlgorithmKind::NNLMS, AlgorithmKind::NormalizedNNLMS,
                      AlgorithmKind::ExponentialNNLMS, AlgorithmKind::SignSignNNLMS,
                      AlgorithmKind::PlainLMS}) {
        EXPECT_EQ(parse_algorithm_kind(to_string(kind)), kind);
    }
    EXPECT_FALSE(parse_algorithm_kind("nnlms").has_value());
}

// Property: a zeroed coordinate stays exactly zero under every non-negative
// rule, whatever the samples.
TEST(Property, ZeroAbsorption) {
    std::mt19937_64 rng(314);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> positive(0.01, 1.0);
    for (auto kind : kNonNegativeKinds) {
        SCOPED_TRACE(to_string(kind));
        std::vector<double> w(6);
        for (auto& v : w) {
            v = positive(rng);
        }
        const auto target = w;
        w[2] = 0.0;
        auto f = make_filter(config_for(kind, 0.01), w);
        for (int n = 0; n < 20000; ++n) {
            SamplePair s;
            s.regressor.resize(6);
            for (auto& x : s.regressor) {
                x = normal(rng);
            }
            s.desired = dot(target, s.regressor) + 0.1 * normal(rng);
            f = update(std::move(f), s);
            ASSERT_EQ(f.weights[2], 0.0);
        }
    }
}

// Property: with w(0) >= 0 and step < 1 every sign-sign update multiplies w_i
// by a factor in [1 - step, 1 + step].
TEST(Property, SignSignPreservesSign) {
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> normal(0.0, 3.0);
    auto f = make_filter(config_for(AlgorithmKind::SignSignNNLMS, 0.9), {0.0, 1e-3, 0.5, 2.0});
    for (int n = 0; n < 20000; ++n) {
        SamplePair s;
        s.regressor = {normal(rng), normal(rng), normal(rng), normal(rng)};
        s.desired = normal(rng);
        f = update(std::move(f), s);
        for (double v : f.weights) {
            ASSERT_GE(v, 0.0);
        }
    }
}

TEST(Property, UnitGammaTrajectoryBitwiseEqualsNnlms) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    auto exp_cfg = config_for(AlgorithmKind::ExponentialNNLMS, 0.02);
    exp_cfg.gamma = 1.0;
    auto a = make_filter(config_for(AlgorithmKind::NNLMS, 0.02), std::vector<double>(5, 0.1));
    auto b = make_filter(exp_cfg, std::vector<double>(5, 0.1));
    for (int n = 0; n < 5000; ++n) {
        SamplePair s;
        s.regressor = {normal(rng), normal(rng), normal(rng), normal(rng), normal(rng)};
        s.desired = normal(rng);
        a = update(std::move(a), s);
        b = update(std::move(b), s);
        ASSERT_EQ(a.weights, b.weights);
    }
}

} // namespace
} // namespace nnlms
