#include "nnlms/theory.hpp"

#include "nnlms/errors.hpp"
#include "nnlms/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nnlms {

namespace {

using Eigen::Index;

void check_order(const SystemModel& model, const CorrelationModel& corr) {
    if (model.order() != corr.order()) {
        throw std::invalid_argument("system has " + std::to_string(model.order()) +
                                    " taps but correlation matrix is " +
                                    std::to_string(corr.order()) + "x" +
                                    std::to_string(corr.order()));
    }
}

void check_step(double step) {
    if (!std::isfinite(step) || step < 0.0) {
        throw std::invalid_argument("step size must be finite and >= 0");
    }
}

// Shared front half of every constrained predictor: support partition,
// snapped mean weights, bias vector and bias EMSE.
SteadyStatePrediction prepare(AlgorithmKind kind, double step, const SystemModel& model,
                              const CorrelationModel& corr,
                              std::span<const double> mean_weights,
                              std::optional<double> support_threshold) {
    check_step(step);
    validate(model);
    check_order(model, corr);
    if (mean_weights.size() != model.order()) {
        throw std::invalid_argument("mean weight vector has the wrong length");
    }
    for (double w : mean_weights) {
        if (!std::isfinite(w)) {
            throw std::invalid_argument("mean weights must be finite");
        }
    }

    SteadyStatePrediction p;
    p.algorithm = kind;
    p.step_size = step;
    const double threshold = support_threshold.value_or(default_support_threshold(mean_weights));
    auto support = classify_support(mean_weights, threshold);
    p.positive_set = std::move(support.positive);
    p.zero_set = std::move(support.zero);

    p.mean_weights.assign(mean_weights.begin(), mean_weights.end());
    for (std::size_t i : p.zero_set) {
        p.mean_weights[i] = 0.0;
    }
    p.bias_vector.resize(model.order());
    for (std::size_t i = 0; i < model.order(); ++i) {
        p.bias_vector[i] = p.mean_weights[i] - model.true_weights[i];
    }
    p.emse_bias = emse_bias_term(p.bias_vector, corr);
    return p;
}

// step (noise * trace + bias) / (2 - step * trace) + bias
void finish_lms_form(SteadyStatePrediction& p, double noise_variance) {
    const double denom = 2.0 - p.step_size * p.trace_term;
    if (!(denom > 0.0)) {
        throw PredictedInstabilityError(p.step_size, p.trace_term);
    }
    p.emse_fluctuation = p.step_size * (noise_variance * p.trace_term + p.emse_bias) / denom;
    p.emse_total = p.emse_fluctuation + p.emse_bias;
}

} // namespace

CorrelationModel build_correlation(const Ar1Process& process, std::size_t order) {
    validate(process);
    if (order == 0) {
        throw std::invalid_argument("correlation order must be >= 1");
    }
    const auto n = static_cast<Index>(order);
    const double var = process.stationary_variance();
    CorrelationModel corr{Eigen::MatrixXd(n, n), var};
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const auto lag = static_cast<int>(std::abs(i - j));
            corr.matrix(i, j) = lag == 0 ? var : var * std::pow(process.pole, lag);
        }
    }
    return corr;
}

std::vector<double> solve_constrained_wiener(const SystemModel& model,
                                             const CorrelationModel& corr) {
    validate(model);
    check_order(model, corr);
    const Eigen::Map<const Eigen::VectorXd> target(model.true_weights.data(),
                                                   static_cast<Index>(model.order()));
    // Gradient of (w - w*)'R(w - w*) is 2(Rw - Rw*); the factor 2 does not move
    // the minimizer.
    const Eigen::VectorXd rhs = corr.matrix * target;
    const auto sol = solve_nnls_gram(corr.matrix, rhs, default_swap_budget(corr.matrix.rows()));
    return {sol.x.data(), sol.x.data() + sol.x.size()};
}

KktResiduals kkt_residuals(std::span<const double> weights, const SystemModel& model,
                           const CorrelationModel& corr) {
    check_order(model, corr);
    if (weights.size() != model.order()) {
        throw std::invalid_argument("kkt_residuals: weight vector has the wrong length");
    }
    const auto n = static_cast<Index>(weights.size());
    const Eigen::Map<const Eigen::VectorXd> w(weights.data(), n);
    const Eigen::Map<const Eigen::VectorXd> target(model.true_weights.data(), n);

    KktResiduals r;
    r.gradient = 2.0 * (corr.matrix * w - corr.matrix * target);
    for (Index i = 0; i < n; ++i) {
        if (w(i) > 0.0) {
            r.stationarity = std::max(r.stationarity, std::abs(r.gradient(i)));
        } else {
            r.primal = std::max(r.primal, -w(i));
            r.dual = std::max(r.dual, -r.gradient(i));
        }
    }
    return r;
}

SupportPartition classify_support(std::span<const double> mean_weights, double threshold) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("support threshold must be > 0");
    }
    SupportPartition out;
    for (std::size_t i = 0; i < mean_weights.size(); ++i) {
        (mean_weights[i] <= threshold ? out.zero : out.positive).push_back(i);
    }
    return out;
}

double default_support_threshold(std::span<const double> mean_weights) {
    double peak = 0.0;
    for (double w : mean_weights) {
        peak = std::max(peak, w);
    }
    return std::max(1e-6 * peak, std::numeric_limits<double>::min());
}

double emse_bias_term(std::span<const double> bias_vector, const CorrelationModel& corr) {
    if (bias_vector.size() != corr.order()) {
        throw std::invalid_argument("bias vector does not match the correlation order");
    }
    const Eigen::Map<const Eigen::VectorXd> v(bias_vector.data(),
                                              static_cast<Index>(bias_vector.size()));
    // A PSD quadratic form can still round a hair below zero.
    return std::max(0.0, v.dot(corr.matrix * v));
}

SteadyStatePrediction predict_emse_nnlms(double step, const SystemModel& model,
                                         const CorrelationModel& corr,
                                         std::span<const double> mean_weights,
                                         std::optional<double> support_threshold) {
    auto p = prepare(AlgorithmKind::NNLMS, step, model, corr, mean_weights, support_threshold);
    // tr{D R} = sum_i d_i R_ii
    for (std::size_t i : p.positive_set) {
        const auto k = static_cast<Index>(i);
        p.trace_term += p.mean_weights[i] * corr.matrix(k, k);
    }
    finish_lms_form(p, model.noise_variance);
    return p;
}

SteadyStatePrediction predict_emse_normalized(double step, const SystemModel& model,
                                              const CorrelationModel& corr,
                                              std::span<const double> mean_weights,
                                              std::optional<double> support_threshold) {
    check_step(step);
    if (!(corr.input_variance > 0.0)) {
        throw std::invalid_argument("input variance must be > 0");
    }
    const double equivalent =
        step / (static_cast<double>(model.order()) * corr.input_variance);
    auto p = predict_emse_nnlms(equivalent, model, corr, mean_weights, support_threshold);
    p.algorithm = AlgorithmKind::NormalizedNNLMS;
    return p;
}

SteadyStatePrediction predict_emse_exponential(double step, double gamma,
                                               const SystemModel& model,
                                               const CorrelationModel& corr,
                                               std::span<const double> mean_weights,
                                               std::optional<double> support_threshold) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("exponent gamma must lie in (0, 1]");
    }
    if (gamma == 1.0) {
        auto p = predict_emse_nnlms(step, model, corr, mean_weights, support_threshold);
        p.algorithm = AlgorithmKind::ExponentialNNLMS;
        return p;
    }
    auto p = prepare(AlgorithmKind::ExponentialNNLMS, step, model, corr, mean_weights,
                     support_threshold);
    for (std::size_t i : p.positive_set) {
        const auto k = static_cast<Index>(i);
        p.trace_term += std::pow(p.mean_weights[i], gamma) * corr.matrix(k, k);
    }
    finish_lms_form(p, model.noise_variance);
    return p;
}

SteadyStatePrediction predict_emse_signsign(double step, const SystemModel& model,
                                            const CorrelationModel& corr,
                                            std::span<const double> mean_weights,
                                            std::optional<double> support_threshold) {
    if (!(corr.input_variance > 0.0)) {
        throw std::invalid_argument("input variance must be > 0");
    }
    auto p = prepare(AlgorithmKind::SignSignNNLMS, step, model, corr, mean_weights,
                     support_threshold);
    for (std::size_t i : p.positive_set) {
        p.trace_term += p.mean_weights[i];
    }
    const double sigma_x = std::sqrt(corr.input_variance);
    p.emse_fluctuation = step * std::numbers::pi / 4.0 * p.trace_term * sigma_x *
                         std::sqrt(model.noise_variance + p.emse_bias);
    p.emse_total = p.emse_fluctuation + p.emse_bias;
    return p;
}

SteadyStatePrediction predict_emse_lms(double step, const SystemModel& model,
                                       const CorrelationModel& corr) {
    check_step(step);
    validate(model);
    check_order(model, corr);
    SteadyStatePrediction p;
    p.algorithm = AlgorithmKind::PlainLMS;
    p.step_size = step;
    p.trace_term = corr.matrix.trace();
    p.mean_weights = model.true_weights;
    p.bias_vector.assign(model.order(), 0.0);
    for (std::size_t i = 0; i < model.order(); ++i) {
        p.positive_set.push_back(i);
    }
    finish_lms_form(p, model.noise_variance);
    return p;
}

SteadyStatePrediction predict_steady_state(const AlgorithmConfig& algorithm,
                                           const SystemModel& model,
                                           const CorrelationModel& corr,
                                           std::span<const double> mean_weights,
                                           std::optional<double> support_threshold) {
    validate(algorithm);
    switch (algorithm.kind) {
    case AlgorithmKind::NNLMS:
        return predict_emse_nnlms(algorithm.step_size, model, corr, mean_weights,
                                  support_threshold);
    case AlgorithmKind::NormalizedNNLMS:
        return predict_emse_normalized(algorithm.step_size, model, corr, mean_weights,
                                       support_threshold);
    case AlgorithmKind::ExponentialNNLMS:
        return predict_emse_exponential(algorithm.step_size, algorithm.gamma, model, corr,
                                        mean_weights, support_threshold);
    case AlgorithmKind::SignSignNNLMS:
        return predict_emse_signsign(algorithm.step_size, model, corr, mean_weights,
                                     support_threshold);
    case AlgorithmKind::PlainLMS:
        return predict_emse_lms(algorithm.step_size, model, corr);
    }
    throw std::invalid_argument("unknown algorithm kind");
}

} // namespace nnlms
