#include "nnlms/filters.hpp"

#include "nnlms/errors.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace nnlms {

namespace {

constexpr std::array<std::pair<AlgorithmKind, std::string_view>, 5> kKindNames{{
    {AlgorithmKind::NNLMS, "NNLMS"},
    {AlgorithmKind::NormalizedNNLMS, "NormalizedNNLMS"},
    {AlgorithmKind::ExponentialNNLMS, "ExponentialNNLMS"},
    {AlgorithmKind::SignSignNNLMS, "SignSignNNLMS"},
    {AlgorithmKind::PlainLMS, "PlainLMS"},
}};

void check_dimensions(const FilterState& state, const SamplePair& sample) {
    if (state.weights.size() != sample.regressor.size()) {
        throw std::invalid_argument("filter has " + std::to_string(state.weights.size()) +
                                    " taps but regressor has " +
                                    std::to_string(sample.regressor.size()));
    }
}

} // namespace

std::string_view to_string(AlgorithmKind kind) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<AlgorithmKind> parse_algorithm_kind(std::string_view name) noexcept {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

void validate(const AlgorithmConfig& algorithm) {
    if (!std::isfinite(algorithm.step_size) || algorithm.step_size < 0.0) {
        throw std::invalid_argument("step size must be finite and >= 0");
    }
    if (!std::isfinite(algorithm.epsilon) || algorithm.epsilon < 0.0) {
        throw std::invalid_argument("normalization regularizer epsilon must be >= 0");
    }
    if (!(algorithm.gamma > 0.0 && algorithm.gamma <= 1.0)) {
        throw std::invalid_argument("exponent gamma must lie in (0, 1]");
    }
}

FilterState make_filter(const AlgorithmConfig& algorithm, std::vector<double> initial_weights) {
    validate(algorithm);
    if (initial_weights.empty()) {
        throw std::invalid_argument("filter needs at least one tap");
    }
    for (double w : initial_weights) {
        if (!std::isfinite(w)) {
            throw std::invalid_argument("initial weights must be finite");
        }
    }
    return FilterState{std::move(initial_weights), algorithm, 0};
}

double predict_error(const FilterState& state, const SamplePair& sample) {
    check_dimensions(state, sample);
    return sample.desired - dot(state.weights, sample.regressor);
}

FilterState update(FilterState state, const SamplePair& sample) {
    const double e = predict_error(state, sample);
    const auto& x = sample.regressor;
    auto& w = state.weights;
    const double step = state.algorithm.step_size;
    const std::size_t n = w.size();

    switch (state.algorithm.kind) {
    case AlgorithmKind::NNLMS:
        for (std::size_t i = 0; i < n; ++i) {
            w[i] += step * w[i] * e * x[i];
        }
        break;
    case AlgorithmKind::NormalizedNNLMS: {
        const double energy = dot(x, x) + state.algorithm.epsilon;
        if (!(energy > 0.0)) {
            throw std::invalid_argument("normalized update needs x'x + epsilon > 0");
        }
        const double normalized = step / energy;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] += normalized * w[i] * e * x[i];
        }
        break;
    }
    case AlgorithmKind::ExponentialNNLMS: {
        const double gamma = state.algorithm.gamma;
        for (std::size_t i = 0; i < n; ++i) {
            // gamma == 1 takes the NNLMS expression verbatim so the two
            // trajectories agree bit for bit.
            const double scale =
                gamma == 1.0 ? w[i] : sign(w[i]) * std::pow(std::abs(w[i]), gamma);
            w[i] += step * scale * e * x[i];
        }
        break;
    }
    case AlgorithmKind::SignSignNNLMS:
        for (std::size_t i = 0; i < n; ++i) {
            w[i] += step * w[i] * sign(x[i] * e);
        }
        break;
    case AlgorithmKind::PlainLMS:
        for (std::size_t i = 0; i < n; ++i) {
            w[i] += step * e * x[i];
        }
        break;
    }

    for (double v : w) {
        if (!std::isfinite(v)) {
            throw DivergenceError(state.iteration);
        }
    }
    ++state.iteration;
    return state;
}

} // namespace nnlms
