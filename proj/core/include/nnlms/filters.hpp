#ifndef NNLMS_FILTERS_HPP
#define NNLMS_FILTERS_HPP

#include "nnlms/signal_model.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace nnlms {

enum class AlgorithmKind {
    NNLMS,
    NormalizedNNLMS,
    ExponentialNNLMS,
    SignSignNNLMS,
    PlainLMS,
};

std::string_view to_string(AlgorithmKind kind) noexcept;
std::optional<AlgorithmKind> parse_algorithm_kind(std::string_view name) noexcept;

/// Update rule plus its parameters. `epsilon` is read only by
/// NormalizedNNLMS and `gamma` only by ExponentialNNLMS.
struct AlgorithmConfig {
    AlgorithmKind kind = AlgorithmKind::NNLMS;
    double step_size = 0.01;
    double epsilon = 0.0;
    double gamma = 1.0;
};

/// step_size >= 0 (0 freezes the filter), epsilon >= 0, 0 < gamma <= 1.
void validate(const AlgorithmConfig& algorithm);

struct FilterState {
    std::vector<double> weights;
    AlgorithmConfig algorithm;
    std::uint64_t iteration = 0;
};

FilterState make_filter(const AlgorithmConfig& algorithm, std::vector<double> initial_weights);

/// e(n) = y(n) - w(n)' x(n).
double predict_error(const FilterState& state, const SamplePair& sample);

/**
 * One step of the selected rule, componentwise with e = predict_error():
 *
 *   NNLMS            w_i += step * w_i * e * x_i
 *   NormalizedNNLMS  w_i += step / (x'x + epsilon) * w_i * e * x_i
 *   ExponentialNNLMS w_i += step * sgn(w_i) |w_i|^gamma * e * x_i
 *   SignSignNNLMS    w_i += step * w_i * sgn(x_i * e)
 *   PlainLMS         w_i += step * e * x_i
 *
 * with sgn(0) = 0. Throws DivergenceError if any weight becomes non-finite.
 */
FilterState update(FilterState state, const SamplePair& sample);

/// sgn with sgn(0) = 0.
constexpr double sign(double v) noexcept {
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

} // namespace nnlms

#endif // NNLMS_FILTERS_HPP
