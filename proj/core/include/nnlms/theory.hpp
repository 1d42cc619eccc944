#ifndef NNLMS_THEORY_HPP
#define NNLMS_THEORY_HPP

#include "nnlms/filters.hpp"
#include "nnlms/signal_model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nnlms {

/// Input correlation matrix R_x and input variance.
struct CorrelationModel {
    Eigen::MatrixXd matrix;
    double input_variance = 1.0;

    std::size_t order() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

/// Toeplitz R_x with entries var * pole^|i-j|, var = innovation / (1 - pole^2).
CorrelationModel build_correlation(const Ar1Process& process, std::size_t order);

/**
 * Minimizer of (w - w*)' R (w - w*) over w >= 0, i.e. the non-negative Wiener
 * solution. Throws std::invalid_argument for a non-PD correlation or a size
 * mismatch, NoConvergenceError past 10 N active-set swaps.
 */
std::vector<double> solve_constrained_wiener(const SystemModel& model,
                                             const CorrelationModel& corr);

/// Optimality residuals of a candidate for the problem above, with the
/// gradient g = 2 R (w - w*).
struct KktResiduals {
    double primal = 0.0;         // max(0, -min_i w_i)
    double stationarity = 0.0;   // max |g_i| over w_i > 0
    double dual = 0.0;           // max(0, -min g_i) over w_i == 0
    Eigen::VectorXd gradient;

    double worst() const noexcept { return std::max({primal, stationarity, dual}); }
};

KktResiduals kkt_residuals(std::span<const double> weights, const SystemModel& model,
                           const CorrelationModel& corr);

struct SupportPartition {
    std::vector<std::size_t> positive; // S+
    std::vector<std::size_t> zero;     // S0
};

/// S0 = {i : w_i <= threshold}. threshold must be > 0.
SupportPartition classify_support(std::span<const double> mean_weights, double threshold);

/// 1e-6 * max_i w_i, floored at the smallest normal double.
double default_support_threshold(std::span<const double> mean_weights);

/// v' R v.
double emse_bias_term(std::span<const double> bias_vector, const CorrelationModel& corr);

struct SteadyStatePrediction {
    AlgorithmKind algorithm = AlgorithmKind::NNLMS;
    double step_size = 0.0;           // step the formula was evaluated at
    double trace_term = 0.0;          // tr{D R}, tr{D_gamma R} or tr{D}
    std::vector<double> mean_weights; // E{w(inf)}, S0 entries snapped to 0
    std::vector<std::size_t> positive_set;
    std::vector<std::size_t> zero_set;
    std::vector<double> bias_vector;  // E{w(inf)} - w*
    double emse_bias = 0.0;           // v' R v
    double emse_fluctuation = 0.0;
    double emse_total = 0.0;
};

// The predictors below take E{w(inf)} as `mean_weights` (usually the output
// of solve_constrained_wiener) and snap entries at or below the support
// threshold to zero before forming the bias vector. When no threshold is
// given default_support_threshold() is used.

/// EMSE = step (noise * T + EMSE_bias) / (2 - step T) + EMSE_bias,
/// T = sum_i E{w_i} R_ii. Throws PredictedInstabilityError if 2 - step T <= 0.
SteadyStatePrediction predict_emse_nnlms(double step, const SystemModel& model,
                                         const CorrelationModel& corr,
                                         std::span<const double> mean_weights,
                                         std::optional<double> support_threshold = {});

/// The NNLMS expression at the equivalent step step / (N * input_variance).
SteadyStatePrediction predict_emse_normalized(double step, const SystemModel& model,
                                              const CorrelationModel& corr,
                                              std::span<const double> mean_weights,
                                              std::optional<double> support_threshold = {});

/// The NNLMS expression with T_gamma = sum_i E{w_i}^gamma R_ii.
SteadyStatePrediction predict_emse_exponential(double step, double gamma,
                                               const SystemModel& model,
                                               const CorrelationModel& corr,
                                               std::span<const double> mean_weights,
                                               std::optional<double> support_threshold = {});

/// EMSE = (step pi / 4) tr{D} sigma_x sqrt(noise + EMSE_bias) + EMSE_bias,
/// with sigma_x = sqrt(corr.input_variance).
SteadyStatePrediction predict_emse_signsign(double step, const SystemModel& model,
                                            const CorrelationModel& corr,
                                            std::span<const double> mean_weights,
                                            std::optional<double> support_threshold = {});

/// Unconstrained LMS: step noise tr{R} / (2 - step tr{R}); the mean weights
/// are the true weights and there is no bias term.
SteadyStatePrediction predict_emse_lms(double step, const SystemModel& model,
                                       const CorrelationModel& corr);

/// Dispatches on algorithm.kind. `mean_weights` is ignored for PlainLMS.
SteadyStatePrediction predict_steady_state(const AlgorithmConfig& algorithm,
                                           const SystemModel& model,
                                           const CorrelationModel& corr,
                                           std::span<const double> mean_weights,
                                           std::optional<double> support_threshold = {});

} // namespace nnlms

#endif // NNLMS_THEORY_HPP
