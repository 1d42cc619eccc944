#ifndef NNLMS_MONTE_CARLO_HPP
#define NNLMS_MONTE_CARLO_HPP

#include "nnlms/filters.hpp"
#include "nnlms/signal_model.hpp"
#include "nnlms/theory.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nnlms {

struct ExperimentConfig {
    SystemModel system;
    Ar1Process process; // process.seed is replaced per run, see run_seeds()
    AlgorithmConfig algorithm;
    std::vector<double> initial_weights;
    std::size_t iterations = 30000;
    std::size_t runs = 100;
    std::uint64_t base_seed = 0;
    double steady_window_fraction = 0.2;
};

/// iterations >= 100, runs >= 1, fraction in (0, 0.5], sizes consistent.
void validate(const ExperimentConfig& config);

struct RunSeeds {
    std::uint64_t input;
    std::uint64_t noise;
};

/// Seeds of ensemble member `run` (1-based): derive_stream_seed() with tags
/// "input" and "noise".
RunSeeds run_seeds(std::uint64_t base_seed, std::uint64_t run) noexcept;

/// ceil(fraction * iterations), at least 1.
std::size_t steady_window_length(const ExperimentConfig& config) noexcept;

struct EnsembleResult {
    std::vector<double> emse_trajectory; // mean of e_a(n)^2 over converged runs
    double steady_state_emse = 0.0;
    double steady_state_stderr = 0.0;    // +inf with a single converged run
    std::size_t runs = 0;
    std::size_t diverged_runs = 0;
    std::size_t window_length = 0;
    std::vector<double> final_mean_weights;
};

/**
 * Runs `config.runs` independent trajectories and averages the squared
 * a-priori excess error e_a(n) = (w* - w(n))' x(n), recorded before each
 * update. Runs that diverge are dropped and counted.
 *
 * `threads` caps the worker count (0 = hardware concurrency). Results are
 * bitwise identical for any thread count: each run depends only on
 * (base_seed, run) and the reduction sums runs in index order.
 *
 * Throws EnsembleFailure if every run diverges.
 */
EnsembleResult run_ensemble(const ExperimentConfig& config, unsigned threads = 1);

struct ComparisonReport {
    double simulated = 0.0;
    double predicted = 0.0;
    double difference = 0.0;      // simulated - predicted
    double difference_db = 0.0;   // 10 log10(simulated / predicted)
    double standard_error = 0.0;
    double stderr_distance = 0.0; // |difference| / stderr
    double tolerance_db = 0.0;
    std::size_t diverged_runs = 0;
    bool within_tolerance = false;
    bool flagged = false;         // diverged runs were excluded

    bool passed() const noexcept { return within_tolerance; }
};

/// 10 log10(value).
double to_db(double value);

ComparisonReport compare(const EnsembleResult& result, const SteadyStatePrediction& prediction,
                         double tolerance_db);

} // namespace nnlms

#endif // NNLMS_MONTE_CARLO_HPP
