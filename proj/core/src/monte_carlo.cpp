#include "nnlms/monte_carlo.hpp"

#include "nnlms/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace nnlms {

namespace {

struct RunOutcome {
    bool diverged = false;
    std::vector<double> squared_error; // e_a(n)^2, n = 0..iterations-1
    std::vector<double> final_weights;
    double window_mean = 0.0;
};

RunOutcome simulate_run(const ExperimentConfig& config, std::size_t run) {
    const auto seeds = run_seeds(config.base_seed, run);
    Ar1Process process = config.process;
    process.seed = seeds.input;
    SampleStream stream(config.system, process, seeds.noise);
    FilterState state = make_filter(config.algorithm, config.initial_weights);

    const auto& target = config.system.true_weights;
    const std::size_t taps = target.size();
    const std::size_t window_start = config.iterations - steady_window_length(config);

    RunOutcome out;
    out.squared_error.resize(config.iterations);
    double window_sum = 0.0;
    try {
        for (std::size_t n = 0; n < config.iterations; ++n) {
            const SamplePair& sample = stream.next();
            double excess = 0.0;
            for (std::size_t i = 0; i < taps; ++i) {
                excess += (target[i] - state.weights[i]) * sample.regressor[i];
            }
            const double sq = excess * excess;
            out.squared_error[n] = sq;
            if (n >= window_start) {
                window_sum += sq;
            }
            state = update(std::move(state), sample);
        }
    } catch (const DivergenceError&) {
        out.diverged = true;
        out.squared_error.clear();
        return out;
    }
    out.window_mean = window_sum / static_cast<double>(config.iterations - window_start);
    out.final_weights = std::move(state.weights);
    return out;
}

} // namespace

void validate(const ExperimentConfig& config) {
    validate(config.system);
    validate(config.process);
    validate(config.algorithm);
    if (config.initial_weights.size() != config.system.order()) {
        throw std::invalid_argument("initial weights must have one entry per tap");
    }
    if (config.iterations < 100) {
        throw std::invalid_argument("iterations must be >= 100");
    }
    if (config.runs < 1) {
        throw std::invalid_argument("runs must be >= 1");
    }
    if (!(config.steady_window_fraction > 0.0 && config.steady_window_fraction <= 0.5)) {
        throw std::invalid_argument("steady window fraction must lie in (0, 0.5]");
    }
}

RunSeeds run_seeds(std::uint64_t base_seed, std::uint64_t run) noexcept {
    return {derive_stream_seed(base_seed, run, "input"),
            derive_stream_seed(base_seed, run, "noise")};
}

std::size_t steady_window_length(const ExperimentConfig& config) noexcept {
    const auto len = static_cast<std::size_t>(
        std::ceil(config.steady_window_fraction * static_cast<double>(config.iterations)));
    return std::clamp<std::size_t>(len, 1, config.iterations);
}

EnsembleResult run_ensemble(const ExperimentConfig& config, unsigned threads) {
    validate(config);

    std::vector<RunOutcome> outcomes(config.runs);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.runs));

    if (workers <= 1) {
        for (std::size_t r = 0; r < config.runs; ++r) {
            outcomes[r] = simulate_run(config, r + 1);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned t = 0; t < workers; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t r = next++; r < config.runs && !failed; r = next++) {
                        try {
                            outcomes[r] = simulate_run(config, r + 1);
                        } catch (...) {
                            if (!failed.exchange(true)) {
                                failure = std::current_exception();
                            }
                        }
                    }
                });
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    EnsembleResult result;
    result.runs = config.runs;
    result.window_length = steady_window_length(config);
    result.emse_trajectory.assign(config.iterations, 0.0);
    result.final_mean_weights.assign(config.system.order(), 0.0);

    std::size_t converged = 0;
    for (const auto& o : outcomes) {
        if (o.diverged) {
            ++result.diverged_runs;
            continue;
        }
        ++converged;
        for (std::size_t n = 0; n < config.iterations; ++n) {
            result.emse_trajectory[n] += o.squared_error[n];
        }
        for (std::size_t i = 0; i < o.final_weights.size(); ++i) {
            result.final_mean_weights[i] += o.final_weights[i];
        }
    }
    if (converged == 0) {
        throw EnsembleFailure("all " + std::to_string(config.runs) + " runs diverged");
    }
    const double count = static_cast<double>(converged);
    for (auto& v : result.emse_trajectory) {
        v /= count;
    }
    for (auto& w : result.final_mean_weights) {
        w /= count;
    }

    const std::size_t start = config.iterations - result.window_length;
    double window_sum = 0.0;
    for (std::size_t n = start; n < config.iterations; ++n) {
        window_sum += result.emse_trajectory[n];
    }
    result.steady_state_emse = window_sum / static_cast<double>(result.window_length);

    if (converged < 2) {
        result.steady_state_stderr = std::numeric_limits<double>::infinity();
    } else {
        double mean = 0.0;
        for (const auto& o : outcomes) {
            if (!o.diverged) {
                mean += o.window_mean;
            }
        }
        mean /= count;
        double ss = 0.0;
        for (const auto& o : outcomes) {
            if (!o.diverged) {
                ss += (o.window_mean - mean) * (o.window_mean - mean);
            }
        }
        result.steady_state_stderr = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
    return result;
}

double to_db(double value) {
    return 10.0 * std::log10(value);
}

ComparisonReport compare(const EnsembleResult& result, const SteadyStatePrediction& prediction,
                         double tolerance_db) {
    ComparisonReport c;
    c.simulated = result.steady_state_emse;
    c.predicted = prediction.emse_total;
    c.difference = c.simulated - c.predicted;
    if (c.simulated == c.predicted) {
        c.difference_db = 0.0;
    } else {
        c.difference_db = to_db(c.simulated) - to_db(c.predicted);
    }
    c.standard_error = result.steady_state_stderr;
    c.stderr_distance = c.difference == 0.0 ? 0.0 : std::abs(c.difference) / c.standard_error;
    c.tolerance_db = tolerance_db;
    c.diverged_runs = result.diverged_runs;
    c.within_tolerance = std::isfinite(c.difference_db) && std::abs(c.difference_db) <= tolerance_db;
    c.flagged = result.diverged_runs > 0;
    return c;
}

} // namespace nnlms
