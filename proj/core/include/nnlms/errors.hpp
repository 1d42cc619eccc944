#ifndef NNLMS_ERRORS_HPP
#define NNLMS_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nnlms {

// Argument validation failures are reported as std::invalid_argument.
// The types below cover the structured failures callers are expected to
// handle individually.

/// A weight update produced a non-finite value.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(std::uint64_t iteration)
        : std::runtime_error("adaptive filter diverged at iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    std::uint64_t iteration() const noexcept { return iteration_; }

private:
    std::uint64_t iteration_;
};

/// The active-set solver exhausted its swap budget.
class NoConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The steady-state formula's denominator 2 - step * trace is not positive,
/// so the closed form does not describe a convergent filter.
class PredictedInstabilityError : public std::runtime_error {
public:
    PredictedInstabilityError(double step, double trace_term)
        : std::runtime_error("predicted instability: 2 - step * trace = " +
                             std::to_string(2.0 - step * trace_term) + " <= 0"),
          step_(step), trace_term_(trace_term) {}

    double step() const noexcept { return step_; }
    double trace_term() const noexcept { return trace_term_; }

private:
    double step_;
    double trace_term_;
};

/// Every run of a Monte Carlo ensemble diverged.
class EnsembleFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nnlms

#endif // NNLMS_ERRORS_HPP
