#ifndef NNLMS_SIGNAL_MODEL_HPP
#define NNLMS_SIGNAL_MODEL_HPP

#include "nnlms/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nnlms {

/// Unknown system y(n) = true_weights' x(n) + z(n), z ~ N(0, noise_variance).
struct SystemModel {
    std::vector<double> true_weights;
    double noise_variance = 0.0;

    std::size_t order() const noexcept { return true_weights.size(); }
};

/// Throws std::invalid_argument if the model is empty, non-finite or has
/// negative noise variance.
void validate(const SystemModel& model);

/// x(n) = pole * x(n-1) + w(n), w ~ N(0, innovation_variance).
struct Ar1Process {
    double pole = 0.0;
    double innovation_variance = 1.0;
    std::uint64_t seed = 0;

    double stationary_variance() const noexcept {
        return innovation_variance / (1.0 - pole * pole);
    }
};

void validate(const Ar1Process& process);

struct SamplePair {
    std::vector<double> regressor; // regressor[k] = x(n - k)
    double desired = 0.0;
    double noise = 0.0;
};

/// Sequential AR(1) source. The first value returned is x(1); x(0) is drawn
/// from the stationary distribution at construction.
class Ar1Generator {
public:
    explicit Ar1Generator(const Ar1Process& process);

    double next();

private:
    double pole_;
    double innovation_stddev_;
    GaussianSource source_;
    double state_;
};

std::vector<double> generate_ar1(const Ar1Process& process, std::size_t count);

/**
 * Streams (regressor, desired) pairs for a SystemModel driven by an AR(1)
 * input. The input uses process.seed; the noise uses its own generator seeded
 * with noise_seed, so the two streams never share state.
 *
 * N - 1 stationary warm-up inputs are generated at construction, so the first
 * regressor is fully populated.
 */
class SampleStream {
public:
    SampleStream(SystemModel model, const Ar1Process& process, std::uint64_t noise_seed);

    /// Advances one step. The reference stays valid until the next call.
    const SamplePair& next();

    const SystemModel& model() const noexcept { return model_; }

private:
    void push_input(double x);

    SystemModel model_;
    Ar1Generator input_;
    GaussianSource noise_;
    double noise_stddev_;
    SamplePair current_;
};

std::vector<SamplePair> stream_samples(const SystemModel& model, const Ar1Process& process,
                                       std::size_t count, std::uint64_t noise_seed);

/// The 15-tap system used in the reference experiment, with three trailing
/// zero taps and alternating small negative taps.
SystemModel reference_system();

/// AR(1) input with pole 0.5 and unit stationary variance.
Ar1Process reference_input(std::uint64_t seed = 0);

double dot(std::span<const double> a, std::span<const double> b);

} // namespace nnlms

#endif // NNLMS_SIGNAL_MODEL_HPP
