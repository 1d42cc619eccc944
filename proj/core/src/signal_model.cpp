#include "nnlms/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nnlms {

void validate(const SystemModel& model) {
    if (model.true_weights.empty()) {
        throw std::invalid_argument("system model needs at least one tap");
    }
    for (double w : model.true_weights) {
        if (!std::isfinite(w)) {
            throw std::invalid_argument("system model has a non-finite weight");
        }
    }
    if (!std::isfinite(model.noise_variance) || model.noise_variance < 0.0) {
        throw std::invalid_argument("noise variance must be finite and >= 0");
    }
}

void validate(const Ar1Process& process) {
    if (!std::isfinite(process.pole) || std::abs(process.pole) >= 1.0) {
        throw std::invalid_argument("AR(1) pole must satisfy |pole| < 1, got " +
                                    std::to_string(process.pole));
    }
    if (!std::isfinite(process.innovation_variance) || process.innovation_variance <= 0.0) {
        throw std::invalid_argument("AR(1) innovation variance must be > 0");
    }
    const double var = process.stationary_variance();
    if (!std::isfinite(var) || var <= 0.0) {
        throw std::invalid_argument("AR(1) stationary variance is not finite");
    }
}

Ar1Generator::Ar1Generator(const Ar1Process& process)
    : pole_(process.pole),
      innovation_stddev_(std::sqrt(process.innovation_variance)),
      source_(process.seed),
      state_(0.0) {
    validate(process);
    state_ = std::sqrt(process.stationary_variance()) * source_.next();
}

double Ar1Generator::next() {
    state_ = pole_ * state_ + innovation_stddev_ * source_.next();
    return state_;
}

std::vector<double> generate_ar1(const Ar1Process& process, std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("generate_ar1: count must be >= 1");
    }
    Ar1Generator gen(process);
    std::vector<double> out(count);
    for (auto& x : out) {
        x = gen.next();
    }
    return out;
}

SampleStream::SampleStream(SystemModel model, const Ar1Process& process, std::uint64_t noise_seed)
    : model_(std::move(model)),
      input_(process),
      noise_(noise_seed),
      noise_stddev_(0.0) {
    validate(model_);
    noise_stddev_ = std::sqrt(model_.noise_variance);
    current_.regressor.assign(model_.order(), 0.0);
    for (std::size_t k = 1; k < model_.order(); ++k) {
        push_input(input_.next());
    }
}

void SampleStream::push_input(double x) {
    auto& r = current_.regressor;
    std::copy_backward(r.begin(), r.end() - 1, r.end());
    r.front() = x;
}

const SamplePair& SampleStream::next() {
    push_input(input_.next());
    current_.noise = noise_stddev_ * noise_.next();
    current_.desired = dot(model_.true_weights, current_.regressor) + current_.noise;
    return current_;
}

std::vector<SamplePair> stream_samples(const SystemModel& model, const Ar1Process& process,
                                       std::size_t count, std::uint64_t noise_seed) {
    if (count == 0) {
        throw std::invalid_argument("stream_samples: count must be >= 1");
    }
    SampleStream stream(model, process, noise_seed);
    std::vector<SamplePair> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back(stream.next());
    }
    return out;
}

SystemModel reference_system() {
    return SystemModel{
        {0.8, 0.6, 0.5, -0.05, 0.4, -0.04, 0.3, -0.03, 0.2, -0.02, 0.1, -0.01, 0.0, 0.0, 0.0},
        0.01};
}

Ar1Process reference_input(std::uint64_t seed) {
    return Ar1Process{0.5, 0.75, seed};
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: dimension mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

} // namespace nnlms
