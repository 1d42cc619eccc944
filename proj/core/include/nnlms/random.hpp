#ifndef NNLMS_RANDOM_HPP
#define NNLMS_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace nnlms {

/**
 * Standard normal variates with a reproducible bit stream.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. Uniforms take the top 53 bits of each draw; normals come from the
 * basic (non-polar) Box-Muller transform, two variates per pair of uniforms.
 * There is no rejection step, so the number of engine draws per variate is
 * constant. Cross-platform bit identity then depends only on the libm
 * implementations of log, sqrt, sin and cos.
 */
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next();

    /// Uniform on (0, 1].
    double next_uniform_open_closed();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/**
 * Seed for stream `tag` of ensemble member `run`:
 *
 *     base_seed XOR splitmix64(fnv1a64(tag) + splitmix64(run))
 *
 * Depends only on its arguments, so runs can be scheduled in any order.
 */
constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t run,
                                           std::string_view tag) noexcept {
    return base_seed ^ splitmix64(fnv1a64(tag) + splitmix64(run));
}

} // namespace nnlms

#endif // NNLMS_RANDOM_HPP
