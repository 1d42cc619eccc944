#include "nnlms/random.hpp"

#include <cmath>
#include <numbers>

namespace nnlms {

double GaussianSource::next_uniform_open_closed() {
    // 53-bit mantissa in [0, 1), flipped to (0, 1] so log() stays finite.
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 1.0 - u;
}

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform_open_closed();
    const double u2 = next_uniform_open_closed();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

} // namespace nnlms
