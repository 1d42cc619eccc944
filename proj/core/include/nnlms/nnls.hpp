#ifndef NNLMS_NNLS_HPP
#define NNLMS_NNLS_HPP

#include <Eigen/Dense>

namespace nnlms {

struct NnlsSolution {
    Eigen::VectorXd x;
    int swaps = 0; // index moves between the passive and active sets
};

/**
 * Lawson-Hanson active-set method in normal-equation form:
 *
 *     minimize 1/2 x'Qx - b'x   subject to x >= 0
 *
 * for symmetric positive definite Q. Passive-set subsystems are solved by
 * Cholesky, so stationarity on the passive set holds to rounding error.
 *
 * Throws std::invalid_argument if Q is not square, not symmetric or not
 * positive definite, and NoConvergenceError once `max_swaps` set moves have
 * been made without satisfying the optimality conditions.
 */
NnlsSolution solve_nnls_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                             int max_swaps);

/// Default swap budget for an n-variable problem (10 n).
constexpr int default_swap_budget(Eigen::Index n) noexcept {
    return static_cast<int>(10 * n);
}

} // namespace nnlms

#endif // NNLMS_NNLS_HPP
