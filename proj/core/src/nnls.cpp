#include "nnlms/nnls.hpp"

#include "nnlms/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nnlms {

namespace {

using Eigen::Index;

// Solves Q_PP s_P = b_P for the indices flagged in `passive`, leaving zeros
// elsewhere.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& q, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
    std::vector<Index> idx;
    for (Index i = 0; i < q.rows(); ++i) {
        if (passive[static_cast<std::size_t>(i)]) {
            idx.push_back(i);
        }
    }
    const auto m = static_cast<Index>(idx.size());
    Eigen::MatrixXd sub(m, m);
    Eigen::VectorXd rhs(m);
    for (Index r = 0; r < m; ++r) {
        rhs(r) = b(idx[r]);
        for (Index c = 0; c < m; ++c) {
            sub(r, c) = q(idx[r], idx[c]);
        }
    }
    const Eigen::VectorXd sol = sub.llt().solve(rhs);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(q.rows());
    for (Index r = 0; r < m; ++r) {
        full(idx[r]) = sol(r);
    }
    return full;
}

} // namespace

NnlsSolution solve_nnls_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                             int max_swaps) {
    const Index n = gram.rows();
    if (n == 0 || gram.cols() != n || rhs.size() != n) {
        throw std::invalid_argument("nnls: gram must be square and match rhs");
    }
    if (!gram.allFinite() || !rhs.allFinite()) {
        throw std::invalid_argument("nnls: non-finite input");
    }
    const double scale = gram.cwiseAbs().maxCoeff();
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("nnls: gram matrix is not symmetric");
    }
    if (gram.llt().info() != Eigen::Success) {
        throw std::invalid_argument("nnls: gram matrix is not positive definite");
    }

    // Dual-feasibility tolerance on w = b - Qx, relative to problem scale.
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale *
                       std::max(1.0, rhs.cwiseAbs().maxCoeff());

    NnlsSolution out{Eigen::VectorXd::Zero(n), 0};
    Eigen::VectorXd& x = out.x;
    std::vector<bool> passive(static_cast<std::size_t>(n), false);

    auto budget_check = [&] {
        if (out.swaps > max_swaps) {
            throw NoConvergenceError("nnls: exceeded " + std::to_string(max_swaps) +
                                     " active-set swaps");
        }
    };

    for (;;) {
        const Eigen::VectorXd w = rhs - gram * x;
        Index entering = -1;
        double best = tol;
        for (Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
                best = w(j);
                entering = j;
            }
        }
        if (entering < 0) {
            break;
        }
        passive[static_cast<std::size_t>(entering)] = true;
        ++out.swaps;
        budget_check();

        for (;;) {
            Eigen::VectorXd s = solve_passive(gram, rhs, passive);
            bool feasible = true;
            for (Index i = 0; i < n; ++i) {
                if (passive[static_cast<std::size_t>(i)] && s(i) <= 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                x = std::move(s);
                break;
            }
            // Step from x toward s until the first passive coordinate hits zero.
            double step = 1.0;
            Index blocking = -1;
            for (Index i = 0; i < n; ++i) {
                if (passive[static_cast<std::size_t>(i)] && s(i) <= 0.0) {
                    const double t = x(i) / (x(i) - s(i));
                    if (blocking < 0 || t < step) {
                        step = t;
                        blocking = i;
                    }
                }
            }
            x += step * (s - x);
            for (Index i = 0; i < n; ++i) {
                if (passive[static_cast<std::size_t>(i)] && (i == blocking || x(i) <= 0.0)) {
                    passive[static_cast<std::size_t>(i)] = false;
                    x(i) = 0.0;
                    ++out.swaps;
                }
            }
            budget_check();
        }
    }
    return out;
}

} // namespace nnlms
